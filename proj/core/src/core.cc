// Copyright 2026 The Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "robustreg/core.h"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <unordered_set>

#include "robustreg/error.h"

namespace robustreg {

PerturbationMap PerturbationMap::identity(std::size_t domain_size) {
  PerturbationMap map;
  for (std::size_t x = 0; x < domain_size; ++x) {
    const auto id = static_cast<InstanceId>(x);
    map.table_.emplace(id, std::vector<InstanceId>{id});
  }
  return map;
}

void PerturbationMap::set(InstanceId x, std::vector<InstanceId> neighbors) {
  if (neighbors.empty()) {
    throw InvalidParameter("perturbation set of instance " + std::to_string(x) +
                           " is empty");
  }
  if (std::find(neighbors.begin(), neighbors.end(), x) == neighbors.end()) {
    throw InvalidParameter("perturbation set of instance " + std::to_string(x) +
                           " does not contain the instance itself");
  }
  std::vector<InstanceId> sorted = neighbors;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw InvalidParameter("perturbation set of instance " + std::to_string(x) +
                           " has duplicates");
  }
  table_[x] = std::move(neighbors);
}

std::span<const InstanceId> PerturbationMap::at(InstanceId x) const {
  auto it = table_.find(x);
  if (it == table_.end()) throw MissingPerturbation(x);
  return it->second;
}

std::size_t PerturbationMap::max_set_size() const {
  std::size_t n = 0;
  for (const auto& [x, list] : table_) n = std::max(n, list.size());
  return n;
}

std::string Descriptor::to_string() const {
  std::ostringstream out;
  out << family << '(';
  for (std::size_t i = 0; i < params.size(); ++i) {
    if (i) out << ',';
    out << params[i];
  }
  out << ')';
  return out.str();
}

Hypothesis constant_hypothesis(double value) {
  if (!(value >= 0.0 && value <= 1.0)) {
    throw InvalidParameter("constant hypothesis value must lie in [0, 1]");
  }
  return Hypothesis({"constant", {value}}, [value](InstanceId) { return value; });
}

std::vector<InflatedExample> inflate(std::span<const LabeledExample> sample,
                                     const PerturbationMap& perturbations) {
  std::vector<InflatedExample> out;
  std::unordered_set<InstanceId> seen;
  std::vector<InstanceId> ordered;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    auto neighbors = perturbations.at(sample[i].x);
    ordered.assign(neighbors.begin(), neighbors.end());
    std::sort(ordered.begin(), ordered.end());
    for (InstanceId z : ordered) {
      if (seen.insert(z).second) out.push_back({z, sample[i].y, i});
    }
  }
  return out;
}

std::vector<InflatedExample> robust_pairs(std::span<const LabeledExample> sample,
                                          const PerturbationMap& perturbations) {
  std::vector<InflatedExample> out;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    for (InstanceId z : perturbations.at(sample[i].x)) {
      out.push_back({z, sample[i].y, i});
    }
  }
  return out;
}

double robust_deviation(const Hypothesis& h, InstanceId x, double y,
                        const PerturbationMap& perturbations) {
  double worst = 0.0;
  for (InstanceId z : perturbations.at(x)) worst = std::max(worst, std::abs(h(z) - y));
  return worst;
}

void validate(const LossMode& mode) {
  if (const auto* ball = std::get_if<EtaBall>(&mode)) {
    if (!(ball->eta > 0.0 && ball->eta <= 1.0)) {
      throw InvalidParameter("eta must lie in (0, 1]");
    }
  } else if (!(std::get<Lp>(mode).p >= 1.0)) {
    throw InvalidParameter("p must be at least 1");
  }
}

double robust_loss(const Hypothesis& h, const LabeledExample& example,
                   const PerturbationMap& perturbations, const LossMode& mode) {
  validate(mode);
  const double dev = robust_deviation(h, example.x, example.y, perturbations);
  if (const auto* ball = std::get_if<EtaBall>(&mode)) {
    return reaches(dev, ball->eta) ? 1.0 : 0.0;
  }
  return std::pow(dev, std::get<Lp>(mode).p);
}

double empirical_error(const Hypothesis& h, std::span<const LabeledExample> sample,
                       const PerturbationMap& perturbations, const LossMode& mode) {
  if (sample.empty()) throw EmptySample();
  double total = 0.0;
  for (const auto& ex : sample) total += robust_loss(h, ex, perturbations, mode);
  return total / static_cast<double>(sample.size());
}

}  // namespace robustreg
