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

#include "robustreg/ensemble.h"

#include <algorithm>
#include <memory>
#include <numeric>

#include "robustreg/error.h"

namespace robustreg {

std::string to_string(Aggregation a) {
  switch (a) {
    case Aggregation::weighted_median:
      return "weighted_median";
    case Aggregation::median:
      return "median";
    case Aggregation::average:
      return "average";
  }
  return "unknown";
}

double weighted_median(std::span<const double> values, std::span<const double> weights) {
  if (values.empty() || values.size() != weights.size()) {
    throw InvalidParameter("weighted median needs equally many values and weights");
  }
  double total = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0)) throw InvalidParameter("median weights must be nonnegative");
    total += w;
  }
  if (!(total > 0.0)) throw DegenerateWeights();

  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  const double half = 0.5 * total;
  double cumulative = 0.0;
  for (std::size_t i : order) {
    cumulative += weights[i];
    if (cumulative >= half) return values[i];
  }
  return values[order.back()];
}

void WeightedEnsemble::validate() const {
  if (members.empty()) throw InvalidParameter("ensemble has no members");
  if (alphas.size() != members.size() || sources.size() != members.size()) {
    throw InvalidParameter("ensemble members, alphas and sources differ in length");
  }
  double total = 0.0;
  for (double a : alphas) {
    if (!(a >= 0.0)) throw InvalidParameter("ensemble alphas must be nonnegative");
    total += a;
  }
  if (aggregation == Aggregation::weighted_median && !(total > 0.0)) {
    throw InvalidParameter("weighted median ensemble has all-zero alphas");
  }
  for (const auto& s : sources) {
    if (s.size() > group_size) {
      throw InvalidParameter("member sources exceed the ensemble group size");
    }
  }
}

double WeightedEnsemble::operator()(InstanceId x) const {
  std::vector<double> values;
  values.reserve(members.size());
  for (const auto& h : members) values.push_back(h(x));
  switch (aggregation) {
    case Aggregation::weighted_median:
      return weighted_median(values, alphas);
    case Aggregation::median:
      return weighted_median(values, std::vector<double>(values.size(), 1.0));
    case Aggregation::average:
      break;
  }
  double sum = 0.0;
  for (double v : values) sum += v;
  return sum / static_cast<double>(values.size());
}

Hypothesis WeightedEnsemble::as_hypothesis() const {
  validate();
  auto shared = std::make_shared<const WeightedEnsemble>(*this);
  return Hypothesis({to_string(aggregation), alphas},
                    [shared](InstanceId x) { return (*shared)(x); });
}

std::optional<Hypothesis> fold_average(const WeightedEnsemble& ensemble) {
  if (ensemble.aggregation != Aggregation::average || ensemble.members.empty()) {
    return std::nullopt;
  }
  double sum = 0.0;
  for (const auto& h : ensemble.members) {
    const auto& d = h.descriptor();
    if (d.family != "constant" || d.params.size() != 1) return std::nullopt;
    sum += d.params[0];
  }
  return constant_hypothesis(
      std::clamp(sum / static_cast<double>(ensemble.members.size()), 0.0, 1.0));
}

}  // namespace robustreg
