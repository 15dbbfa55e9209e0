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

#include "robustreg/oracles.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "robustreg/error.h"

namespace robustreg {
namespace {

void check_eta(double eta) {
  if (!(eta > 0.0 && eta <= 1.0)) throw InvalidParameter("eta must lie in (0, 1]");
}

// Worst robust deviation of one class row over a subset, stopping early once
// it exceeds `stop`.
double row_worst_deviation(const Matrix& m, std::size_t row,
                           std::span<const LabeledExample> subset,
                           const PerturbationMap& perturbations, double stop) {
  double worst = 0.0;
  for (const auto& ex : subset) {
    for (InstanceId z : perturbations.at(ex.x)) {
      if (z >= m.cols()) {
        throw InvalidParameter("instance " + std::to_string(z) +
                               " lies outside the class domain");
      }
      worst = std::max(worst, std::abs(m(row, z) - ex.y));
    }
    if (worst > stop) return worst;
  }
  return worst;
}

}  // namespace

FiniteClass::FiniteClass(Matrix values, std::vector<std::string> labels)
    : values_(std::make_shared<const Matrix>(std::move(values))),
      labels_(std::move(labels)) {
  if (values_->rows() == 0) throw InvalidParameter("a finite class needs at least one row");
  for (double v : values_->values()) {
    if (!(v >= 0.0 && v <= 1.0)) {
      throw InvalidParameter("class matrix entries must lie in [0, 1]");
    }
  }
  if (labels_.empty()) {
    for (std::size_t r = 0; r < values_->rows(); ++r) labels_.push_back("h" + std::to_string(r));
  } else if (labels_.size() != values_->rows()) {
    throw InvalidParameter("class label count does not match the row count");
  }
}

Hypothesis FiniteClass::hypothesis(std::size_t row) const {
  if (row >= size()) throw InvalidParameter("class row out of range");
  return Hypothesis({"finite", {static_cast<double>(row)}},
                    [values = values_, row](InstanceId x) {
                      if (x >= values->cols()) {
                        throw InvalidParameter("instance " + std::to_string(x) +
                                               " lies outside the class domain");
                      }
                      return (*values)(row, x);
                    });
}

PointDistribution::PointDistribution(std::vector<double> weights)
    : weights_(std::move(weights)) {
  double total = 0.0;
  for (double w : weights_) {
    if (!(w >= 0.0)) throw InvalidParameter("distribution weights must be nonnegative");
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-9) {
    throw InvalidParameter("distribution weights must sum to 1");
  }
}

PointDistribution PointDistribution::uniform(std::size_t n) {
  if (n == 0) throw InvalidParameter("uniform distribution over no points");
  return PointDistribution(std::vector<double>(n, 1.0 / static_cast<double>(n)));
}

std::size_t rerm_finite_row(const FiniteClass& cls,
                            std::span<const LabeledExample> subset,
                            const PerturbationMap& perturbations, double eta) {
  check_eta(eta);
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t row = 0; row < cls.size(); ++row) {
    // Rows that cannot beat the best seen so far may stop early, except that
    // the first feasible row must still be identified exactly.
    const double worst = row_worst_deviation(cls.matrix(), row, subset, perturbations,
                                             std::max(eta + kTolerance, best));
    if (within(worst, eta)) return row;
    best = std::min(best, worst);
  }
  throw Infeasible("no class member fits the subset within eta", best);
}

Hypothesis rerm_finite(const FiniteClass& cls, std::span<const LabeledExample> subset,
                       const PerturbationMap& perturbations, double eta) {
  return cls.hypothesis(rerm_finite_row(cls, subset, perturbations, eta));
}

Hypothesis rerm_constant(std::span<const LabeledExample> subset,
                         const PerturbationMap& perturbations, double eta) {
  check_eta(eta);
  double lo = 0.0;
  double hi = 1.0;
  for (const auto& ex : subset) {
    perturbations.at(ex.x);
    lo = std::max(lo, ex.y - eta);
    hi = std::min(hi, ex.y + eta);
  }
  if (lo > hi + kTolerance) {
    throw Infeasible("label intervals do not intersect", lo - hi);
  }
  return constant_hypothesis(std::clamp(0.5 * (lo + hi), 0.0, 1.0));
}

double error_mass_above(const Hypothesis& h, const PointDistribution& p,
                        std::span<const InflatedExample> points, double eta) {
  if (p.size() != points.size()) {
    throw InvalidParameter("distribution size does not match the point count");
  }
  double mass = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (exceeds(std::abs(h(points[i].z) - points[i].y), eta)) mass += p[i];
  }
  return mass;
}

double error_mass_reaching(const Hypothesis& h, const PointDistribution& p,
                           std::span<const InflatedExample> points, double eta) {
  if (p.size() != points.size()) {
    throw InvalidParameter("distribution size does not match the point count");
  }
  double mass = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (reaches(std::abs(h(points[i].z) - points[i].y), eta)) mass += p[i];
  }
  return mass;
}

bool weak_learner_check(const Hypothesis& h, const PointDistribution& p,
                        std::span<const InflatedExample> points, double eta,
                        double beta) {
  if (!(beta >= 0.0 && beta <= 0.5)) throw InvalidParameter("beta must lie in [0, 1/2]");
  return error_mass_above(h, p, points, eta) < 0.5 - beta - kTolerance;
}

FiniteClassErm::FiniteClassErm(FiniteClass cls, FatCaps caps)
    : cls_(std::move(cls)), caps_(caps) {}

Hypothesis FiniteClassErm::fit(std::span<const LabeledExample> subset,
                               const PerturbationMap& perturbations, double eta) const {
  return rerm_finite(cls_, subset, perturbations, eta);
}

std::vector<std::size_t> FiniteClassErm::maximal_fit_subset(
    std::span<const LabeledExample> sample, const PerturbationMap& perturbations,
    double eta) const {
  check_eta(eta);
  std::vector<std::size_t> best;
  std::vector<std::size_t> fit;
  for (std::size_t row = 0; row < cls_.size(); ++row) {
    fit.clear();
    for (std::size_t i = 0; i < sample.size(); ++i) {
      const double dev = row_worst_deviation(cls_.matrix(), row, sample.subspan(i, 1),
                                             perturbations,
                                             std::numeric_limits<double>::infinity());
      if (!reaches(dev, eta)) fit.push_back(i);
    }
    if (fit.size() > best.size() || row == 0) best = fit;
  }
  return best;
}

int FiniteClassErm::fat(double gamma) const {
  std::lock_guard lock(mu_);
  auto it = fat_cache_.find(gamma);
  if (it != fat_cache_.end()) return it->second;
  const int v = fat_shattering(cls_, gamma, caps_);
  fat_cache_.emplace(gamma, v);
  return v;
}

int FiniteClassErm::dual_fat(double gamma) const {
  std::lock_guard lock(mu_);
  auto it = dual_fat_cache_.find(gamma);
  if (it != dual_fat_cache_.end()) return it->second;
  const int v = dual_fat_shattering(cls_, gamma, caps_);
  dual_fat_cache_.emplace(gamma, v);
  return v;
}

Hypothesis ConstantErm::fit(std::span<const LabeledExample> subset,
                            const PerturbationMap& perturbations, double eta) const {
  return rerm_constant(subset, perturbations, eta);
}

std::vector<std::size_t> ConstantErm::maximal_fit_subset(
    std::span<const LabeledExample> sample, const PerturbationMap& perturbations,
    double eta) const {
  check_eta(eta);
  for (const auto& ex : sample) perturbations.at(ex.x);
  std::vector<std::size_t> order(sample.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return sample[a].y < sample[b].y;
  });
  // A constant has zero eta-ball loss on a set of labels iff the midpoint of
  // their range stays strictly closer than eta to both ends.
  std::size_t best_lo = 0;
  std::size_t best_len = 0;
  std::size_t lo = 0;
  for (std::size_t hi = 0; hi < order.size(); ++hi) {
    while (reaches(0.5 * (sample[order[hi]].y - sample[order[lo]].y), eta)) ++lo;
    if (hi + 1 - lo > best_len) {
      best_len = hi + 1 - lo;
      best_lo = lo;
    }
  }
  std::vector<std::size_t> out(order.begin() + best_lo,
                               order.begin() + best_lo + best_len);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace robustreg
