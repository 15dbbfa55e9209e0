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

#ifndef ROBUSTREG_ORACLES_H_
#define ROBUSTREG_ORACLES_H_

#include <cstddef>
#include <map>
#include <mutex>
#include <span>
#include <string>
#include <vector>

#include "robustreg/core.h"
#include "robustreg/dimensions.h"
#include "robustreg/finite_class.h"

namespace robustreg {

// Probability weights over a finite list of points.
class PointDistribution {
 public:
  // Throws InvalidParameter for negative weights or a sum off 1 by more
  // than 1e-9.
  explicit PointDistribution(std::vector<double> weights);
  static PointDistribution uniform(std::size_t n);

  std::size_t size() const { return weights_.size(); }
  double operator[](std::size_t i) const { return weights_[i]; }
  std::span<const double> weights() const { return weights_; }

 private:
  std::vector<double> weights_;
};

// Lowest-index row whose worst deviation over U(x) is at most eta on every
// subset point. Throws Infeasible carrying the smallest worst-case deviation
// over all rows.
std::size_t rerm_finite_row(const FiniteClass& cls,
                            std::span<const LabeledExample> subset,
                            const PerturbationMap& perturbations, double eta);
Hypothesis rerm_finite(const FiniteClass& cls, std::span<const LabeledExample> subset,
                       const PerturbationMap& perturbations, double eta);

// Constant class: the midpoint of [max(y) - eta, min(y) + eta] clipped to
// [0, 1]. Throws Infeasible carrying the gap width.
Hypothesis rerm_constant(std::span<const LabeledExample> subset,
                         const PerturbationMap& perturbations, double eta);

// (eta, beta)-weak learner test: the P-mass of points with |h(z) - y| > eta
// is strictly below 1/2 - beta.
bool weak_learner_check(const Hypothesis& h, const PointDistribution& p,
                        std::span<const InflatedExample> points, double eta,
                        double beta);

// P-mass of points with |h(z) - y| > eta.
double error_mass_above(const Hypothesis& h, const PointDistribution& p,
                        std::span<const InflatedExample> points, double eta);
// P-mass of points with |h(z) - y| >= eta.
double error_mass_reaching(const Hypothesis& h, const PointDistribution& p,
                           std::span<const InflatedExample> points, double eta);

// An eta-robust empirical risk minimizer for some hypothesis class.
class RobustErm {
 public:
  virtual ~RobustErm() = default;

  // Throws Infeasible when no member fits.
  virtual Hypothesis fit(std::span<const LabeledExample> subset,
                         const PerturbationMap& perturbations, double eta) const = 0;

  // Largest set of sample indices on which a single member has robust
  // deviation strictly below eta, i.e. zero eta-ball loss. Among equally
  // large fit sets the lowest-index member wins.
  virtual std::vector<std::size_t> maximal_fit_subset(
      std::span<const LabeledExample> sample, const PerturbationMap& perturbations,
      double eta) const = 0;

  // Fat-shattering dimension of the class at scale gamma, and of its dual.
  virtual int fat(double gamma) const = 0;
  virtual int dual_fat(double gamma) const = 0;

  // Whether the class is closed under averaging, so that an average
  // ensemble folds back to a single member.
  virtual bool convex() const { return false; }

  virtual std::string name() const = 0;
};

class FiniteClassErm final : public RobustErm {
 public:
  explicit FiniteClassErm(FiniteClass cls, FatCaps caps = {64, 512});

  Hypothesis fit(std::span<const LabeledExample> subset,
                 const PerturbationMap& perturbations, double eta) const override;
  std::vector<std::size_t> maximal_fit_subset(std::span<const LabeledExample> sample,
                                              const PerturbationMap& perturbations,
                                              double eta) const override;
  int fat(double gamma) const override;
  int dual_fat(double gamma) const override;
  std::string name() const override { return "finite"; }

  const FiniteClass& finite_class() const { return cls_; }

 private:
  FiniteClass cls_;
  FatCaps caps_;
  mutable std::mutex mu_;
  mutable std::map<double, int> fat_cache_;
  mutable std::map<double, int> dual_fat_cache_;
};

// All constant functions x -> c, c in [0, 1].
class ConstantErm final : public RobustErm {
 public:
  Hypothesis fit(std::span<const LabeledExample> subset,
                 const PerturbationMap& perturbations, double eta) const override;
  // Labels within a window narrower than 2 eta.
  std::vector<std::size_t> maximal_fit_subset(std::span<const LabeledExample> sample,
                                              const PerturbationMap& perturbations,
                                              double eta) const override;
  // One point is shattered iff the constants 0 and 1 are 2*gamma apart.
  int fat(double gamma) const override { return gamma <= 0.5 ? 1 : 0; }
  // Every instance induces the same dual function c -> c.
  int dual_fat(double) const override { return 0; }
  bool convex() const override { return true; }
  std::string name() const override { return "constant"; }
};

}  // namespace robustreg

#endif  // ROBUSTREG_ORACLES_H_
