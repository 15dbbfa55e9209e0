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

#ifndef ROBUSTREG_MW_H_
#define ROBUSTREG_MW_H_

#include <cstddef>
#include <cstdint>
#include <span>

#include "robustreg/boosting.h"
#include "robustreg/core.h"
#include "robustreg/ensemble.h"
#include "robustreg/oracles.h"
#include "robustreg/rng.h"

namespace robustreg {

struct StrongLearnerConfig {
  std::size_t subset_size = 1;
  std::size_t retries = 50;
  double rerm_scale = 1.0 / 4.0;      // RERM tolerance, fraction of eta
  double accuracy_scale = 1.0 / 2.0;  // mistake threshold, fraction of eta
};

// Points the hypothesis handles (|h(z) - y| <= eta/2) are multiplied by
// exp(-xi), then the weights are renormalized.
PointDistribution mw_update(const PointDistribution& p, const Hypothesis& h,
                            std::span<const InflatedExample> cover, double eta,
                            double xi);

// Like find_weak_learner, but accepts only when the P-mass of points with
// |h(z) - y| >= eta/2 is at most epsilon. Throws StrongLearnerNotFound.
LearnerDraw find_strong_learner(const PointDistribution& p,
                                std::span<const InflatedExample> cover,
                                std::span<const LabeledExample> sample,
                                const PerturbationMap& perturbations, double eta,
                                double epsilon, const RobustErm& rerm,
                                const StrongLearnerConfig& config, Rng& rng);

struct MwConfig {
  double xi = 0.5;
  std::size_t rounds = 1;      // T
  std::size_t max_rounds = 0;  // T doubles up to this cap until converged; 0 = T
  StrongLearnerConfig strong;
};

struct MwResult {
  WeightedEnsemble ensemble;  // average aggregation, unit alphas
  std::size_t rounds = 0;
  // Fraction of cover points with |average - y| >= eta/2 is at most epsilon.
  bool converged = false;
  double cover_error = 1.0;
};

MwResult mw_boost(std::span<const InflatedExample> cover,
                  std::span<const LabeledExample> sample,
                  const PerturbationMap& perturbations, double eta, double epsilon,
                  const RobustErm& rerm, const MwConfig& config, std::uint64_t seed);

// Fraction of points with |ensemble(z) - y| >= scale.
double fraction_reaching(const WeightedEnsemble& ensemble,
                         std::span<const InflatedExample> points, double scale);

}  // namespace robustreg

#endif  // ROBUSTREG_MW_H_
