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

#ifndef ROBUSTREG_BOOSTING_H_
#define ROBUSTREG_BOOSTING_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "robustreg/core.h"
#include "robustreg/ensemble.h"
#include "robustreg/oracles.h"
#include "robustreg/rng.h"

namespace robustreg {

// Scales of the median-boosting learner, as fractions of eta.
struct MedBoostScales {
  double rerm = 1.0 / 8.0;  // RERM tolerance on the drawn originals
  double weak = 1.0 / 4.0;  // deviation counted as a mistake by the weak test
};

struct WeakLearnerConfig {
  std::size_t subset_size = 1;  // d: cover points drawn per attempt
  std::size_t retries = 50;
  MedBoostScales scales;
};

// A learner accepted by a search, with the original-sample indices it was
// fit on (sorted, unique).
struct LearnerDraw {
  Hypothesis hypothesis;
  std::vector<std::size_t> sources;
  std::size_t attempts = 0;
  double error_mass = 0.0;
};

// alpha = 1/2 log( (5/6) W+ / ((7/6) W-) ), with W+/W- the P-mass of points
// with w_i = +1 / -1. Returns +infinity when W- is zero.
double medboost_alpha(const PointDistribution& p, std::span<const int> w);

// P'(i) proportional to P(i) exp(-alpha w_i).
PointDistribution medboost_reweight(const PointDistribution& p, std::span<const int> w,
                                    double alpha);

// Draws d cover points from P, fits the RERM on the sample points they came
// from, and accepts the fit if it is an (eta * weak, 1/6)-weak learner under
// P. Throws WeakLearnerNotFound once the retries are used up.
LearnerDraw find_weak_learner(const PointDistribution& p,
                              std::span<const InflatedExample> cover,
                              std::span<const LabeledExample> sample,
                              const PerturbationMap& perturbations, double eta,
                              const RobustErm& rerm, const WeakLearnerConfig& config,
                              Rng& rng);

struct MedBoostConfig {
  std::size_t rounds = 1;      // T
  std::size_t max_rounds = 0;  // keep boosting past T until converged; 0 = T
  bool early_stop = true;      // stop as soon as the cover condition holds
  WeakLearnerConfig weak;
};

struct MedBoostResult {
  WeightedEnsemble ensemble;
  std::size_t rounds = 0;
  // Every cover point has |median - y| <= eta * weak.
  bool converged = false;
};

// Median boosting over the cover. Rounds whose alpha is not positive are
// redrawn. A learner with no mistakes ends the run with T copies of itself.
MedBoostResult medboost(std::span<const InflatedExample> cover,
                        std::span<const LabeledExample> sample,
                        const PerturbationMap& perturbations, double eta,
                        const RobustErm& rerm, const MedBoostConfig& config,
                        std::uint64_t seed);

// max over points of |ensemble(z) - y|.
double max_deviation(const WeightedEnsemble& ensemble,
                     std::span<const InflatedExample> points);

}  // namespace robustreg

#endif  // ROBUSTREG_BOOSTING_H_
