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

#ifndef ROBUSTREG_PIPELINES_H_
#define ROBUSTREG_PIPELINES_H_

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "robustreg/compression.h"
#include "robustreg/core.h"
#include "robustreg/matrix.h"
#include "robustreg/oracles.h"

namespace robustreg {

enum class PoolMode {
  enumerate,  // every size-d subset of the sample
  sample,     // `samples` seeded random size-d subsets
  automatic,  // enumerate when C(m, d) <= enumerate_cap, else sample
};

struct PoolConfig {
  // d, the number of sample points behind each pool member and each boosting
  // learner. 0 derives it from the class's fat-shattering dimension.
  std::size_t subset_size = 0;
  PoolMode mode = PoolMode::automatic;
  std::size_t samples = 64;
  std::size_t enumerate_cap = 100000;

  double c_d = 1.0;  // multiplier on the derived d
  double c_T = 4.0;  // T = ceil(c_T ln |cover|)
  double c_k = 1.0;  // multiplier on the sparsified ensemble size
  // Scale of fat(H, .) behind the derived d, as a fraction of eta. 0 picks
  // the pipeline default (1/32 proper, 1/64 improper).
  double fat_scale = 0.0;
  double dual_scale = 1.0;  // fat*(H, dual_scale * eta) behind k

  std::size_t retries = 50;
  std::size_t round_cap_factor = 4;  // boosting may run to this multiple of T
  std::size_t sparsify_iters = 200;
  std::size_t cover_refinements = 2;
  double xi = 0.5;

  double delta = 0.05;  // confidence for reported bounds
  double bound_c = 1.0;
  double p = 1.0;  // exponent of the reported l_p error
};

struct Pool {
  std::vector<Hypothesis> members;
  std::vector<std::vector<std::size_t>> subsets;  // sample indices behind each member
  std::size_t skipped = 0;                        // infeasible subsets
};

// One RERM fit per chosen size-d subset of the sample; infeasible subsets are
// skipped and counted. Throws EmptyPool if nothing fits and InvalidParameter
// when enumeration is forced beyond the cap.
Pool build_pool(std::span<const LabeledExample> sample,
                const PerturbationMap& perturbations, const RobustErm& rerm,
                double rerm_eta, std::size_t d, PoolMode mode, std::size_t samples,
                std::size_t enumerate_cap, std::uint64_t seed);

// Entry (i, j) = |pool_j(z_i) - y_i|.
Matrix dual_embed(std::span<const Hypothesis> pool,
                  std::span<const InflatedExample> inflated);

struct GridPoint {
  double theta = 0.0;
  bool ok = false;
  double holdout_error = 1.0;  // theta-ball robust error on the holdout
  double holdout_lp_error = 1.0;
  std::size_t compression_size = 0;
  std::string message;
};

struct PipelineReport {
  std::string pipeline;
  double eta = 0.0;
  double epsilon = 0.0;
  double p = 1.0;
  std::uint64_t seed = 0;

  CompressionScheme scheme;
  std::optional<Hypothesis> hypothesis;  // rebuilt from the scheme
  std::optional<Descriptor> proper;      // single class member, when foldable

  // Recomputed from the reconstruction.
  double emp_eta_error = 1.0;
  double emp_lp_error = 1.0;
  double max_robust_deviation = 1.0;

  std::size_t sample_size = 0;
  std::size_t compression_size = 0;
  std::size_t cover_size = 0;
  std::size_t inflated_size = 0;
  std::size_t pool_size = 0;
  std::size_t pool_skipped = 0;
  std::size_t subset_size = 0;
  std::size_t rounds = 0;
  bool sparsified = false;

  double bound_realizable = 0.0;  // NaN when |kappa| > m/2
  double bound_agnostic = 0.0;
  double bound_bernstein = 0.0;

  // Named post-run assertions; the run is sound only if all hold.
  std::map<std::string, bool> checks;
  std::map<std::string, double> timings_ms;

  // Agnostic reductions.
  std::vector<std::size_t> realizable_subset;
  std::optional<double> selected_theta;
  std::optional<double> holdout_error;
  std::optional<double> holdout_lp_error;
  std::vector<GridPoint> grid;

  bool ok() const;
  std::string to_json() const;
  static std::string csv_header();
  std::string csv_row() const;
};

// Inflate, pool (eta/4 RERM), cover at eta/2, multiplicative weights, average.
PipelineReport proper_learn(std::span<const LabeledExample> sample,
                            const PerturbationMap& perturbations, const RobustErm& rerm,
                            double eta, double epsilon, const PoolConfig& config,
                            std::uint64_t seed);

// Inflate, pool (eta/8 RERM), cover at eta/4, median boosting, sparsify.
// Never reads epsilon; it is only echoed into the report.
PipelineReport improper_learn(std::span<const LabeledExample> sample,
                              const PerturbationMap& perturbations,
                              const RobustErm& rerm, double eta,
                              const PoolConfig& config, std::uint64_t seed,
                              double epsilon = 0.0);

struct RealizableSubset {
  std::vector<std::size_t> indices;  // ascending sample indices
};

// Largest subset of the sample on which one class member has zero eta-ball
// robust loss.
RealizableSubset maximal_realizable_subset(std::span<const LabeledExample> sample,
                                           const PerturbationMap& perturbations,
                                           const RobustErm& rerm, double eta);

// Restricts to the maximal realizable subset, then boosts on it with the
// RERM and the weak-learner test both at eta. Errors are reported on the
// full sample. Accepts eta in (0, 1].
PipelineReport agnostic_eta_learn(std::span<const LabeledExample> sample,
                                  const PerturbationMap& perturbations,
                                  const RobustErm& rerm, double eta,
                                  const PoolConfig& config, std::uint64_t seed);

// improper_learn at eta = epsilon^(1/p), reporting the l_p robust error.
PipelineReport realizable_regression(std::span<const LabeledExample> sample,
                                     const PerturbationMap& perturbations,
                                     const RobustErm& rerm, double epsilon, double p,
                                     const PoolConfig& config, std::uint64_t seed);

// {1/m, 2/m, 4/m, ..., 1}.
std::vector<double> doubling_grid(std::size_t m);

// Minimum holdout size ceil(ln(1/delta) / epsilon^2).
std::size_t min_holdout_size(double epsilon, double delta);

// Runs agnostic_eta_learn at every grid scale and keeps the one with the
// smallest holdout theta-ball robust error (smallest theta on ties).
PipelineReport agnostic_regression(std::span<const LabeledExample> sample,
                                   std::span<const LabeledExample> holdout,
                                   const PerturbationMap& perturbations,
                                   const RobustErm& rerm, double epsilon, double delta,
                                   double p, const PoolConfig& config,
                                   std::uint64_t seed);

enum class Setting { proper, improper, agnostic_eta, realizable_lp, agnostic_lp };

// proper | improper | agnostic-eta | realizable-lp | agnostic-lp
Setting parse_setting(const std::string& name);
std::string to_string(Setting s);

// Scale at which the fat-shattering dimensions of a setting are evaluated,
// before the unknown constant c: eta, or epsilon^(1/p) for the l_p settings.
double setting_scale(Setting t, double eta, double epsilon, double p);

// c * (fat * fat_star / eps^k + ln(1/delta) / eps^k), k = 3 (proper),
// 1 (realizable) or 2 (agnostic). With include_logs the leading term is
// multiplied by max(1, ln(fat * fat_star / eps))^2.
double sample_complexity(Setting t, int fat, int fat_star, double epsilon,
                         double delta, double c = 1.0, bool include_logs = false);

}  // namespace robustreg

#endif  // ROBUSTREG_PIPELINES_H_
