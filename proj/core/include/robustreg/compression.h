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

#ifndef ROBUSTREG_COMPRESSION_H_
#define ROBUSTREG_COMPRESSION_H_

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "robustreg/core.h"
#include "robustreg/ensemble.h"
#include "robustreg/oracles.h"

namespace robustreg {

// Compressed representation of an ensemble: one fixed-length block of
// original-sample indices per member, plus the aggregation rule. Weighted
// median schemes carry their alphas as side information.
struct CompressionScheme {
  std::vector<std::vector<std::size_t>> groups;
  Aggregation aggregation = Aggregation::median;
  double eta = 0.0;
  // RERM tolerance used to rebuild each member. Defaults to eta/8 for median
  // schemes and eta/4 for average schemes.
  double rerm_eta = 0.0;
  std::optional<std::vector<double>> alphas;

  // |kappa(S)|: total number of stored indices.
  std::size_t size() const;

  // {"eta", "aggregation", "groups", "alphas", "rerm_eta"} in that order.
  std::string to_json() const;
  static CompressionScheme from_json(const std::string& text);
};

double default_rerm_eta(Aggregation aggregation, double eta);

// Pads each member's sources to the ensemble's group size by repeating the
// last index. Throws NotCompressible for a member without sources.
CompressionScheme compress(const WeightedEnsemble& ensemble,
                           std::span<const LabeledExample> sample, double eta,
                           std::optional<double> rerm_eta = std::nullopt);

// Refits every group with the RERM and recombines. Throws
// ReconstructionFailed if a group is infeasible or references a missing
// sample index.
WeightedEnsemble reconstruct_ensemble(const CompressionScheme& scheme,
                                      std::span<const LabeledExample> sample,
                                      const RobustErm& rerm,
                                      const PerturbationMap& perturbations);
Hypothesis reconstruct(const CompressionScheme& scheme,
                       std::span<const LabeledExample> sample, const RobustErm& rerm,
                       const PerturbationMap& perturbations);

struct Approximation {
  // No sample point reaches robust deviation eta.
  bool uniform = false;
  // Fraction of sample points with robust deviation >= eta.
  double rate = 0.0;
  double max_deviation = 0.0;
};

// Throws EmptySample.
Approximation verify_approximation(const Hypothesis& h,
                                   std::span<const LabeledExample> sample,
                                   const PerturbationMap& perturbations, double eta);

enum class BoundKind { realizable, agnostic, bernstein };

// Compression generalization gap with complexity term
// r = (k ln m + ln(1/delta)) / m:
//   realizable  c * r
//   agnostic    c * sqrt(r)
//   bernstein   c * (sqrt(empirical * r) + r)
// Requires 1 <= k <= m/2, delta in (0, 1), empirical in [0, 1].
double generalization_bound(BoundKind kind, std::size_t k, std::size_t m,
                            double delta, double empirical, double c = 1.0);

BoundKind parse_bound_kind(const std::string& name);

}  // namespace robustreg

#endif  // ROBUSTREG_COMPRESSION_H_
