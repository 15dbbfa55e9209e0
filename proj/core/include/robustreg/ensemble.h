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

#ifndef ROBUSTREG_ENSEMBLE_H_
#define ROBUSTREG_ENSEMBLE_H_

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "robustreg/core.h"

namespace robustreg {

enum class Aggregation {
  weighted_median,  // median weighted by alphas (boosting output)
  median,           // unweighted median (sparsified output)
  average,          // equal-weight mean (multiplicative weights output)
};

std::string to_string(Aggregation a);

// Boosted hypotheses with their coefficients and the original-sample indices
// each member was fit on.
struct WeightedEnsemble {
  std::vector<Hypothesis> members;
  std::vector<double> alphas;
  std::vector<std::vector<std::size_t>> sources;
  Aggregation aggregation = Aggregation::weighted_median;
  // Fixed compression block length; each sources list is at most this long.
  std::size_t group_size = 1;

  std::size_t size() const { return members.size(); }

  // Throws InvalidParameter when the invariants do not hold.
  void validate() const;

  double operator()(InstanceId x) const;

  // Descriptor family is the aggregation name; params are the alphas.
  Hypothesis as_hypothesis() const;
};

// Lower weighted median: sort values ascending (stable) and return the first
// whose cumulative weight reaches half the total. Throws DegenerateWeights
// when the weights sum to zero and InvalidParameter on size mismatch.
double weighted_median(std::span<const double> values, std::span<const double> weights);

// When every member is a constant, the average is itself a constant; returns
// that constant hypothesis. Otherwise nullopt.
std::optional<Hypothesis> fold_average(const WeightedEnsemble& ensemble);

}  // namespace robustreg

#endif  // ROBUSTREG_ENSEMBLE_H_
