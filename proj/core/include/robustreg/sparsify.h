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

#ifndef ROBUSTREG_SPARSIFY_H_
#define ROBUSTREG_SPARSIFY_H_

#include <cstddef>
#include <cstdint>
#include <span>

#include "robustreg/core.h"
#include "robustreg/ensemble.h"

namespace robustreg {

struct SparsifyResult {
  WeightedEnsemble ensemble;  // k members, unweighted median
  std::size_t iterations = 0;
};

// Draws k members i.i.d. from Cat(alpha / sum alpha) until every point has
// fewer than k/2 drawn members deviating by more than eta. Throws
// SparsifyFailed after max_iters draws.
SparsifyResult sparsify(const WeightedEnsemble& ensemble,
                        std::span<const InflatedExample> points, double eta,
                        std::size_t k, std::size_t max_iters, std::uint64_t seed);

// Number of points at which at least k/2 of the members deviate by more
// than eta (zero means the majority certificate holds).
std::size_t majority_violations(const WeightedEnsemble& ensemble,
                                std::span<const InflatedExample> points, double eta);

// ceil(c * fat_star * log^2(max(fat_star / eta, 2))), bumped to the next odd
// number.
std::size_t default_k(int fat_star, double eta, double c = 1.0);

}  // namespace robustreg

#endif  // ROBUSTREG_SPARSIFY_H_
