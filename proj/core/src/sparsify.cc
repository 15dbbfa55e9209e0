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

#include "robustreg/sparsify.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "robustreg/error.h"
#include "robustreg/rng.h"

namespace robustreg {

std::size_t majority_violations(const WeightedEnsemble& ensemble,
                                std::span<const InflatedExample> points, double eta) {
  const std::size_t k = ensemble.size();
  std::size_t failing = 0;
  for (const auto& pt : points) {
    std::size_t bad = 0;
    for (const auto& h : ensemble.members) {
      if (exceeds(std::abs(h(pt.z) - pt.y), eta)) ++bad;
    }
    if (2 * bad >= k) ++failing;
  }
  return failing;
}

SparsifyResult sparsify(const WeightedEnsemble& ensemble,
                        std::span<const InflatedExample> points, double eta,
                        std::size_t k, std::size_t max_iters, std::uint64_t seed) {
  if (k < 1) throw InvalidParameter("k must be at least 1");
  ensemble.validate();
  double total = 0.0;
  for (double a : ensemble.alphas) {
    if (!(a >= 0.0) || !std::isfinite(a)) throw InvalidParameter("alphas must be finite and nonnegative");
    total += a;
  }
  if (!(total > 0.0)) throw DegenerateWeights();

  // bad[t][i]: member t misses point i by more than eta.
  const std::size_t n = points.size();
  std::vector<std::vector<char>> bad(ensemble.size(), std::vector<char>(n, 0));
  for (std::size_t t = 0; t < ensemble.size(); ++t) {
    for (std::size_t i = 0; i < n; ++i) {
      bad[t][i] = exceeds(std::abs(ensemble.members[t](points[i].z) - points[i].y), eta) ? 1 : 0;
    }
  }

  Rng rng(derive_seed(seed, "sparsify"));
  std::size_t best = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> draw(k);
  std::vector<std::size_t> counts(n);
  for (std::size_t iter = 1; iter <= max_iters; ++iter) {
    for (auto& j : draw) j = rng.categorical(ensemble.alphas);
    std::fill(counts.begin(), counts.end(), 0);
    for (std::size_t j : draw) {
      for (std::size_t i = 0; i < n; ++i) counts[i] += bad[j][i];
    }
    std::size_t failing = 0;
    for (std::size_t c : counts) {
      if (2 * c >= k) ++failing;
    }
    best = std::min(best, failing);
    if (failing == 0) {
      SparsifyResult out;
      out.iterations = iter;
      out.ensemble.aggregation = Aggregation::median;
      out.ensemble.group_size = ensemble.group_size;
      for (std::size_t j : draw) {
        out.ensemble.members.push_back(ensemble.members[j]);
        out.ensemble.alphas.push_back(1.0);
        out.ensemble.sources.push_back(ensemble.sources[j]);
      }
      return out;
    }
  }
  throw SparsifyFailed(best == std::numeric_limits<std::size_t>::max() ? n : best);
}

std::size_t default_k(int fat_star, double eta, double c) {
  if (fat_star < 1) throw InvalidParameter("fat_star must be at least 1");
  if (!(eta > 0.0 && eta <= 1.0)) throw InvalidParameter("eta must lie in (0, 1]");
  if (!(c > 0.0)) throw InvalidParameter("c must be positive");
  const double l = std::log(std::max(fat_star / eta, 2.0));
  auto k = static_cast<std::size_t>(std::ceil(c * fat_star * l * l - 1e-12));
  k = std::max<std::size_t>(k, 1);
  if (k % 2 == 0) ++k;
  return k;
}

}  // namespace robustreg
