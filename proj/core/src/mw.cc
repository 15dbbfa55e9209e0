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

#include "robustreg/mw.h"

#include <algorithm>
#include <cmath>

#include "robustreg/error.h"

namespace robustreg {

PointDistribution mw_update(const PointDistribution& p, const Hypothesis& h,
                            std::span<const InflatedExample> cover, double eta,
                            double xi) {
  if (!(xi > 0.0)) throw InvalidParameter("xi must be positive");
  if (p.size() != cover.size()) throw InvalidParameter("distribution does not match the cover");
  const double shrink = std::exp(-xi);
  std::vector<double> next(p.size());
  double z = 0.0;
  for (std::size_t i = 0; i < cover.size(); ++i) {
    const bool correct = within(std::abs(h(cover[i].z) - cover[i].y), eta / 2.0);
    next[i] = correct ? p[i] * shrink : p[i];
    z += next[i];
  }
  for (double& v : next) v /= z;
  return PointDistribution(std::move(next));
}

LearnerDraw find_strong_learner(const PointDistribution& p,
                                std::span<const InflatedExample> cover,
                                std::span<const LabeledExample> sample,
                                const PerturbationMap& perturbations, double eta,
                                double epsilon, const RobustErm& rerm,
                                const StrongLearnerConfig& config, Rng& rng) {
  if (!(epsilon > 0.0 && epsilon <= 1.0)) throw InvalidParameter("epsilon must lie in (0, 1]");
  if (cover.empty()) throw InvalidParameter("cover is empty");
  if (config.subset_size < 1) throw InvalidParameter("subset size d must be at least 1");
  if (p.size() != cover.size()) throw InvalidParameter("distribution does not match the cover");
  double best = 1.0;
  for (std::size_t attempt = 1; attempt <= config.retries; ++attempt) {
    std::vector<std::size_t> origins;
    for (std::size_t k = 0; k < config.subset_size; ++k) {
      origins.push_back(cover[rng.categorical(p.weights())].origin);
    }
    std::sort(origins.begin(), origins.end());
    origins.erase(std::unique(origins.begin(), origins.end()), origins.end());
    Sample subset;
    for (std::size_t i : origins) subset.push_back(sample[i]);
    try {
      Hypothesis h = rerm.fit(subset, perturbations, eta * config.rerm_scale);
      const double mass = error_mass_reaching(h, p, cover, eta * config.accuracy_scale);
      best = std::min(best, mass);
      if (within(mass, epsilon)) return {std::move(h), std::move(origins), attempt, mass};
    } catch (const Infeasible&) {
    }
  }
  throw StrongLearnerNotFound(best);
}

double fraction_reaching(const WeightedEnsemble& ensemble,
                         std::span<const InflatedExample> points, double scale) {
  if (points.empty()) return 0.0;
  std::size_t bad = 0;
  for (const auto& pt : points) {
    if (reaches(std::abs(ensemble(pt.z) - pt.y), scale)) ++bad;
  }
  return static_cast<double>(bad) / static_cast<double>(points.size());
}

MwResult mw_boost(std::span<const InflatedExample> cover,
                  std::span<const LabeledExample> sample,
                  const PerturbationMap& perturbations, double eta, double epsilon,
                  const RobustErm& rerm, const MwConfig& config, std::uint64_t seed) {
  if (config.rounds < 1) throw InvalidParameter("MW needs at least one round");
  if (cover.empty()) throw InvalidParameter("cover is empty");
  const std::size_t cap = std::max(config.rounds, config.max_rounds);

  Rng rng(derive_seed(seed, "mw"));
  PointDistribution p = PointDistribution::uniform(cover.size());
  MwResult result;
  WeightedEnsemble& ens = result.ensemble;
  ens.aggregation = Aggregation::average;
  ens.group_size = config.strong.subset_size;

  std::size_t horizon = config.rounds;
  for (;;) {
    while (ens.size() < horizon) {
      LearnerDraw draw = find_strong_learner(p, cover, sample, perturbations, eta, epsilon,
                                             rerm, config.strong, rng);
      p = mw_update(p, draw.hypothesis, cover, eta, config.xi);
      ens.members.push_back(std::move(draw.hypothesis));
      ens.alphas.push_back(1.0);
      ens.sources.push_back(std::move(draw.sources));
      ++result.rounds;
    }
    result.cover_error = fraction_reaching(ens, cover, eta / 2.0);
    result.converged = within(result.cover_error, epsilon);
    if (result.converged || horizon >= cap) break;
    horizon = std::min(cap, horizon * 2);
  }
  return result;
}

}  // namespace robustreg
