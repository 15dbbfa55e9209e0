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

#include "robustreg/boosting.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "robustreg/error.h"

namespace robustreg {
namespace {

constexpr double kBeta = 1.0 / 6.0;

std::vector<std::size_t> draw_origins(const PointDistribution& p,
                                      std::span<const InflatedExample> cover,
                                      std::size_t d, Rng& rng) {
  std::vector<std::size_t> origins;
  origins.reserve(d);
  for (std::size_t k = 0; k < d; ++k) {
    origins.push_back(cover[rng.categorical(p.weights())].origin);
  }
  std::sort(origins.begin(), origins.end());
  origins.erase(std::unique(origins.begin(), origins.end()), origins.end());
  return origins;
}

Sample gather(std::span<const LabeledExample> sample, std::span<const std::size_t> idx) {
  Sample out;
  out.reserve(idx.size());
  for (std::size_t i : idx) out.push_back(sample[i]);
  return out;
}

}  // namespace

double medboost_alpha(const PointDistribution& p, std::span<const int> w) {
  if (w.size() != p.size()) throw InvalidParameter("sign vector and distribution differ in size");
  double plus = 0.0;
  double minus = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (w[i] == 1) {
      plus += p[i];
    } else if (w[i] == -1) {
      minus += p[i];
    } else {
      throw InvalidParameter("boosting signs must be +1 or -1");
    }
  }
  if (minus == 0.0) return std::numeric_limits<double>::infinity();
  if (plus == 0.0) return -std::numeric_limits<double>::infinity();
  return 0.5 * std::log(((1.0 - kBeta) * plus) / ((1.0 + kBeta) * minus));
}

PointDistribution medboost_reweight(const PointDistribution& p, std::span<const int> w,
                                    double alpha) {
  if (w.size() != p.size()) throw InvalidParameter("sign vector and distribution differ in size");
  if (!std::isfinite(alpha)) throw InvalidParameter("reweighting needs a finite alpha");
  std::vector<double> next(p.size());
  double z = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    next[i] = p[i] * std::exp(-alpha * w[i]);
    z += next[i];
  }
  for (double& v : next) v /= z;
  return PointDistribution(std::move(next));
}

LearnerDraw find_weak_learner(const PointDistribution& p,
                              std::span<const InflatedExample> cover,
                              std::span<const LabeledExample> sample,
                              const PerturbationMap& perturbations, double eta,
                              const RobustErm& rerm, const WeakLearnerConfig& config,
                              Rng& rng) {
  if (cover.empty()) throw InvalidParameter("cover is empty");
  if (config.subset_size < 1) throw InvalidParameter("subset size d must be at least 1");
  if (p.size() != cover.size()) throw InvalidParameter("distribution does not match the cover");
  double best = 1.0;
  for (std::size_t attempt = 1; attempt <= config.retries; ++attempt) {
    auto origins = draw_origins(p, cover, config.subset_size, rng);
    const Sample subset = gather(sample, origins);
    try {
      Hypothesis h = rerm.fit(subset, perturbations, eta * config.scales.rerm);
      const double mass = error_mass_above(h, p, cover, eta * config.scales.weak);
      best = std::min(best, mass);
      if (mass < 0.5 - kBeta - kTolerance) {
        return {std::move(h), std::move(origins), attempt, mass};
      }
    } catch (const Infeasible&) {
      // The drawn originals admit no fit at this scale; draw again.
    }
  }
  throw WeakLearnerNotFound(best);
}

double max_deviation(const WeightedEnsemble& ensemble,
                     std::span<const InflatedExample> points) {
  double worst = 0.0;
  for (const auto& pt : points) worst = std::max(worst, std::abs(ensemble(pt.z) - pt.y));
  return worst;
}

MedBoostResult medboost(std::span<const InflatedExample> cover,
                        std::span<const LabeledExample> sample,
                        const PerturbationMap& perturbations, double eta,
                        const RobustErm& rerm, const MedBoostConfig& config,
                        std::uint64_t seed) {
  if (config.rounds < 1) throw InvalidParameter("boosting needs at least one round");
  if (cover.empty()) throw InvalidParameter("cover is empty");
  const std::size_t budget = std::max(config.rounds, config.max_rounds);
  const double target = eta * config.weak.scales.weak;

  Rng rng(derive_seed(seed, "medboost"));
  PointDistribution p = PointDistribution::uniform(cover.size());
  MedBoostResult result;
  WeightedEnsemble& ens = result.ensemble;
  ens.aggregation = Aggregation::weighted_median;
  ens.group_size = config.weak.subset_size;

  std::vector<int> w(cover.size());
  std::size_t rejected = 0;
  while (ens.size() < budget) {
    LearnerDraw draw =
        find_weak_learner(p, cover, sample, perturbations, eta, rerm, config.weak, rng);
    for (std::size_t i = 0; i < cover.size(); ++i) {
      w[i] = exceeds(std::abs(draw.hypothesis(cover[i].z) - cover[i].y), target) ? -1 : 1;
    }
    const double alpha = medboost_alpha(p, w);
    ++result.rounds;
    if (std::isinf(alpha) && alpha > 0.0) {
      WeightedEnsemble copies;
      copies.aggregation = Aggregation::weighted_median;
      copies.group_size = ens.group_size;
      for (std::size_t t = 0; t < config.rounds; ++t) {
        copies.members.push_back(draw.hypothesis);
        copies.alphas.push_back(1.0);
        copies.sources.push_back(draw.sources);
      }
      ens = std::move(copies);
      result.converged = true;
      return result;
    }
    if (!(alpha > 0.0)) {
      if (++rejected > config.weak.retries) throw WeakLearnerNotFound(draw.error_mass);
      continue;
    }
    ens.members.push_back(std::move(draw.hypothesis));
    ens.alphas.push_back(alpha);
    ens.sources.push_back(std::move(draw.sources));
    p = medboost_reweight(p, w, alpha);

    if (config.early_stop || ens.size() >= config.rounds) {
      result.converged = within(max_deviation(ens, cover), target);
      if (result.converged) break;
    }
  }
  result.converged = within(max_deviation(ens, cover), target);
  return result;
}

}  // namespace robustreg
