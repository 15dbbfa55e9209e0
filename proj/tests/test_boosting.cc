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

#include <cmath>
#include <limits>
#include <random>

#include "doctest.h"
#include "robustreg/boosting.h"
#include "robustreg/ensemble.h"
#include "robustreg/error.h"
#include "robustreg/harness.h"
#include "support/oracles.h"

using namespace robustreg;

TEST_CASE("weighted median examples") {
  CHECK(weighted_median(std::vector<double>{0.1, 0.5, 0.9}, std::vector<double>{1, 1, 1}) == 0.5);
  CHECK(weighted_median(std::vector<double>{0.1, 0.9}, std::vector<double>{3, 1}) == 0.1);
  CHECK(weighted_median(std::vector<double>{0.7}, std::vector<double>{0.2}) == 0.7);
  CHECK(weighted_median(std::vector<double>{0.1, 0.9}, std::vector<double>{1, 1}) == 0.1);
  CHECK_THROWS_AS(weighted_median(std::vector<double>{0.1, 0.9}, std::vector<double>{0, 0}),
                  DegenerateWeights);
  CHECK_THROWS_AS(weighted_median(std::vector<double>{}, std::vector<double>{}), InvalidParameter);
}

TEST_CASE("weighted median matches the oracle and is translation invariant") {
  std::mt19937_64 gen(21);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  std::uniform_int_distribution<int> small(0, 4);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 1 + trial % 9;
    std::vector<double> v(n), w(n);
    for (std::size_t i = 0; i < n; ++i) {
      v[i] = std::round(u01(gen) * 20) / 20;
      w[i] = trial % 2 ? small(gen) + 1 : u01(gen) + 0.01;
    }
    CHECK(weighted_median(v, w) == oracle::brute_lower_weighted_median(v, w));
    const double y = std::round(u01(gen) * 8) / 16;
    std::vector<double> shifted(n);
    for (std::size_t i = 0; i < n; ++i) shifted[i] = v[i] - y;
    CHECK(weighted_median(shifted, w) == doctest::Approx(weighted_median(v, w) - y));
  }
}

TEST_CASE("medboost alpha examples") {
  const auto p4 = PointDistribution::uniform(4);
  CHECK(std::isinf(medboost_alpha(p4, std::vector<int>{1, 1, 1, 1})));
  CHECK(medboost_alpha(p4, std::vector<int>{1, 1, 1, -1}) ==
        doctest::Approx(0.5 * std::log((5.0 / 6 * 0.75) / (7.0 / 6 * 0.25))));
  CHECK(medboost_alpha(p4, std::vector<int>{1, 1, 1, -1}) == doctest::Approx(0.3811).epsilon(1e-4));
  CHECK(medboost_alpha(p4, std::vector<int>{1, -1, 1, -1}) == doctest::Approx(-0.1682).epsilon(1e-3));
  CHECK_THROWS_AS(medboost_alpha(p4, std::vector<int>{1, 1}), InvalidParameter);
}

TEST_CASE("reweighting normalizes and moves mass to violated points") {
  std::mt19937_64 gen(8);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 2 + trial % 20;
    std::vector<double> raw(n);
    double total = 0.0;
    for (auto& r : raw) total += (r = u01(gen) + 0.01);
    for (auto& r : raw) r /= total;
    const PointDistribution p(raw);
    std::vector<int> w(n, 1);
    w[trial % n] = -1;
    if (n > 3) w[(trial + 1) % n] = -1;
    const double alpha = medboost_alpha(p, w);
    if (!(alpha > 0.0) || std::isinf(alpha)) continue;
    const PointDistribution q = medboost_reweight(p, w, alpha);
    double sum = 0.0, before = 0.0, after = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      sum += q[i];
      if (w[i] == -1) before += p[i], after += q[i];
    }
    CHECK(std::abs(sum - 1.0) < 1e-9);
    CHECK(after > before);
  }
}

namespace {

struct Fixture {
  FiniteClass cls;
  PerturbationMap u;
  Sample sample;
  std::vector<InflatedExample> cover;
};

// Target row 0 on an 8-point grid with ball radius 1.
Fixture realizable_fixture(std::uint64_t seed) {
  InstanceSpec spec;
  spec.domain_size = 16;
  spec.class_size = 10;
  spec.m = 8;
  spec.holdout = 1;
  spec.target = 0;
  GeneratedInstance g = gen_instance(spec, seed);
  Fixture f{g.cls, g.perturbations, g.sample, {}};
  f.cover = inflate(f.sample, f.u);
  return f;
}

}  // namespace

TEST_CASE("weak learner on realizable data passes on the first try") {
  const Fixture f = realizable_fixture(1);
  Matrix m(1, 16, 0.0);
  for (InstanceId x = 0; x < 16; ++x) m(0, x) = f.cls(0, x);
  const FiniteClassErm erm{FiniteClass(m)};
  Rng rng(3);
  WeakLearnerConfig cfg;
  const auto draw = find_weak_learner(PointDistribution::uniform(f.cover.size()), f.cover,
                                      f.sample, f.u, 0.25, erm, cfg, rng);
  CHECK(draw.attempts == 1);
  CHECK(draw.error_mass == 0.0);
  CHECK(draw.sources.size() == 1);
}

TEST_CASE("weak learner with d covering every origin succeeds") {
  // Three points; the lowest row fitting all three is the target.
  Matrix m(3, 3, 0.0);
  const double rowsv[3][3] = {{0.5, 0.5, 0.9}, {0.9, 0.5, 0.5}, {0.5, 0.5, 0.5}};
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 3; ++c) m(r, c) = rowsv[r][c];
  }
  const FiniteClassErm erm{FiniteClass(m)};
  const auto id = PerturbationMap::identity(3);
  const Sample s{{0, 0.5}, {1, 0.5}, {2, 0.5}};
  const auto cover = inflate(s, id);
  WeakLearnerConfig cfg;
  cfg.subset_size = 40;
  Rng rng(1);
  const auto draw = find_weak_learner(PointDistribution::uniform(3), cover, s, id, 0.4, erm, cfg, rng);
  CHECK(draw.sources == std::vector<std::size_t>{0, 1, 2});
  CHECK(draw.hypothesis.descriptor().params[0] == 2.0);
}

TEST_CASE("weak learner not found when every member errs on too much mass") {
  Matrix m(2, 3, 0.0);
  const double rowsv[2][3] = {{0.5, 0.9, 0.9}, {0.9, 0.9, 0.5}};
  for (int r = 0; r < 2; ++r) {
    for (int c = 0; c < 3; ++c) m(r, c) = rowsv[r][c];
  }
  const FiniteClassErm erm{FiniteClass(m)};
  const auto id = PerturbationMap::identity(3);
  const Sample s{{0, 0.5}, {1, 0.5}, {2, 0.5}};
  const auto cover = inflate(s, id);
  WeakLearnerConfig cfg;
  cfg.retries = 1;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    Rng rng(seed);
    try {
      (void)find_weak_learner(PointDistribution::uniform(3), cover, s, id, 0.4, erm, cfg, rng);
      FAIL("expected WeakLearnerNotFound");
    } catch (const WeakLearnerNotFound& e) {
      CHECK(e.best_mass() > 1.0 / 3.0);
    }
  }
}

TEST_CASE("medboost with a perfect first learner returns T copies") {
  const Fixture f = realizable_fixture(2);
  Matrix m(1, 16, 0.0);
  for (InstanceId x = 0; x < 16; ++x) m(0, x) = f.cls(0, x);
  const FiniteClassErm erm{FiniteClass(m)};
  MedBoostConfig cfg;
  cfg.rounds = 7;
  const auto res = medboost(f.cover, f.sample, f.u, 0.25, erm, cfg, 4);
  REQUIRE(res.ensemble.size() == 7);
  for (double a : res.ensemble.alphas) CHECK(a == 1.0);
  CHECK(res.converged);
  for (InstanceId x = 0; x < 16; ++x) CHECK(res.ensemble(x) == f.cls(0, x));
}

TEST_CASE("medboost reaches the cover condition on realizable instances") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Fixture f = realizable_fixture(100 + seed);
    const FiniteClassErm erm(f.cls);
    MedBoostConfig cfg;
    cfg.rounds = static_cast<std::size_t>(std::ceil(4 * std::log(8.0)));
    cfg.early_stop = false;
    cfg.weak.subset_size = 3;
    const auto res = medboost(f.cover, f.sample, f.u, 0.25, erm, cfg, seed);
    CHECK(res.ensemble.size() >= cfg.rounds);
    CHECK(max_deviation(res.ensemble, f.cover) <= 0.25 / 4 + 1e-12);
    CHECK(res.converged);
    for (const auto& src : res.ensemble.sources) CHECK(src.size() <= 3);
  }
}

TEST_CASE("medboost is deterministic under its seed") {
  const Fixture f = realizable_fixture(7);
  const FiniteClassErm erm(f.cls);
  MedBoostConfig cfg;
  cfg.rounds = 9;
  cfg.early_stop = false;
  const auto a = medboost(f.cover, f.sample, f.u, 0.25, erm, cfg, 11);
  const auto b = medboost(f.cover, f.sample, f.u, 0.25, erm, cfg, 11);
  CHECK(a.ensemble.alphas == b.ensemble.alphas);
  CHECK(a.ensemble.sources == b.ensemble.sources);
}

TEST_CASE("medboost validates its inputs") {
  const Fixture f = realizable_fixture(3);
  const FiniteClassErm erm(f.cls);
  MedBoostConfig cfg;
  cfg.rounds = 0;
  CHECK_THROWS_AS(medboost(f.cover, f.sample, f.u, 0.25, erm, cfg, 0), InvalidParameter);
  cfg.rounds = 3;
  CHECK_THROWS_AS(medboost({}, f.sample, f.u, 0.25, erm, cfg, 0), InvalidParameter);
}

TEST_CASE("ensemble invariants") {
  WeightedEnsemble e;
  CHECK_THROWS_AS(e.validate(), InvalidParameter);
  e.members = {constant_hypothesis(0.2), constant_hypothesis(0.6)};
  e.alphas = {0.0, 0.0};
  e.sources = {{0}, {1}};
  CHECK_THROWS_AS(e.validate(), InvalidParameter);
  e.alphas = {1.0, 2.0};
  CHECK_NOTHROW(e.validate());
  CHECK(e(0) == 0.6);
  e.aggregation = Aggregation::average;
  CHECK(e(0) == doctest::Approx(0.4));
  const auto folded = fold_average(e);
  REQUIRE(folded.has_value());
  CHECK((*folded)(3) == e(3));
}
