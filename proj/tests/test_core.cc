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

#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "robustreg/core.h"
#include "robustreg/error.h"

using namespace robustreg;

namespace {

Hypothesis table(std::vector<double> values) {
  return Hypothesis({"table", values}, [values](InstanceId x) { return values.at(x); });
}

}  // namespace

TEST_CASE("perturbation map rejects lists without the instance or with duplicates") {
  PerturbationMap u;
  CHECK_THROWS_AS(u.set(0, {1, 2}), InvalidParameter);
  CHECK_THROWS_AS(u.set(0, {0, 1, 1}), InvalidParameter);
  CHECK_THROWS_AS(u.set(0, {}), InvalidParameter);
  u.set(0, {1, 0});
  CHECK(u.contains(0));
  CHECK_FALSE(u.contains(1));
  CHECK_THROWS_AS(u.at(7), MissingPerturbation);
}

TEST_CASE("inflate with identity perturbation returns the sample") {
  const Sample s{{0, 0.3}};
  const auto out = inflate(s, PerturbationMap::identity(1));
  REQUIRE(out.size() == 1);
  CHECK(out[0] == InflatedExample{0, 0.3, 0});
}

TEST_CASE("inflate labels a shared point by its lowest origin") {
  PerturbationMap u;
  u.set(0, {0, 2});
  u.set(1, {1, 2});
  const Sample s{{0, 0.3}, {1, 0.7}};
  const auto out = inflate(s, u);
  REQUIRE(out.size() == 3);
  CHECK(out[0] == InflatedExample{0, 0.3, 0});
  CHECK(out[1] == InflatedExample{2, 0.3, 0});
  CHECK(out[2] == InflatedExample{1, 0.7, 1});
}

TEST_CASE("inflate suppresses a sample point already reached from an earlier origin") {
  PerturbationMap u;
  u.set(0, {0, 1});
  u.set(1, {1});
  const Sample s{{0, 0.2}, {1, 0.9}};
  const auto out = inflate(s, u);
  REQUIRE(out.size() == 2);
  CHECK(out[1] == InflatedExample{1, 0.2, 0});
}

TEST_CASE("inflate names the missing instance") {
  PerturbationMap u;
  u.set(0, {0});
  try {
    (void)inflate(Sample{{3, 0.1}}, u);
    FAIL("expected MissingPerturbation");
  } catch (const MissingPerturbation& e) {
    CHECK(std::string(e.what()).find('3') != std::string::npos);
  }
}

TEST_CASE("inflate origins are the minimum reaching index (rescan)") {
  PerturbationMap u;
  for (InstanceId x = 0; x < 12; ++x) {
    std::vector<InstanceId> n{x};
    if (x + 3 < 12) n.push_back(x + 3);
    if (x >= 2) n.push_back(x - 2);
    u.set(x, n);
  }
  const Sample s{{5, 0.1}, {2, 0.4}, {8, 0.6}, {5, 0.9}, {0, 0.2}};
  const auto out = inflate(s, u);
  for (const auto& e : out) {
    const auto reach = [&](std::size_t i) {
      auto n = u.at(s[i].x);
      return std::find(n.begin(), n.end(), e.z) != n.end();
    };
    CHECK(reach(e.origin));
    for (std::size_t j = 0; j < e.origin; ++j) CHECK_FALSE(reach(j));
    CHECK(e.y == s[e.origin].y);
  }
  for (std::size_t i = 1; i < out.size(); ++i) {
    CHECK((out[i - 1].origin < out[i].origin ||
           (out[i - 1].origin == out[i].origin && out[i - 1].z < out[i].z)));
  }
}

TEST_CASE("robust pairs keep every origin") {
  PerturbationMap u;
  u.set(0, {0, 2});
  u.set(1, {1, 2});
  const auto pairs = robust_pairs(Sample{{0, 0.3}, {1, 0.7}}, u);
  CHECK(pairs.size() == 4);
}

TEST_CASE("robust loss examples") {
  const auto half = constant_hypothesis(0.5);
  PerturbationMap u;
  u.set(0, {0, 1});
  u.set(1, {1});
  CHECK(robust_loss(half, {0, 0.5}, u, EtaBall{0.1}) == 0.0);

  const auto h = table({0.3, 0.9});
  CHECK(robust_loss(h, {0, 0.5}, u, EtaBall{0.3}) == 1.0);
  CHECK(robust_loss(h, {0, 0.5}, u, Lp{2.0}) == doctest::Approx(0.16).epsilon(1e-12));
  CHECK(robust_deviation(h, 0, 0.5, u) == doctest::Approx(0.4));
}

TEST_CASE("eta-ball loss counts deviation exactly eta") {
  const auto h = constant_hypothesis(0.75);
  CHECK(robust_loss(h, {0, 0.5}, PerturbationMap::identity(1), EtaBall{0.25}) == 1.0);
}

TEST_CASE("empirical error averages the losses") {
  const auto h = table({0.5, 0.5, 0.5});
  const auto id = PerturbationMap::identity(3);
  CHECK(empirical_error(h, Sample{{0, 0.5}}, id, EtaBall{0.1}) == 0.0);
  CHECK(empirical_error(h, Sample{{0, 0.9}, {1, 0.5}}, id, EtaBall{0.1}) == 0.5);
  CHECK(empirical_error(h, Sample{{0, 0.4}, {1, 0.7}, {2, 0.8}}, id, Lp{1.0}) ==
        doctest::Approx(0.2));
  CHECK_THROWS_AS(empirical_error(h, Sample{}, id, EtaBall{0.1}), EmptySample);
}

TEST_CASE("loss properties on a random table") {
  std::vector<double> v;
  for (int i = 0; i < 10; ++i) v.push_back(std::fmod(0.37 * i * i, 1.0));
  const auto h = table(v);
  PerturbationMap u;
  for (InstanceId x = 0; x < 10; ++x) {
    std::vector<InstanceId> n{x};
    if (x + 1 < 10) n.push_back(x + 1);
    u.set(x, n);
  }
  const auto id = PerturbationMap::identity(10);
  for (InstanceId x = 0; x < 10; ++x) {
    const LabeledExample ex{x, 0.45};
    double prev = 1.0;
    for (double eta = 0.05; eta <= 1.0; eta += 0.05) {
      const double l = robust_loss(h, ex, u, EtaBall{eta});
      CHECK(l <= prev);
      prev = l;
    }
    const double l1 = robust_loss(h, ex, u, Lp{1.0});
    CHECK(robust_loss(h, ex, u, Lp{3.0}) == doctest::Approx(std::pow(l1, 3.0)));
    CHECK(robust_loss(h, ex, id, Lp{1.0}) == doctest::Approx(std::abs(v[x] - 0.45)));
  }
}

TEST_CASE("loss parameters are validated") {
  CHECK_THROWS_AS(validate(EtaBall{0.0}), InvalidParameter);
  CHECK_THROWS_AS(validate(Lp{0.5}), InvalidParameter);
  CHECK_NOTHROW(validate(EtaBall{1.0}));
}
