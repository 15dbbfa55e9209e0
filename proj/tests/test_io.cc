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
#include <cstdlib>

#include "doctest.h"
#include "robustreg/error.h"
#include "robustreg/harness.h"
#include "robustreg/io.h"

using namespace robustreg;

TEST_CASE("constant target gives constant labels") {
  InstanceSpec spec;
  spec.kind = ClassKind::constants;
  spec.class_size = 3;
  spec.target = 1;
  spec.m = 20;
  spec.holdout = 10;
  const auto g = gen_instance(spec, 4);
  CHECK(g.target == 1);
  for (const auto& ex : g.sample) CHECK(ex.y == doctest::Approx(0.5));
  CHECK(g.sample.size() == 20);
  CHECK(g.holdout.size() == 10);
}

TEST_CASE("grid ball perturbations and feasibility") {
  InstanceSpec spec;
  spec.radius = 1;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto g = gen_instance(spec, seed);
    for (InstanceId x = 0; x < spec.domain_size; ++x) {
      const auto& ux = g.perturbations.at(x);
      CHECK(ux.size() <= 3);
      CHECK(std::find(ux.begin(), ux.end(), x) != ux.end());
    }
    for (const auto& ex : g.sample)
      for (InstanceId z : g.perturbations.at(ex.x)) CHECK(std::abs(g.cls(g.target, z) - ex.y) <= 1e-12);
  }
}

TEST_CASE("generation is deterministic") {
  InstanceSpec spec;
  spec.kind = ClassKind::random;
  spec.perturbation = PerturbationKind::random_neighbors;
  spec.radius = 2;
  spec.fit_tolerance = 1.0;
  const auto a = to_json(to_document(gen_instance(spec, 7)));
  CHECK(a == to_json(to_document(gen_instance(spec, 7))));
  CHECK(a != to_json(to_document(gen_instance(spec, 8))));
}

TEST_CASE("experiment rows") {
  ExperimentConfig c;
  c.instance.m = 12;
  c.instance.holdout = 20;
  c.pool.subset_size = 2;
  c.pool.mode = PoolMode::sample;
  c.pool.samples = 16;
  c.m_grid = {12};
  c.trials = 1;
  auto rows = run_experiment(c);
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].status == "ok");
  c.m_grid = {8, 12};
  c.trials = 2;
  rows = run_experiment(c);
  CHECK(rows.size() == 4);
  CHECK(rows[0].m == 8);
  CHECK(rows[3].trial == 1);
  CHECK(experiment_csv(rows) == experiment_csv(run_experiment(c)));
  CHECK(experiment_csv(rows).rfind(experiment_csv_header(), 0) == 0);
}

TEST_CASE("config parsing") {
  const auto c = parse_experiment_config(
      R"({"pipeline": "proper", "eta": 0.2, "m_grid": [10, 20], "trials": 3,
          "instance": {"kind": "random", "perturbation": "identity"},
          "pool": {"mode": "enumerate", "subset_size": 2}})");
  CHECK(c.pipeline == "proper");
  CHECK(c.eta == 0.2);
  CHECK(c.m_grid == std::vector<std::size_t>{10, 20});
  CHECK(c.instance.kind == ClassKind::random);
  CHECK(c.pool.mode == PoolMode::enumerate);

  auto message = [](const std::string& json) {
    try {
      parse_experiment_config(json);
    } catch (const InvalidParameter& e) {
      return std::string(e.what());
    }
    return std::string();
  };
  CHECK(message(R"({"eta": 0})").find("eta") != std::string::npos);
  CHECK(message(R"({"pool": {"xi": -1}})").find("pool.xi") != std::string::npos);
  CHECK(message(R"({"colour": 1})").find("colour") != std::string::npos);
  CHECK(message(R"({"pipeline": "magic"})").find("pipeline") != std::string::npos);
  CHECK(message("[1,") != "");
}

TEST_CASE("domain JSON") {
  const auto doc = parse_domain_json(
      R"({"domain_size": 3, "samples": [[0, 0.5], [2, 0.25]],
          "perturbations": {"0": [0, 1]},
          "class_matrix": [[0.5, 0.5, 0.25], [0, 0, 0]]})");
  CHECK(doc.domain_size == 3);
  CHECK(doc.sample.size() == 2);
  CHECK(doc.perturbations.at(0).size() == 2);
  CHECK_THROWS_AS(doc.perturbations.at(2), MissingPerturbation);
  REQUIRE(doc.finite_class.has_value());
  CHECK(doc.finite_class->size() == 2);
  CHECK(make_erm(doc)->name() == "finite");
  const auto back = parse_domain_json(to_json(doc));
  CHECK(to_json(back) == to_json(doc));
  CHECK_THROWS_AS(parse_domain_json(R"({"samples": []})"), InvalidParameter);
  CHECK_THROWS_AS(parse_domain_json(R"({"domain_size": 2, "samples": [[5, 0.1]]})"), InvalidParameter);
}

TEST_CASE("class CSV") {
  const auto cls = parse_class_csv("label,0,1,2\nlow,0,0,0.5\nhigh,1,1,0.5\n");
  CHECK(cls.size() == 2);
  CHECK(cls.domain_size() == 3);
  CHECK(cls.labels()[1] == "high");
  CHECK(cls(1, 2) == 0.5);
  const auto bare = parse_class_csv("0,1\n0.25,0.75\n");
  CHECK(bare.labels()[0] == "h0");
  CHECK_THROWS_AS(parse_class_csv("0,1\n0.2,1.5\n"), InvalidParameter);
  CHECK_THROWS_AS(parse_class_csv("0,1\n0.2\n"), InvalidParameter);
}

TEST_CASE("number formatting") {
  CHECK(format_double(0.25) == "0.25");
  CHECK(format_double(0.1) == "0.1");
  CHECK(std::strtod(format_double(1.0 / 3).c_str(), nullptr) == 1.0 / 3);
  CHECK(format_double(std::nan("")) == "nan");
  CHECK_THROWS_AS(read_file("/nonexistent/robustreg"), InvalidParameter);
}
