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

// Command-line front end: instance generation, dimension and cover
// calculators, the learners, bound calculators and experiment sweeps.

#include <cmath>
#include <cstdint>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "robustreg/compression.h"
#include "robustreg/core.h"
#include "robustreg/dimensions.h"
#include "robustreg/error.h"
#include "robustreg/harness.h"
#include "robustreg/io.h"
#include "robustreg/pipelines.h"

namespace {

using namespace robustreg;

constexpr int kOk = 0;
constexpr int kInvalid = 1;
constexpr int kRuntime = 2;

struct Globals {
  std::uint64_t seed = 0;
  std::string config;
  std::string out;
  std::string class_csv;
};

void emit(const Globals& g, const std::string& text) {
  if (g.out.empty()) {
    std::cout << text;
    if (!text.empty() && text.back() != '\n') std::cout << '\n';
  } else {
    write_file(g.out, text.back() == '\n' ? text : text + '\n');
  }
}

DomainDocument load_domain(const Globals& g) {
  if (g.config.empty()) throw InvalidParameter("--config is required");
  DomainDocument doc = parse_domain_json(read_file(g.config));
  if (!g.class_csv.empty()) {
    FiniteClass cls = parse_class_csv(read_file(g.class_csv));
    if (cls.domain_size() != doc.domain_size) {
      throw InvalidParameter("class CSV has " + std::to_string(cls.domain_size()) +
                             " columns, domain_size is " + std::to_string(doc.domain_size));
    }
    doc.finite_class.emplace(std::move(cls));
    doc.class_kind = "finite";
  }
  return doc;
}

PoolConfig load_pool(const std::string& path) {
  return path.empty() ? PoolConfig{} : parse_pool_config(read_file(path));
}

void require_positive(double v, const std::string& field) {
  if (!(v > 0.0)) throw InvalidParameter(field + " must be positive");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Robust real-valued learning toolkit"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--seed", g.seed, "Seed for every randomized step");
  app.add_option("--config", g.config, "JSON input (domain document or experiment config)");
  app.add_option("--out", g.out, "Write output here instead of stdout");
  app.add_option("--class", g.class_csv, "Finite class as CSV, replacing the document's class");

  // gen
  auto* gen = app.add_subcommand("gen", "Generate a synthetic instance as a domain document");

  // fatdim
  auto* fatdim = app.add_subcommand("fatdim", "Fat-shattering dimension of the class and its dual");
  std::vector<double> gammas;
  fatdim->add_option("--gamma", gammas, "Scales (default 0.05, 0.1, ..., 0.5)");

  // cover
  auto* cover = app.add_subcommand("cover", "Greedy d_inf cover of the sample's dual embedding");
  double cover_t = 0.05;
  cover->add_option("--t", cover_t, "Cover radius");

  double eta = 0.25;
  double epsilon = 0.1;
  double delta = 0.05;
  double p = 1.0;
  std::string pool_path;

  auto* proper = app.add_subcommand("learn-proper", "Proper learner (multiplicative weights)");
  auto* improper = app.add_subcommand("learn-improper", "Improper learner (median boosting)");
  auto* agn = app.add_subcommand("agnostic-eta", "Agnostic eta-ball learner");
  auto* regress = app.add_subcommand("regress", "Realizable l_p regression");
  auto* agreg = app.add_subcommand("agnostic-regress", "Agnostic l_p regression with holdout selection");
  for (auto* sub : {proper, improper, agn}) sub->add_option("--eta", eta, "Robustness scale");
  for (auto* sub : {proper, improper, regress, agreg}) sub->add_option("--epsilon", epsilon, "Accuracy");
  for (auto* sub : {regress, agreg}) sub->add_option("--p", p, "Loss exponent");
  agreg->add_option("--delta", delta, "Confidence");
  for (auto* sub : {proper, improper, agn, regress, agreg}) {
    sub->add_option("--pool", pool_path, "Pool/boosting constants (JSON)");
  }

  // bounds
  auto* bounds = app.add_subcommand("bounds", "Generalization-bound and sample-size calculators");
  std::string kind = "realizable";
  std::string setting;
  std::size_t k = 1;
  std::size_t m = 100;
  double empirical = 0.0;
  double c = 1.0;
  int fat = 1;
  int fat_star = 1;
  bool logs = false;
  bounds->add_option("--kind", kind, "realizable | agnostic | bernstein");
  bounds->add_option("--k", k, "Compression size");
  bounds->add_option("--m", m, "Sample size");
  bounds->add_option("--delta", delta, "Confidence");
  bounds->add_option("--empirical", empirical, "Empirical error (bernstein)");
  bounds->add_option("--c", c, "Leading constant");
  bounds->add_option("--setting", setting,
                     "Sample size for proper | improper | agnostic-eta | realizable-lp | agnostic-lp");
  bounds->add_option("--fat", fat, "fat(H, scale)");
  bounds->add_option("--fat-star", fat_star, "fat*(H, scale)");
  bounds->add_option("--epsilon", epsilon, "Accuracy");
  bounds->add_flag("--logs", logs, "Include the squared log factor");

  auto* experiment = app.add_subcommand("experiment", "Run a sweep and write CSV rows");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInvalid;
  }

  try {
    if (gen->parsed()) {
      const InstanceSpec spec =
          g.config.empty() ? InstanceSpec{} : parse_instance_spec(read_file(g.config));
      emit(g, to_json(to_document(gen_instance(spec, g.seed))));
    } else if (fatdim->parsed()) {
      const DomainDocument doc = load_domain(g);
      if (!doc.finite_class) throw InvalidParameter("class_matrix is required for fatdim");
      if (gammas.empty()) {
        for (int i = 1; i <= 10; ++i) gammas.push_back(i / 20.0);
      }
      for (double gamma : gammas) require_positive(gamma, "gamma");
      // Same limits the learners use.
      const FatCaps caps{64, 512};
      std::ostringstream os;
      os << "gamma,fat,dual_fat\n";
      for (double gamma : gammas) {
        os << format_double(gamma) << ',' << fat_shattering(*doc.finite_class, gamma, caps) << ','
           << dual_fat_shattering(*doc.finite_class, gamma, caps) << '\n';
      }
      emit(g, os.str());
    } else if (cover->parsed()) {
      require_positive(cover_t, "t");
      const DomainDocument doc = load_domain(g);
      if (!doc.finite_class) throw InvalidParameter("class_matrix is required for cover");
      if (doc.sample.empty()) throw InvalidParameter("samples must be nonempty for cover");
      const auto inflated = inflate(doc.sample, doc.perturbations);
      std::vector<Hypothesis> members;
      for (std::size_t r = 0; r < doc.finite_class->size(); ++r) {
        members.push_back(doc.finite_class->hypothesis(r));
      }
      const Matrix dual = dual_embed(members, inflated);
      const Cover cv = greedy_cover(dual, cover_t);
      nlohmann::ordered_json j;
      j["t"] = cover_t;
      j["points"] = inflated.size();
      j["size"] = cv.centers.size();
      j["verified"] = verify_cover(dual, cv, cover_t);
      j["centers"] = cv.centers;
      j["assignment"] = cv.assignment;
      emit(g, j.dump());
    } else if (bounds->parsed()) {
      std::ostringstream os;
      if (!setting.empty()) {
        const Setting t = parse_setting(setting);
        os << "setting,fat,fat_star,epsilon,delta,c,logs,sample_size\n"
           << to_string(t) << ',' << fat << ',' << fat_star << ',' << format_double(epsilon)
           << ',' << format_double(delta) << ',' << format_double(c) << ',' << (logs ? 1 : 0)
           << ',' << format_double(sample_complexity(t, fat, fat_star, epsilon, delta, c, logs))
           << '\n';
      } else {
        const BoundKind b = parse_bound_kind(kind);
        os << "kind,k,m,delta,empirical,c,bound\n"
           << kind << ',' << k << ',' << m << ',' << format_double(delta) << ','
           << format_double(empirical) << ',' << format_double(c) << ','
           << format_double(generalization_bound(b, k, m, delta, empirical, c)) << '\n';
      }
      emit(g, os.str());
    } else if (experiment->parsed()) {
      if (g.config.empty()) throw InvalidParameter("--config is required");
      ExperimentConfig cfg = parse_experiment_config(read_file(g.config));
      if (app.get_option("--seed")->count() > 0) cfg.seed = g.seed;
      const auto rows = run_experiment(cfg);
      emit(g, experiment_csv(rows));
    } else {
      const DomainDocument doc = load_domain(g);
      const auto rerm = make_erm(doc);
      const PoolConfig pool = load_pool(pool_path);
      PipelineReport r;
      if (proper->parsed()) {
        r = proper_learn(doc.sample, doc.perturbations, *rerm, eta, epsilon, pool, g.seed);
      } else if (improper->parsed()) {
        r = improper_learn(doc.sample, doc.perturbations, *rerm, eta, pool, g.seed, epsilon);
      } else if (agn->parsed()) {
        r = agnostic_eta_learn(doc.sample, doc.perturbations, *rerm, eta, pool, g.seed);
      } else if (regress->parsed()) {
        r = realizable_regression(doc.sample, doc.perturbations, *rerm, epsilon, p, pool, g.seed);
      } else {
        r = agnostic_regression(doc.sample, doc.holdout, doc.perturbations, *rerm, epsilon,
                                delta, p, pool, g.seed);
      }
      emit(g, r.to_json());
      if (!r.ok()) {
        std::cerr << "post-run checks failed\n";
        return kRuntime;
      }
    }
  } catch (const InvalidParameter& e) {
    std::cerr << "invalid input: " << e.what() << '\n';
    return kInvalid;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kRuntime;
  }
  return kOk;
}
