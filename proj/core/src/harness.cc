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

#include "robustreg/harness.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <set>
#include <sstream>

#include "json.hpp"
#include "robustreg/error.h"
#include "robustreg/rng.h"

namespace robustreg {
namespace {

using json = nlohmann::json;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

Matrix class_matrix(const InstanceSpec& spec, Rng& rng) {
  const std::size_t n = spec.domain_size;
  const std::size_t k = spec.class_size;
  Matrix m(k, n, 0.0);
  switch (spec.kind) {
    case ClassKind::constants:
      for (std::size_t r = 0; r < k; ++r) {
        const double level = k == 1 ? 0.5 : static_cast<double>(r) / static_cast<double>(k - 1);
        for (std::size_t c = 0; c < n; ++c) m(r, c) = level;
      }
      break;
    case ClassKind::thresholds: {
      // Row 2j rises at the j-th cut, row 2j+1 falls there.
      const std::size_t cuts = (k + 1) / 2;
      for (std::size_t r = 0; r < k; ++r) {
        const std::size_t j = r / 2;
        const std::size_t cut = (j + 1) * n / (cuts + 1);
        const bool rising = r % 2 == 0;
        for (std::size_t c = 0; c < n; ++c) {
          const bool high = (c >= cut) == rising;
          m(r, c) = high ? 0.8 : 0.2;
        }
      }
      break;
    }
    case ClassKind::random:
      for (std::size_t r = 0; r < k; ++r) {
        for (std::size_t c = 0; c < n; ++c) m(r, c) = rng.uniform();
      }
      break;
  }
  return m;
}

PerturbationMap perturbations_for(const InstanceSpec& spec, Rng& rng) {
  const std::size_t n = spec.domain_size;
  switch (spec.perturbation) {
    case PerturbationKind::identity:
      return PerturbationMap::identity(n);
    case PerturbationKind::grid_ball: {
      PerturbationMap u;
      for (std::size_t x = 0; x < n; ++x) {
        const std::size_t lo = x >= spec.radius ? x - spec.radius : 0;
        const std::size_t hi = std::min(n - 1, x + spec.radius);
        std::vector<InstanceId> nbrs;
        for (std::size_t z = lo; z <= hi; ++z) nbrs.push_back(static_cast<InstanceId>(z));
        u.set(static_cast<InstanceId>(x), std::move(nbrs));
      }
      return u;
    }
    case PerturbationKind::random_neighbors: {
      if (spec.radius >= n) {
        throw InvalidParameter("instance.radius must be below domain_size for random neighbors");
      }
      PerturbationMap u;
      for (std::size_t x = 0; x < n; ++x) {
        std::set<InstanceId> s{static_cast<InstanceId>(x)};
        while (s.size() < spec.radius + 1) s.insert(static_cast<InstanceId>(rng.index(n)));
        u.set(static_cast<InstanceId>(x), {s.begin(), s.end()});
      }
      return u;
    }
  }
  return PerturbationMap::identity(n);
}

Sample draw_points(const FiniteClass& cls, std::size_t target, const PerturbationMap& u,
                   const InstanceSpec& spec, std::size_t count, Rng& rng) {
  Sample out;
  out.reserve(count);
  const std::size_t budget = std::max<std::size_t>(1, count * spec.rejection_factor);
  std::size_t draws = 0;
  while (out.size() < count) {
    if (draws++ >= budget) {
      throw UnrealizableSpec("rejection budget exhausted after " + std::to_string(budget) +
                             " draws");
    }
    const auto x = static_cast<InstanceId>(rng.index(spec.domain_size));
    const double fx = cls(target, x);
    double worst = 0.0;
    for (InstanceId z : u.at(x)) worst = std::max(worst, std::abs(cls(target, z) - fx));
    if (!within(worst, spec.fit_tolerance)) continue;
    double y = fx;
    if (spec.noise > 0.0 && rng.uniform() < spec.noise) y = rng.uniform();
    out.push_back({x, y});
  }
  return out;
}

void validate_spec(const InstanceSpec& s) {
  if (s.domain_size < 1) throw InvalidParameter("instance.domain_size must be at least 1");
  if (s.class_size < 1) throw InvalidParameter("instance.class_size must be at least 1");
  if (s.m < 1) throw InvalidParameter("instance.m must be at least 1");
  if (!(s.noise >= 0.0 && s.noise <= 1.0)) throw InvalidParameter("instance.noise must lie in [0, 1]");
  if (!(s.fit_tolerance >= 0.0)) throw InvalidParameter("instance.fit_tolerance must be nonnegative");
  if (s.target && *s.target >= s.class_size) {
    throw InvalidParameter("instance.target must be a row below class_size");
  }
}

std::string csv_real(double v) { return std::isfinite(v) ? format_double(v) : ""; }

std::string csv_safe(std::string s) {
  std::replace(s.begin(), s.end(), ',', ';');
  std::replace(s.begin(), s.end(), '\n', ' ');
  return s;
}

// Typed field access that names the offending field.
template <typename T>
void read_field(const json& j, const char* key, T& out, const std::string& prefix) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const json::exception&) {
    throw InvalidParameter(prefix + key + " has the wrong type");
  }
}

void reject_unknown(const json& j, const std::set<std::string>& known, const std::string& prefix) {
  for (const auto& [k, v] : j.items()) {
    if (!known.contains(k)) throw InvalidParameter("unknown field " + prefix + k);
  }
}

json parse_object(const std::string& text, const std::string& what) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw InvalidParameter("malformed " + what + " JSON: " + e.what());
  }
  if (!j.is_object()) throw InvalidParameter(what + " must be a JSON object");
  return j;
}

InstanceSpec instance_from(const json& j) {
  static const std::set<std::string> known{"kind", "domain_size", "class_size", "perturbation",
                                           "radius", "target", "fit_tolerance", "noise", "m",
                                           "holdout", "rejection_factor"};
  reject_unknown(j, known, "instance.");
  InstanceSpec s;
  const std::string p = "instance.";
  if (j.contains("kind")) {
    std::string kind;
    read_field(j, "kind", kind, p);
    if (kind == "constants") {
      s.kind = ClassKind::constants;
    } else if (kind == "thresholds") {
      s.kind = ClassKind::thresholds;
    } else if (kind == "random") {
      s.kind = ClassKind::random;
    } else {
      throw InvalidParameter("instance.kind must be constants, thresholds or random");
    }
  }
  if (j.contains("perturbation")) {
    std::string kind;
    read_field(j, "perturbation", kind, p);
    if (kind == "identity") {
      s.perturbation = PerturbationKind::identity;
    } else if (kind == "grid_ball") {
      s.perturbation = PerturbationKind::grid_ball;
    } else if (kind == "random_neighbors") {
      s.perturbation = PerturbationKind::random_neighbors;
    } else {
      throw InvalidParameter("instance.perturbation must be identity, grid_ball or random_neighbors");
    }
  }
  read_field(j, "domain_size", s.domain_size, p);
  read_field(j, "class_size", s.class_size, p);
  read_field(j, "radius", s.radius, p);
  if (j.contains("target") && !j["target"].is_null()) {
    std::size_t t = 0;
    read_field(j, "target", t, p);
    s.target = t;
  }
  read_field(j, "fit_tolerance", s.fit_tolerance, p);
  read_field(j, "noise", s.noise, p);
  read_field(j, "m", s.m, p);
  read_field(j, "holdout", s.holdout, p);
  read_field(j, "rejection_factor", s.rejection_factor, p);
  validate_spec(s);
  return s;
}

PoolConfig pool_from(const json& j) {
  static const std::set<std::string> known{
      "subset_size", "mode", "samples", "enumerate_cap", "c_d", "c_T", "c_k",
      "fat_scale", "dual_scale", "retries", "round_cap_factor", "sparsify_iters",
      "cover_refinements", "xi", "delta", "bound_c", "p"};
  reject_unknown(j, known, "pool.");
  PoolConfig c;
  const std::string p = "pool.";
  if (j.contains("mode")) {
    std::string mode;
    read_field(j, "mode", mode, p);
    if (mode == "enumerate") {
      c.mode = PoolMode::enumerate;
    } else if (mode == "sample") {
      c.mode = PoolMode::sample;
    } else if (mode == "automatic") {
      c.mode = PoolMode::automatic;
    } else {
      throw InvalidParameter("pool.mode must be enumerate, sample or automatic");
    }
  }
  read_field(j, "subset_size", c.subset_size, p);
  read_field(j, "samples", c.samples, p);
  read_field(j, "enumerate_cap", c.enumerate_cap, p);
  read_field(j, "c_d", c.c_d, p);
  read_field(j, "c_T", c.c_T, p);
  read_field(j, "c_k", c.c_k, p);
  read_field(j, "fat_scale", c.fat_scale, p);
  read_field(j, "dual_scale", c.dual_scale, p);
  read_field(j, "retries", c.retries, p);
  read_field(j, "round_cap_factor", c.round_cap_factor, p);
  read_field(j, "sparsify_iters", c.sparsify_iters, p);
  read_field(j, "cover_refinements", c.cover_refinements, p);
  read_field(j, "xi", c.xi, p);
  read_field(j, "delta", c.delta, p);
  read_field(j, "bound_c", c.bound_c, p);
  read_field(j, "p", c.p, p);
  if (c.mode == PoolMode::sample && c.samples < 1) throw InvalidParameter("pool.samples must be at least 1");
  if (!(c.c_d > 0.0)) throw InvalidParameter("pool.c_d must be positive");
  if (!(c.c_T > 0.0)) throw InvalidParameter("pool.c_T must be positive");
  if (!(c.c_k > 0.0)) throw InvalidParameter("pool.c_k must be positive");
  if (!(c.fat_scale >= 0.0)) throw InvalidParameter("pool.fat_scale must be nonnegative");
  if (!(c.dual_scale > 0.0)) throw InvalidParameter("pool.dual_scale must be positive");
  if (c.retries < 1) throw InvalidParameter("pool.retries must be at least 1");
  if (!(c.xi > 0.0)) throw InvalidParameter("pool.xi must be positive");
  if (!(c.delta > 0.0 && c.delta < 1.0)) throw InvalidParameter("pool.delta must lie in (0, 1)");
  if (!(c.bound_c > 0.0)) throw InvalidParameter("pool.bound_c must be positive");
  if (!(c.p >= 1.0)) throw InvalidParameter("pool.p must be at least 1");
  return c;
}

}  // namespace

GeneratedInstance gen_instance(const InstanceSpec& spec, std::uint64_t seed) {
  validate_spec(spec);
  Rng class_rng(derive_seed(seed, "class"));
  Rng pert_rng(derive_seed(seed, "perturbations"));
  Rng pick_rng(derive_seed(seed, "target"));
  Rng sample_rng(derive_seed(seed, "sample"));
  Rng holdout_rng(derive_seed(seed, "holdout"));

  FiniteClass cls(class_matrix(spec, class_rng));
  PerturbationMap u = perturbations_for(spec, pert_rng);
  const std::size_t target = spec.target ? *spec.target : pick_rng.index(spec.class_size);
  Sample sample = draw_points(cls, target, u, spec, spec.m, sample_rng);
  Sample holdout = draw_points(cls, target, u, spec, spec.holdout, holdout_rng);
  return {std::move(cls), std::move(u), std::move(sample), std::move(holdout), target};
}

DomainDocument to_document(const GeneratedInstance& instance) {
  DomainDocument doc;
  doc.domain_size = instance.cls.domain_size();
  doc.sample = instance.sample;
  doc.holdout = instance.holdout;
  doc.perturbations = instance.perturbations;
  doc.finite_class = instance.cls;
  doc.class_kind = "finite";
  return doc;
}

PipelineReport run_pipeline(const std::string& pipeline, const GeneratedInstance& instance,
                            const RobustErm& rerm, const ExperimentConfig& config,
                            std::uint64_t seed) {
  const auto& s = instance.sample;
  const auto& u = instance.perturbations;
  if (pipeline == "proper") {
    return proper_learn(s, u, rerm, config.eta, config.epsilon, config.pool, seed);
  }
  if (pipeline == "improper") {
    return improper_learn(s, u, rerm, config.eta, config.pool, seed, config.epsilon);
  }
  if (pipeline == "agnostic-eta") return agnostic_eta_learn(s, u, rerm, config.eta, config.pool, seed);
  if (pipeline == "regress") {
    return realizable_regression(s, u, rerm, config.epsilon, config.p, config.pool, seed);
  }
  if (pipeline == "agnostic-regress") {
    return agnostic_regression(s, instance.holdout, u, rerm, config.epsilon, config.delta,
                               config.p, config.pool, seed);
  }
  throw InvalidParameter("pipeline must be proper, improper, agnostic-eta, regress or agnostic-regress");
}

std::vector<ExperimentRow> run_experiment(const ExperimentConfig& config) {
  if (config.m_grid.empty()) throw InvalidParameter("m_grid must be nonempty");
  if (config.trials < 1) throw InvalidParameter("trials must be at least 1");
  std::vector<ExperimentRow> rows;
  for (std::size_t m : config.m_grid) {
    if (m < 1) throw InvalidParameter("m_grid entries must be at least 1");
    for (std::size_t trial = 0; trial < config.trials; ++trial) {
      const std::uint64_t row_seed = derive_seed(derive_seed(config.seed, m), trial);
      ExperimentRow row;
      row.m = m;
      row.trial = trial;
      row.pipeline = config.pipeline;
      row.eta = config.eta;
      row.epsilon = config.epsilon;
      row.seed = row_seed;
      row.emp_robust_err = row.holdout_robust_err = kNaN;
      row.bound_realizable = row.bound_agnostic = kNaN;
      try {
        InstanceSpec spec = config.instance;
        spec.m = m;
        GeneratedInstance inst = gen_instance(spec, derive_seed(row_seed, "instance"));
        // Agnostic regression selects on the first half of the holdout; the
        // second half stays fresh for the reported error.
        Sample fresh = inst.holdout;
        if (config.pipeline == "agnostic-regress") {
          const auto half = static_cast<std::ptrdiff_t>(inst.holdout.size() / 2);
          fresh.assign(inst.holdout.begin() + half, inst.holdout.end());
          inst.holdout.resize(static_cast<std::size_t>(half));
        }
        std::unique_ptr<RobustErm> rerm;
        if (config.oracle == "constant") {
          rerm = std::make_unique<ConstantErm>();
        } else {
          rerm = std::make_unique<FiniteClassErm>(inst.cls);
        }
        const PipelineReport r =
            run_pipeline(config.pipeline, inst, *rerm, config, derive_seed(row_seed, "run"));
        row.eta = r.eta;
        row.emp_robust_err = r.emp_eta_error;
        row.holdout_robust_err =
            fresh.empty() ? kNaN
                          : empirical_error(*r.hypothesis, fresh, inst.perturbations, EtaBall{r.eta});
        row.compression_size = r.compression_size;
        row.cover_size = r.cover_size;
        row.bound_realizable = r.bound_realizable;
        row.bound_agnostic = r.bound_agnostic;
        row.status = r.ok() ? "ok" : "check_failed";
      } catch (const InvalidParameter&) {
        throw;
      } catch (const std::exception& e) {
        row.status = csv_safe(std::string("error: ") + e.what());
      }
      rows.push_back(std::move(row));
    }
  }
  std::stable_sort(rows.begin(), rows.end(), [](const ExperimentRow& a, const ExperimentRow& b) {
    return a.m != b.m ? a.m < b.m : a.trial < b.trial;
  });
  return rows;
}

std::string experiment_csv_header() {
  return "m,trial,pipeline,eta,epsilon,emp_robust_err,holdout_robust_err,compression_size,"
         "cover_size,bound_realizable,bound_agnostic,seed,status";
}

std::string experiment_csv(std::span<const ExperimentRow> rows) {
  std::ostringstream os;
  os << experiment_csv_header() << '\n';
  for (const auto& r : rows) {
    os << r.m << ',' << r.trial << ',' << r.pipeline << ',' << csv_real(r.eta) << ','
       << csv_real(r.epsilon) << ',' << csv_real(r.emp_robust_err) << ','
       << csv_real(r.holdout_robust_err) << ',' << r.compression_size << ',' << r.cover_size
       << ',' << csv_real(r.bound_realizable) << ',' << csv_real(r.bound_agnostic) << ','
       << r.seed << ',' << r.status << '\n';
  }
  return os.str();
}

InstanceSpec parse_instance_spec(const std::string& text) {
  return instance_from(parse_object(text, "instance"));
}

PoolConfig parse_pool_config(const std::string& text) {
  return pool_from(parse_object(text, "pool"));
}

ExperimentConfig parse_experiment_config(const std::string& text) {
  const json j = parse_object(text, "experiment config");
  static const std::set<std::string> known{"instance", "pipeline", "oracle", "eta",
                                           "epsilon", "delta", "p", "pool",
                                           "m_grid", "trials", "seed"};
  reject_unknown(j, known, "");
  ExperimentConfig c;
  if (j.contains("instance")) c.instance = instance_from(j["instance"]);
  if (j.contains("pool")) c.pool = pool_from(j["pool"]);
  read_field(j, "pipeline", c.pipeline, "");
  read_field(j, "oracle", c.oracle, "");
  read_field(j, "eta", c.eta, "");
  read_field(j, "epsilon", c.epsilon, "");
  read_field(j, "delta", c.delta, "");
  read_field(j, "p", c.p, "");
  read_field(j, "m_grid", c.m_grid, "");
  read_field(j, "trials", c.trials, "");
  read_field(j, "seed", c.seed, "");
  static const std::set<std::string> pipelines{"proper", "improper", "agnostic-eta", "regress",
                                               "agnostic-regress"};
  if (!pipelines.contains(c.pipeline)) {
    throw InvalidParameter("pipeline must be proper, improper, agnostic-eta, regress or agnostic-regress");
  }
  if (c.oracle != "finite" && c.oracle != "constant") {
    throw InvalidParameter("oracle must be finite or constant");
  }
  if (!(c.eta > 0.0 && c.eta <= 1.0)) throw InvalidParameter("eta must lie in (0, 1]");
  if (!(c.epsilon > 0.0 && c.epsilon < 1.0)) throw InvalidParameter("epsilon must lie in (0, 1)");
  if (!(c.delta > 0.0 && c.delta < 1.0)) throw InvalidParameter("delta must lie in (0, 1)");
  if (!(c.p >= 1.0)) throw InvalidParameter("p must be at least 1");
  if (c.m_grid.empty()) throw InvalidParameter("m_grid must be nonempty");
  for (std::size_t m : c.m_grid) {
    if (m < 1) throw InvalidParameter("m_grid entries must be at least 1");
  }
  if (c.trials < 1) throw InvalidParameter("trials must be at least 1");
  return c;
}

}  // namespace robustreg
