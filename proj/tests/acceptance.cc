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

// Acceptance runner: one PASS/FAIL line per criterion, nonzero exit on any
// failure.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "robustreg/compression.h"
#include "robustreg/dimensions.h"
#include "robustreg/error.h"
#include "robustreg/harness.h"
#include "robustreg/pipelines.h"
#include "support/oracles.h"

using namespace robustreg;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

int failures = 0;

void report(const std::string& name, bool pass, const std::string& detail) {
  std::printf("%s %s: %s\n", pass ? "PASS" : "FAIL", name.c_str(), detail.c_str());
  std::fflush(stdout);
  if (!pass) ++failures;
}

std::string fmt(const char* f, double a, double b = 0, double c = 0, double d = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c, d);
  return buf;
}

double robust_dev(const Hypothesis& h, const LabeledExample& ex, const PerturbationMap& u) {
  double worst = 0.0;
  for (InstanceId z : u.at(ex.x)) worst = std::max(worst, std::abs(h(z) - ex.y));
  return worst;
}

// Every report produced here is re-audited: the scheme is serialized, parsed
// back and rebuilt, and must agree with the report's hypothesis everywhere.
struct RoundTripAudit {
  std::size_t runs = 0;
  std::size_t bad = 0;

  void operator()(const PipelineReport& r, const Sample& sample, const RobustErm& erm,
                  const PerturbationMap& u, std::size_t domain_size) {
    ++runs;
    bool same = r.hypothesis.has_value() && r.checks.count("round_trip") && r.checks.at("round_trip");
    if (same) {
      try {
        const auto scheme = CompressionScheme::from_json(r.scheme.to_json());
        const Hypothesis h = reconstruct(scheme, sample, erm, u);
        for (InstanceId x = 0; x < domain_size; ++x) same = same && h(x) == (*r.hypothesis)(x);
      } catch (const Error&) {
        same = false;
      }
    }
    if (!same) ++bad;
  }
};

RoundTripAudit audit;

// Hand classes with known values.
void fat_oracle_equivalence() {
  const auto start = Clock::now();
  std::size_t checked = 0, mismatched = 0;
  auto expect = [&](const Matrix& m, double gamma, int want) {
    ++checked;
    const int got = fat_shattering(m, gamma);
    if (got != want || oracle::brute_fat(m, gamma) != want) ++mismatched;
  };
  auto rows = [](std::vector<std::vector<double>> r) {
    Matrix m(r.size(), r[0].size(), 0.0);
    for (std::size_t i = 0; i < r.size(); ++i)
      for (std::size_t j = 0; j < r[i].size(); ++j) m(i, j) = r[i][j];
    return m;
  };
  const Matrix two_constants = rows({{0.2, 0.2, 0.2}, {0.8, 0.8, 0.8}});
  expect(two_constants, 0.3, 1);
  expect(two_constants, 0.31, 0);
  expect(rows({{0.4, 0.9, 0.1}}), 0.05, 0);
  const Matrix square = rows({{0, 0}, {0, 1}, {1, 0}, {1, 1}});
  expect(square, 0.5, 2);
  expect(square, 0.51, 0);
  Matrix cube(8, 3, 0.0);
  for (std::size_t i = 0; i < 8; ++i)
    for (std::size_t j = 0; j < 3; ++j) cube(i, j) = (i >> j) & 1;
  expect(cube, 0.25, 3);
  const Matrix steps = rows({{0, 0, 0}, {0, 0, 1}, {0, 1, 1}, {1, 1, 1}});
  expect(steps, 0.5, 1);
  const Matrix levels = rows({{0, 0}, {0.5, 0.5}, {1, 1}});
  expect(levels, 0.25, 1);
  expect(levels, 0.5, 1);
  expect(levels, 0.51, 0);

  std::size_t random_checked = 0;
  std::mt19937_64 pick(2024);
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const std::size_t h = 2 + pick() % 31;
    const std::size_t n = 1 + pick() % 6;
    const Matrix m = oracle::random_matrix(h, n, seed, seed % 2 ? 0.05 : 0.0);
    for (double gamma : {0.1, 0.25}) {
      ++random_checked;
      if (fat_shattering(m, gamma) != oracle::brute_fat(m, gamma)) ++mismatched;
    }
  }
  const double secs = seconds_since(start);
  report("fat_oracle_equivalence", mismatched == 0 && secs < 60.0,
         fmt("%.0f hand values, %.0f random comparisons, %.0f mismatches, %.2f s", checked,
             random_checked, mismatched, secs));
}

void cover_certificate() {
  std::mt19937_64 pick(77);
  std::size_t far = 0, oversize = 0, ratio_checked = 0;
  double worst_ratio = 0.0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const bool small = seed < 40;
    const std::size_t n = small ? 2 + pick() % 11 : 13 + pick() % 188;
    const std::size_t d = 1 + pick() % 50;
    const double t = 0.05 + 0.05 * static_cast<double>(pick() % 10);
    const Matrix pts = oracle::random_matrix(n, d, seed + 500, seed % 3 == 0 ? 0.1 : 0.0);
    const Cover c = greedy_cover(pts, t);
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t center = c.assignment[i];
      const bool listed = std::find(c.centers.begin(), c.centers.end(), center) != c.centers.end();
      double dist = 0.0;
      for (std::size_t j = 0; j < d; ++j) dist = std::max(dist, std::abs(pts(i, j) - pts(center, j)));
      if (!listed || dist > t + kTolerance) ++far;
    }
    if (small) {
      ++ratio_checked;
      const double best = static_cast<double>(oracle::brute_min_cover(pts, t));
      const double ratio = c.centers.size() / best;
      worst_ratio = std::max(worst_ratio, ratio / (1.0 + std::log(static_cast<double>(n))));
      if (c.centers.size() > (1.0 + std::log(static_cast<double>(n))) * best) ++oversize;
    }
  }
  report("cover_certificate", far == 0 && oversize == 0,
         fmt("100 sets, %.0f points off their center, %.0f of %.0f small sets over the log ratio "
             "(worst size/bound %.3f)",
             far, oversize, ratio_checked, worst_ratio));
}

InstanceSpec realizable_spec(std::uint64_t seed) {
  InstanceSpec s;
  switch (seed % 3) {
    case 0:
      s.kind = ClassKind::thresholds;
      s.perturbation = PerturbationKind::grid_ball;
      s.radius = 1 + seed % 2 * 1;  // |U(x)| <= 5
      s.domain_size = 40;
      s.class_size = 8 + 2 * (seed % 20);
      break;
    case 1:
      s.kind = ClassKind::random;
      s.perturbation = PerturbationKind::identity;
      s.domain_size = 60;
      s.class_size = 20 + seed % 81;
      break;
    default:
      s.kind = ClassKind::constants;
      s.perturbation = PerturbationKind::random_neighbors;
      s.radius = 4;
      s.domain_size = 30;
      s.class_size = 10;
      break;
  }
  s.m = 20 + seed % 41;
  s.holdout = 1;
  return s;
}

void medboost_uniform() {
  std::size_t ok = 0, slow = 0;
  double worst_secs = 0.0;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const auto g = gen_instance(realizable_spec(seed), seed);
    const FiniteClassErm erm(g.cls);
    const double eta = seed % 2 ? 0.2 : 0.25;
    const auto start = Clock::now();
    bool uniform = false;
    try {
      const auto r = improper_learn(g.sample, g.perturbations, erm, eta, PoolConfig{}, seed);
      audit(r, g.sample, erm, g.perturbations, g.cls.domain_size());
      const Hypothesis h = reconstruct(r.scheme, g.sample, erm, g.perturbations);
      uniform = true;
      for (const auto& ex : g.sample) uniform = uniform && robust_dev(h, ex, g.perturbations) <= eta + kTolerance;
    } catch (const Error& e) {
      std::printf("  seed %llu: %s\n", static_cast<unsigned long long>(seed), e.what());
    }
    const double secs = seconds_since(start);
    worst_secs = std::max(worst_secs, secs);
    if (secs >= 10.0) ++slow;
    if (uniform) ++ok;
  }
  report("medboost_uniform", ok >= 48 && slow == 0,
         fmt("%.0f/50 runs uniformly within eta (need 48), slowest run %.2f s", ok, worst_secs));
}

void compression_eps_independence() {
  std::size_t same = 0, total = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto g = gen_instance(realizable_spec(seed), seed);
    const FiniteClassErm erm(g.cls);
    ++total;
    try {
      const auto a = improper_learn(g.sample, g.perturbations, erm, 0.25, PoolConfig{}, seed, 0.05);
      const auto b = improper_learn(g.sample, g.perturbations, erm, 0.25, PoolConfig{}, seed, 0.2);
      audit(a, g.sample, erm, g.perturbations, g.cls.domain_size());
      audit(b, g.sample, erm, g.perturbations, g.cls.domain_size());
      if (a.compression_size == b.compression_size && a.scheme.to_json() == b.scheme.to_json()) ++same;
    } catch (const Error& e) {
      std::printf("  seed %llu: %s\n", static_cast<unsigned long long>(seed), e.what());
    }
  }
  report("compression_eps_independence", same == total,
         fmt("%.0f/%.0f seeds give identical compression at eps 0.05 and 0.2", same, total));
}

void reverse_markov() {
  std::size_t runs = 0, bad = 0;
  for (std::uint64_t seed = 0; seed < 12; ++seed) {
    const auto g = gen_instance(realizable_spec(seed), seed);
    const FiniteClassErm erm(g.cls);
    for (double p : {1.0, 2.0}) {
      for (double eps : {0.04, 0.1, 0.2}) {
        ++runs;
        try {
          const auto r = realizable_regression(g.sample, g.perturbations, erm, eps, p, PoolConfig{}, seed);
          audit(r, g.sample, erm, g.perturbations, g.cls.domain_size());
          const double eta = std::pow(eps, 1.0 / p);
          // Recompute both errors from the hypothesis.
          double lp = 0.0, ball = 0.0;
          for (const auto& ex : g.sample) {
            const double dev = robust_dev(*r.hypothesis, ex, g.perturbations);
            lp += std::pow(dev, p);
            ball += dev >= eta - kTolerance ? 1.0 : 0.0;
          }
          lp /= g.sample.size();
          ball /= g.sample.size();
          const double etap = std::pow(eta, p);
          const bool holds = std::abs(lp - r.emp_lp_error) <= 1e-12 && std::abs(ball - r.emp_eta_error) <= 1e-12 &&
                             std::abs(r.eta - eta) <= 1e-15 && r.emp_lp_error <= r.emp_eta_error * (1 - etap) + etap;
          if (!holds) ++bad;
        } catch (const Error& e) {
          ++bad;
          std::printf("  seed %llu: %s\n", static_cast<unsigned long long>(seed), e.what());
        }
      }
    }
  }
  report("reverse_markov", bad == 0, fmt("%.0f runs, %.0f violations", runs, bad));
}

void agnostic_maximal_subset() {
  std::size_t equal = 0;
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    InstanceSpec s;
    s.kind = seed % 2 ? ClassKind::random : ClassKind::thresholds;
    s.perturbation = seed % 3 ? PerturbationKind::grid_ball : PerturbationKind::identity;
    s.domain_size = 12;
    s.class_size = 6 + seed % 7;
    s.fit_tolerance = 1.0;
    s.noise = 0.3 + 0.02 * seed;
    s.m = 6 + seed % 7;
    s.holdout = 1;
    const auto g = gen_instance(s, seed);
    const FiniteClassErm erm(g.cls);
    const double eta = 0.2;
    const auto want = oracle::brute_maximal_subset(g.cls, g.sample, g.perturbations, eta);
    std::vector<std::size_t> got;
    try {
      const auto r = agnostic_eta_learn(g.sample, g.perturbations, erm, eta, PoolConfig{}, seed);
      audit(r, g.sample, erm, g.perturbations, g.cls.domain_size());
      got = r.realizable_subset;
    } catch (const Infeasible&) {
      // Nothing fits: S' is empty.
    } catch (const Error& e) {
      std::printf("  seed %llu: %s\n", static_cast<unsigned long long>(seed), e.what());
      got = {g.sample.size() + 1};
    }
    if (got == want) ++equal;
  }
  report("agnostic_maximal_subset", equal == 30, fmt("%.0f/30 subsets equal brute force", equal));
}

void agnostic_regression_guarantee() {
  const auto start = Clock::now();
  std::string detail;
  bool pass = true;
  for (double q : {0.05, 0.1}) {
    std::size_t ok = 0, theta_one = 0;
    double fresh_worst = 0.0;
    for (std::uint64_t trial = 0; trial < 40; ++trial) {
      InstanceSpec s;
      s.noise = q;
      s.m = 200;
      s.holdout = 1000;
      const std::uint64_t seed = 9000 + trial + static_cast<std::uint64_t>(q * 1000) * 100;
      const auto g = gen_instance(s, seed);
      const Sample select(g.holdout.begin(), g.holdout.begin() + 500);
      const Sample fresh(g.holdout.begin() + 500, g.holdout.end());
      const FiniteClassErm erm(g.cls);
      try {
        const auto r = agnostic_regression(g.sample, select, g.perturbations, erm, 0.1, 0.05, 1.0,
                                           PoolConfig{}, seed);
        audit(r, g.sample, erm, g.perturbations, g.cls.domain_size());
        const double theta = *r.selected_theta;
        if (theta == 1.0) ++theta_one;
        if (*r.holdout_error <= std::sqrt(q) + 0.15) ++ok;
        double bad = 0.0;
        for (const auto& ex : fresh) bad += robust_dev(*r.hypothesis, ex, g.perturbations) >= theta - kTolerance;
        fresh_worst = std::max(fresh_worst, bad / fresh.size());
      } catch (const Error& e) {
        std::printf("  q %.2f trial %llu: %s\n", q, static_cast<unsigned long long>(trial), e.what());
      }
    }
    pass = pass && ok >= 34;
    detail += fmt("q=%.2f: %.0f/40 within sqrt(q)+0.15 (theta=1 selected %.0f times, worst fresh error %.3f); ",
                  q, ok, theta_one, fresh_worst);
  }
  const double secs = seconds_since(start);
  report("agnostic_regression", pass && secs < 300.0, detail + fmt("%.1f s", secs));
}

void bound_calculators() {
  struct Tuple {
    std::size_t k, m;
    double delta, empirical, c;
  };
  const std::vector<Tuple> tuples{{10, 1000, std::exp(-1.0), 0.0, 1.0}, {1, 2, 0.5, 0.5, 1.0},
                                  {3, 100, 0.05, 0.1, 1.0},              {5, 10, 0.01, 1.0, 2.0},
                                  {20, 5000, 0.1, 0.02, 0.5},            {7, 14, 0.9, 0.0, 1.0},
                                  {50, 100000, 1e-6, 0.3, 1.0},          {2, 64, 0.25, 0.75, 3.0},
                                  {100, 200, 0.5, 0.05, 1.0},            {4, 1000000, 0.01, 0.001, 1.0}};
  std::size_t mismatched = 0;
  for (const auto& t : tuples) {
    const double a = (t.k * std::log(static_cast<double>(t.m)) + std::log(1.0 / t.delta)) / t.m;
    const double want[3] = {t.c * a, t.c * std::sqrt(a), t.c * (std::sqrt(t.empirical * a) + a)};
    const BoundKind kinds[3] = {BoundKind::realizable, BoundKind::agnostic, BoundKind::bernstein};
    for (int i = 0; i < 3; ++i)
      if (std::abs(generalization_bound(kinds[i], t.k, t.m, t.delta, t.empirical, t.c) - want[i]) > 1e-9)
        ++mismatched;
  }
  const double example = generalization_bound(BoundKind::realizable, 10, 1000, std::exp(-1.0), 0.0);
  const bool example_ok = std::abs(example - 0.0701) < 5e-5;

  std::mt19937_64 pick(31);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::size_t broken = 0;
  for (int i = 0; i < 100; ++i) {
    const std::size_t k = 1 + pick() % 20;
    const std::size_t m = std::max<std::size_t>(10, 2 * k) + pick() % 5000;
    const double delta = 0.001 + 0.99 * unit(pick);
    const double emp = unit(pick);
    for (BoundKind kind : {BoundKind::realizable, BoundKind::agnostic, BoundKind::bernstein}) {
      const double base = generalization_bound(kind, k, m, delta, emp);
      if (!(generalization_bound(kind, k, m + 1 + m / 2, delta, emp) < base)) ++broken;
      if (k + 1 <= m / 2 && !(generalization_bound(kind, k + 1, m, delta, emp) > base)) ++broken;
      if (!(generalization_bound(kind, k, m, delta / 2, emp) > base)) ++broken;
    }
    const double r = generalization_bound(BoundKind::realizable, k, m, delta, emp);
    const double a = generalization_bound(BoundKind::agnostic, k, m, delta, emp);
    if (generalization_bound(BoundKind::bernstein, k, m, delta, emp) > a + r + 1e-15) ++broken;
    if (generalization_bound(BoundKind::bernstein, k, m, delta, std::min(1.0, emp + 0.1)) <
        generalization_bound(BoundKind::bernstein, k, m, delta, emp))
      ++broken;
  }
  report("bound_calculators", mismatched == 0 && example_ok && broken == 0,
         fmt("30 formula values, %.0f mismatches; k=10 m=1000 gives %.6f; %.0f monotonicity violations "
             "over 100 tuples",
             mismatched, example, broken));
}

void learning_curve() {
  ExperimentConfig c;
  c.pipeline = "improper";
  // Fine thresholds without perturbation, so small samples leave gaps.
  c.eta = 0.1;
  c.instance.kind = ClassKind::thresholds;
  c.instance.perturbation = PerturbationKind::identity;
  c.instance.domain_size = 60;
  c.instance.class_size = 48;
  c.instance.holdout = 300;
  c.m_grid = {20, 40, 80, 160};
  c.trials = 20;
  c.seed = 5;
  const auto rows = run_experiment(c);
  std::vector<double> medians;
  std::size_t failed_rows = 0;
  for (std::size_t m : c.m_grid) {
    std::vector<double> errs;
    for (const auto& r : rows) {
      if (r.m != m) continue;
      if (r.status != "ok") ++failed_rows;
      errs.push_back(r.status == "ok" ? r.holdout_robust_err : 1.0);
    }
    std::sort(errs.begin(), errs.end());
    medians.push_back(0.5 * (errs[errs.size() / 2 - 1] + errs[errs.size() / 2]));
  }
  if (failed_rows) audit.bad += failed_rows;
  audit.runs += rows.size();
  std::size_t nonincreasing = 0;
  for (std::size_t i = 0; i + 1 < medians.size(); ++i) nonincreasing += medians[i + 1] <= medians[i];
  report("learning_curve", nonincreasing == medians.size() - 1,
         fmt("median holdout error %.4f, %.4f, %.4f, %.4f", medians[0], medians[1], medians[2], medians[3]) +
             fmt("; %.0f of 3 adjacent pairs nonincreasing, %.0f rows not ok", nonincreasing, failed_rows));
}

void proper_and_constant_runs() {
  // Extra runs so every pipeline feeds the round-trip audit.
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    InstanceSpec s;
    s.m = 30;
    s.holdout = 1;
    const auto g = gen_instance(s, seed);
    const FiniteClassErm erm(g.cls);
    PoolConfig pool;
    pool.subset_size = 2;
    pool.mode = PoolMode::sample;
    pool.samples = 32;
    try {
      audit(proper_learn(g.sample, g.perturbations, erm, 0.2, 0.1, pool, seed), g.sample, erm, g.perturbations,
            g.cls.domain_size());
    } catch (const Error& e) {
      ++audit.runs;
      ++audit.bad;
      std::printf("  proper seed %llu: %s\n", static_cast<unsigned long long>(seed), e.what());
    }
  }
  const Sample s{{0, 0.4}, {1, 0.45}, {2, 0.4}};
  const auto u = PerturbationMap::identity(3);
  audit(proper_learn(s, u, ConstantErm(), 0.2, 0.1, PoolConfig{}, 0), s, ConstantErm(), u, 3);
  audit(improper_learn(s, u, ConstantErm(), 0.2, PoolConfig{}, 0), s, ConstantErm(), u, 3);
}

}  // namespace

int main() {
  const auto start = Clock::now();
  fat_oracle_equivalence();
  cover_certificate();
  medboost_uniform();
  compression_eps_independence();
  proper_and_constant_runs();
  reverse_markov();
  agnostic_maximal_subset();
  agnostic_regression_guarantee();
  bound_calculators();
  learning_curve();
  report("round_trip", audit.bad == 0,
         fmt("%.0f pipeline runs audited, %.0f mismatches", audit.runs, audit.bad));
  std::printf("%d criteria failed, %.1f s\n", failures, seconds_since(start));
  return failures == 0 ? 0 : 1;
}
