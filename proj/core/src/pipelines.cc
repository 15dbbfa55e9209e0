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

#include "robustreg/pipelines.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <set>
#include <sstream>
#include <tuple>

#include "json.hpp"
#include "robustreg/boosting.h"
#include "robustreg/dimensions.h"
#include "robustreg/error.h"
#include "robustreg/io.h"
#include "robustreg/mw.h"
#include "robustreg/rng.h"
#include "robustreg/sparsify.h"

namespace robustreg {
namespace {

using Clock = std::chrono::steady_clock;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

void check_eta(double eta) {
  if (!(eta > 0.0 && eta <= 1.0)) throw InvalidParameter("eta must lie in (0, 1]");
}

void check_sample(std::span<const LabeledExample> sample) {
  if (sample.empty()) throw EmptySample();
}

// Saturating binomial coefficient; returns cap + 1 once it exceeds cap.
std::size_t binomial_capped(std::size_t n, std::size_t k, std::size_t cap) {
  k = std::min(k, n - k);
  long double c = 1.0L;
  for (std::size_t i = 1; i <= k; ++i) {
    c = c * static_cast<long double>(n - k + i) / static_cast<long double>(i);
    if (c > static_cast<long double>(cap)) return cap + 1;
  }
  return static_cast<std::size_t>(std::llround(c));
}

// Every instance a hypothesis may be asked about in this run.
std::vector<InstanceId> domain_ids(std::span<const LabeledExample> sample,
                                   const PerturbationMap& perturbations) {
  std::set<InstanceId> ids;
  for (const auto& [x, nbrs] : perturbations.table()) {
    ids.insert(x);
    ids.insert(nbrs.begin(), nbrs.end());
  }
  for (const auto& ex : sample) ids.insert(ex.x);
  return {ids.begin(), ids.end()};
}

std::size_t derive_subset_size(const RobustErm& rerm, double eta, double scale,
                               double epsilon, const PoolConfig& cfg, std::size_t m) {
  if (cfg.subset_size > 0) return std::min(cfg.subset_size, m);
  int f = 1;
  try {
    f = std::max(1, rerm.fat(scale * eta));
  } catch (const CapExceeded&) {
    f = 1;
  }
  const double l = std::log(1.0 / eta);
  const double logs = std::max(1.0, std::ceil(l * l - kTolerance));
  const double d = std::ceil(cfg.c_d * f * logs / epsilon - kTolerance);
  return std::clamp<std::size_t>(static_cast<std::size_t>(std::max(1.0, d)), 1, m);
}

std::size_t round_budget(const PoolConfig& cfg, std::size_t cover_size) {
  const double t = std::ceil(cfg.c_T * std::log(std::max<double>(cover_size, 2.0)) - kTolerance);
  return std::max<std::size_t>(1, static_cast<std::size_t>(t));
}

std::vector<InflatedExample> pick(std::span<const InflatedExample> pts,
                                  std::span<const std::size_t> idx) {
  std::vector<InflatedExample> out;
  out.reserve(idx.size());
  for (std::size_t i : idx) out.push_back(pts[i]);
  return out;
}

// Adds the pairs failing `bad` to the cover; returns how many were added.
template <typename Bad>
std::size_t refine_cover(std::vector<InflatedExample>& cover,
                         std::span<const InflatedExample> pairs, Bad bad) {
  std::set<std::tuple<InstanceId, double, std::size_t>> have;
  for (const auto& c : cover) have.emplace(c.z, c.y, c.origin);
  std::size_t added = 0;
  for (const auto& pr : pairs) {
    if (!bad(pr)) continue;
    if (have.emplace(pr.z, pr.y, pr.origin).second) {
      cover.push_back(pr);
      ++added;
    }
  }
  return added;
}

void remap_sources(WeightedEnsemble& e, std::span<const std::size_t> index_map) {
  for (auto& src : e.sources) {
    for (auto& i : src) i = index_map[i];
  }
}

double lp_error(const Hypothesis& h, std::span<const LabeledExample> sample,
                const PerturbationMap& perturbations, double p) {
  return empirical_error(h, sample, perturbations, Lp{p});
}

void fill_bounds(PipelineReport& r, const PoolConfig& cfg) {
  const std::size_t k = r.compression_size;
  const std::size_t m = r.sample_size;
  if (k < 1 || 2 * k > m) {
    r.bound_realizable = r.bound_agnostic = r.bound_bernstein = kNaN;
    return;
  }
  r.bound_realizable = generalization_bound(BoundKind::realizable, k, m, cfg.delta, 0.0, cfg.bound_c);
  r.bound_agnostic = generalization_bound(BoundKind::agnostic, k, m, cfg.delta, 0.0, cfg.bound_c);
  r.bound_bernstein = generalization_bound(BoundKind::bernstein, k, m, cfg.delta,
                                           std::clamp(r.emp_eta_error, 0.0, 1.0), cfg.bound_c);
}

// Compresses, rebuilds from the scheme, and recomputes every reported error
// from the rebuilt predictor.
void finish(PipelineReport& r, const WeightedEnsemble& ensemble,
            std::span<const LabeledExample> sample, const PerturbationMap& perturbations,
            const RobustErm& rerm, double rerm_eta, const PoolConfig& cfg) {
  auto t0 = Clock::now();
  r.scheme = compress(ensemble, sample, r.eta, rerm_eta);
  const WeightedEnsemble rebuilt = reconstruct_ensemble(r.scheme, sample, rerm, perturbations);
  r.hypothesis = rebuilt.as_hypothesis();
  bool same = true;
  for (InstanceId x : domain_ids(sample, perturbations)) {
    if (rebuilt(x) != ensemble(x)) {
      same = false;
      break;
    }
  }
  r.checks["round_trip"] = same;
  if (rerm.convex() && rebuilt.aggregation == Aggregation::average) {
    if (auto folded = fold_average(rebuilt)) r.proper = folded->descriptor();
  }
  r.timings_ms["reconstruct"] = ms_since(t0);

  const Approximation a = verify_approximation(*r.hypothesis, sample, perturbations, r.eta);
  r.emp_eta_error = a.rate;
  r.max_robust_deviation = a.max_deviation;
  r.emp_lp_error = lp_error(*r.hypothesis, sample, perturbations, r.p);
  r.compression_size = r.scheme.size();
  r.sample_size = sample.size();
  fill_bounds(r, cfg);
}

struct MedianStage {
  double rerm_scale = 1.0 / 8.0;
  double weak_scale = 1.0 / 4.0;
  double cover_scale = 1.0 / 4.0;
  double fat_scale = 1.0 / 64.0;
};

// Pool, cover, boosting and sparsification over `sub`. Sources in the
// returned ensemble index `sub`.
WeightedEnsemble median_stage(std::span<const LabeledExample> sub,
                              const PerturbationMap& perturbations, const RobustErm& rerm,
                              double eta, const MedianStage& stage, const PoolConfig& cfg,
                              std::uint64_t seed, PipelineReport& r) {
  auto t0 = Clock::now();
  const auto inflated = inflate(sub, perturbations);
  const auto pairs = robust_pairs(sub, perturbations);
  const double rerm_eta = eta * stage.rerm_scale;
  const std::size_t d =
      derive_subset_size(rerm, eta, cfg.fat_scale > 0.0 ? cfg.fat_scale : stage.fat_scale, 1.0,
                         cfg, sub.size());
  const Pool pool = build_pool(sub, perturbations, rerm, rerm_eta, d, cfg.mode, cfg.samples,
                               cfg.enumerate_cap, derive_seed(seed, "pool"));
  r.inflated_size = inflated.size();
  r.pool_size = pool.members.size();
  r.pool_skipped = pool.skipped;
  r.subset_size = d;
  r.timings_ms["pool"] = ms_since(t0);

  t0 = Clock::now();
  const Matrix dual = dual_embed(pool.members, inflated);
  const Cover cov = greedy_cover(dual, eta * stage.cover_scale);
  std::vector<InflatedExample> cover = pick(inflated, cov.centers);
  r.timings_ms["cover"] = ms_since(t0);

  t0 = Clock::now();
  MedBoostConfig mb;
  mb.weak.subset_size = d;
  mb.weak.retries = cfg.retries;
  mb.weak.scales = {stage.rerm_scale, stage.weak_scale};
  const double extend = eta * std::min(1.0, 2.0 * stage.weak_scale);
  MedBoostResult boosted;
  for (std::size_t pass = 0;; ++pass) {
    mb.rounds = round_budget(cfg, cover.size());
    mb.max_rounds = mb.rounds * std::max<std::size_t>(1, cfg.round_cap_factor);
    boosted = medboost(cover, sub, perturbations, eta, rerm, mb, derive_seed(seed, pass));
    if (pass >= cfg.cover_refinements) break;
    const auto& ens = boosted.ensemble;
    const std::size_t added = refine_cover(cover, pairs, [&](const InflatedExample& pr) {
      return exceeds(std::abs(ens(pr.z) - pr.y), extend);
    });
    if (added == 0) break;
  }
  r.cover_size = cover.size();
  r.rounds = boosted.rounds;
  r.checks["cover_certificate"] = boosted.converged;
  r.checks["inflated_extension"] = within(max_deviation(boosted.ensemble, inflated), extend);
  r.timings_ms["boost"] = ms_since(t0);

  t0 = Clock::now();
  WeightedEnsemble out = std::move(boosted.ensemble);
  std::size_t k = 0;
  try {
    const int fs = rerm.dual_fat(cfg.dual_scale * eta);
    k = default_k(std::max(1, fs), eta, cfg.c_k);
  } catch (const CapExceeded&) {
    k = out.size() % 2 == 0 ? out.size() + 1 : out.size();
  }
  try {
    SparsifyResult sp = sparsify(out, pairs, eta, k, cfg.sparsify_iters, derive_seed(seed, "sparsify"));
    out = std::move(sp.ensemble);
    r.sparsified = true;
  } catch (const SparsifyFailed&) {
    r.sparsified = false;
  }
  r.timings_ms["sparsify"] = ms_since(t0);
  return out;
}

std::string json_number_or_null(double v) { return std::isfinite(v) ? format_double(v) : ""; }

}  // namespace

Pool build_pool(std::span<const LabeledExample> sample,
                const PerturbationMap& perturbations, const RobustErm& rerm,
                double rerm_eta, std::size_t d, PoolMode mode, std::size_t samples,
                std::size_t enumerate_cap, std::uint64_t seed) {
  check_sample(sample);
  if (d < 1) throw InvalidParameter("subset size d must be at least 1");
  const std::size_t m = sample.size();
  d = std::min(d, m);

  std::vector<std::vector<std::size_t>> subsets;
  const std::size_t count = binomial_capped(m, d, enumerate_cap);
  bool enumerate = mode == PoolMode::enumerate ||
                   (mode == PoolMode::automatic && count <= enumerate_cap);
  if (mode == PoolMode::enumerate && count > enumerate_cap) {
    throw CapExceeded("C(m, d) exceeds the enumeration cap");
  }
  if (enumerate) {
    std::vector<std::size_t> idx(d);
    for (std::size_t i = 0; i < d; ++i) idx[i] = i;
    for (;;) {
      subsets.push_back(idx);
      std::size_t i = d;
      while (i > 0 && idx[i - 1] == m - d + i - 1) --i;
      if (i == 0) break;
      ++idx[i - 1];
      for (std::size_t j = i; j < d; ++j) idx[j] = idx[j - 1] + 1;
    }
  } else {
    if (samples < 1) throw InvalidParameter("pool sample count must be at least 1");
    Rng rng(seed);
    std::vector<std::size_t> perm(m);
    std::set<std::vector<std::size_t>> seen;
    for (std::size_t s = 0; s < samples; ++s) {
      for (std::size_t i = 0; i < m; ++i) perm[i] = i;
      for (std::size_t i = 0; i < d; ++i) std::swap(perm[i], perm[i + rng.index(m - i)]);
      std::vector<std::size_t> pick_idx(perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(d));
      std::sort(pick_idx.begin(), pick_idx.end());
      if (seen.insert(pick_idx).second) subsets.push_back(std::move(pick_idx));
    }
  }

  Pool pool;
  Sample pts;
  for (auto& idx : subsets) {
    pts.clear();
    for (std::size_t i : idx) pts.push_back(sample[i]);
    try {
      pool.members.push_back(rerm.fit(pts, perturbations, rerm_eta));
      pool.subsets.push_back(std::move(idx));
    } catch (const Infeasible&) {
      ++pool.skipped;
    }
  }
  if (pool.members.empty()) throw EmptyPool();
  return pool;
}

Matrix dual_embed(std::span<const Hypothesis> pool,
                  std::span<const InflatedExample> inflated) {
  if (pool.empty()) throw InvalidParameter("pool is empty");
  Matrix out(inflated.size(), pool.size(), 0.0);
  for (std::size_t i = 0; i < inflated.size(); ++i) {
    for (std::size_t j = 0; j < pool.size(); ++j) {
      out(i, j) = std::abs(pool[j](inflated[i].z) - inflated[i].y);
    }
  }
  return out;
}

bool PipelineReport::ok() const {
  return std::all_of(checks.begin(), checks.end(), [](const auto& kv) { return kv.second; });
}

std::string PipelineReport::to_json() const {
  nlohmann::ordered_json j;
  auto num = [](double v) -> nlohmann::ordered_json {
    if (std::isfinite(v)) return v;
    return nullptr;
  };
  j["pipeline"] = pipeline;
  j["eta"] = eta;
  j["epsilon"] = epsilon;
  j["p"] = p;
  j["seed"] = seed;
  j["ok"] = ok();
  j["sample_size"] = sample_size;
  j["emp_eta_error"] = emp_eta_error;
  j["emp_lp_error"] = emp_lp_error;
  j["max_robust_deviation"] = max_robust_deviation;
  j["compression_size"] = compression_size;
  j["cover_size"] = cover_size;
  j["inflated_size"] = inflated_size;
  j["pool_size"] = pool_size;
  j["pool_skipped"] = pool_skipped;
  j["subset_size"] = subset_size;
  j["rounds"] = rounds;
  j["sparsified"] = sparsified;
  j["bound_realizable"] = num(bound_realizable);
  j["bound_agnostic"] = num(bound_agnostic);
  j["bound_bernstein"] = num(bound_bernstein);
  j["checks"] = nlohmann::ordered_json::object();
  for (const auto& [k, v] : checks) j["checks"][k] = v;
  if (proper) {
    j["proper"] = {{"family", proper->family}, {"params", proper->params}};
  } else {
    j["proper"] = nullptr;
  }
  if (!realizable_subset.empty()) j["realizable_subset"] = realizable_subset;
  if (selected_theta) j["selected_theta"] = *selected_theta;
  if (holdout_error) j["holdout_error"] = *holdout_error;
  if (holdout_lp_error) j["holdout_lp_error"] = *holdout_lp_error;
  if (!grid.empty()) {
    auto& g = j["grid"] = nlohmann::ordered_json::array();
    for (const auto& pt : grid) {
      g.push_back({{"theta", pt.theta},
                   {"ok", pt.ok},
                   {"holdout_error", pt.holdout_error},
                   {"holdout_lp_error", pt.holdout_lp_error},
                   {"compression_size", pt.compression_size},
                   {"message", pt.message}});
    }
  }
  j["scheme"] = nlohmann::ordered_json::parse(scheme.to_json());
  j["timings_ms"] = nlohmann::ordered_json::object();
  for (const auto& [k, v] : timings_ms) j["timings_ms"][k] = v;
  return j.dump(2);
}

std::string PipelineReport::csv_header() {
  return "pipeline,eta,epsilon,p,seed,sample_size,emp_eta_error,emp_lp_error,"
         "max_robust_deviation,compression_size,cover_size,inflated_size,pool_size,rounds,"
         "sparsified,bound_realizable,bound_agnostic,bound_bernstein,selected_theta,"
         "holdout_error,ok";
}

std::string PipelineReport::csv_row() const {
  std::ostringstream os;
  os << pipeline << ',' << format_double(eta) << ',' << format_double(epsilon) << ','
     << format_double(p) << ',' << seed << ',' << sample_size << ','
     << format_double(emp_eta_error) << ',' << format_double(emp_lp_error) << ','
     << format_double(max_robust_deviation) << ',' << compression_size << ',' << cover_size
     << ',' << inflated_size << ',' << pool_size << ',' << rounds << ','
     << (sparsified ? 1 : 0) << ',' << json_number_or_null(bound_realizable) << ','
     << json_number_or_null(bound_agnostic) << ',' << json_number_or_null(bound_bernstein)
     << ',' << (selected_theta ? format_double(*selected_theta) : "") << ','
     << (holdout_error ? format_double(*holdout_error) : "") << ',' << (ok() ? 1 : 0);
  return os.str();
}

PipelineReport proper_learn(std::span<const LabeledExample> sample,
                            const PerturbationMap& perturbations, const RobustErm& rerm,
                            double eta, double epsilon, const PoolConfig& config,
                            std::uint64_t seed) {
  check_eta(eta);
  if (!(epsilon > 0.0 && epsilon <= 1.0)) throw InvalidParameter("epsilon must lie in (0, 1]");
  check_sample(sample);
  const auto start = Clock::now();
  PipelineReport r;
  r.pipeline = "proper";
  r.eta = eta;
  r.epsilon = epsilon;
  r.p = config.p;
  r.seed = seed;

  auto t0 = Clock::now();
  const auto inflated = inflate(sample, perturbations);
  const auto pairs = robust_pairs(sample, perturbations);
  const double rerm_eta = eta / 4.0;
  const std::size_t d = derive_subset_size(
      rerm, eta, config.fat_scale > 0.0 ? config.fat_scale : 1.0 / 32.0, epsilon, config,
      sample.size());
  const Pool pool = build_pool(sample, perturbations, rerm, rerm_eta, d, config.mode,
                               config.samples, config.enumerate_cap, derive_seed(seed, "pool"));
  r.inflated_size = inflated.size();
  r.pool_size = pool.members.size();
  r.pool_skipped = pool.skipped;
  r.subset_size = d;
  r.timings_ms["pool"] = ms_since(t0);

  t0 = Clock::now();
  const Cover cov = greedy_cover(dual_embed(pool.members, inflated), eta / 2.0);
  std::vector<InflatedExample> cover = pick(inflated, cov.centers);
  r.timings_ms["cover"] = ms_since(t0);

  t0 = Clock::now();
  MwConfig mc;
  mc.xi = config.xi;
  mc.strong.subset_size = d;
  mc.strong.retries = config.retries;
  MwResult boosted;
  for (std::size_t pass = 0;; ++pass) {
    mc.rounds = round_budget(config, cover.size());
    mc.max_rounds = mc.rounds * std::max<std::size_t>(1, config.round_cap_factor);
    boosted = mw_boost(cover, sample, perturbations, eta, epsilon, rerm, mc,
                       derive_seed(seed, pass));
    if (pass >= config.cover_refinements) break;
    const auto& ens = boosted.ensemble;
    const auto h = ens.as_hypothesis();
    if (within(empirical_error(h, sample, perturbations, EtaBall{eta}), epsilon)) break;
    const std::size_t added = refine_cover(cover, pairs, [&](const InflatedExample& pr) {
      return reaches(std::abs(ens(pr.z) - pr.y), eta / 2.0);
    });
    if (added == 0) break;
  }
  r.cover_size = cover.size();
  r.rounds = boosted.rounds;
  r.checks["cover_condition"] = boosted.converged;
  r.checks["inflated_condition"] =
      within(fraction_reaching(boosted.ensemble, inflated, eta), epsilon);
  r.timings_ms["boost"] = ms_since(t0);

  finish(r, boosted.ensemble, sample, perturbations, rerm, rerm_eta, config);
  r.checks["sample_condition"] = within(r.emp_eta_error, epsilon);
  if (rerm.convex()) r.checks["proper"] = r.proper.has_value();
  r.timings_ms["total"] = ms_since(start);
  return r;
}

PipelineReport improper_learn(std::span<const LabeledExample> sample,
                              const PerturbationMap& perturbations,
                              const RobustErm& rerm, double eta,
                              const PoolConfig& config, std::uint64_t seed,
                              double epsilon) {
  check_eta(eta);
  check_sample(sample);
  const auto start = Clock::now();
  PipelineReport r;
  r.pipeline = "improper";
  r.eta = eta;
  r.epsilon = epsilon;
  r.p = config.p;
  r.seed = seed;
  const MedianStage stage;
  const WeightedEnsemble e =
      median_stage(sample, perturbations, rerm, eta, stage, config, seed, r);
  finish(r, e, sample, perturbations, rerm, eta * stage.rerm_scale, config);
  r.checks["uniform_robust"] = within(r.max_robust_deviation, eta);
  r.timings_ms["total"] = ms_since(start);
  return r;
}

RealizableSubset maximal_realizable_subset(std::span<const LabeledExample> sample,
                                           const PerturbationMap& perturbations,
                                           const RobustErm& rerm, double eta) {
  check_eta(eta);
  check_sample(sample);
  auto idx = rerm.maximal_fit_subset(sample, perturbations, eta);
  std::sort(idx.begin(), idx.end());
  return {std::move(idx)};
}

PipelineReport agnostic_eta_learn(std::span<const LabeledExample> sample,
                                  const PerturbationMap& perturbations,
                                  const RobustErm& rerm, double eta,
                                  const PoolConfig& config, std::uint64_t seed) {
  check_eta(eta);
  check_sample(sample);
  const auto start = Clock::now();
  PipelineReport r;
  r.pipeline = "agnostic-eta";
  r.eta = eta;
  r.p = config.p;
  r.seed = seed;

  auto t0 = Clock::now();
  const RealizableSubset fit = maximal_realizable_subset(sample, perturbations, rerm, eta);
  r.timings_ms["subset"] = ms_since(t0);
  if (fit.indices.empty()) {
    throw Infeasible("every class member reaches eta on every sample point", eta);
  }
  r.realizable_subset = fit.indices;
  Sample sub;
  for (std::size_t i : fit.indices) sub.push_back(sample[i]);

  // S' is fit strictly below eta, so the boosted members are fit at eta
  // itself; finer tolerances are generally infeasible on S'.
  MedianStage stage;
  stage.rerm_scale = 1.0;
  stage.weak_scale = 1.0;
  WeightedEnsemble e = median_stage(sub, perturbations, rerm, eta, stage, config, seed, r);
  remap_sources(e, fit.indices);
  finish(r, e, sample, perturbations, rerm, eta * stage.rerm_scale, config);

  double worst = 0.0;
  for (const auto& ex : sub) {
    worst = std::max(worst, robust_deviation(*r.hypothesis, ex.x, ex.y, perturbations));
  }
  const double m = static_cast<double>(sample.size());
  r.checks["subset_uniform"] = within(worst, eta);
  r.checks["full_error"] =
      within(r.emp_eta_error, 1.0 - static_cast<double>(fit.indices.size()) / m);
  r.timings_ms["total"] = ms_since(start);
  return r;
}

PipelineReport realizable_regression(std::span<const LabeledExample> sample,
                                     const PerturbationMap& perturbations,
                                     const RobustErm& rerm, double epsilon, double p,
                                     const PoolConfig& config, std::uint64_t seed) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw InvalidParameter("epsilon must lie in (0, 1)");
  if (!(p >= 1.0)) throw InvalidParameter("p must be at least 1");
  const double eta = std::pow(epsilon, 1.0 / p);
  PoolConfig cfg = config;
  cfg.p = p;
  PipelineReport r = improper_learn(sample, perturbations, rerm, eta, cfg, seed, epsilon);
  r.pipeline = "regress";
  const double etap = std::pow(eta, p);
  r.checks["reverse_markov"] = within(r.emp_lp_error, r.emp_eta_error * (1.0 - etap) + etap);
  return r;
}

std::vector<double> doubling_grid(std::size_t m) {
  if (m < 1) throw InvalidParameter("m must be at least 1");
  std::vector<double> grid;
  for (std::size_t num = 1; num < m; num *= 2) {
    grid.push_back(static_cast<double>(num) / static_cast<double>(m));
  }
  grid.push_back(1.0);
  return grid;
}

std::size_t min_holdout_size(double epsilon, double delta) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw InvalidParameter("epsilon must lie in (0, 1)");
  if (!(delta > 0.0 && delta < 1.0)) throw InvalidParameter("delta must lie in (0, 1)");
  return static_cast<std::size_t>(
      std::ceil(std::log(1.0 / delta) / (epsilon * epsilon) - kTolerance));
}

PipelineReport agnostic_regression(std::span<const LabeledExample> sample,
                                   std::span<const LabeledExample> holdout,
                                   const PerturbationMap& perturbations,
                                   const RobustErm& rerm, double epsilon, double delta,
                                   double p, const PoolConfig& config,
                                   std::uint64_t seed) {
  if (!(p >= 1.0)) throw InvalidParameter("p must be at least 1");
  check_sample(sample);
  const std::size_t need = min_holdout_size(epsilon, delta);
  if (holdout.size() < need) {
    throw InvalidParameter("holdout has " + std::to_string(holdout.size()) +
                           " points, needs at least " + std::to_string(need));
  }
  const auto start = Clock::now();
  PoolConfig cfg = config;
  cfg.p = p;

  std::vector<GridPoint> grid;
  std::optional<PipelineReport> best;
  std::size_t best_index = 0;
  const auto thetas = doubling_grid(sample.size());
  for (std::size_t g = 0; g < thetas.size(); ++g) {
    GridPoint pt;
    pt.theta = thetas[g];
    try {
      PipelineReport run =
          agnostic_eta_learn(sample, perturbations, rerm, pt.theta, cfg, derive_seed(seed, g));
      pt.ok = true;
      pt.holdout_error = empirical_error(*run.hypothesis, holdout, perturbations, EtaBall{pt.theta});
      pt.holdout_lp_error = lp_error(*run.hypothesis, holdout, perturbations, p);
      pt.compression_size = run.compression_size;
      pt.message = run.ok() ? "ok" : "check_failed";
      if (!best || pt.holdout_error < grid[best_index].holdout_error) {
        best = std::move(run);
        best_index = g;
      }
    } catch (const Error& e) {
      pt.ok = false;
      pt.message = e.what();
    }
    grid.push_back(std::move(pt));
  }
  if (!best) throw Error("every grid point failed");

  PipelineReport r = std::move(*best);
  r.pipeline = "agnostic-regress";
  r.epsilon = epsilon;
  r.p = p;
  r.seed = seed;
  r.selected_theta = grid[best_index].theta;
  r.holdout_error = grid[best_index].holdout_error;
  r.holdout_lp_error = grid[best_index].holdout_lp_error;
  r.grid = std::move(grid);
  r.timings_ms["total"] = ms_since(start);
  return r;
}

Setting parse_setting(const std::string& name) {
  if (name == "proper") return Setting::proper;
  if (name == "improper") return Setting::improper;
  if (name == "agnostic-eta") return Setting::agnostic_eta;
  if (name == "realizable-lp") return Setting::realizable_lp;
  if (name == "agnostic-lp") return Setting::agnostic_lp;
  throw InvalidParameter("setting must be proper, improper, agnostic-eta, realizable-lp or agnostic-lp");
}

std::string to_string(Setting s) {
  switch (s) {
    case Setting::proper:
      return "proper";
    case Setting::improper:
      return "improper";
    case Setting::agnostic_eta:
      return "agnostic-eta";
    case Setting::realizable_lp:
      return "realizable-lp";
    case Setting::agnostic_lp:
      return "agnostic-lp";
  }
  return "?";
}

double setting_scale(Setting t, double eta, double epsilon, double p) {
  if (t == Setting::realizable_lp || t == Setting::agnostic_lp) {
    if (!(epsilon > 0.0 && epsilon < 1.0)) throw InvalidParameter("epsilon must lie in (0, 1)");
    if (!(p >= 1.0)) throw InvalidParameter("p must be at least 1");
    return std::pow(epsilon, 1.0 / p);
  }
  check_eta(eta);
  return eta;
}

double sample_complexity(Setting t, int fat, int fat_star, double epsilon, double delta,
                         double c, bool include_logs) {
  if (fat < 0 || fat_star < 0) throw InvalidParameter("dimensions must be nonnegative");
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw InvalidParameter("epsilon must lie in (0, 1)");
  if (!(delta > 0.0 && delta < 1.0)) throw InvalidParameter("delta must lie in (0, 1)");
  if (!(c > 0.0)) throw InvalidParameter("c must be positive");
  int k = 1;
  switch (t) {
    case Setting::proper:
      k = 3;
      break;
    case Setting::improper:
    case Setting::realizable_lp:
      k = 1;
      break;
    case Setting::agnostic_eta:
    case Setting::agnostic_lp:
      k = 2;
      break;
  }
  const double scale = std::pow(epsilon, k);
  const double dims = static_cast<double>(fat) * static_cast<double>(fat_star);
  double lead = dims / scale;
  if (include_logs && dims > 0.0) {
    const double l = std::max(1.0, std::log(dims / epsilon));
    lead *= l * l;
  }
  return c * (lead + std::log(1.0 / delta) / scale);
}

}  // namespace robustreg
