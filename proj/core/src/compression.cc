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

#include "robustreg/compression.h"

#include <algorithm>
#include <cmath>

#include "json.hpp"
#include "robustreg/error.h"

namespace robustreg {
namespace {

using ordered_json = nlohmann::ordered_json;

Aggregation parse_aggregation(const std::string& name) {
  if (name == "weighted_median") return Aggregation::weighted_median;
  if (name == "median") return Aggregation::median;
  if (name == "average") return Aggregation::average;
  throw InvalidParameter("unknown aggregation '" + name + "'");
}

// Groups are stored padded; the fit set is the distinct indices.
Sample group_points(const std::vector<std::size_t>& group,
                    std::span<const LabeledExample> sample) {
  std::vector<std::size_t> idx = group;
  std::sort(idx.begin(), idx.end());
  idx.erase(std::unique(idx.begin(), idx.end()), idx.end());
  Sample out;
  out.reserve(idx.size());
  for (std::size_t i : idx) {
    if (i >= sample.size()) throw ReconstructionFailed("group index out of range");
    out.push_back(sample[i]);
  }
  return out;
}

}  // namespace

std::size_t CompressionScheme::size() const {
  std::size_t n = 0;
  for (const auto& g : groups) n += g.size();
  return n;
}

std::string CompressionScheme::to_json() const {
  ordered_json j;
  j["eta"] = eta;
  j["aggregation"] = robustreg::to_string(aggregation);
  j["groups"] = groups;
  if (alphas) {
    j["alphas"] = *alphas;
  } else {
    j["alphas"] = nullptr;
  }
  j["rerm_eta"] = rerm_eta;
  return j.dump();
}

CompressionScheme CompressionScheme::from_json(const std::string& text) {
  ordered_json j;
  try {
    j = ordered_json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw InvalidParameter(std::string("scheme JSON: ") + e.what());
  }
  CompressionScheme s;
  try {
    s.eta = j.at("eta").get<double>();
    s.aggregation = parse_aggregation(j.at("aggregation").get<std::string>());
    s.groups = j.at("groups").get<std::vector<std::vector<std::size_t>>>();
    if (j.contains("alphas") && !j["alphas"].is_null()) {
      s.alphas = j["alphas"].get<std::vector<double>>();
    }
    s.rerm_eta = j.contains("rerm_eta") ? j["rerm_eta"].get<double>()
                                        : default_rerm_eta(s.aggregation, s.eta);
  } catch (const nlohmann::json::exception& e) {
    throw InvalidParameter(std::string("scheme JSON: ") + e.what());
  }
  if (s.groups.empty()) throw InvalidParameter("scheme has no groups");
  if (s.alphas && s.alphas->size() != s.groups.size()) {
    throw InvalidParameter("scheme alphas do not match its groups");
  }
  return s;
}

double default_rerm_eta(Aggregation aggregation, double eta) {
  return aggregation == Aggregation::average ? eta / 4.0 : eta / 8.0;
}

CompressionScheme compress(const WeightedEnsemble& ensemble,
                           std::span<const LabeledExample> sample, double eta,
                           std::optional<double> rerm_eta) {
  ensemble.validate();
  std::size_t d = ensemble.group_size;
  for (const auto& src : ensemble.sources) {
    if (src.empty()) throw NotCompressible("ensemble member has no source points");
    for (std::size_t i : src) {
      if (i >= sample.size()) throw NotCompressible("source index outside the sample");
    }
    d = std::max(d, src.size());
  }
  CompressionScheme s;
  s.eta = eta;
  s.aggregation = ensemble.aggregation;
  s.rerm_eta = rerm_eta.value_or(default_rerm_eta(ensemble.aggregation, eta));
  for (const auto& src : ensemble.sources) {
    auto g = src;
    g.resize(d, src.back());
    s.groups.push_back(std::move(g));
  }
  if (ensemble.aggregation == Aggregation::weighted_median) s.alphas = ensemble.alphas;
  return s;
}

WeightedEnsemble reconstruct_ensemble(const CompressionScheme& scheme,
                                      std::span<const LabeledExample> sample,
                                      const RobustErm& rerm,
                                      const PerturbationMap& perturbations) {
  if (scheme.groups.empty()) throw InvalidParameter("scheme has no groups");
  WeightedEnsemble e;
  e.aggregation = scheme.aggregation;
  for (std::size_t t = 0; t < scheme.groups.size(); ++t) {
    const auto& g = scheme.groups[t];
    if (g.empty()) throw ReconstructionFailed("empty group");
    e.group_size = std::max(e.group_size, g.size());
    const Sample pts = group_points(g, sample);
    try {
      e.members.push_back(rerm.fit(pts, perturbations, scheme.rerm_eta));
    } catch (const Infeasible& err) {
      throw ReconstructionFailed("group " + std::to_string(t) + " is infeasible: " + err.what());
    } catch (const MissingPerturbation& err) {
      throw ReconstructionFailed(std::string("group ") + std::to_string(t) + ": " + err.what());
    }
    e.alphas.push_back(scheme.alphas ? (*scheme.alphas)[t] : 1.0);
    std::vector<std::size_t> src = g;
    std::sort(src.begin(), src.end());
    src.erase(std::unique(src.begin(), src.end()), src.end());
    e.sources.push_back(std::move(src));
  }
  e.validate();
  return e;
}

Hypothesis reconstruct(const CompressionScheme& scheme,
                       std::span<const LabeledExample> sample, const RobustErm& rerm,
                       const PerturbationMap& perturbations) {
  return reconstruct_ensemble(scheme, sample, rerm, perturbations).as_hypothesis();
}

Approximation verify_approximation(const Hypothesis& h,
                                   std::span<const LabeledExample> sample,
                                   const PerturbationMap& perturbations, double eta) {
  if (sample.empty()) throw EmptySample();
  Approximation a;
  std::size_t bad = 0;
  for (const auto& ex : sample) {
    const double dev = robust_deviation(h, ex.x, ex.y, perturbations);
    a.max_deviation = std::max(a.max_deviation, dev);
    if (reaches(dev, eta)) ++bad;
  }
  a.rate = static_cast<double>(bad) / static_cast<double>(sample.size());
  a.uniform = bad == 0;
  return a;
}

double generalization_bound(BoundKind kind, std::size_t k, std::size_t m, double delta,
                            double empirical, double c) {
  if (k < 1 || 2 * k > m) throw InvalidParameter("k must satisfy 1 <= k <= m/2");
  if (!(delta > 0.0 && delta < 1.0)) throw InvalidParameter("delta must lie in (0, 1)");
  if (!(empirical >= 0.0 && empirical <= 1.0)) {
    throw InvalidParameter("empirical error must lie in [0, 1]");
  }
  if (!(c > 0.0)) throw InvalidParameter("c must be positive");
  const double md = static_cast<double>(m);
  const double r = (static_cast<double>(k) * std::log(md) + std::log(1.0 / delta)) / md;
  switch (kind) {
    case BoundKind::realizable:
      return c * r;
    case BoundKind::agnostic:
      return c * std::sqrt(r);
    case BoundKind::bernstein:
      return c * (std::sqrt(empirical * r) + r);
  }
  return c * r;
}

BoundKind parse_bound_kind(const std::string& name) {
  if (name == "realizable") return BoundKind::realizable;
  if (name == "agnostic") return BoundKind::agnostic;
  if (name == "bernstein") return BoundKind::bernstein;
  throw InvalidParameter("unknown bound kind '" + name + "'");
}

}  // namespace robustreg
