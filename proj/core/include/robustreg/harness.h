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

#ifndef ROBUSTREG_HARNESS_H_
#define ROBUSTREG_HARNESS_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "robustreg/core.h"
#include "robustreg/finite_class.h"
#include "robustreg/io.h"
#include "robustreg/pipelines.h"

namespace robustreg {

enum class ClassKind {
  constants,   // class_size evenly spaced constant rows
  thresholds,  // step functions on the 1-D grid, rising and falling
  random,      // i.i.d. uniform entries
};

enum class PerturbationKind {
  identity,
  grid_ball,         // U(x) = {z : |z - x| <= radius} on the integer grid
  random_neighbors,  // x plus `radius` distinct random instances
};

struct InstanceSpec {
  ClassKind kind = ClassKind::thresholds;
  std::size_t domain_size = 40;
  std::size_t class_size = 16;
  PerturbationKind perturbation = PerturbationKind::grid_ball;
  std::size_t radius = 1;
  std::optional<std::size_t> target;  // class row; drawn from the seed if absent
  // Points are kept only if the target's worst deviation over U(x) from its
  // own label is at most this (rejection sampling).
  double fit_tolerance = 0.0;
  double noise = 0.0;  // fraction of labels replaced by uniform [0, 1] draws
  std::size_t m = 50;
  std::size_t holdout = 200;
  std::size_t rejection_factor = 200;  // draw budget per emitted point
};

struct GeneratedInstance {
  FiniteClass cls;
  PerturbationMap perturbations;
  Sample sample;
  Sample holdout;
  std::size_t target = 0;
};

// Throws InvalidParameter for a malformed spec and UnrealizableSpec when the
// rejection budget runs out.
GeneratedInstance gen_instance(const InstanceSpec& spec, std::uint64_t seed);

DomainDocument to_document(const GeneratedInstance& instance);

struct ExperimentConfig {
  InstanceSpec instance;
  // proper | improper | agnostic-eta | regress | agnostic-regress
  std::string pipeline = "improper";
  std::string oracle = "finite";  // finite | constant
  double eta = 0.25;
  double epsilon = 0.1;
  double delta = 0.05;
  double p = 1.0;
  PoolConfig pool;
  std::vector<std::size_t> m_grid{50};
  std::size_t trials = 1;
  std::uint64_t seed = 0;
};

struct ExperimentRow {
  std::size_t m = 0;
  std::size_t trial = 0;
  std::string pipeline;
  double eta = 0.0;
  double epsilon = 0.0;
  double emp_robust_err = 0.0;
  double holdout_robust_err = 0.0;
  std::size_t compression_size = 0;
  std::size_t cover_size = 0;
  double bound_realizable = 0.0;
  double bound_agnostic = 0.0;
  std::uint64_t seed = 0;
  std::string status;  // "ok", "check_failed" or "error: <what>"
};

// One row per (m, trial), sorted by (m, trial). Failures become error rows.
std::vector<ExperimentRow> run_experiment(const ExperimentConfig& config);

// Runs one pipeline by name on one instance.
PipelineReport run_pipeline(const std::string& pipeline, const GeneratedInstance& instance,
                            const RobustErm& rerm, const ExperimentConfig& config,
                            std::uint64_t seed);

std::string experiment_csv_header();
std::string experiment_csv(std::span<const ExperimentRow> rows);

// Throws InvalidParameter naming the offending field.
ExperimentConfig parse_experiment_config(const std::string& json);
InstanceSpec parse_instance_spec(const std::string& json);
PoolConfig parse_pool_config(const std::string& json);

}  // namespace robustreg

#endif  // ROBUSTREG_HARNESS_H_
