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

#include <cstdint>

#include <benchmark/benchmark.h>

#include "robustreg/boosting.h"
#include "robustreg/dimensions.h"
#include "robustreg/harness.h"
#include "robustreg/matrix.h"
#include "robustreg/oracles.h"
#include "robustreg/pipelines.h"
#include "robustreg/rng.h"

namespace {

using namespace robustreg;

Matrix random_matrix(std::size_t rows, std::size_t cols, std::uint64_t seed) {
  Rng rng(seed);
  Matrix m(rows, cols, 0.0);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) m(r, c) = rng.uniform();
  }
  return m;
}

void BM_FatShattering(benchmark::State& state) {
  const auto h = static_cast<std::size_t>(state.range(0));
  const auto n = static_cast<std::size_t>(state.range(1));
  const Matrix m = random_matrix(h, n, 7);
  for (auto _ : state) benchmark::DoNotOptimize(fat_shattering(m, 0.1, {64, 4096, SIZE_MAX}));
}
BENCHMARK(BM_FatShattering)->Args({32, 6})->Args({64, 8})->Args({128, 10});

void BM_GreedyCover(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const Matrix m = random_matrix(n, 50, 11);
  for (auto _ : state) benchmark::DoNotOptimize(greedy_cover(m, 0.35));
}
BENCHMARK(BM_GreedyCover)->Arg(50)->Arg(200)->Arg(800);

void BM_ImproperLearn(benchmark::State& state) {
  InstanceSpec spec;
  spec.m = static_cast<std::size_t>(state.range(0));
  const GeneratedInstance inst = gen_instance(spec, 3);
  const FiniteClassErm rerm(inst.cls);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        improper_learn(inst.sample, inst.perturbations, rerm, 0.25, PoolConfig{}, 5));
  }
}
BENCHMARK(BM_ImproperLearn)->Arg(50)->Arg(200)->Unit(benchmark::kMillisecond);

void BM_MedBoost(benchmark::State& state) {
  InstanceSpec spec;
  spec.m = static_cast<std::size_t>(state.range(0));
  const GeneratedInstance inst = gen_instance(spec, 9);
  const FiniteClassErm rerm(inst.cls);
  const auto cover = inflate(inst.sample, inst.perturbations);
  MedBoostConfig cfg;
  cfg.rounds = 16;
  cfg.weak.subset_size = 4;
  for (auto _ : state) {
    benchmark::DoNotOptimize(medboost(cover, inst.sample, inst.perturbations, 0.25, rerm, cfg, 1));
  }
}
BENCHMARK(BM_MedBoost)->Arg(60)->Arg(240)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
