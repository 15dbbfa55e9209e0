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

#ifndef ROBUSTREG_DIMENSIONS_H_
#define ROBUSTREG_DIMENSIONS_H_

#include <cstddef>
#include <vector>

#include "robustreg/finite_class.h"
#include "robustreg/matrix.h"

namespace robustreg {

// Limits on the exact fat-shattering search.
struct FatCaps {
  std::size_t max_points = 16;
  std::size_t max_hypotheses = 256;
  // Search nodes visited before giving up.
  std::size_t max_nodes = 2000000;
};

// Size of the largest set of columns gamma-shattered by the rows of `values`.
// The witness level at each column is searched over the finitely many
// thresholds that change which rows sit above/below it, so the result is
// exact. Throws CapExceeded when the matrix is larger than `caps` or the
// search visits more than caps.max_nodes nodes, and
// InvalidParameter for gamma <= 0.
int fat_shattering(const Matrix& values, double gamma, FatCaps caps = {});
int fat_shattering(const FiniteClass& cls, double gamma, FatCaps caps = {});

// Transpose view: each instance becomes a function over the class.
FiniteClass dual_class(const FiniteClass& cls);
int dual_fat_shattering(const FiniteClass& cls, double gamma, FatCaps caps = {});

// c * (1/gamma) * 2^(fat_half_scale + 1).
double dual_fat_upper_bound(int fat_half_scale, double gamma, double c = 1.0);

struct Cover {
  std::vector<std::size_t> centers;     // row indices into the point set
  std::vector<std::size_t> assignment;  // center index (into points) per point
};

// Internal d_inf cover: centers are input rows and every row lies within t of
// its assigned center. Greedy: repeatedly take the row that covers the most
// still-uncovered rows (lowest index on ties).
Cover greedy_cover(const Matrix& points, double t);

// Minimum-cardinality internal cover by exhaustive search. Throws
// CapExceeded above `max_points` rows.
Cover exact_min_cover(const Matrix& points, double t, std::size_t max_points = 12);

// True iff every row is within t of its assigned center and every assigned
// center is listed in `cover.centers`.
bool verify_cover(const Matrix& points, const Cover& cover, double t);

// exp(C * v * log(n / (v t)) * log^a(2n / v)): the d_inf covering-number
// bound for a class of fat-shattering dimension v on n points. Requires
// 0 < t < 1/2, 0 < a < 1, v >= 1 and n >= v.
double cover_size_bound(std::size_t n, double t, int v, double C, double a);

}  // namespace robustreg

#endif  // ROBUSTREG_DIMENSIONS_H_
