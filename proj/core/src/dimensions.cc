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

#include "robustreg/dimensions.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>

#include "robustreg/core.h"
#include "robustreg/error.h"

namespace robustreg {
namespace {

using Word = std::uint64_t;

// A witness choice at one column: the rows that sit at least gamma above it
// and the rows that sit at least gamma below it.
struct Cut {
  std::vector<Word> high;
  std::vector<Word> low;
};

// Depth-first search over increasing column sets. The state is the partition
// of rows by sign pattern on the chosen columns ("cells"); a column/cut pair
// extends the set iff it splits every cell into two nonempty halves.
class FatSearch {
 public:
  FatSearch(const Matrix& values, double gamma, std::size_t max_nodes)
      : max_nodes_(max_nodes),
        rows_(values.rows()),
        cols_(values.cols()),
        words_((values.rows() + 63) / 64),
        limit_(std::min<int>(static_cast<int>(cols_),
                             static_cast<int>(std::bit_width(rows_)) - 1)) {
    cuts_.resize(cols_);
    std::vector<double> distinct;
    for (std::size_t c = 0; c < cols_; ++c) {
      distinct.clear();
      for (std::size_t r = 0; r < rows_; ++r) distinct.push_back(values(r, c));
      std::sort(distinct.begin(), distinct.end());
      distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
      // The witness can always be lowered to (largest "low" value) + gamma,
      // so one cut per distinct value is exhaustive.
      for (double v : distinct) {
        Cut cut{std::vector<Word>(words_, 0), std::vector<Word>(words_, 0)};
        bool any_high = false;
        for (std::size_t r = 0; r < rows_; ++r) {
          const double x = values(r, c);
          if (x <= v) cut.low[r / 64] |= Word{1} << (r % 64);
          if (x - v >= 2.0 * gamma - kTolerance) {
            cut.high[r / 64] |= Word{1} << (r % 64);
            any_high = true;
          }
        }
        if (any_high) cuts_[c].push_back(std::move(cut));
      }
    }
  }

  int run() {
    if (rows_ == 0 || cols_ == 0) return 0;
    std::vector<Word> all(words_, 0);
    for (std::size_t r = 0; r < rows_; ++r) all[r / 64] |= Word{1} << (r % 64);
    dfs(0, 0, all);
    return best_;
  }

 private:
  std::size_t popcount(const Word* cell) const {
    std::size_t n = 0;
    for (std::size_t w = 0; w < words_; ++w) n += std::popcount(cell[w]);
    return n;
  }

  void dfs(int depth, std::size_t start, const std::vector<Word>& cells) {
    if (++nodes_ > max_nodes_) {
      throw CapExceeded("fat-shattering search exceeded " + std::to_string(max_nodes_) + " nodes");
    }
    best_ = std::max(best_, depth);
    if (best_ >= limit_) return;
    const std::size_t n_cells = cells.size() / words_;
    std::size_t min_pop = std::numeric_limits<std::size_t>::max();
    for (std::size_t k = 0; k < n_cells; ++k) {
      min_pop = std::min(min_pop, popcount(&cells[k * words_]));
    }
    // A cell of size s survives at most floor(log2 s) more splits.
    const int split_bound = depth + static_cast<int>(std::bit_width(min_pop)) - 1;
    if (split_bound <= best_) return;

    std::vector<Word> next(2 * cells.size());
    for (std::size_t c = start; c < cols_; ++c) {
      if (depth + static_cast<int>(cols_ - c) <= best_) return;
      for (const Cut& cut : cuts_[c]) {
        bool ok = true;
        for (std::size_t k = 0; k < n_cells && ok; ++k) {
          const Word* cell = &cells[k * words_];
          Word* hi = &next[(2 * k) * words_];
          Word* lo = &next[(2 * k + 1) * words_];
          Word any_hi = 0;
          Word any_lo = 0;
          for (std::size_t w = 0; w < words_; ++w) {
            hi[w] = cell[w] & cut.high[w];
            lo[w] = cell[w] & cut.low[w];
            any_hi |= hi[w];
            any_lo |= lo[w];
          }
          ok = any_hi != 0 && any_lo != 0;
        }
        if (!ok) continue;
        dfs(depth + 1, c + 1, next);
        if (best_ >= limit_ || split_bound <= best_) return;
      }
    }
  }

  std::size_t max_nodes_;
  std::size_t nodes_ = 0;
  std::size_t rows_;
  std::size_t cols_;
  std::size_t words_;
  int limit_;
  int best_ = 0;
  std::vector<std::vector<Cut>> cuts_;
};

}  // namespace

int fat_shattering(const Matrix& values, double gamma, FatCaps caps) {
  if (!(gamma > 0.0)) throw InvalidParameter("gamma must be positive");
  if (values.cols() > caps.max_points || values.rows() > caps.max_hypotheses) {
    throw CapExceeded("fat-shattering search capped at " +
                      std::to_string(caps.max_points) + " points and " +
                      std::to_string(caps.max_hypotheses) + " hypotheses, got " +
                      std::to_string(values.cols()) + " x " +
                      std::to_string(values.rows()));
  }
  return FatSearch(values, gamma, caps.max_nodes).run();
}

int fat_shattering(const FiniteClass& cls, double gamma, FatCaps caps) {
  return fat_shattering(cls.matrix(), gamma, caps);
}

FiniteClass dual_class(const FiniteClass& cls) {
  return FiniteClass(cls.matrix().transposed());
}

int dual_fat_shattering(const FiniteClass& cls, double gamma, FatCaps caps) {
  return fat_shattering(cls.matrix().transposed(), gamma, caps);
}

double dual_fat_upper_bound(int fat_half_scale, double gamma, double c) {
  if (!(gamma > 0.0 && gamma <= 1.0)) throw InvalidParameter("gamma must lie in (0, 1]");
  if (!(c > 0.0)) throw InvalidParameter("c must be positive");
  if (fat_half_scale < 0) throw InvalidParameter("fat must be nonnegative");
  return c / gamma * std::ldexp(1.0, fat_half_scale + 1);
}

Cover greedy_cover(const Matrix& points, double t) {
  if (!(t > 0.0)) throw InvalidParameter("cover radius must be positive");
  const std::size_t n = points.rows();
  Cover cover;
  cover.assignment.assign(n, 0);
  if (n == 0) return cover;

  std::vector<std::vector<std::uint32_t>> ball(n);
  for (std::size_t i = 0; i < n; ++i) {
    ball[i].push_back(static_cast<std::uint32_t>(i));
    for (std::size_t j = i + 1; j < n; ++j) {
      if (within(linf_distance(points.row(i), points.row(j)), t)) {
        ball[i].push_back(static_cast<std::uint32_t>(j));
        ball[j].push_back(static_cast<std::uint32_t>(i));
      }
    }
  }

  std::vector<std::size_t> gain(n);
  for (std::size_t i = 0; i < n; ++i) gain[i] = ball[i].size();
  std::vector<bool> covered(n, false);
  std::size_t remaining = n;
  while (remaining > 0) {
    std::size_t center = 0;
    for (std::size_t i = 1; i < n; ++i) {
      if (gain[i] > gain[center]) center = i;
    }
    cover.centers.push_back(center);
    for (std::uint32_t q : ball[center]) {
      if (covered[q]) continue;
      covered[q] = true;
      cover.assignment[q] = center;
      --remaining;
      for (std::uint32_t p : ball[q]) --gain[p];
    }
  }
  return cover;
}

Cover exact_min_cover(const Matrix& points, double t, std::size_t max_points) {
  if (!(t > 0.0)) throw InvalidParameter("cover radius must be positive");
  const std::size_t n = points.rows();
  if (n > max_points || n > 20) {
    throw CapExceeded("exact cover capped at " + std::to_string(max_points) + " points");
  }
  Cover cover;
  cover.assignment.assign(n, 0);
  if (n == 0) return cover;
  std::vector<std::uint32_t> ball(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (within(linf_distance(points.row(i), points.row(j)), t)) ball[i] |= 1u << j;
    }
  }
  const std::uint32_t full = (n == 32) ? ~0u : ((1u << n) - 1);
  std::uint32_t best = full;
  for (std::size_t size = 1; size <= n && best == full; ++size) {
    for (std::uint32_t mask = 1; mask <= full; ++mask) {
      if (static_cast<std::size_t>(std::popcount(mask)) != size) continue;
      std::uint32_t reach = 0;
      for (std::size_t i = 0; i < n; ++i) {
        if (mask & (1u << i)) reach |= ball[i];
      }
      if (reach == full) {
        best = mask;
        break;
      }
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (best & (1u << i)) cover.centers.push_back(i);
  }
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t c : cover.centers) {
      if (ball[c] & (1u << j)) {
        cover.assignment[j] = c;
        break;
      }
    }
  }
  return cover;
}

bool verify_cover(const Matrix& points, const Cover& cover, double t) {
  if (cover.assignment.size() != points.rows()) return false;
  for (std::size_t i = 0; i < points.rows(); ++i) {
    const std::size_t c = cover.assignment[i];
    if (c >= points.rows()) return false;
    if (std::find(cover.centers.begin(), cover.centers.end(), c) == cover.centers.end()) {
      return false;
    }
    if (!within(linf_distance(points.row(i), points.row(c)), t)) return false;
  }
  return true;
}

double cover_size_bound(std::size_t n, double t, int v, double C, double a) {
  if (!(t > 0.0 && t < 0.5)) throw InvalidParameter("t must lie in (0, 1/2)");
  if (!(a > 0.0 && a < 1.0)) throw InvalidParameter("a must lie in (0, 1)");
  if (v < 1) throw InvalidParameter("v must be at least 1");
  if (n < static_cast<std::size_t>(v)) throw InvalidParameter("n must be at least v");
  if (!(C > 0.0)) throw InvalidParameter("C must be positive");
  const double nd = static_cast<double>(n);
  const double vd = static_cast<double>(v);
  return std::exp(C * vd * std::log(nd / (vd * t)) * std::pow(std::log(2.0 * nd / vd), a));
}

}  // namespace robustreg
