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

#ifndef ROBUSTREG_FINITE_CLASS_H_
#define ROBUSTREG_FINITE_CLASS_H_

#include <cstddef>
#include <memory>
#include <string>
#include <vector>

#include "robustreg/core.h"
#include "robustreg/matrix.h"

namespace robustreg {

// A hypothesis class over a finite domain, stored as a |H| x |domain| matrix
// whose row h, column x is h(x). Rows handed out as Hypothesis objects share
// the matrix, so they remain valid after the class itself is gone.
class FiniteClass {
 public:
  // Throws InvalidParameter unless there is at least one row and every entry
  // lies in [0, 1]. Missing labels default to "h<row>".
  explicit FiniteClass(Matrix values, std::vector<std::string> labels = {});

  std::size_t size() const { return values_->rows(); }
  std::size_t domain_size() const { return values_->cols(); }
  const Matrix& matrix() const { return *values_; }
  const std::vector<std::string>& labels() const { return labels_; }

  double operator()(std::size_t row, InstanceId x) const {
    return (*values_)(row, x);
  }

  // Descriptor is {"finite", {row}}.
  Hypothesis hypothesis(std::size_t row) const;

 private:
  std::shared_ptr<const Matrix> values_;
  std::vector<std::string> labels_;
};

}  // namespace robustreg

#endif  // ROBUSTREG_FINITE_CLASS_H_
