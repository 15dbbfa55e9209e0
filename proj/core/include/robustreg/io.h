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

#ifndef ROBUSTREG_IO_H_
#define ROBUSTREG_IO_H_

#include <cstddef>
#include <memory>
#include <optional>
#include <string>

#include "robustreg/core.h"
#include "robustreg/finite_class.h"
#include "robustreg/oracles.h"

namespace robustreg {

// A problem instance as exchanged on disk:
//   {"domain_size": n,
//    "samples": [[id, y], ...],
//    "holdout": [[id, y], ...],            (optional)
//    "perturbations": {"id": [ids...], ...},
//    "class_matrix": [[h(0), ..., h(n-1)], ...],   (optional)
//    "class": "finite" | "constant"}               (optional)
struct DomainDocument {
  std::size_t domain_size = 0;
  Sample sample;
  Sample holdout;
  PerturbationMap perturbations;
  std::optional<FiniteClass> finite_class;
  std::string class_kind = "finite";
};

// Throws InvalidParameter naming the offending field.
DomainDocument parse_domain_json(const std::string& text);
std::string to_json(const DomainDocument& doc);

// One row per hypothesis; the header lists the instance ids in column order
// and an optional leading "label" column names the rows.
FiniteClass parse_class_csv(const std::string& text);

// The oracle implied by a document: a FiniteClassErm over class_matrix, or
// ConstantErm when "class" is "constant".
std::unique_ptr<RobustErm> make_erm(const DomainDocument& doc);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& contents);

// Shortest decimal text that reads back to the same double.
std::string format_double(double v);

}  // namespace robustreg

#endif  // ROBUSTREG_IO_H_
