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

#include "robustreg/io.h"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "robustreg/error.h"

namespace robustreg {
namespace {

using json = nlohmann::ordered_json;

InstanceId parse_id(const json& v, std::size_t domain_size, const std::string& field) {
  if (!v.is_number_integer() || v.get<long long>() < 0 ||
      static_cast<std::size_t>(v.get<long long>()) >= domain_size) {
    throw InvalidParameter(field + ": instance ids must be integers in [0, domain_size)");
  }
  return static_cast<InstanceId>(v.get<long long>());
}

Sample parse_labeled(const json& arr, std::size_t domain_size, const std::string& field) {
  if (!arr.is_array()) throw InvalidParameter(field + " must be an array of [id, y] pairs");
  Sample out;
  for (const auto& e : arr) {
    if (!e.is_array() || e.size() != 2 || !e[1].is_number()) {
      throw InvalidParameter(field + " must be an array of [id, y] pairs");
    }
    const double y = e[1].get<double>();
    if (!(y >= 0.0 && y <= 1.0)) throw InvalidParameter(field + ": labels must lie in [0, 1]");
    out.push_back({parse_id(e[0], domain_size, field), y});
  }
  return out;
}

json labeled_json(const Sample& s) {
  json arr = json::array();
  for (const auto& ex : s) arr.push_back(json::array({ex.x, ex.y}));
  return arr;
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream is(line);
  while (std::getline(is, cell, sep)) {
    while (!cell.empty() && (cell.back() == '\r' || cell.back() == ' ')) cell.pop_back();
    while (!cell.empty() && cell.front() == ' ') cell.erase(cell.begin());
    out.push_back(cell);
  }
  return out;
}

double parse_real(const std::string& s, const std::string& field) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size()) {
    throw InvalidParameter(field + ": '" + s + "' is not a number");
  }
  return v;
}

}  // namespace

DomainDocument parse_domain_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw InvalidParameter(std::string("malformed JSON: ") + e.what());
  }
  if (!j.is_object()) throw InvalidParameter("domain document must be a JSON object");
  DomainDocument doc;
  if (!j.contains("domain_size") || !j["domain_size"].is_number_integer() ||
      j["domain_size"].get<long long>() < 1) {
    throw InvalidParameter("domain_size must be a positive integer");
  }
  doc.domain_size = j["domain_size"].get<std::size_t>();
  if (j.contains("samples")) doc.sample = parse_labeled(j["samples"], doc.domain_size, "samples");
  if (j.contains("holdout")) doc.holdout = parse_labeled(j["holdout"], doc.domain_size, "holdout");

  if (j.contains("perturbations")) {
    const auto& p = j["perturbations"];
    if (!p.is_object()) throw InvalidParameter("perturbations must map ids to id lists");
    for (const auto& [key, val] : p.items()) {
      char* end = nullptr;
      const long long x = std::strtoll(key.c_str(), &end, 10);
      if (key.empty() || *end != '\0' || x < 0 || static_cast<std::size_t>(x) >= doc.domain_size) {
        throw InvalidParameter("perturbations: bad instance key '" + key + "'");
      }
      if (!val.is_array()) throw InvalidParameter("perturbations: entries must be id lists");
      std::vector<InstanceId> nbrs;
      for (const auto& v : val) nbrs.push_back(parse_id(v, doc.domain_size, "perturbations"));
      doc.perturbations.set(static_cast<InstanceId>(x), std::move(nbrs));
    }
  } else {
    doc.perturbations = PerturbationMap::identity(doc.domain_size);
  }

  if (j.contains("class")) {
    if (!j["class"].is_string()) throw InvalidParameter("class must be \"finite\" or \"constant\"");
    doc.class_kind = j["class"].get<std::string>();
    if (doc.class_kind != "finite" && doc.class_kind != "constant") {
      throw InvalidParameter("class must be \"finite\" or \"constant\"");
    }
  }
  if (j.contains("class_matrix")) {
    const auto& rows = j["class_matrix"];
    if (!rows.is_array() || rows.empty()) throw InvalidParameter("class_matrix must be a nonempty array");
    Matrix m(rows.size(), doc.domain_size, 0.0);
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (!rows[r].is_array() || rows[r].size() != doc.domain_size) {
        throw InvalidParameter("class_matrix rows must have domain_size entries");
      }
      for (std::size_t c = 0; c < doc.domain_size; ++c) {
        if (!rows[r][c].is_number()) throw InvalidParameter("class_matrix entries must be numbers");
        m(r, c) = rows[r][c].get<double>();
      }
    }
    std::vector<std::string> labels;
    if (j.contains("class_labels")) labels = j["class_labels"].get<std::vector<std::string>>();
    doc.finite_class.emplace(std::move(m), std::move(labels));
  }
  return doc;
}

std::string to_json(const DomainDocument& doc) {
  json j;
  j["domain_size"] = doc.domain_size;
  j["class"] = doc.class_kind;
  j["samples"] = labeled_json(doc.sample);
  j["holdout"] = labeled_json(doc.holdout);
  json p = json::object();
  for (const auto& [x, nbrs] : doc.perturbations.table()) p[std::to_string(x)] = nbrs;
  j["perturbations"] = std::move(p);
  if (doc.finite_class) {
    const Matrix& m = doc.finite_class->matrix();
    json rows = json::array();
    for (std::size_t r = 0; r < m.rows(); ++r) {
      auto row = m.row(r);
      rows.push_back(std::vector<double>(row.begin(), row.end()));
    }
    j["class_matrix"] = std::move(rows);
    j["class_labels"] = doc.finite_class->labels();
  }
  return j.dump();
}

FiniteClass parse_class_csv(const std::string& text) {
  std::istringstream is(text);
  std::string line;
  std::vector<std::vector<std::string>> lines;
  while (std::getline(is, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    lines.push_back(split(line, ','));
  }
  if (lines.size() < 2) throw InvalidParameter("class CSV needs a header and at least one row");
  const auto& header = lines[0];
  const bool labeled = !header.empty() && header[0] == "label";
  const std::size_t first = labeled ? 1 : 0;
  const std::size_t cols = header.size() - first;
  if (cols == 0) throw InvalidParameter("class CSV header lists no instances");
  for (std::size_t c = 0; c < cols; ++c) {
    if (header[first + c] != std::to_string(c)) {
      throw InvalidParameter("class CSV header must list instance ids 0..n-1 in order");
    }
  }
  Matrix m(lines.size() - 1, cols, 0.0);
  std::vector<std::string> labels;
  for (std::size_t r = 1; r < lines.size(); ++r) {
    const auto& cells = lines[r];
    if (cells.size() != header.size()) {
      throw InvalidParameter("class CSV row " + std::to_string(r) + " has the wrong width");
    }
    if (labeled) labels.push_back(cells[0]);
    for (std::size_t c = 0; c < cols; ++c) m(r - 1, c) = parse_real(cells[first + c], "class CSV");
  }
  return FiniteClass(std::move(m), std::move(labels));
}

std::unique_ptr<RobustErm> make_erm(const DomainDocument& doc) {
  if (doc.class_kind == "constant") return std::make_unique<ConstantErm>();
  if (!doc.finite_class) throw InvalidParameter("class_matrix is required for a finite class");
  if (doc.finite_class->domain_size() != doc.domain_size) {
    throw InvalidParameter("class_matrix width differs from domain_size");
  }
  return std::make_unique<FiniteClassErm>(*doc.finite_class);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidParameter("cannot open '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write '" + path + "'");
  out << contents;
  if (!out) throw Error("write to '" + path + "' failed");
}

// Shortest of %.15g / %.17g that reads back exactly.
std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.15g", v);
  if (std::strtod(buf, nullptr) != v) std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace robustreg
