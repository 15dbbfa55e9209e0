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

#ifndef ROBUSTREG_CORE_H_
#define ROBUSTREG_CORE_H_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace robustreg {

// Absolute slack used whenever a deviation is compared against a scale.
// Labels are decimal, so |h(z) - y| == eta in exact arithmetic routinely
// lands one ulp either side; both the fitting test (<= eta) and the loss
// test (>= eta) absorb that by the same amount.
inline constexpr double kTolerance = 1e-12;

inline bool within(double deviation, double scale) {
  return deviation <= scale + kTolerance;
}
inline bool reaches(double deviation, double scale) {
  return deviation >= scale - kTolerance;
}
inline bool exceeds(double deviation, double scale) {
  return deviation > scale + kTolerance;
}

// Index of an instance in a finite domain.
using InstanceId = std::uint32_t;

struct LabeledExample {
  InstanceId x = 0;
  double y = 0.0;

  friend bool operator==(const LabeledExample&, const LabeledExample&) = default;
};

using Sample = std::vector<LabeledExample>;

// A perturbed point with the label of the lowest-index sample point whose
// perturbation set contains it.
struct InflatedExample {
  InstanceId z = 0;
  double y = 0.0;
  std::size_t origin = 0;

  friend bool operator==(const InflatedExample&, const InflatedExample&) = default;
};

// Finite set-valued map x -> U(x). Every list contains its own key, is
// nonempty and has no duplicates.
class PerturbationMap {
 public:
  PerturbationMap() = default;

  // Identity perturbation on {0, ..., domain_size - 1}.
  static PerturbationMap identity(std::size_t domain_size);

  // Throws InvalidParameter if the list violates the invariants.
  void set(InstanceId x, std::vector<InstanceId> neighbors);

  bool contains(InstanceId x) const { return table_.contains(x); }
  // Throws MissingPerturbation.
  std::span<const InstanceId> at(InstanceId x) const;

  std::size_t size() const { return table_.size(); }
  std::size_t max_set_size() const;
  const std::map<InstanceId, std::vector<InstanceId>>& table() const {
    return table_;
  }

  friend bool operator==(const PerturbationMap&, const PerturbationMap&) = default;

 private:
  std::map<InstanceId, std::vector<InstanceId>> table_;
};

// Identifies a hypothesis well enough to test equality and to rebuild it.
struct Descriptor {
  std::string family;
  std::vector<double> params;

  friend bool operator==(const Descriptor&, const Descriptor&) = default;
  std::string to_string() const;
};

// A deterministic map from instances to [0, 1].
class Hypothesis {
 public:
  using Evaluator = std::function<double(InstanceId)>;

  Hypothesis(Descriptor descriptor, Evaluator evaluator)
      : descriptor_(std::move(descriptor)), evaluator_(std::move(evaluator)) {}

  double operator()(InstanceId x) const { return evaluator_(x); }
  const Descriptor& descriptor() const { return descriptor_; }

 private:
  Descriptor descriptor_;
  Evaluator evaluator_;
};

Hypothesis constant_hypothesis(double value);

// eta-ball robust loss: indicator that the worst deviation over U(x) is at
// least eta.
struct EtaBall {
  double eta = 0.0;
};
// l_p robust loss: worst deviation over U(x), raised to p.
struct Lp {
  double p = 1.0;
};
using LossMode = std::variant<EtaBall, Lp>;

// Builds S_U. Each reachable perturbed point appears once, labeled by its
// lowest-index origin. Output is ordered by origin, then instance id.
std::vector<InflatedExample> inflate(std::span<const LabeledExample> sample,
                                     const PerturbationMap& perturbations);

// Every (z, y_i, i) with z in U(x_i), without merging across origins. This is
// the set on which the robust loss of the sample is actually evaluated.
std::vector<InflatedExample> robust_pairs(std::span<const LabeledExample> sample,
                                          const PerturbationMap& perturbations);

// max over z in U(x) of |h(z) - y|.
double robust_deviation(const Hypothesis& h, InstanceId x, double y,
                        const PerturbationMap& perturbations);

double robust_loss(const Hypothesis& h, const LabeledExample& example,
                   const PerturbationMap& perturbations, const LossMode& mode);

// Mean robust loss. Throws EmptySample.
double empirical_error(const Hypothesis& h, std::span<const LabeledExample> sample,
                       const PerturbationMap& perturbations, const LossMode& mode);

// Validates the parameter of a loss mode: eta in (0, 1], p >= 1.
void validate(const LossMode& mode);

}  // namespace robustreg

#endif  // ROBUSTREG_CORE_H_
