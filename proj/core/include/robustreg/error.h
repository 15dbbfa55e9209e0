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

#ifndef ROBUSTREG_ERROR_H_
#define ROBUSTREG_ERROR_H_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace robustreg {

// Base of every error raised by the library. Callers that only need to
// distinguish "bad input" from "the algorithm gave up" can catch
// InvalidParameter separately and treat everything else as a runtime failure.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidParameter : public Error {
 public:
  using Error::Error;
};

class MissingPerturbation : public Error {
 public:
  explicit MissingPerturbation(std::size_t instance)
      : Error("no perturbation entry for instance " + std::to_string(instance)),
        instance_(instance) {}
  std::size_t instance() const { return instance_; }

 private:
  std::size_t instance_;
};

class EmptySample : public Error {
 public:
  EmptySample() : Error("sample is empty") {}
};

// No hypothesis satisfies the robust fitting constraint. `gap` is the
// smallest worst-case deviation any candidate achieved (finite classes) or
// the width by which the feasible interval is empty (constants).
class Infeasible : public Error {
 public:
  Infeasible(const std::string& what, double gap) : Error(what), gap_(gap) {}
  double gap() const { return gap_; }

 private:
  double gap_;
};

class CapExceeded : public Error {
 public:
  using Error::Error;
};

class DegenerateWeights : public Error {
 public:
  DegenerateWeights() : Error("weights sum to zero") {}
};

class LearnerNotFound : public Error {
 public:
  LearnerNotFound(const std::string& what, double best_mass)
      : Error(what), best_mass_(best_mass) {}
  // Smallest error mass reached by any attempt.
  double best_mass() const { return best_mass_; }

 private:
  double best_mass_;
};

class WeakLearnerNotFound : public LearnerNotFound {
 public:
  explicit WeakLearnerNotFound(double best_mass)
      : LearnerNotFound("no weak learner found within the retry budget",
                        best_mass) {}
};

class StrongLearnerNotFound : public LearnerNotFound {
 public:
  explicit StrongLearnerNotFound(double best_mass)
      : LearnerNotFound("no strong learner found within the retry budget",
                        best_mass) {}
};

class NotCompressible : public Error {
 public:
  using Error::Error;
};

class ReconstructionFailed : public Error {
 public:
  using Error::Error;
};

class SparsifyFailed : public Error {
 public:
  explicit SparsifyFailed(std::size_t best_violations)
      : Error("sparsification did not certify within the iteration budget"),
        best_violations_(best_violations) {}
  // Fewest points failing the majority test over all draws.
  std::size_t best_violations() const { return best_violations_; }

 private:
  std::size_t best_violations_;
};

class EmptyPool : public Error {
 public:
  EmptyPool() : Error("every pool subset was infeasible") {}
};

class UnrealizableSpec : public Error {
 public:
  using Error::Error;
};

}  // namespace robustreg

#endif  // ROBUSTREG_ERROR_H_
