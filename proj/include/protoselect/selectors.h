// Copyright 2026 The Protoselect Authors.
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

// Greedy prototype selectors over a fixed (K, mu) instance.
//
// ProtoGreedy adds the candidate with the largest increase of f; ProtoDash
// adds the candidate with the largest gradient of l at the current optimal
// weights. Both re-solve the weights after every addition. The remaining
// selectors are baselines: uniform-weight greedy (L2C / L2C-A) and random
// supports with learned weights (RandomW).

#ifndef PROTOSELECT_SELECTORS_H_
#define PROTOSELECT_SELECTORS_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "protoselect/kernel.h"
#include "protoselect/nnqp.h"

namespace protoselect {

enum class Method {
  kProtoDash,
  kProtoGreedy,
  kL2cEqual,
  kL2cAdapted,
  kRandomW,
};

const char* MethodName(Method method);
// Accepts the CLI spellings (dash, greedy, l2c, l2c-a, random) as well as
// the names returned by MethodName. Throws an input error otherwise.
Method ParseMethod(const std::string& name);

struct SelectionConfig {
  // Exactly one of `sparsity` and `min_increase` is set.
  std::optional<std::size_t> sparsity;
  std::optional<double> min_increase;
  SolverConfig solver;
  std::uint64_t seed = 0;
  std::size_t oversample = 1;
  std::size_t threads = 1;

  static SelectionConfig Sparsity(std::size_t m) {
    SelectionConfig config;
    config.sparsity = m;
    return config;
  }
  static SelectionConfig MinIncrease(double epsilon) {
    SelectionConfig config;
    config.min_increase = epsilon;
    return config;
  }

  void Validate(Index n2) const;
};

struct SelectionResult {
  Method method = Method::kProtoDash;
  // Selection order.
  SupportSet indices;
  WeightVector weights;
  // f(L_1), ..., f(L_t) for the prefixes of `indices`.
  std::vector<double> objective_trace;
  // Gradient of l at the previous weights, at the coordinate added.
  std::vector<double> gradient_trace;
  // Seconds spent on each step.
  std::vector<double> wall_times;
  // L2C only: l at the uniform weights 1/t on each prefix.
  std::vector<double> uniform_objective_trace;
  // Fewer than m prototypes because every remaining gradient was <= 0.
  bool stopped_early = false;
  std::size_t oversample = 1;

  double objective() const {
    return objective_trace.empty() ? 0.0 : objective_trace.back();
  }
};

// A selector hit a solver failure. `partial()` holds the steps completed
// before the failing one.
class SelectionError : public Error {
 public:
  SelectionError(const SolverError& cause, SelectionResult partial)
      : Error(ErrorKind::kSolver, cause.what()), partial_(std::move(partial)) {}

  const SelectionResult& partial() const { return partial_; }

 private:
  SelectionResult partial_;
};

SelectionResult ProtoDash(const KernelMatrix& kernel, const MeanMap& mu,
                          const SelectionConfig& config);
SelectionResult ProtoGreedy(const KernelMatrix& kernel, const MeanMap& mu,
                            const SelectionConfig& config);
// Uniform-weight greedy. Sparsity termination only.
SelectionResult L2cEqual(const KernelMatrix& kernel, const MeanMap& mu,
                         const SelectionConfig& config);
// Same procedure as L2cEqual; `mu` is expected to come from a target that
// differs from the source.
SelectionResult L2cAdapted(const KernelMatrix& kernel, const MeanMap& mu,
                           const SelectionConfig& config);
SelectionResult RandomW(const KernelMatrix& kernel, const MeanMap& mu,
                        const SelectionConfig& config);

// Keeps the m largest weights (ties go to the earlier selection), then
// re-solves the weights on the kept support, retaining selection order.
SelectionResult TopMByWeight(const SelectionResult& result, std::size_t m,
                             const KernelMatrix& kernel, const MeanMap& mu,
                             const SolverConfig& solver = {});

// Dispatches on `method`; with oversample r > 1 selects r*m (capped at n2)
// and truncates to m by weight.
SelectionResult Select(Method method, const KernelMatrix& kernel,
                       const MeanMap& mu, const SelectionConfig& config);

struct CriticismResult {
  std::vector<Index> indices;
  // |mu_j - K_j. w|, non-increasing.
  std::vector<double> scores;
};

CriticismResult Criticisms(const SelectionResult& result,
                           const KernelMatrix& kernel, const MeanMap& mu,
                           std::size_t count);

}  // namespace protoselect

#endif  // PROTOSELECT_SELECTORS_H_
