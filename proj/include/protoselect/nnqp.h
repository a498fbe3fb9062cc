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

// Non-negative quadratic maximization of
//
//   l(w) = w^T mu - 1/2 w^T K w,   w >= 0,   supp(w) within a support set L,
//
// whose optimal value is the set function f(L).

#ifndef PROTOSELECT_NNQP_H_
#define PROTOSELECT_NNQP_H_

#include <cstddef>
#include <initializer_list>
#include <vector>

#include <Eigen/Dense>

#include "protoselect/dataset.h"
#include "protoselect/errors.h"
#include "protoselect/kernel.h"

namespace protoselect {

// Distinct source indices in insertion order.
class SupportSet {
 public:
  SupportSet() = default;
  SupportSet(std::initializer_list<Index> indices);
  explicit SupportSet(const std::vector<Index>& indices);

  // Throws an input error on duplicates.
  void Add(Index index);
  bool Contains(Index index) const;
  // Position of `index` in insertion order, or size() when absent.
  std::size_t PositionOf(Index index) const;

  std::size_t size() const { return indices_.size(); }
  bool empty() const { return indices_.empty(); }
  Index operator[](std::size_t pos) const { return indices_[pos]; }
  const std::vector<Index>& indices() const { return indices_; }
  auto begin() const { return indices_.begin(); }
  auto end() const { return indices_.end(); }

  // Throws unless every index is below `dimension`.
  void CheckBounds(Index dimension) const;

  friend bool operator==(const SupportSet&, const SupportSet&) = default;

 private:
  std::vector<Index> indices_;
};

// Sparse non-negative weights over a support; zero outside it.
class WeightVector {
 public:
  WeightVector() = default;
  // Throws an input error unless weights align with the support, are
  // non-negative and finite, and the support fits in `dimension`.
  WeightVector(Index dimension, SupportSet support,
               std::vector<double> weights);

  static WeightVector Zero(Index dimension) { return {dimension, {}, {}}; }

  Index dimension() const { return dimension_; }
  const SupportSet& support() const { return support_; }
  const std::vector<double>& weights() const { return weights_; }
  // Weight of source index `index` (zero off support).
  double at(Index index) const;
  Eigen::VectorXd Dense() const;

 private:
  Index dimension_ = 0;
  SupportSet support_;
  std::vector<double> weights_;
};

struct SolverConfig {
  double kkt_tolerance = 1e-8;
  // 0 selects the default budget of 10 |L| + 100 iterations.
  std::size_t max_iterations = 0;

  void Validate() const;
  std::size_t IterationBudget(std::size_t support_size) const;
};

// Non-convergence; carries the best feasible iterate and its KKT residual.
class SolverError : public Error {
 public:
  SolverError(const std::string& message, WeightVector best, double residual)
      : Error(ErrorKind::kSolver, message),
        best_(std::move(best)),
        residual_(residual) {}

  const WeightVector& best_iterate() const { return best_; }
  double residual() const { return residual_; }

 private:
  WeightVector best_;
  double residual_;
};

double Objective(const WeightVector& w, const KernelMatrix& kernel,
                 const MeanMap& mu);

// mu - K w over all source coordinates.
Eigen::VectorXd Gradient(const WeightVector& w, const KernelMatrix& kernel,
                         const MeanMap& mu);

// Maximizes l over non-negative weights supported on `support`. Lawson-Hanson
// active-set iterations on the normal equations: each passive set is solved
// with a Cholesky factor of the restricted Gram matrix. A feasible
// `warm_start` (support contained in `support`) is improved monotonically.
//
// Throws SolverError if the iteration budget runs out.
WeightVector SolveRestricted(const KernelMatrix& kernel, const MeanMap& mu,
                             const SupportSet& support,
                             const SolverConfig& config = {},
                             const WeightVector* warm_start = nullptr);

// Convenience: f(L), the optimal value of SolveRestricted.
double SetValue(const KernelMatrix& kernel, const MeanMap& mu,
                const SupportSet& support, const SolverConfig& config = {});

// Largest violation of the KKT conditions restricted to `support`:
// |g_j| on positive weights, max(g_j, 0) on zero weights, plus any
// negativity of the weights.
double KktResidual(const WeightVector& w, const KernelMatrix& kernel,
                   const MeanMap& mu, const SupportSet& support);

}  // namespace protoselect

#endif  // PROTOSELECT_NNQP_H_
