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

#ifndef PROTOSELECT_SRC_CHOLESKY_H_
#define PROTOSELECT_SRC_CHOLESKY_H_

#include <cmath>
#include <cstddef>
#include <vector>

#include <Eigen/Dense>

namespace protoselect::internal {

// Lower Cholesky factor of a principal submatrix of `gram`, grown one
// row/column at a time. Removal rebuilds from scratch.
class IncrementalCholesky {
 public:
  explicit IncrementalCholesky(const Eigen::MatrixXd& gram)
      : gram_(gram), lower_(gram.rows(), gram.cols()) {}

  std::size_t size() const { return order_.size(); }
  const std::vector<std::size_t>& order() const { return order_; }

  // Returns false (leaving the factor untouched) when the extended matrix is
  // not numerically positive definite.
  bool Append(std::size_t index) {
    const auto k = static_cast<Eigen::Index>(order_.size());
    Eigen::VectorXd col(k);
    for (Eigen::Index i = 0; i < k; ++i) col(i) = gram_(order_[i], index);
    if (k > 0) {
      lower_.topLeftCorner(k, k).triangularView<Eigen::Lower>().solveInPlace(
          col);
    }
    const double pivot = gram_(index, index) - col.squaredNorm();
    if (!(pivot > kPivotFloor * gram_(index, index)) || !(pivot > 0)) {
      return false;
    }
    lower_.block(k, 0, 1, k) = col.transpose();
    lower_(k, k) = std::sqrt(pivot);
    order_.push_back(index);
    return true;
  }

  void Reset(const std::vector<std::size_t>& order) {
    order_.clear();
    for (std::size_t index : order) Append(index);
  }

  // Solves G_PP z = rhs_P for the current order P, with one refinement step.
  Eigen::VectorXd Solve(const Eigen::VectorXd& rhs) const {
    const auto k = static_cast<Eigen::Index>(order_.size());
    Eigen::VectorXd b(k);
    for (Eigen::Index i = 0; i < k; ++i) b(i) = rhs(order_[i]);
    Eigen::VectorXd z = SolveFactored(b);
    Eigen::VectorXd residual = b;
    for (Eigen::Index i = 0; i < k; ++i) {
      for (Eigen::Index j = 0; j < k; ++j) {
        residual(i) -= gram_(order_[i], order_[j]) * z(j);
      }
    }
    z += SolveFactored(residual);
    return z;
  }

  // Solves G_PP y = b where b is already in factor order.
  Eigen::VectorXd SolveFactored(const Eigen::VectorXd& b) const {
    const auto k = static_cast<Eigen::Index>(order_.size());
    Eigen::VectorXd y = b;
    const auto lower = lower_.topLeftCorner(k, k).triangularView<Eigen::Lower>();
    lower.solveInPlace(y);
    lower.transpose().solveInPlace(y);
    return y;
  }

  // Forward substitution only: L^{-1} b.
  Eigen::VectorXd ForwardSolve(const Eigen::VectorXd& b) const {
    const auto k = static_cast<Eigen::Index>(order_.size());
    Eigen::VectorXd y = b;
    lower_.topLeftCorner(k, k).triangularView<Eigen::Lower>().solveInPlace(y);
    return y;
  }

 private:
  // Relative pivot below which a new column is treated as dependent.
  static constexpr double kPivotFloor = 1e-14;

  const Eigen::MatrixXd& gram_;
  Eigen::MatrixXd lower_;
  std::vector<std::size_t> order_;
};

}  // namespace protoselect::internal

#endif  // PROTOSELECT_SRC_CHOLESKY_H_
