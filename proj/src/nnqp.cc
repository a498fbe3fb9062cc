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

#include "protoselect/nnqp.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "cholesky.h"

namespace protoselect {

SupportSet::SupportSet(std::initializer_list<Index> indices) {
  for (Index i : indices) Add(i);
}

SupportSet::SupportSet(const std::vector<Index>& indices) {
  for (Index i : indices) Add(i);
}

void SupportSet::Add(Index index) {
  if (Contains(index)) {
    ThrowInput("duplicate support index " + std::to_string(index));
  }
  indices_.push_back(index);
}

bool SupportSet::Contains(Index index) const {
  return PositionOf(index) != indices_.size();
}

std::size_t SupportSet::PositionOf(Index index) const {
  return static_cast<std::size_t>(
      std::find(indices_.begin(), indices_.end(), index) - indices_.begin());
}

void SupportSet::CheckBounds(Index dimension) const {
  for (Index i : indices_) {
    if (i >= dimension) {
      ThrowInput("support index " + std::to_string(i) + " out of range [0, " +
                 std::to_string(dimension) + ")");
    }
  }
}

WeightVector::WeightVector(Index dimension, SupportSet support,
                           std::vector<double> weights)
    : dimension_(dimension),
      support_(std::move(support)),
      weights_(std::move(weights)) {
  if (weights_.size() != support_.size()) {
    ThrowInput("weights do not align with support");
  }
  support_.CheckBounds(dimension_);
  for (double w : weights_) {
    if (!(w >= 0) || !std::isfinite(w)) {
      ThrowInput("weights must be finite and non-negative");
    }
  }
}

double WeightVector::at(Index index) const {
  const std::size_t pos = support_.PositionOf(index);
  return pos == support_.size() ? 0.0 : weights_[pos];
}

Eigen::VectorXd WeightVector::Dense() const {
  Eigen::VectorXd dense = Eigen::VectorXd::Zero(dimension_);
  for (std::size_t k = 0; k < support_.size(); ++k) {
    dense(support_[k]) = weights_[k];
  }
  return dense;
}

void SolverConfig::Validate() const {
  if (!(kkt_tolerance > 0)) ThrowInput("kkt_tolerance must be positive");
}

std::size_t SolverConfig::IterationBudget(std::size_t support_size) const {
  return max_iterations > 0 ? max_iterations : 10 * support_size + 100;
}

namespace {

void CheckDimensions(const KernelMatrix& kernel, const MeanMap& mu) {
  if (kernel.size() != mu.size()) {
    ThrowInput("kernel matrix is " + std::to_string(kernel.size()) +
               " wide but mean map has " + std::to_string(mu.size()) +
               " entries");
  }
}

void CheckWeights(const WeightVector& w, const KernelMatrix& kernel) {
  if (w.dimension() != kernel.size()) {
    ThrowInput("weight vector dimension " + std::to_string(w.dimension()) +
               " does not match kernel size " + std::to_string(kernel.size()));
  }
}

}  // namespace

double Objective(const WeightVector& w, const KernelMatrix& kernel,
                 const MeanMap& mu) {
  CheckDimensions(kernel, mu);
  CheckWeights(w, kernel);
  const SupportSet& s = w.support();
  const auto& x = w.weights();
  double linear = 0;
  double quadratic = 0;
  for (std::size_t a = 0; a < s.size(); ++a) {
    linear += x[a] * mu[s[a]];
    for (std::size_t b = 0; b < s.size(); ++b) {
      quadratic += x[a] * kernel(s[a], s[b]) * x[b];
    }
  }
  return linear - 0.5 * quadratic;
}

Eigen::VectorXd Gradient(const WeightVector& w, const KernelMatrix& kernel,
                         const MeanMap& mu) {
  CheckDimensions(kernel, mu);
  CheckWeights(w, kernel);
  Eigen::VectorXd g = mu.entries();
  const SupportSet& s = w.support();
  for (std::size_t a = 0; a < s.size(); ++a) {
    if (w.weights()[a] != 0) g -= w.weights()[a] * kernel.entries().col(s[a]);
  }
  return g;
}

double KktResidual(const WeightVector& w, const KernelMatrix& kernel,
                   const MeanMap& mu, const SupportSet& support) {
  CheckDimensions(kernel, mu);
  CheckWeights(w, kernel);
  for (Index i : w.support()) {
    if (w.at(i) > 0 && !support.Contains(i)) {
      ThrowInput("weights are positive outside the support set");
    }
  }
  const Eigen::VectorXd g = Gradient(w, kernel, mu);
  double residual = 0;
  double most_negative = 0;
  for (Index j : support) {
    const double wj = w.at(j);
    residual = std::max(residual, wj > 0 ? std::abs(g(j)) : std::max(g(j), 0.0));
    most_negative = std::min(most_negative, wj);
  }
  return residual + std::max(0.0, -most_negative);
}

WeightVector SolveRestricted(const KernelMatrix& kernel, const MeanMap& mu,
                             const SupportSet& support,
                             const SolverConfig& config,
                             const WeightVector* warm_start) {
  config.Validate();
  CheckDimensions(kernel, mu);
  const Index n = kernel.size();
  support.CheckBounds(n);
  if (support.empty()) return WeightVector::Zero(n);

  const std::size_t p = support.size();
  Eigen::MatrixXd gram(p, p);
  Eigen::VectorXd lin(p);
  for (std::size_t a = 0; a < p; ++a) {
    lin(a) = mu[support[a]];
    for (std::size_t b = 0; b < p; ++b) {
      gram(a, b) = kernel(support[a], support[b]);
    }
  }

  // x is indexed by position within `support`.
  Eigen::VectorXd x = Eigen::VectorXd::Zero(p);
  if (warm_start != nullptr) {
    CheckWeights(*warm_start, kernel);
    const SupportSet& ws = warm_start->support();
    for (std::size_t k = 0; k < ws.size(); ++k) {
      const double value = warm_start->weights()[k];
      if (value == 0) continue;
      const std::size_t pos = support.PositionOf(ws[k]);
      if (pos == p) {
        ThrowInput("warm start has weight outside the support set");
      }
      x(pos) = value;
    }
  }

  internal::IncrementalCholesky factor(gram);
  std::vector<char> passive(p, 0);
  std::vector<char> stuck(p, 0);
  for (std::size_t a = 0; a < p; ++a) {
    if (x(a) > 0 && factor.Append(a)) {
      passive[a] = 1;
    } else {
      x(a) = 0;
    }
  }

  const std::size_t budget = config.IterationBudget(p);
  std::size_t iterations = 0;
  auto fail = [&](const std::string& why) -> SolverError {
    std::vector<double> w(x.data(), x.data() + p);
    for (double& v : w) v = std::max(v, 0.0);
    WeightVector best(n, support, std::move(w));
    return SolverError(why, best, KktResidual(best, kernel, mu, support));
  };

  bool need_inner = factor.size() > 0;
  std::size_t just_added = p;
  while (true) {
    if (need_inner) {
      while (factor.size() > 0) {
        if (++iterations > budget) {
          throw fail("active-set solver exceeded " + std::to_string(budget) +
                     " iterations");
        }
        const Eigen::VectorXd z = factor.Solve(lin);
        const auto& order = factor.order();
        bool feasible = true;
        for (std::size_t k = 0; k < order.size(); ++k) {
          if (!(z(k) > 0)) feasible = false;
        }
        if (feasible) {
          for (std::size_t k = 0; k < order.size(); ++k) x(order[k]) = z(k);
          break;
        }
        // Move toward z until the first passive weight hits zero.
        double alpha = 1.0;
        std::size_t blocking = p;
        for (std::size_t k = 0; k < order.size(); ++k) {
          const std::size_t a = order[k];
          if (z(k) <= 0) {
            const double step = x(a) / (x(a) - z(k));
            if (step < alpha || blocking == p) {
              alpha = step;
              blocking = a;
            }
          }
        }
        std::vector<std::size_t> keep;
        for (std::size_t k = 0; k < order.size(); ++k) {
          const std::size_t a = order[k];
          x(a) += alpha * (z(k) - x(a));
          if (a == blocking || !(x(a) > 0)) {
            x(a) = 0;
            passive[a] = 0;
          } else {
            keep.push_back(a);
          }
        }
        factor.Reset(keep);
      }
      need_inner = false;
    }
    if (just_added < p && !passive[just_added]) {
      // The coordinate with the steepest ascent could not enter the passive
      // set (numerically singular or non-positive step); exclude it.
      stuck[just_added] = 1;
    }

    const Eigen::VectorXd g = lin - gram * x;
    std::size_t best = p;
    for (std::size_t a = 0; a < p; ++a) {
      if (passive[a] || stuck[a]) continue;
      if (best == p || g(a) > g(best) ||
          (g(a) == g(best) && support[a] < support[best])) {
        best = a;
      }
    }
    if (best == p || g(best) <= config.kkt_tolerance) break;
    if (++iterations > budget) {
      throw fail("active-set solver exceeded " + std::to_string(budget) +
                 " iterations");
    }
    just_added = best;
    if (factor.Append(best)) {
      passive[best] = 1;
      need_inner = true;
    } else {
      stuck[best] = 1;
    }
  }

  std::vector<double> weights(x.data(), x.data() + p);
  WeightVector result(n, support, std::move(weights));
  const double residual = KktResidual(result, kernel, mu, support);
  if (residual > config.kkt_tolerance) {
    throw SolverError("KKT residual " + std::to_string(residual) +
                          " exceeds tolerance",
                      result, residual);
  }
  return result;
}

double SetValue(const KernelMatrix& kernel, const MeanMap& mu,
                const SupportSet& support, const SolverConfig& config) {
  return Objective(SolveRestricted(kernel, mu, support, config), kernel, mu);
}

}  // namespace protoselect
