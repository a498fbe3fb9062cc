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

// Kernel evaluations, Gram matrices over a source dataset and the mean map of
// a target dataset evaluated at the source rows.

#ifndef PROTOSELECT_KERNEL_H_
#define PROTOSELECT_KERNEL_H_

#include <cstddef>
#include <span>

#include <Eigen/Dense>

#include "protoselect/dataset.h"

namespace protoselect {

enum class KernelFamily { kGaussian, kLinear };

const char* KernelFamilyName(KernelFamily family);

inline constexpr double kDefaultJitter = 1e-10;

struct KernelSpec {
  KernelFamily family = KernelFamily::kGaussian;
  // Gaussian width sigma in exp(-|x-y|^2 / (2 sigma^2)). Ignored for linear.
  double bandwidth = 1.0;
  // Added to the Gram diagonal only.
  double jitter = kDefaultJitter;

  void Validate() const;
};

double KernelEval(std::span<const double> x, std::span<const double> y,
                  const KernelSpec& spec);

// Symmetric Gram matrix over the source rows, jitter on the diagonal.
class KernelMatrix {
 public:
  // Wraps an explicit matrix (used for synthetic instances such as K = I).
  // Throws unless square, finite and exactly symmetric.
  static KernelMatrix FromEntries(Eigen::MatrixXd entries,
                                  const KernelSpec& spec = {});

  Index size() const { return static_cast<Index>(entries_.rows()); }
  double operator()(Index i, Index j) const { return entries_(i, j); }
  const Eigen::MatrixXd& entries() const { return entries_; }
  const KernelSpec& spec() const { return spec_; }

 private:
  friend KernelMatrix ComputeKernelMatrix(const Dataset&, const KernelSpec&,
                                          std::size_t);
  KernelMatrix(Eigen::MatrixXd entries, KernelSpec spec)
      : entries_(std::move(entries)), spec_(spec) {}

  Eigen::MatrixXd entries_;
  KernelSpec spec_;
};

KernelMatrix ComputeKernelMatrix(const Dataset& source, const KernelSpec& spec,
                                 std::size_t threads = 1);

// mu_j = (1/n1) sum_i k(target_i, source_j).
class MeanMap {
 public:
  static MeanMap FromEntries(Eigen::VectorXd entries, Index n1 = 0);

  Index size() const { return static_cast<Index>(entries_.size()); }
  double operator[](Index j) const { return entries_(j); }
  const Eigen::VectorXd& entries() const { return entries_; }
  // Number of target rows averaged; 0 for synthetic maps.
  Index n1() const { return n1_; }

 private:
  MeanMap(Eigen::VectorXd entries, Index n1)
      : entries_(std::move(entries)), n1_(n1) {}

  Eigen::VectorXd entries_;
  Index n1_;
};

MeanMap ComputeMeanMap(const Dataset& target, const Dataset& source,
                       const KernelSpec& spec, std::size_t threads = 1);

// Median of the Euclidean distances over all unordered row pairs. Throws a
// degenerate-data error when every pair coincides.
double MedianBandwidth(const Dataset& data);

}  // namespace protoselect

#endif  // PROTOSELECT_KERNEL_H_
