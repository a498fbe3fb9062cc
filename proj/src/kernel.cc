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

#include "protoselect/kernel.h"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "parallel.h"
#include "protoselect/errors.h"

namespace protoselect {

const char* KernelFamilyName(KernelFamily family) {
  switch (family) {
    case KernelFamily::kGaussian:
      return "gaussian";
    case KernelFamily::kLinear:
      return "linear";
  }
  return "unknown";
}

void KernelSpec::Validate() const {
  if (family == KernelFamily::kGaussian &&
      !(bandwidth > 0 && std::isfinite(bandwidth))) {
    ThrowInput("gaussian bandwidth must be positive and finite");
  }
  if (!(jitter >= 0 && std::isfinite(jitter))) {
    ThrowInput("jitter must be non-negative and finite");
  }
}

double KernelEval(std::span<const double> x, std::span<const double> y,
                  const KernelSpec& spec) {
  if (x.size() != y.size()) {
    ThrowInput("kernel arguments differ in dimension (" +
               std::to_string(x.size()) + " vs " + std::to_string(y.size()) +
               ")");
  }
  double acc = 0;
  switch (spec.family) {
    case KernelFamily::kGaussian:
      for (std::size_t i = 0; i < x.size(); ++i) {
        const double diff = x[i] - y[i];
        acc += diff * diff;
      }
      return std::exp(-acc / (2.0 * spec.bandwidth * spec.bandwidth));
    case KernelFamily::kLinear:
      for (std::size_t i = 0; i < x.size(); ++i) acc += x[i] * y[i];
      return acc;
  }
  return acc;
}

KernelMatrix KernelMatrix::FromEntries(Eigen::MatrixXd entries,
                                       const KernelSpec& spec) {
  if (entries.rows() != entries.cols() || entries.rows() < 1) {
    ThrowInput("kernel matrix must be square and non-empty");
  }
  if (!entries.allFinite()) {
    throw Error(ErrorKind::kNumeric, "kernel matrix has non-finite entries");
  }
  for (Eigen::Index i = 0; i < entries.rows(); ++i) {
    for (Eigen::Index j = 0; j < i; ++j) {
      if (entries(i, j) != entries(j, i)) {
        ThrowInput("kernel matrix is not symmetric");
      }
    }
  }
  return KernelMatrix(std::move(entries), spec);
}

KernelMatrix ComputeKernelMatrix(const Dataset& source, const KernelSpec& spec,
                                 std::size_t threads) {
  spec.Validate();
  const Index n = source.rows();
  Eigen::MatrixXd entries(n, n);
  // Each row computes its lower triangle; mirroring happens afterwards so the
  // result does not depend on scheduling.
  internal::ParallelFor(n, threads, [&](std::size_t i) {
    for (Index j = 0; j <= i; ++j) {
      entries(i, j) = KernelEval(source.row(i), source.row(j), spec);
    }
  });
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < i; ++j) entries(j, i) = entries(i, j);
    entries(i, i) += spec.jitter;
  }
  if (!entries.allFinite()) {
    throw Error(ErrorKind::kNumeric, "kernel matrix has non-finite entries");
  }
  return KernelMatrix(std::move(entries), spec);
}

MeanMap MeanMap::FromEntries(Eigen::VectorXd entries, Index n1) {
  if (entries.size() < 1) ThrowInput("mean map must be non-empty");
  if (!entries.allFinite()) {
    throw Error(ErrorKind::kNumeric, "mean map has non-finite entries");
  }
  return MeanMap(std::move(entries), n1);
}

MeanMap ComputeMeanMap(const Dataset& target, const Dataset& source,
                       const KernelSpec& spec, std::size_t threads) {
  spec.Validate();
  if (target.cols() != source.cols()) {
    ThrowInput("target has " + std::to_string(target.cols()) +
               " features but source has " + std::to_string(source.cols()));
  }
  const Index n1 = target.rows();
  Eigen::VectorXd mu(source.rows());
  internal::ParallelFor(source.rows(), threads, [&](std::size_t j) {
    double sum = 0;
    for (Index i = 0; i < n1; ++i) {
      sum += KernelEval(target.row(i), source.row(j), spec);
    }
    mu(j) = sum / static_cast<double>(n1);
  });
  return MeanMap::FromEntries(std::move(mu), n1);
}

double MedianBandwidth(const Dataset& data) {
  const Index n = data.rows();
  if (n < 2) ThrowInput("median bandwidth needs at least two rows");
  std::vector<double> distances;
  distances.reserve(n * (n - 1) / 2);
  for (Index i = 0; i < n; ++i) {
    for (Index j = i + 1; j < n; ++j) {
      distances.push_back(
          (data.values().row(i) - data.values().row(j)).norm());
    }
  }
  const std::size_t count = distances.size();
  const std::size_t mid = count / 2;
  std::nth_element(distances.begin(), distances.begin() + mid,
                   distances.end());
  double median = distances[mid];
  if (count % 2 == 0) {
    const double lower =
        *std::max_element(distances.begin(), distances.begin() + mid);
    median = 0.5 * (median + lower);
  }
  if (!(median > 0)) {
    throw Error(ErrorKind::kDegenerate,
                "median pairwise distance is zero; cannot pick a bandwidth");
  }
  return median;
}

}  // namespace protoselect
