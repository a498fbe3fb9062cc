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

#include "protoselect/instances.h"

#include <algorithm>

#include "random.h"

namespace protoselect {

namespace {

std::size_t DrawBetween(std::mt19937_64& rng, std::size_t lo, std::size_t hi) {
  if (hi < lo) ThrowInput("empty size range in instance shape");
  return lo + internal::UniformBelow(rng, hi - lo + 1);
}

std::uint64_t Mix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

Dataset GaussianBlob(std::mt19937_64& rng, std::size_t rows,
                     const Eigen::VectorXd& center, double scale) {
  RowMatrix values(rows, center.size());
  for (std::size_t i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < center.size(); ++j) {
      values(i, j) = center(j) + scale * internal::StandardNormal(rng);
    }
  }
  return Dataset(std::move(values));
}

Instance RandomInstance(std::mt19937_64& rng, const InstanceShape& shape) {
  const std::size_t n2 = DrawBetween(rng, shape.min_n2, shape.max_n2);
  const std::size_t m =
      DrawBetween(rng, std::min(shape.min_m, n2), std::min(shape.max_m, n2));
  if (shape.identity_kernel) {
    Eigen::VectorXd mu(n2);
    for (std::size_t j = 0; j < n2; ++j) {
      mu(j) = internal::UniformIn(rng, -0.2, 1.0);
    }
    KernelSpec spec;
    spec.family = KernelFamily::kLinear;
    spec.jitter = 0;
    return Instance{std::nullopt, std::nullopt, spec,
                    KernelMatrix::FromEntries(Eigen::MatrixXd::Identity(n2, n2),
                                              spec),
                    MeanMap::FromEntries(std::move(mu)), m};
  }
  const std::size_t n1 = DrawBetween(rng, shape.min_n1, shape.max_n1);
  const std::size_t d = DrawBetween(rng, shape.min_d, shape.max_d);
  KernelSpec spec;
  spec.bandwidth = internal::UniformIn(rng, shape.min_sigma, shape.max_sigma);
  Eigen::VectorXd shift(d);
  for (std::size_t j = 0; j < d; ++j) shift(j) = internal::UniformIn(rng, -1, 1);
  Dataset target = GaussianBlob(rng, n1, shift, 1.0);
  Dataset source = GaussianBlob(rng, n2, Eigen::VectorXd::Zero(d), 1.0);
  KernelMatrix kernel = ComputeKernelMatrix(source, spec);
  MeanMap mu = ComputeMeanMap(target, source, spec);
  return Instance{std::move(target), std::move(source), spec,
                  std::move(kernel), std::move(mu), m};
}

SweepSummary RunVerifySweep(
    const SweepConfig& config,
    const std::function<void(std::size_t, const Instance&,
                             const GuaranteeReport&)>& on_report) {
  SweepSummary summary;
  for (std::size_t i = 0; i < config.instances; ++i) {
    std::mt19937_64 rng(Mix(config.seed ^ Mix(i)));
    const Instance instance = RandomInstance(rng, config.shape);
    const GuaranteeReport report = VerifyGuarantee(
        instance.kernel, instance.mu, instance.m, config.solver);
    ++summary.instances;
    if (!report.satisfied) ++summary.violations;
    if (!report.greedy_satisfied) ++summary.greedy_violations;
    if (on_report) on_report(i, instance, report);
  }
  return summary;
}

}  // namespace protoselect
