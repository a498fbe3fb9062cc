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

// Seeded synthetic instances for the verification sweep, benchmarks and
// tests. Draws use std::mt19937_64 with portable transforms, so a seed yields
// the same instance on every platform.

#ifndef PROTOSELECT_INSTANCES_H_
#define PROTOSELECT_INSTANCES_H_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>

#include "protoselect/dataset.h"
#include "protoselect/kernel.h"
#include "protoselect/oracle.h"

namespace protoselect {

struct InstanceShape {
  std::size_t min_n1 = 2, max_n1 = 15;
  std::size_t min_n2 = 2, max_n2 = 10;
  std::size_t min_d = 1, max_d = 3;
  std::size_t min_m = 1, max_m = 3;
  double min_sigma = 0.5, max_sigma = 2.0;
  // K = I with mu drawn uniformly from [-0.2, 1]; no datasets.
  bool identity_kernel = false;
};

struct Instance {
  // Empty for identity-kernel instances.
  std::optional<Dataset> target;
  std::optional<Dataset> source;
  KernelSpec spec;
  KernelMatrix kernel;
  MeanMap mu;
  std::size_t m = 0;
};

// Target rows ~ N(shift, I) with a per-instance shift in [-1, 1]^d, source
// rows ~ N(0, I), gaussian kernel with sigma drawn from the shape's range.
Instance RandomInstance(std::mt19937_64& rng, const InstanceShape& shape);

// Rows ~ N(center, scale^2 I).
Dataset GaussianBlob(std::mt19937_64& rng, std::size_t rows,
                     const Eigen::VectorXd& center, double scale);

struct SweepConfig {
  std::size_t instances = 200;
  std::uint64_t seed = 0;
  InstanceShape shape;
  SolverConfig solver;
};

struct SweepSummary {
  std::size_t instances = 0;
  std::size_t violations = 0;         // ProtoDash bound
  std::size_t greedy_violations = 0;  // ProtoGreedy bound
};

// Runs VerifyGuarantee on seeded random instances; `on_report` sees each one.
SweepSummary RunVerifySweep(
    const SweepConfig& config,
    const std::function<void(std::size_t, const Instance&,
                             const GuaranteeReport&)>& on_report);

}  // namespace protoselect

#endif  // PROTOSELECT_INSTANCES_H_
