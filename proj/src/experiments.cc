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

#include "protoselect/experiments.h"

#include <chrono>
#include <cmath>
#include <numeric>
#include <random>

#include "protoselect/instances.h"
#include "random.h"

namespace protoselect {

namespace {

using Clock = std::chrono::steady_clock;

RowMatrix PickRows(const Dataset& data, const std::vector<Index>& rows) {
  RowMatrix out(rows.size(), data.cols());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    out.row(r) = data.values().row(rows[r]);
  }
  return out;
}

}  // namespace

BenchRow RunBench(std::size_t n1, std::size_t n2, std::size_t m,
                  std::size_t dim, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  Eigen::VectorXd shift(dim);
  for (std::size_t j = 0; j < dim; ++j) shift(j) = internal::UniformIn(rng, -1, 1);
  const Dataset target = GaussianBlob(rng, n1, shift, 1.0);
  const Dataset source = GaussianBlob(rng, n2, Eigen::VectorXd::Zero(dim), 1.0);
  KernelSpec spec;
  spec.bandwidth = MedianBandwidth(source);
  const KernelMatrix kernel = ComputeKernelMatrix(source, spec);
  const MeanMap mu = ComputeMeanMap(target, source, spec);

  SelectionConfig config = SelectionConfig::Sparsity(m);
  config.threads = 1;
  BenchRow row{n1, n2, m};
  auto start = Clock::now();
  const SelectionResult dash = ProtoDash(kernel, mu, config);
  row.t_dash = std::chrono::duration<double>(Clock::now() - start).count();
  start = Clock::now();
  const SelectionResult greedy = ProtoGreedy(kernel, mu, config);
  row.t_greedy = std::chrono::duration<double>(Clock::now() - start).count();
  row.f_dash = dash.objective();
  row.f_greedy = greedy.objective();
  return row;
}

std::vector<CvEntry> CrossValidateBandwidth(const Dataset& target,
                                            const Dataset& source,
                                            const KernelSpec& base,
                                            std::span<const double> sigmas,
                                            Method method,
                                            const SelectionConfig& config,
                                            double holdout_fraction) {
  if (!(holdout_fraction > 0 && holdout_fraction < 1)) {
    ThrowInput("holdout fraction must lie in (0, 1)");
  }
  const Index n1 = target.rows();
  const auto holdout = static_cast<Index>(
      std::llround(holdout_fraction * static_cast<double>(n1)));
  if (holdout < 1 || holdout >= n1) {
    ThrowInput("target too small to hold out rows for cross-validation");
  }
  std::vector<Index> order(n1);
  std::iota(order.begin(), order.end(), Index{0});
  std::mt19937_64 rng(config.seed);
  for (Index i = n1 - 1; i > 0; --i) {
    std::swap(order[i], order[internal::UniformBelow(rng, i + 1)]);
  }
  const Dataset held(PickRows(
      target, std::vector<Index>(order.begin(), order.begin() + holdout)));
  const Dataset train(PickRows(
      target, std::vector<Index>(order.begin() + holdout, order.end())));

  std::vector<CvEntry> out;
  for (double sigma : sigmas) {
    KernelSpec spec = base;
    spec.family = KernelFamily::kGaussian;
    spec.bandwidth = sigma;
    const KernelMatrix kernel = ComputeKernelMatrix(source, spec, config.threads);
    const MeanMap mu_train = ComputeMeanMap(train, source, spec, config.threads);
    const MeanMap mu_held = ComputeMeanMap(held, source, spec, config.threads);
    const SelectionResult result = Select(method, kernel, mu_train, config);
    double self = 0;
    for (Index a = 0; a < held.rows(); ++a) {
      for (Index b = 0; b < held.rows(); ++b) {
        self += KernelEval(held.row(a), held.row(b), spec);
      }
    }
    self /= static_cast<double>(held.rows() * held.rows());
    CvEntry entry;
    entry.sigma = sigma;
    entry.train_objective = result.objective();
    // MMD^2 = E k(x, x') - 2 w^T mu_held + w^T K w
    const Eigen::VectorXd w = result.weights.Dense();
    entry.heldout_mmd2 =
        self - 2.0 * w.dot(mu_held.entries()) + w.dot(kernel.entries() * w);
    out.push_back(entry);
  }
  return out;
}

}  // namespace protoselect
