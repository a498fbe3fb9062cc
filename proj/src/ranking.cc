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

#include "protoselect/ranking.h"

#include <algorithm>
#include <limits>
#include <numeric>
#include <optional>
#include <sstream>

#include "parallel.h"
#include "protoselect/selectors.h"

namespace protoselect {

RankMatrix RankSources(std::span<const Dataset> datasets,
                       const std::vector<std::string>& names,
                       const RankOptions& options) {
  const std::size_t k = datasets.size();
  if (k < 2) ThrowInput("ranking needs at least two datasets");
  if (names.size() != k) ThrowInput("one name per dataset is required");
  for (const Dataset& d : datasets) {
    if (d.cols() != datasets.front().cols()) {
      ThrowInput("datasets disagree on feature count");
    }
  }
  if (options.m < 1) ThrowInput("ranking needs m >= 1");
  options.spec.Validate();

  RankMatrix out;
  out.names = names;
  out.objective = Eigen::MatrixXd::Constant(
      k, k, std::numeric_limits<double>::quiet_NaN());
  out.prototypes.resize(k);
  out.self_fit.resize(k);
  out.weights.assign(k, std::vector<std::vector<double>>(k));

  std::vector<std::optional<KernelMatrix>> kernels(k);
  std::vector<WeightVector> self_weights(k);
  for (std::size_t j = 0; j < k; ++j) {
    const Dataset& source = datasets[j];
    kernels[j] = ComputeKernelMatrix(source, options.spec, options.threads);
    const MeanMap mu =
        ComputeMeanMap(source, source, options.spec, options.threads);
    SelectionConfig config = SelectionConfig::Sparsity(
        std::min<std::size_t>(options.m, source.rows()));
    config.solver = options.solver;
    config.threads = options.threads;
    SelectionResult result;
    try {
      result = ProtoDash(*kernels[j], mu, config);
    } catch (const Error& e) {
      throw Error(e.kind(), "selecting prototypes of '" + names[j] +
                                "': " + e.what());
    }
    out.prototypes[j] = result.indices;
    out.self_fit[j] = result.objective();
    out.weights[j][j] = result.weights.weights();
    self_weights[j] = result.weights;
  }

  // Cross evaluations are independent; each writes only its own (i, j) cell.
  std::vector<std::pair<std::size_t, std::size_t>> jobs;
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      if (i != j) jobs.emplace_back(i, j);
    }
  }
  internal::ParallelFor(jobs.size(), options.threads, [&](std::size_t job) {
    const auto [i, j] = jobs[job];
    try {
      const MeanMap mu = ComputeMeanMap(datasets[i], datasets[j], options.spec);
      WeightVector w = options.reweight
                           ? SolveRestricted(*kernels[j], mu, out.prototypes[j],
                                             options.solver, &self_weights[j])
                           : self_weights[j];
      out.objective(i, j) = Objective(w, *kernels[j], mu);
      out.weights[i][j] = w.weights();
    } catch (const Error& e) {
      throw Error(e.kind(), "evaluating prototypes of '" + names[j] +
                                "' on '" + names[i] + "': " + e.what());
    }
  });
  AssignRanks(out);
  return out;
}

void AssignRanks(RankMatrix& matrix) {
  const std::size_t k = static_cast<std::size_t>(matrix.objective.rows());
  matrix.rank.assign(k, std::vector<int>(k, 0));
  for (std::size_t i = 0; i < k; ++i) {
    std::vector<std::size_t> order;
    for (std::size_t j = 0; j < k; ++j) {
      if (j != i) order.push_back(j);
    }
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) {
                       return matrix.objective(i, a) > matrix.objective(i, b);
                     });
    for (std::size_t r = 0; r < order.size(); ++r) {
      matrix.rank[i][order[r]] = static_cast<int>(r + 1);
    }
  }
}

std::vector<AverageRank> AverageRanks(const RankMatrix& matrix) {
  const std::size_t k = matrix.rank.size();
  std::vector<AverageRank> out;
  for (std::size_t j = 0; j < k; ++j) {
    double sum = 0;
    for (std::size_t i = 0; i < k; ++i) {
      if (i != j) sum += matrix.rank[i][j];
    }
    out.push_back({j, matrix.names[j], sum / static_cast<double>(k - 1)});
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const AverageRank& a, const AverageRank& b) {
                     return a.value < b.value;
                   });
  return out;
}

namespace {

std::string Quote(const std::string& text) {
  std::string out = "\"";
  for (char c : text) {
    if (c == '"' || c == '\\') out += '\\';
    if (c == '\n') {
      out += "\\n";
      continue;
    }
    out += c;
  }
  return out + "\"";
}

}  // namespace

std::string ExportDot(const RankMatrix& matrix, std::size_t top_t) {
  const std::size_t k = matrix.size();
  if (top_t < 1 || top_t > k - 1) {
    ThrowInput("top_t must lie in [1, k-1]");
  }
  std::ostringstream dot;
  dot << "digraph ranking {\n";
  dot << "  node [shape=box];\n";
  for (std::size_t j = 0; j < k; ++j) {
    dot << "  n" << j << " [label=" << Quote(matrix.names[j]) << "];\n";
  }
  for (std::size_t i = 0; i < k; ++i) {
    for (int r = 1; r <= static_cast<int>(top_t); ++r) {
      for (std::size_t j = 0; j < k; ++j) {
        if (j != i && matrix.rank[i][j] == r) {
          dot << "  n" << j << " -> n" << i << " [label=\"" << r << "\"];\n";
        }
      }
    }
  }
  dot << "}\n";
  return dot.str();
}

}  // namespace protoselect
