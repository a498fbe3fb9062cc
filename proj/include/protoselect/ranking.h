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

// Cross-dataset representation ranking. Each dataset picks its own weighted
// prototypes; every other dataset then scores how well those prototypes
// represent it, and the scores are ranked per target.

#ifndef PROTOSELECT_RANKING_H_
#define PROTOSELECT_RANKING_H_

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "protoselect/dataset.h"
#include "protoselect/kernel.h"
#include "protoselect/nnqp.h"

namespace protoselect {

struct RankOptions {
  std::size_t m = 10;
  KernelSpec spec;
  // Re-solve the weights of source j's prototypes against each target i.
  // When false the self-fit weights are reused unchanged.
  bool reweight = true;
  SolverConfig solver;
  std::size_t threads = 1;
};

struct RankMatrix {
  std::vector<std::string> names;
  // objective(i, j): l on target i using source j's prototypes. NaN on the
  // diagonal.
  Eigen::MatrixXd objective;
  // rank[i][j] in 1..k-1 for j != i (1 = best representer of i); 0 on the
  // diagonal.
  std::vector<std::vector<int>> rank;
  // Per source j: selected prototypes and their self-fit value.
  std::vector<SupportSet> prototypes;
  std::vector<double> self_fit;
  // weights[i][j]: weights aligned to prototypes[j] used for objective(i, j).
  std::vector<std::vector<std::vector<double>>> weights;

  std::size_t size() const { return names.size(); }
};

// Throws an input error unless k >= 2 and all datasets share a dimension.
RankMatrix RankSources(std::span<const Dataset> datasets,
                       const std::vector<std::string>& names,
                       const RankOptions& options);

// Fills `rank` from `objective`: descending objective, ties by dataset order.
void AssignRanks(RankMatrix& matrix);

struct AverageRank {
  std::size_t dataset = 0;
  std::string name;
  double value = 0;
};

// Column means of the off-diagonal ranks, ascending (stable).
std::vector<AverageRank> AverageRanks(const RankMatrix& matrix);

// Directed graph with an edge j -> i whenever rank[i][j] <= top_t.
std::string ExportDot(const RankMatrix& matrix, std::size_t top_t);

}  // namespace protoselect

#endif  // PROTOSELECT_RANKING_H_
