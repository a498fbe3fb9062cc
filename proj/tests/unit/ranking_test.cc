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

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "oracles.h"
#include "protoselect/ranking.h"

namespace protoselect {
namespace {

using testing::NaiveProblem;
using testing::RandomRows;

std::vector<Dataset> Clusters(std::mt19937_64& rng,
                              const std::vector<double>& centers,
                              std::size_t rows) {
  std::vector<Dataset> out;
  for (double c : centers) out.emplace_back(RandomRows(rng, rows, 2, c));
  return out;
}

RankOptions Options(std::size_t m, double sigma) {
  RankOptions options;
  options.m = m;
  options.spec.bandwidth = sigma;
  return options;
}

std::size_t CountEdges(const std::string& dot) {
  std::size_t edges = 0;
  for (std::size_t pos = dot.find("->"); pos != std::string::npos;
       pos = dot.find("->", pos + 2)) {
    ++edges;
  }
  return edges;
}

TEST(RankSources, TwoIdenticalDatasets) {
  std::mt19937_64 rng(401);
  const RowMatrix rows = RandomRows(rng, 12, 2);
  const std::vector<Dataset> sets{Dataset(rows), Dataset(rows)};
  const RankMatrix matrix = RankSources(sets, {"a", "b"}, Options(3, 1.0));
  EXPECT_EQ(matrix.rank[0][1], 1);
  EXPECT_EQ(matrix.rank[1][0], 1);
  EXPECT_NEAR(matrix.objective(0, 1), matrix.objective(1, 0), 1e-12);
  EXPECT_TRUE(std::isnan(matrix.objective(0, 0)));
  for (const AverageRank& a : AverageRanks(matrix)) EXPECT_EQ(a.value, 1.0);
}

TEST(RankSources, NearbyClusterRanksFirst) {
  std::mt19937_64 rng(403);
  const auto sets = Clusters(rng, {0.0, 0.1, 10.0}, 15);
  const RankMatrix matrix =
      RankSources(sets, {"near0", "near1", "far"}, Options(4, 1.0));
  EXPECT_EQ(matrix.rank[0][1], 1);
  EXPECT_EQ(matrix.rank[1][0], 1);
  EXPECT_EQ(matrix.rank[0][2], 2);
  EXPECT_EQ(matrix.rank[1][2], 2);
  const auto averages = AverageRanks(matrix);
  EXPECT_EQ(averages.back().name, "far");
}

TEST(RankSources, RowsArePermutations) {
  std::mt19937_64 rng(405);
  for (int trial = 0; trial < 5; ++trial) {
    const std::size_t k = 3 + trial;
    std::vector<double> centers;
    for (std::size_t c = 0; c < k; ++c) centers.push_back(0.4 * c);
    const auto sets = Clusters(rng, centers, 8);
    std::vector<std::string> names;
    for (std::size_t c = 0; c < k; ++c) names.push_back("s" + std::to_string(c));
    const RankMatrix matrix = RankSources(sets, names, Options(3, 1.0));
    for (std::size_t i = 0; i < k; ++i) {
      std::vector<int> row;
      for (std::size_t j = 0; j < k; ++j) {
        if (j == i) {
          EXPECT_EQ(matrix.rank[i][j], 0);
        } else {
          row.push_back(matrix.rank[i][j]);
        }
      }
      std::sort(row.begin(), row.end());
      for (std::size_t r = 0; r < row.size(); ++r) {
        EXPECT_EQ(row[r], static_cast<int>(r + 1));
      }
      // Ranks follow the objective.
      for (std::size_t a = 0; a < k; ++a) {
        for (std::size_t b = 0; b < k; ++b) {
          if (a == i || b == i) continue;
          if (matrix.rank[i][a] < matrix.rank[i][b]) {
            EXPECT_GE(matrix.objective(i, a), matrix.objective(i, b));
          }
        }
      }
    }
  }
}

TEST(RankSources, ObjectivesRecomputeFromReportedWeights) {
  std::mt19937_64 rng(407);
  const auto sets = Clusters(rng, {0.0, 0.5, 1.5, -1.0}, 10);
  const double sigma = 0.9;
  const RankMatrix matrix =
      RankSources(sets, {"a", "b", "c", "d"}, Options(3, sigma));
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::size_t j = 0; j < 4; ++j) {
      const auto naive = NaiveProblem(sets[i].values(), sets[j].values(),
                                      sigma, kDefaultJitter);
      const SupportSet& protos = matrix.prototypes[j];
      const auto& w = matrix.weights[i][j];
      ASSERT_EQ(w.size(), protos.size());
      double value = 0;
      for (std::size_t a = 0; a < w.size(); ++a) {
        value += w[a] * naive.mu(protos[a]);
        for (std::size_t b = 0; b < w.size(); ++b) {
          value -= 0.5 * w[a] * naive.K(protos[a], protos[b]) * w[b];
        }
      }
      if (i == j) {
        EXPECT_NEAR(value, matrix.self_fit[j], 1e-9);
      } else {
        EXPECT_NEAR(value, matrix.objective(i, j), 1e-9);
      }
      for (double x : w) EXPECT_GE(x, 0.0);
    }
  }
}

TEST(RankSources, FrozenWeightsReuseSelfFit) {
  std::mt19937_64 rng(409);
  const auto sets = Clusters(rng, {0.0, 0.7, 2.0}, 10);
  RankOptions options = Options(3, 1.0);
  options.reweight = false;
  const RankMatrix frozen = RankSources(sets, {"a", "b", "c"}, options);
  options.reweight = true;
  const RankMatrix refit = RankSources(sets, {"a", "b", "c"}, options);
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = 0; j < 3; ++j) {
      EXPECT_EQ(frozen.weights[i][j], frozen.weights[j][j]);
      if (i != j) {
        EXPECT_LE(frozen.objective(i, j), refit.objective(i, j) + 1e-12);
      }
    }
  }
}

TEST(RankSources, RejectsBadInput) {
  std::mt19937_64 rng(411);
  const std::vector<Dataset> one{Dataset(RandomRows(rng, 4, 2))};
  EXPECT_THROW(RankSources(one, {"a"}, Options(2, 1.0)), Error);
  const std::vector<Dataset> mixed{Dataset(RandomRows(rng, 4, 2)),
                                   Dataset(RandomRows(rng, 4, 3))};
  EXPECT_THROW(RankSources(mixed, {"a", "b"}, Options(2, 1.0)), Error);
}

TEST(RankSources, ThreadCountDoesNotChangeResults) {
  std::mt19937_64 rng(413);
  const auto sets = Clusters(rng, {0.0, 0.3, 0.9, 1.4}, 12);
  RankOptions options = Options(3, 1.0);
  const RankMatrix serial = RankSources(sets, {"a", "b", "c", "d"}, options);
  options.threads = 4;
  const RankMatrix parallel = RankSources(sets, {"a", "b", "c", "d"}, options);
  EXPECT_EQ(serial.rank, parallel.rank);
  EXPECT_EQ(serial.prototypes, parallel.prototypes);
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::size_t j = 0; j < 4; ++j) {
      if (i != j) EXPECT_EQ(serial.objective(i, j), parallel.objective(i, j));
    }
  }
}

RankMatrix FromObjective(const Eigen::MatrixXd& objective) {
  RankMatrix matrix;
  for (Eigen::Index i = 0; i < objective.rows(); ++i) {
    matrix.names.push_back("d" + std::to_string(i));
  }
  matrix.objective = objective;
  AssignRanks(matrix);
  return matrix;
}

TEST(AverageRanks, Examples) {
  const double nan = std::nan("");
  Eigen::MatrixXd objective(4, 4);
  // Column 0 ranked 1, 2, 3 by targets 1, 2, 3.
  objective << nan, 0.1, 0.2, 0.3,
               0.9, nan, 0.5, 0.1,
               0.5, 0.9, nan, 0.1,
               0.1, 0.9, 0.5, nan;
  const RankMatrix matrix = FromObjective(objective);
  EXPECT_EQ(matrix.rank[1][0], 1);
  EXPECT_EQ(matrix.rank[2][0], 2);
  EXPECT_EQ(matrix.rank[3][0], 3);
  const auto averages = AverageRanks(matrix);
  const auto it = std::find_if(averages.begin(), averages.end(),
                               [](const AverageRank& a) { return a.dataset == 0; });
  ASSERT_NE(it, averages.end());
  EXPECT_DOUBLE_EQ(it->value, 2.0);
  for (std::size_t a = 1; a < averages.size(); ++a) {
    EXPECT_LE(averages[a - 1].value, averages[a].value);
  }
}

TEST(AssignRanks, TiesFollowDatasetOrder) {
  const double nan = std::nan("");
  Eigen::MatrixXd objective(3, 3);
  objective << nan, 0.5, 0.5, 0.2, nan, 0.2, 0.1, 0.1, nan;
  const RankMatrix matrix = FromObjective(objective);
  EXPECT_EQ(matrix.rank[0][1], 1);
  EXPECT_EQ(matrix.rank[0][2], 2);
  EXPECT_EQ(matrix.rank[1][0], 1);
  EXPECT_EQ(matrix.rank[2][0], 1);
}

TEST(ExportDot, EdgeCounts) {
  std::mt19937_64 rng(415);
  const auto sets = Clusters(rng, {0.0, 0.5, 1.0, 1.5}, 8);
  const RankMatrix matrix =
      RankSources(sets, {"a", "b", "c", "d"}, Options(2, 1.0));
  EXPECT_EQ(CountEdges(ExportDot(matrix, 1)), 4u);
  EXPECT_EQ(CountEdges(ExportDot(matrix, 2)), 8u);
  EXPECT_EQ(CountEdges(ExportDot(matrix, 3)), 12u);
  EXPECT_THROW(ExportDot(matrix, 0), Error);
  EXPECT_THROW(ExportDot(matrix, 4), Error);
}

TEST(ExportDot, FormatIsStable) {
  const double nan = std::nan("");
  Eigen::MatrixXd objective(3, 3);
  objective << nan, 0.5, 0.4, 0.2, nan, 0.3, 0.1, 0.6, nan;
  RankMatrix matrix = FromObjective(objective);
  matrix.names = {"x", "y\"q", "z"};
  const std::string expected =
      "digraph ranking {\n"
      "  node [shape=box];\n"
      "  n0 [label=\"x\"];\n"
      "  n1 [label=\"y\\\"q\"];\n"
      "  n2 [label=\"z\"];\n"
      "  n1 -> n0 [label=\"1\"];\n"
      "  n2 -> n1 [label=\"1\"];\n"
      "  n1 -> n2 [label=\"1\"];\n"
      "}\n";
  EXPECT_EQ(ExportDot(matrix, 1), expected);
  EXPECT_EQ(ExportDot(matrix, 1), ExportDot(matrix, 1));
}

}  // namespace
}  // namespace protoselect
