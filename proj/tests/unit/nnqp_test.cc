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
#include <numeric>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "oracles.h"
#include "protoselect/nnqp.h"
#include "protoselect/oracle.h"

namespace protoselect {
namespace {

using testing::BruteNnqp;
using testing::MakeCase;
using testing::Quadratic;

KernelMatrix Identity(Index n) {
  return KernelMatrix::FromEntries(Eigen::MatrixXd::Identity(n, n));
}

MeanMap Mu(std::initializer_list<double> values) {
  Eigen::VectorXd v(values.size());
  Index k = 0;
  for (double x : values) v(k++) = x;
  return MeanMap::FromEntries(v);
}

std::vector<Index> RandomSubset(std::mt19937_64& rng, Index n, Index size) {
  std::vector<Index> all(n);
  std::iota(all.begin(), all.end(), Index{0});
  std::shuffle(all.begin(), all.end(), rng);
  all.resize(size);
  return all;
}

TEST(SupportSet, KeepsInsertionOrderAndRejectsDuplicates) {
  SupportSet s{4, 1, 3};
  EXPECT_EQ(s.indices(), (std::vector<Index>{4, 1, 3}));
  EXPECT_EQ(s.PositionOf(3), 2u);
  EXPECT_EQ(s.PositionOf(9), 3u);
  EXPECT_THROW(s.Add(1), Error);
  EXPECT_THROW((SupportSet{2, 2}), Error);
  EXPECT_THROW(s.CheckBounds(4), Error);
  EXPECT_NO_THROW(s.CheckBounds(5));
}

TEST(WeightVector, ValidatesAlignmentAndSign) {
  EXPECT_THROW(WeightVector(3, SupportSet{0, 1}, {1.0}), Error);
  EXPECT_THROW(WeightVector(3, SupportSet{0}, {-1e-3}), Error);
  EXPECT_THROW(WeightVector(3, SupportSet{5}, {1.0}), Error);
  const WeightVector w(4, SupportSet{2, 0}, {0.5, 0.25});
  EXPECT_EQ(w.at(2), 0.5);
  EXPECT_EQ(w.at(1), 0.0);
  const Eigen::VectorXd dense = w.Dense();
  EXPECT_EQ(dense(0), 0.25);
  EXPECT_EQ(dense(1), 0.0);
  EXPECT_EQ(dense(2), 0.5);
}

TEST(Objective, ZeroWeights) {
  EXPECT_EQ(Objective(WeightVector::Zero(2), Identity(2), Mu({0.8, 0.2})),
            0.0);
}

TEST(Objective, IdentityAtUnconstrainedOptimum) {
  const WeightVector w(2, SupportSet{0, 1}, {0.8, 0.2});
  EXPECT_NEAR(Objective(w, Identity(2), Mu({0.8, 0.2})), 0.34, 1e-15);
}

TEST(Objective, MatchesDirectMatrixArithmetic) {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(0, 1);
  for (int trial = 0; trial < 30; ++trial) {
    const auto c = MakeCase(rng, 6, 4, 2, 1.0);
    std::vector<double> x(4);
    for (double& v : x) v = u(rng);
    const WeightVector w(4, SupportSet{0, 1, 2, 3}, x);
    const Eigen::VectorXd d = w.Dense();
    const double direct = d.dot(c.naive.mu) - 0.5 * d.dot(c.naive.K * d);
    EXPECT_NEAR(Objective(w, c.kernel, c.mu), direct, 1e-12);
  }
}

TEST(Objective, DimensionMismatchIsInputError) {
  EXPECT_THROW(Objective(WeightVector::Zero(3), Identity(2), Mu({1, 1})),
               Error);
  EXPECT_THROW(Objective(WeightVector::Zero(2), Identity(2), Mu({1, 1, 1})),
               Error);
}

TEST(Gradient, AtZeroIsMeanMap) {
  std::mt19937_64 rng(1);
  const auto c = MakeCase(rng, 5, 6, 2, 1.0);
  const Eigen::VectorXd g = Gradient(WeightVector::Zero(6), c.kernel, c.mu);
  EXPECT_EQ(g, c.mu.entries());
}

TEST(Gradient, IdentityStationaryPoint) {
  const WeightVector w(3, SupportSet{0, 1, 2}, {0.3, 0.0, 0.7});
  const Eigen::VectorXd g = Gradient(w, Identity(3), Mu({0.3, 0.0, 0.7}));
  EXPECT_EQ(g.norm(), 0.0);
}

TEST(Gradient, MatchesCentralDifferences) {
  std::mt19937_64 rng(37);
  std::uniform_real_distribution<double> u(0.05, 1.0);
  for (int trial = 0; trial < 40; ++trial) {
    const auto c = MakeCase(rng, 7, 5, 3, 0.8);
    std::vector<double> x(5);
    for (double& v : x) v = u(rng);
    const WeightVector w(5, SupportSet{0, 1, 2, 3, 4}, x);
    EXPECT_LE(FiniteDifferenceCheck(c.kernel, c.mu, w, 1e-6), 1e-5);
    // Independent central differences on the naive quadratic.
    const Eigen::VectorXd g = Gradient(w, c.kernel, c.mu);
    const Eigen::VectorXd d = w.Dense();
    for (Index j = 0; j < 5; ++j) {
      Eigen::VectorXd up = d, down = d;
      up(j) += 1e-6;
      down(j) -= 1e-6;
      const double fd =
          (Quadratic(c.naive.K, c.naive.mu, up) -
           Quadratic(c.naive.K, c.naive.mu, down)) / 2e-6;
      const double scale = std::max(std::abs(g(j)), 1e-4);
      EXPECT_LE(std::abs(fd - g(j)) / scale, 1e-5);
    }
  }
}

TEST(SolveRestricted, SeparableClampsNegativeCoordinate) {
  const WeightVector w =
      SolveRestricted(Identity(2), Mu({0.5, -0.3}), SupportSet{0, 1});
  EXPECT_NEAR(w.at(0), 0.5, 1e-15);
  EXPECT_EQ(w.at(1), 0.0);
}

TEST(SolveRestricted, EmptySupportIsZero) {
  const WeightVector w = SolveRestricted(Identity(3), Mu({1, 2, 3}), {});
  EXPECT_TRUE(w.support().empty());
  EXPECT_EQ(w.dimension(), 3u);
  EXPECT_EQ(SetValue(Identity(3), Mu({1, 2, 3}), {}), 0.0);
}

// Dense grid over [0, 2]^2 at resolution 1e-3.
double GridMax(const Eigen::Matrix2d& K, const Eigen::Vector2d& mu) {
  double best = 0;
  for (int a = 0; a <= 2000; ++a) {
    const double x = a * 1e-3;
    for (int b = 0; b <= 2000; ++b) {
      const double y = b * 1e-3;
      const double v = x * mu(0) + y * mu(1) -
                       0.5 * (K(0, 0) * x * x + 2 * K(0, 1) * x * y +
                              K(1, 1) * y * y);
      best = std::max(best, v);
    }
  }
  return best;
}

TEST(SolveRestricted, CorrelatedPairMatchesGridSearch) {
  Eigen::MatrixXd K(2, 2);
  K << 1, 0.9, 0.9, 1;
  const KernelMatrix kernel = KernelMatrix::FromEntries(K);
  const MeanMap mu = Mu({1.0, 0.95});
  const double solved = SetValue(kernel, mu, SupportSet{0, 1});
  EXPECT_NEAR(solved, GridMax(K, mu.entries()), 1e-3);
  EXPECT_GE(solved, GridMax(K, mu.entries()) - 1e-12);
}

TEST(SolveRestricted, TwoVariableInstancesMatchGridSearch) {
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> off(-0.9, 0.9);
  std::uniform_real_distribution<double> diag(0.6, 1.4);
  std::uniform_real_distribution<double> lin(-0.5, 1.0);
  int checked = 0;
  while (checked < 50) {
    Eigen::Matrix2d K;
    K(0, 0) = diag(rng);
    K(1, 1) = diag(rng);
    K(0, 1) = K(1, 0) = off(rng) * std::sqrt(K(0, 0) * K(1, 1));
    const Eigen::Vector2d mu(lin(rng), lin(rng));
    const auto exact = BruteNnqp(K, mu, {0, 1});
    if (exact.w.maxCoeff() > 1.9) continue;  // optimum must sit in the grid
    ++checked;
    const KernelMatrix kernel = KernelMatrix::FromEntries(K);
    const MeanMap m = MeanMap::FromEntries(mu);
    const WeightVector w = SolveRestricted(kernel, m, SupportSet{0, 1});
    EXPECT_LE(KktResidual(w, kernel, m, SupportSet{0, 1}), 1e-8);
    EXPECT_NEAR(Objective(w, kernel, m), GridMax(K, mu), 1e-3);
  }
}

TEST(SolveRestricted, MatchesActiveSetEnumeration) {
  std::mt19937_64 rng(43);
  for (int trial = 0; trial < 200; ++trial) {
    const Index n2 = 2 + trial % 9;
    const auto c = MakeCase(rng, 3 + trial % 7, n2, 1 + trial % 3,
                            0.5 + 0.01 * (trial % 150));
    std::uniform_int_distribution<Index> size(1, n2);
    const std::vector<Index> idx = RandomSubset(rng, n2, size(rng));
    const SupportSet support(idx);
    const WeightVector w = SolveRestricted(c.kernel, c.mu, support);
    const auto exact = BruteNnqp(c.naive.K, c.naive.mu, idx);
    EXPECT_NEAR(Objective(w, c.kernel, c.mu), exact.value, 1e-9);
    EXPECT_LE(KktResidual(w, c.kernel, c.mu, support), 1e-8);
    for (Index j = 0; j < n2; ++j) {
      if (!support.Contains(j)) EXPECT_EQ(w.at(j), 0.0);
    }
  }
}

TEST(SolveRestricted, NestedSupportsAreMonotone) {
  std::mt19937_64 rng(47);
  for (int trial = 0; trial < 100; ++trial) {
    const auto c = MakeCase(rng, 8, 10, 2, 1.0);
    const std::vector<Index> order = RandomSubset(rng, 10, 10);
    double previous = 0;
    SupportSet prefix;
    for (Index j : order) {
      prefix.Add(j);
      const double value = SetValue(c.kernel, c.mu, prefix);
      EXPECT_GE(value, previous - 1e-10);
      previous = value;
    }
  }
}

TEST(SolveRestricted, OrderInvariant) {
  std::mt19937_64 rng(53);
  for (int trial = 0; trial < 100; ++trial) {
    const auto c = MakeCase(rng, 6, 9, 2, 0.9);
    std::vector<Index> idx = RandomSubset(rng, 9, 6);
    const double a = SetValue(c.kernel, c.mu, SupportSet(idx));
    std::shuffle(idx.begin(), idx.end(), rng);
    const double b = SetValue(c.kernel, c.mu, SupportSet(idx));
    EXPECT_NEAR(a, b, 1e-9);
  }
}

TEST(SolveRestricted, WarmStartNeverWorse) {
  std::mt19937_64 rng(59);
  std::uniform_real_distribution<double> u(0, 1.5);
  for (int trial = 0; trial < 100; ++trial) {
    const auto c = MakeCase(rng, 6, 8, 2, 1.0);
    const std::vector<Index> idx = RandomSubset(rng, 8, 5);
    std::vector<double> x(idx.size());
    for (double& v : x) v = u(rng) < 0.4 ? 0.0 : u(rng);
    const WeightVector warm(8, SupportSet(idx), x);
    const WeightVector w =
        SolveRestricted(c.kernel, c.mu, SupportSet(idx), {}, &warm);
    EXPECT_GE(Objective(w, c.kernel, c.mu),
              Objective(warm, c.kernel, c.mu) - 1e-12);
    EXPECT_NEAR(Objective(w, c.kernel, c.mu),
                SetValue(c.kernel, c.mu, SupportSet(idx)), 1e-9);
  }
}

TEST(SolveRestricted, WarmStartOutsideSupportRejected) {
  const WeightVector warm(3, SupportSet{2}, {1.0});
  EXPECT_THROW(
      SolveRestricted(Identity(3), Mu({1, 1, 1}), SupportSet{0, 1}, {}, &warm),
      Error);
}

TEST(SolveRestricted, BudgetExhaustionCarriesBestIterate) {
  std::mt19937_64 rng(61);
  const auto c = MakeCase(rng, 10, 8, 2, 0.5);
  SolverConfig tight;
  tight.max_iterations = 1;
  const SupportSet all{0, 1, 2, 3, 4, 5, 6, 7};
  try {
    SolveRestricted(c.kernel, c.mu, all, tight);
    FAIL() << "expected a solver error";
  } catch (const SolverError& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kSolver);
    EXPECT_EQ(e.best_iterate().dimension(), 8u);
    EXPECT_GT(e.residual(), 0.0);
  }
}

TEST(SolveRestricted, DuplicateRowsStaySolvable) {
  Eigen::MatrixXd K = Eigen::MatrixXd::Constant(3, 3, 1.0);
  K.diagonal().array() += kDefaultJitter;
  const KernelMatrix kernel = KernelMatrix::FromEntries(K);
  const MeanMap mu = Mu({0.9, 0.9, 0.9});
  const WeightVector w = SolveRestricted(kernel, mu, SupportSet{0, 1, 2});
  EXPECT_LE(KktResidual(w, kernel, mu, SupportSet{0, 1, 2}), 1e-8);
  EXPECT_NEAR(Objective(w, kernel, mu), 0.405, 1e-9);
}

TEST(KktResidual, ZeroAtSeparableOptimum) {
  const WeightVector w(3, SupportSet{0, 1, 2}, {0.4, 0.0, 0.2});
  EXPECT_EQ(KktResidual(w, Identity(3), Mu({0.4, -0.1, 0.2}),
                        SupportSet{0, 1, 2}),
            0.0);
}

TEST(KktResidual, OriginWithNegativeMeanMap) {
  EXPECT_EQ(KktResidual(WeightVector::Zero(2), Identity(2), Mu({-0.3, -1.0}),
                        SupportSet{0, 1}),
            0.0);
}

TEST(KktResidual, PerturbedIdentityOptimum) {
  const WeightVector w(2, SupportSet{0, 1}, {0.5 + 1e-3, 0.25});
  EXPECT_NEAR(
      KktResidual(w, Identity(2), Mu({0.5, 0.25}), SupportSet{0, 1}), 1e-3,
      1e-15);
}

TEST(KktResidual, PositiveWeightOutsideSupportRejected) {
  const WeightVector w(2, SupportSet{1}, {0.5});
  EXPECT_THROW(KktResidual(w, Identity(2), Mu({1, 1}), SupportSet{0}), Error);
}

// Adding a coordinate whose gradient is non-positive at the current optimum
// changes neither the value nor the weights.
TEST(SolveRestricted, NonAscentCoordinateIsPruned) {
  std::mt19937_64 rng(67);
  int found = 0;
  for (int trial = 0; trial < 4000 && found < 200; ++trial) {
    const Index n2 = 4 + trial % 7;
    const auto c = MakeCase(rng, 5, n2, 2, 0.5 + (trial % 4) * 0.4);
    std::uniform_int_distribution<Index> size(1, n2 - 1);
    const std::vector<Index> idx = RandomSubset(rng, n2, size(rng));
    const SupportSet L(idx);
    const WeightVector w = SolveRestricted(c.kernel, c.mu, L);
    const Eigen::VectorXd g = Gradient(w, c.kernel, c.mu);
    for (Index j = 0; j < n2; ++j) {
      if (L.Contains(j) || g(j) > 0) continue;
      ++found;
      SupportSet bigger = L;
      bigger.Add(j);
      const WeightVector wj = SolveRestricted(c.kernel, c.mu, bigger);
      EXPECT_LE(std::abs(Objective(wj, c.kernel, c.mu) -
                         Objective(w, c.kernel, c.mu)),
                1e-8);
      EXPECT_EQ(wj.at(j), 0.0);
    }
  }
  EXPECT_GE(found, 200);
}

TEST(Curvature, SparsePairsRespectEigenvalueSandwich) {
  std::mt19937_64 rng(71);
  std::uniform_real_distribution<double> u(0, 1);
  for (int inst = 0; inst < 10; ++inst) {
    const Index n2 = 8;
    const std::size_t k = 1 + inst % 4;
    const auto c = MakeCase(rng, 6, n2, 2, 0.7 + 0.1 * inst);
    const CurvatureBounds b = RscRsmBounds(c.kernel, k);
    for (int pair = 0; pair < 500; ++pair) {
      // x and y share a joint support of at most k coordinates.
      const std::vector<Index> joint = RandomSubset(rng, n2, k);
      Eigen::VectorXd x = Eigen::VectorXd::Zero(n2);
      Eigen::VectorXd y = Eigen::VectorXd::Zero(n2);
      for (Index j : joint) {
        x(j) = u(rng) < 0.3 ? 0.0 : u(rng);
        y(j) = u(rng) < 0.3 ? 0.0 : u(rng);
      }
      const Eigen::VectorXd grad = c.naive.mu - c.naive.K * x;
      const double gap = Quadratic(c.naive.K, c.naive.mu, y) -
                         Quadratic(c.naive.K, c.naive.mu, x) -
                         grad.dot(y - x);
      const double sq = (y - x).squaredNorm();
      EXPECT_LE(gap, -b.smallest * sq / 2 + 1e-9);
      EXPECT_GE(gap, -b.largest * sq / 2 - 1e-9);
    }
  }
}

}  // namespace
}  // namespace protoselect
