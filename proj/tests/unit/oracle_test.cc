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
#include <functional>
#include <limits>
#include <numeric>
#include <random>
#include <vector>

#include <Eigen/Eigenvalues>
#include <gtest/gtest.h>

#include "oracles.h"
#include "protoselect/oracle.h"
#include "protoselect/selectors.h"

namespace protoselect {
namespace {

using testing::BruteNnqp;
using testing::MakeCase;
using testing::RandomCase;
using testing::Subsets;

KernelMatrix Identity(Index n) {
  return KernelMatrix::FromEntries(Eigen::MatrixXd::Identity(n, n));
}

MeanMap Mu(std::initializer_list<double> values) {
  Eigen::VectorXd v(values.size());
  Index k = 0;
  for (double x : values) v(k++) = x;
  return MeanMap::FromEntries(v);
}

ErrorKind KindOf(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorKind::kInput;
}

TEST(BinomialCoefficient, SmallValues) {
  EXPECT_EQ(BinomialCoefficient(5, 0), 1u);
  EXPECT_EQ(BinomialCoefficient(5, 2), 10u);
  EXPECT_EQ(BinomialCoefficient(20, 10), 184756u);
  EXPECT_EQ(BinomialCoefficient(3, 5), 0u);
}

TEST(ExhaustiveOptimal, IdentitySingleton) {
  const OptimalSubset opt = ExhaustiveOptimal(Identity(3), Mu({0.9, 0.5, 0.1}), 1);
  EXPECT_EQ(opt.support, SupportSet{0});
  EXPECT_NEAR(opt.value, 0.405, 1e-15);
}

TEST(ExhaustiveOptimal, FullSparsityIsUnrestrictedOptimum) {
  std::mt19937_64 rng(301);
  for (int trial = 0; trial < 20; ++trial) {
    const auto c = MakeCase(rng, 6, 7, 2, 1.0);
    const OptimalSubset opt = ExhaustiveOptimal(c.kernel, c.mu, 7);
    std::vector<Index> all(7);
    std::iota(all.begin(), all.end(), Index{0});
    EXPECT_NEAR(opt.value, BruteNnqp(c.naive.K, c.naive.mu, all).value, 1e-9);
  }
}

TEST(ExhaustiveOptimal, MatchesIndependentEnumeration) {
  std::mt19937_64 rng(303);
  for (int trial = 0; trial < 20; ++trial) {
    const auto c = MakeCase(rng, 5, 8, 2, 0.7);
    double best = 0;
    for (std::size_t k = 1; k <= 3; ++k) {
      for (const auto& s : Subsets(8, k)) {
        best = std::max(best, BruteNnqp(c.naive.K, c.naive.mu, s).value);
      }
    }
    const OptimalSubset opt = ExhaustiveOptimal(c.kernel, c.mu, 3);
    EXPECT_NEAR(opt.value, best, 1e-9);
    EXPECT_LE(opt.support.size(), 3u);
  }
}

TEST(ExhaustiveOptimal, GuardsLargeInstances) {
  const Index n = 21;
  Eigen::VectorXd mu = Eigen::VectorXd::Constant(n, 0.5);
  EXPECT_EQ(KindOf([&] {
              ExhaustiveOptimal(Identity(n), MeanMap::FromEntries(mu), 2);
            }),
            ErrorKind::kGuard);
  // C(20, 10) is under the cap; a smaller source with more sets is not.
  const Index m = 20;
  Eigen::VectorXd mu20 = Eigen::VectorXd::Constant(m, 0.5);
  EXPECT_EQ(BinomialCoefficient(20, 8), 125970u);
  EXPECT_NO_THROW(
      ExhaustiveOptimal(Identity(m), MeanMap::FromEntries(mu20), 2));
}

TEST(SubmodularityRatio, IdentityIsModular) {
  const MeanMap mu = Mu({0.9, 0.4, 0.7, 0.2, 0.5});
  for (std::size_t r = 1; r <= 3; ++r) {
    EXPECT_NEAR(SubmodularityRatio(Identity(5), mu, SupportSet{1, 3}, r), 1.0,
                1e-12);
    EXPECT_NEAR(SubmodularityRatio(Identity(5), mu, SupportSet{}, r), 1.0,
                1e-12);
  }
}

TEST(SubmodularityRatio, SingletonExtensionsGiveOne) {
  std::mt19937_64 rng(307);
  for (int trial = 0; trial < 20; ++trial) {
    const auto c = MakeCase(rng, 6, 8, 2, 1.0);
    EXPECT_NEAR(SubmodularityRatio(c.kernel, c.mu, SupportSet{0, 3}, 1), 1.0,
                1e-12);
  }
}

// gamma for a fixed L, enumerated with the active-set-enumeration oracle.
double BruteRatio(const RandomCase& c, const std::vector<Index>& l,
                  std::size_t r, bool& any) {
  const Index n2 = c.naive.mu.size();
  auto f = [&](std::vector<Index> set) {
    return BruteNnqp(c.naive.K, c.naive.mu, set).value;
  };
  const double fl = f(l);
  std::vector<Index> rest;
  for (Index i = 0; i < n2; ++i) {
    if (std::find(l.begin(), l.end(), i) == l.end()) rest.push_back(i);
  }
  double ratio = std::numeric_limits<double>::infinity();
  for (std::size_t s = 1; s <= r; ++s) {
    for (const auto& pick : Subsets(rest.size(), s)) {
      std::vector<Index> joint = l;
      double numerator = 0;
      for (Index p : pick) {
        std::vector<Index> one = l;
        one.push_back(rest[p]);
        numerator += f(one) - fl;
        joint.push_back(rest[p]);
      }
      const double denominator = f(joint) - fl;
      if (denominator <= 1e-12) continue;
      any = true;
      ratio = std::min(ratio, numerator / denominator);
    }
  }
  return ratio;
}

TEST(SubmodularityRatio, MatchesIndependentEnumeration) {
  std::mt19937_64 rng(311);
  for (int trial = 0; trial < 15; ++trial) {
    const auto c = MakeCase(rng, 6, 8, 2, 0.6 + 0.1 * trial);
    const std::vector<Index> base = {static_cast<Index>(trial % 8),
                                     static_cast<Index>((trial + 3) % 8)};
    bool any = false;
    const double fixed = BruteRatio(c, base, 2, any);
    ASSERT_TRUE(any);
    EXPECT_NEAR(SubmodularityRatio(c.kernel, c.mu, SupportSet(base), 2,
                                   RatioScope::kFixed),
                fixed, 1e-7);
    double all = std::numeric_limits<double>::infinity();
    for (const auto& l : {std::vector<Index>{}, std::vector<Index>{base[0]},
                          std::vector<Index>{base[1]}, base}) {
      bool ok = false;
      const double v = BruteRatio(c, l, 2, ok);
      if (ok) all = std::min(all, v);
    }
    const double gamma = SubmodularityRatio(c.kernel, c.mu, SupportSet(base), 2,
                                            RatioScope::kAllSubsets);
    EXPECT_NEAR(gamma, all, 1e-7);
    EXPECT_GT(gamma, 0.0);
  }
}

TEST(SubmodularityRatio, BoundedBelowByCurvatureRatio) {
  std::mt19937_64 rng(313);
  for (int trial = 0; trial < 30; ++trial) {
    const auto c = MakeCase(rng, 5, 8, 2, 0.5 + 0.05 * trial);
    const SupportSet base{static_cast<Index>(trial % 8)};
    const std::size_t r = 2;
    const double gamma = SubmodularityRatio(c.kernel, c.mu, base, r);
    const CurvatureBounds b = RscRsmBounds(c.kernel, base.size() + r);
    EXPECT_GE(gamma, b.smallest / b.max_diagonal - 1e-9);
  }
}

TEST(SubmodularityRatio, DegenerateWhenNothingIncreases) {
  EXPECT_EQ(KindOf([] {
              SubmodularityRatio(Identity(3), Mu({-1, -1, -1}), SupportSet{},
                                 2);
            }),
            ErrorKind::kDegenerate);
}

TEST(RscRsmBounds, IdentityIsFlat) {
  for (std::size_t k = 1; k <= 5; ++k) {
    const CurvatureBounds b = RscRsmBounds(Identity(5), k);
    EXPECT_NEAR(b.smallest, 1.0, 1e-14);
    EXPECT_NEAR(b.largest, 1.0, 1e-14);
    EXPECT_EQ(b.max_diagonal, 1.0);
  }
}

TEST(RscRsmBounds, SingleCoordinateIsDiagonalRange) {
  Eigen::MatrixXd K(3, 3);
  K << 2.0, 0.1, 0.3, 0.1, 0.5, 0.2, 0.3, 0.2, 1.0;
  const CurvatureBounds b = RscRsmBounds(KernelMatrix::FromEntries(K), 1);
  EXPECT_DOUBLE_EQ(b.smallest, 0.5);
  EXPECT_DOUBLE_EQ(b.largest, 2.0);
  EXPECT_DOUBLE_EQ(b.max_diagonal, 2.0);
}

TEST(RscRsmBounds, MatchesMinorEnumeration) {
  std::mt19937_64 rng(317);
  for (int trial = 0; trial < 10; ++trial) {
    const auto c = MakeCase(rng, 4, 6, 2, 0.8);
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (const auto& s : Subsets(6, 3)) {
      Eigen::Matrix3d minor;
      for (int a = 0; a < 3; ++a) {
        for (int b = 0; b < 3; ++b) minor(a, b) = c.naive.K(s[a], s[b]);
      }
      const Eigen::Vector3d ev =
          Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d>(minor).eigenvalues();
      lo = std::min(lo, ev.minCoeff());
      hi = std::max(hi, ev.maxCoeff());
    }
    const CurvatureBounds b = RscRsmBounds(c.kernel, 3);
    EXPECT_NEAR(b.smallest, lo, 1e-12);
    EXPECT_NEAR(b.largest, hi, 1e-12);
    EXPECT_GT(b.smallest, 0.0);
    EXPECT_LE(b.smallest, b.max_diagonal);
  }
}

TEST(VerifyGuarantee, IdentityIsTight) {
  const GuaranteeReport report =
      VerifyGuarantee(Identity(5), Mu({0.9, 0.1, 0.6, 0.3, 0.8}), 3);
  EXPECT_NEAR(report.gamma, 1.0, 1e-12);
  EXPECT_NEAR(report.f_dash, report.f_opt, 1e-15);
  EXPECT_TRUE(report.satisfied);
  EXPECT_TRUE(report.greedy_satisfied);
  EXPECT_FALSE(report.degenerate);
}

TEST(VerifyGuarantee, FullSparsity) {
  std::mt19937_64 rng(331);
  for (int trial = 0; trial < 10; ++trial) {
    const auto c = MakeCase(rng, 5, 5, 2, 1.0);
    const GuaranteeReport report = VerifyGuarantee(c.kernel, c.mu, 5);
    EXPECT_NEAR(report.f_dash, report.f_opt, 1e-9);
    EXPECT_TRUE(report.satisfied);
  }
}

TEST(VerifyGuarantee, ReportInvariants) {
  std::mt19937_64 rng(337);
  for (int trial = 0; trial < 60; ++trial) {
    const Index n2 = 2 + trial % 9;
    const std::size_t m = 1 + trial % std::min<Index>(3, n2);
    const auto c = MakeCase(rng, 2 + trial % 14, n2, 1 + trial % 3,
                            0.5 + 0.025 * trial);
    const GuaranteeReport report = VerifyGuarantee(c.kernel, c.mu, m);
    EXPECT_GT(report.gamma, 0.0);
    EXPECT_GT(report.c, 0.0);
    EXPECT_LE(report.c, report.C_tilde);
    EXPECT_LE(report.C_tilde, report.C + 1e-12);
    EXPECT_LE(report.bound_generic, report.bound + 1e-15);
    EXPECT_EQ(report.satisfied,
              report.f_dash >= report.bound - kGuaranteeSlack);
    EXPECT_TRUE(report.satisfied);
    EXPECT_TRUE(report.greedy_satisfied);
    EXPECT_LE(report.f_dash, report.f_opt + 1e-12);
    EXPECT_LE(report.f_greedy, report.f_opt + 1e-12);
  }
}

TEST(FiniteDifferenceCheck, QuadraticWithinTolerance) {
  std::mt19937_64 rng(347);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const auto c = MakeCase(rng, 5, 6, 2, 1.0);
  std::vector<double> x(6);
  for (double& v : x) v = u(rng);
  const WeightVector w(6, SupportSet{0, 1, 2, 3, 4, 5}, x);
  EXPECT_LE(FiniteDifferenceCheck(c.kernel, c.mu, w, 1e-6), 1e-5);
}

TEST(FiniteDifferenceCheck, ZeroWeightsCompareAgainstMeanMap) {
  // Zero weights on the support probe the gradient at the origin: mu.
  const WeightVector w(3, SupportSet{0, 1, 2}, {0.0, 0.0, 0.0});
  EXPECT_LE(FiniteDifferenceCheck(Identity(3), Mu({0.3, -0.2, 0.9}), w, 1e-6),
            1e-8);
}

TEST(FiniteDifferenceCheck, StationaryPointUsesAbsoluteError) {
  const WeightVector w(2, SupportSet{0, 1}, {0.4, 0.7});
  const double err =
      FiniteDifferenceCheck(Identity(2), Mu({0.4, 0.7}), w, 1e-6);
  EXPECT_LE(err, 1e-9);
  EXPECT_THROW(FiniteDifferenceCheck(Identity(2), Mu({0.4, 0.7}), w, 0.0),
               Error);
}

}  // namespace
}  // namespace protoselect
