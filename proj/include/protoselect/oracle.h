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

// Brute-force checks of the approximation theory on desk-sized instances.
// Everything here enumerates subsets and is guarded against blow-up.

#ifndef PROTOSELECT_ORACLE_H_
#define PROTOSELECT_ORACLE_H_

#include <cstddef>
#include <cstdint>

#include "protoselect/kernel.h"
#include "protoselect/nnqp.h"

namespace protoselect {

// Enumeration limits.
inline constexpr Index kMaxEnumeratedSource = 20;
inline constexpr std::uint64_t kMaxEnumeratedSets = 1'000'000;

// Pairs whose joint increase f(L + S) - f(L) is at or below this are left out
// of the submodularity ratio (the ratio is undefined without an increase).
inline constexpr double kRatioDenominatorFloor = 1e-12;

std::uint64_t BinomialCoefficient(std::uint64_t n, std::uint64_t k);

struct OptimalSubset {
  SupportSet support;
  double value = 0;
};

// Best support of size at most m, by enumeration. Throws a guard error when
// n2 > 20 or C(n2, m) > 10^6.
OptimalSubset ExhaustiveOptimal(const KernelMatrix& kernel, const MeanMap& mu,
                                std::size_t m, const SolverConfig& solver = {});

// Which base sets L the ratio minimizes over.
enum class RatioScope {
  kFixed,       // L = base only
  kPrefixes,    // L ranges over the prefixes of base, including {} and base
  kAllSubsets,  // L ranges over every subset of base (gamma_{U,r})
};

// min over L (per scope) and non-empty S disjoint from L with |S| <= r of
//   sum_{i in S} (f(L + i) - f(L)) / (f(L + S) - f(L)).
// Throws a degenerate error when no pair has a positive denominator.
double SubmodularityRatio(const KernelMatrix& kernel, const MeanMap& mu,
                          const SupportSet& base, std::size_t r,
                          RatioScope scope = RatioScope::kAllSubsets,
                          const SolverConfig& solver = {});

struct CurvatureBounds {
  // Smallest eigenvalue over all k x k principal submatrices (RSC, c_k).
  double smallest = 0;
  // Largest eigenvalue over all k x k principal submatrices (RSM, C_k).
  double largest = 0;
  // Largest diagonal entry: smoothness along single coordinates.
  double max_diagonal = 0;
};

// Exact principal-minor spectra. k is clamped to n2. Guarded like
// ExhaustiveOptimal unless k == n2.
CurvatureBounds RscRsmBounds(const KernelMatrix& kernel, std::size_t k);

struct GuaranteeReport {
  std::size_t m = 0;
  SupportSet dash_set;
  SupportSet greedy_set;
  SupportSet optimal_set;
  double f_dash = 0;
  double f_greedy = 0;
  double f_opt = 0;
  // Ratio over the prefixes of the ProtoDash (resp. ProtoGreedy) selection.
  double gamma = 1;
  double gamma_greedy = 1;
  // No prefix/extension pair had a positive increase; gamma reported as 1.
  bool degenerate = false;
  double c = 0;        // c_m
  double C_tilde = 0;  // single-coordinate smoothness
  double C = 0;        // C_m
  // (1 - exp(-3 c gamma / (4 C_tilde))) f_opt
  double bound = 0;
  // Same with C_m in place of C_tilde (weaker, since C_m >= C_tilde).
  double bound_generic = 0;
  // (1 - exp(-gamma_greedy)) f_opt
  double greedy_bound = 0;
  bool satisfied = false;
  bool generic_satisfied = false;
  bool greedy_satisfied = false;
};

inline constexpr double kGuaranteeSlack = 1e-9;

GuaranteeReport VerifyGuarantee(const KernelMatrix& kernel, const MeanMap& mu,
                                std::size_t m,
                                const SolverConfig& solver = {});

// Central differences of l against the analytic gradient over the support
// coordinates of w. The error is relative where |g_j| > 1e-4 and absolute
// otherwise (near stationary points).
double FiniteDifferenceCheck(const KernelMatrix& kernel, const MeanMap& mu,
                             const WeightVector& w, double step);

}  // namespace protoselect

#endif  // PROTOSELECT_ORACLE_H_
