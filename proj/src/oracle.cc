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

#include "protoselect/oracle.h"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>

#include "protoselect/selectors.h"

namespace protoselect {

std::uint64_t BinomialCoefficient(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t result = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    // Exact: result * (n - k + i) is divisible by i at every step.
    const std::uint64_t factor = n - k + i;
    if (result > std::numeric_limits<std::uint64_t>::max() / factor) {
      return std::numeric_limits<std::uint64_t>::max();
    }
    result = result * factor / i;
  }
  return result;
}

namespace {

// Calls fn on every k-subset of `pool` in lexicographic order of positions.
void ForEachCombination(const std::vector<Index>& pool, std::size_t k,
                        const std::function<void(const std::vector<Index>&)>& fn) {
  const std::size_t n = pool.size();
  if (k > n) return;
  std::vector<std::size_t> pos(k);
  for (std::size_t i = 0; i < k; ++i) pos[i] = i;
  std::vector<Index> subset(k);
  while (true) {
    for (std::size_t i = 0; i < k; ++i) subset[i] = pool[pos[i]];
    fn(subset);
    std::size_t i = k;
    while (i > 0 && pos[i - 1] == n - k + i - 1) --i;
    if (i == 0) return;
    ++pos[i - 1];
    for (std::size_t j = i; j < k; ++j) pos[j] = pos[j - 1] + 1;
  }
}

void GuardSource(Index n2) {
  if (n2 > kMaxEnumeratedSource) {
    ThrowGuard("exhaustive enumeration limited to n2 <= " +
               std::to_string(kMaxEnumeratedSource) + " (got " +
               std::to_string(n2) + ")");
  }
}

void GuardCount(std::uint64_t count, const char* what) {
  if (count > kMaxEnumeratedSets) {
    ThrowGuard(std::string(what) + " would enumerate " +
               std::to_string(count) + " sets (limit " +
               std::to_string(kMaxEnumeratedSets) + ")");
  }
}

std::vector<Index> Range(Index n) {
  std::vector<Index> all(n);
  for (Index i = 0; i < n; ++i) all[i] = i;
  return all;
}

// Memoized f over sorted index sets.
class SetFunction {
 public:
  SetFunction(const KernelMatrix& kernel, const MeanMap& mu,
              const SolverConfig& solver)
      : kernel_(kernel), mu_(mu), solver_(solver) {}

  double operator()(std::vector<Index> set) {
    std::sort(set.begin(), set.end());
    auto it = cache_.find(set);
    if (it != cache_.end()) return it->second;
    const double value = SetValue(kernel_, mu_, SupportSet(set), solver_);
    cache_.emplace(std::move(set), value);
    return value;
  }

 private:
  const KernelMatrix& kernel_;
  const MeanMap& mu_;
  SolverConfig solver_;
  std::map<std::vector<Index>, double> cache_;
};

}  // namespace

OptimalSubset ExhaustiveOptimal(const KernelMatrix& kernel, const MeanMap& mu,
                                std::size_t m, const SolverConfig& solver) {
  const Index n2 = kernel.size();
  if (kernel.size() != mu.size()) ThrowInput("kernel and mean map disagree");
  GuardSource(n2);
  m = std::min<std::size_t>(m, n2);
  GuardCount(BinomialCoefficient(n2, m), "exhaustive search");

  OptimalSubset best;
  bool found = false;
  const std::vector<Index> all = Range(n2);
  // Largest sizes first so that ties keep the bigger, lexicographically first
  // set; f is monotone so the maximum is always attained at size m.
  for (std::size_t size = m; size >= 1; --size) {
    ForEachCombination(all, size, [&](const std::vector<Index>& subset) {
      const double value = SetValue(kernel, mu, SupportSet(subset), solver);
      if (!found || value > best.value + 1e-12 * std::max(1.0, std::abs(best.value))) {
        best.support = SupportSet(subset);
        best.value = value;
        found = true;
      }
    });
  }
  if (!found || best.value < 0) {
    best = OptimalSubset{};
  }
  return best;
}

double SubmodularityRatio(const KernelMatrix& kernel, const MeanMap& mu,
                          const SupportSet& base, std::size_t r,
                          RatioScope scope, const SolverConfig& solver) {
  const Index n2 = kernel.size();
  if (kernel.size() != mu.size()) ThrowInput("kernel and mean map disagree");
  if (r < 1) ThrowInput("submodularity ratio needs r >= 1");
  base.CheckBounds(n2);
  GuardSource(n2);

  std::vector<std::vector<Index>> bases;
  const std::vector<Index>& u = base.indices();
  switch (scope) {
    case RatioScope::kFixed:
      bases.push_back(u);
      break;
    case RatioScope::kPrefixes:
      for (std::size_t k = 0; k <= u.size(); ++k) {
        bases.emplace_back(u.begin(), u.begin() + k);
      }
      break;
    case RatioScope::kAllSubsets:
      for (std::size_t k = 0; k <= u.size(); ++k) {
        ForEachCombination(u, k, [&](const std::vector<Index>& subset) {
          bases.push_back(subset);
        });
      }
      break;
  }
  std::uint64_t work = 0;
  for (const auto& l : bases) {
    for (std::size_t s = 1; s <= r; ++s) {
      work += BinomialCoefficient(n2 - l.size(), s);
    }
  }
  GuardCount(work, "submodularity ratio");

  SetFunction f(kernel, mu, solver);
  double ratio = std::numeric_limits<double>::infinity();
  bool any = false;
  for (const auto& l : bases) {
    const double fl = f(l);
    std::vector<Index> rest;
    std::vector<char> in_l(n2, 0);
    for (Index i : l) in_l[i] = 1;
    for (Index i = 0; i < n2; ++i) {
      if (!in_l[i]) rest.push_back(i);
    }
    std::vector<double> single(n2, 0.0);
    for (Index i : rest) {
      std::vector<Index> with = l;
      with.push_back(i);
      single[i] = f(with) - fl;
    }
    for (std::size_t s = 1; s <= std::min(r, rest.size()); ++s) {
      ForEachCombination(rest, s, [&](const std::vector<Index>& extra) {
        std::vector<Index> joint = l;
        joint.insert(joint.end(), extra.begin(), extra.end());
        const double denominator = s == 1 ? single[extra[0]] : f(joint) - fl;
        if (denominator <= kRatioDenominatorFloor) return;
        double numerator = 0;
        for (Index i : extra) numerator += single[i];
        ratio = std::min(ratio, numerator / denominator);
        any = true;
      });
    }
  }
  if (!any) {
    throw Error(ErrorKind::kDegenerate,
                "no (L, S) pair increases f; submodularity ratio undefined");
  }
  return ratio;
}

CurvatureBounds RscRsmBounds(const KernelMatrix& kernel, std::size_t k) {
  const Index n2 = kernel.size();
  if (k < 1) ThrowInput("sparsity k must be at least 1");
  k = std::min<std::size_t>(k, n2);
  CurvatureBounds bounds;
  bounds.max_diagonal = kernel.entries().diagonal().maxCoeff();
  if (k == n2) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(
        kernel.entries(), Eigen::EigenvaluesOnly);
    bounds.smallest = eig.eigenvalues().minCoeff();
    bounds.largest = eig.eigenvalues().maxCoeff();
    return bounds;
  }
  GuardSource(n2);
  GuardCount(BinomialCoefficient(n2, k), "principal-minor spectra");
  bounds.smallest = std::numeric_limits<double>::infinity();
  bounds.largest = -std::numeric_limits<double>::infinity();
  Eigen::MatrixXd minor(k, k);
  ForEachCombination(Range(n2), k, [&](const std::vector<Index>& subset) {
    for (std::size_t a = 0; a < k; ++a) {
      for (std::size_t b = 0; b < k; ++b) {
        minor(a, b) = kernel(subset[a], subset[b]);
      }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(minor,
                                                       Eigen::EigenvaluesOnly);
    bounds.smallest = std::min(bounds.smallest, eig.eigenvalues().minCoeff());
    bounds.largest = std::max(bounds.largest, eig.eigenvalues().maxCoeff());
  });
  return bounds;
}

namespace {

// Ratio over prefixes, with the degenerate case reported as 1.
double PrefixRatio(const KernelMatrix& kernel, const MeanMap& mu,
                   const SupportSet& selected, std::size_t m,
                   const SolverConfig& solver, bool& degenerate) {
  try {
    return SubmodularityRatio(kernel, mu, selected, m, RatioScope::kPrefixes,
                              solver);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::kDegenerate) throw;
    degenerate = true;
    return 1.0;
  }
}

}  // namespace

GuaranteeReport VerifyGuarantee(const KernelMatrix& kernel, const MeanMap& mu,
                                std::size_t m, const SolverConfig& solver) {
  const Index n2 = kernel.size();
  if (m < 1 || m > n2) {
    ThrowInput("guarantee check needs 1 <= m <= n2");
  }
  GuardSource(n2);
  SelectionConfig config = SelectionConfig::Sparsity(m);
  config.solver = solver;
  const SelectionResult dash = ProtoDash(kernel, mu, config);
  const SelectionResult greedy = ProtoGreedy(kernel, mu, config);
  const OptimalSubset opt = ExhaustiveOptimal(kernel, mu, m, solver);

  GuaranteeReport report;
  report.m = m;
  report.dash_set = dash.indices;
  report.greedy_set = greedy.indices;
  report.optimal_set = opt.support;
  report.f_dash = dash.objective();
  report.f_greedy = greedy.objective();
  report.f_opt = opt.value;

  bool degenerate_dash = false;
  bool degenerate_greedy = false;
  report.gamma =
      PrefixRatio(kernel, mu, dash.indices, m, solver, degenerate_dash);
  report.gamma_greedy =
      PrefixRatio(kernel, mu, greedy.indices, m, solver, degenerate_greedy);
  report.degenerate = degenerate_dash || degenerate_greedy;

  const CurvatureBounds bounds = RscRsmBounds(kernel, m);
  report.c = bounds.smallest;
  report.C = bounds.largest;
  report.C_tilde = bounds.max_diagonal;
  report.bound =
      (1.0 - std::exp(-3.0 * report.c * report.gamma / (4.0 * report.C_tilde))) *
      report.f_opt;
  report.bound_generic =
      (1.0 - std::exp(-3.0 * report.c * report.gamma / (4.0 * report.C))) *
      report.f_opt;
  report.greedy_bound = (1.0 - std::exp(-report.gamma_greedy)) * report.f_opt;
  report.satisfied = report.f_dash >= report.bound - kGuaranteeSlack;
  report.generic_satisfied =
      report.f_dash >= report.bound_generic - kGuaranteeSlack;
  report.greedy_satisfied =
      report.f_greedy >= report.greedy_bound - kGuaranteeSlack;
  return report;
}

double FiniteDifferenceCheck(const KernelMatrix& kernel, const MeanMap& mu,
                             const WeightVector& w, double step) {
  if (!(step > 0)) ThrowInput("finite-difference step must be positive");
  if (w.dimension() != kernel.size() || kernel.size() != mu.size()) {
    ThrowInput("dimensions disagree");
  }
  const Eigen::MatrixXd& k = kernel.entries();
  const Eigen::VectorXd& m = mu.entries();
  auto l = [&](const Eigen::VectorXd& x) {
    return x.dot(m) - 0.5 * x.dot(k * x);
  };
  const Eigen::VectorXd x = w.Dense();
  const Eigen::VectorXd g = m - k * x;
  double worst = 0;
  for (Index j : w.support()) {
    Eigen::VectorXd up = x;
    Eigen::VectorXd down = x;
    up(j) += step;
    down(j) -= step;
    const double fd = (l(up) - l(down)) / (2.0 * step);
    const double scale = std::abs(g(j)) > 1e-4 ? std::abs(g(j)) : 1.0;
    worst = std::max(worst, std::abs(fd - g(j)) / scale);
  }
  return worst;
}

}  // namespace protoselect
