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

#include "protoselect/selectors.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <random>
#include <string>

#include "parallel.h"
#include "protoselect/errors.h"
#include "random.h"

namespace protoselect {

const char* MethodName(Method method) {
  switch (method) {
    case Method::kProtoDash:
      return "protodash";
    case Method::kProtoGreedy:
      return "protogreedy";
    case Method::kL2cEqual:
      return "l2c_equal";
    case Method::kL2cAdapted:
      return "l2c_adapted";
    case Method::kRandomW:
      return "random_w";
  }
  return "unknown";
}

Method ParseMethod(const std::string& name) {
  if (name == "dash" || name == "protodash") return Method::kProtoDash;
  if (name == "greedy" || name == "protogreedy") return Method::kProtoGreedy;
  if (name == "l2c" || name == "l2c_equal") return Method::kL2cEqual;
  if (name == "l2c-a" || name == "l2c_adapted") return Method::kL2cAdapted;
  if (name == "random" || name == "random_w") return Method::kRandomW;
  ThrowInput("unknown method '" + name + "'");
}

void SelectionConfig::Validate(Index n2) const {
  if (sparsity.has_value() == min_increase.has_value()) {
    ThrowInput("exactly one of sparsity m and minimum increase epsilon must "
               "be set");
  }
  if (sparsity && *sparsity > n2) {
    ThrowInput("sparsity m = " + std::to_string(*sparsity) +
               " exceeds the number of source rows " + std::to_string(n2));
  }
  if (min_increase && !(*min_increase > 0 && std::isfinite(*min_increase))) {
    ThrowInput("epsilon must be positive");
  }
  if (oversample < 1) ThrowInput("oversample factor must be at least 1");
  solver.Validate();
}

namespace {

using Clock = std::chrono::steady_clock;

double SecondsSince(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

void CheckInstance(const KernelMatrix& kernel, const MeanMap& mu) {
  if (kernel.size() != mu.size()) {
    ThrowInput("kernel matrix and mean map disagree on the source size");
  }
}

// Largest g_j over unchosen j, lowest index on ties; n when none remain.
Index ArgmaxUnchosen(const Eigen::VectorXd& g, const std::vector<char>& chosen) {
  const Index n = chosen.size();
  Index best = n;
  for (Index j = 0; j < n; ++j) {
    if (chosen[j]) continue;
    if (best == n || g(j) > g(best)) best = j;
  }
  return best;
}

bool Reached(const SelectionConfig& config, const SelectionResult& result,
             Index n2) {
  if (result.indices.size() >= n2) return true;
  return config.sparsity && result.indices.size() >= *config.sparsity;
}

void Commit(SelectionResult& result, Index j, WeightVector weights,
            double objective, double gradient, Clock::time_point start) {
  result.indices.Add(j);
  result.weights = std::move(weights);
  result.objective_trace.push_back(objective);
  result.gradient_trace.push_back(gradient);
  result.wall_times.push_back(SecondsSince(start));
}

// Re-solves f on every prefix of `order` (warm-started along the way) and
// fills the traces of `result`.
void TracePrefixes(const KernelMatrix& kernel, const MeanMap& mu,
                   const std::vector<Index>& order, const SolverConfig& solver,
                   SelectionResult& result) {
  const Index n2 = kernel.size();
  result.indices = SupportSet();
  result.weights = WeightVector::Zero(n2);
  result.objective_trace.clear();
  result.gradient_trace.clear();
  result.wall_times.clear();
  Eigen::VectorXd g = mu.entries();
  for (Index j : order) {
    const auto start = Clock::now();
    SupportSet next = result.indices;
    next.Add(j);
    WeightVector w;
    try {
      w = SolveRestricted(kernel, mu, next, solver, &result.weights);
    } catch (const SolverError& e) {
      throw SelectionError(e, result);
    }
    const double value = Objective(w, kernel, mu);
    const double gj = g(j);
    g = Gradient(w, kernel, mu);
    Commit(result, j, std::move(w), value, gj, start);
  }
}

// Increase f(L + j) - f(L) for a ProtoGreedy candidate. When the optimum for
// L + j keeps the current positive weights positive, it follows from one
// bordered Cholesky solve; otherwise the restricted problem is re-solved.
class GreedyScan {
 public:
  GreedyScan(const KernelMatrix& kernel, const MeanMap& mu,
             const SelectionResult& state, const Eigen::VectorXd& gradient,
             double value, const SolverConfig& solver)
      : kernel_(kernel),
        mu_(mu),
        state_(state),
        gradient_(gradient),
        value_(value),
        solver_(solver) {
    const SupportSet& support = state.indices;
    for (std::size_t a = 0; a < support.size(); ++a) {
      if (state.weights.weights()[a] > 0) {
        positive_.push_back(support[a]);
        positive_weights_.push_back(state.weights.weights()[a]);
      } else {
        zero_.push_back(support[a]);
      }
    }
    const auto p = static_cast<Eigen::Index>(positive_.size());
    Eigen::MatrixXd gram(p, p);
    for (Eigen::Index a = 0; a < p; ++a) {
      for (Eigen::Index b = 0; b < p; ++b) {
        gram(a, b) = kernel(positive_[a], positive_[b]);
      }
    }
    llt_.compute(gram);
    factored_ = p == 0 || llt_.info() == Eigen::Success;
  }

  double Gain(Index j) const {
    const double gj = gradient_(j);
    if (gj <= solver_.kkt_tolerance) return 0.0;
    if (factored_) {
      if (auto gain = BorderedGain(j, gj)) return *gain;
    }
    SupportSet next = state_.indices;
    next.Add(j);
    const WeightVector w =
        SolveRestricted(kernel_, mu_, next, solver_, &state_.weights);
    return Objective(w, kernel_, mu_) - value_;
  }

 private:
  std::optional<double> BorderedGain(Index j, double gj) const {
    const auto p = static_cast<Eigen::Index>(positive_.size());
    Eigen::VectorXd border(p);
    for (Eigen::Index a = 0; a < p; ++a) border(a) = kernel_(positive_[a], j);
    Eigen::VectorXd half = border;
    if (p > 0) llt_.matrixL().solveInPlace(half);
    const double schur = kernel_(j, j) - half.squaredNorm();
    if (!(schur > 1e-14 * kernel_(j, j))) return std::nullopt;
    const double wj = gj / schur;
    // Change of the positive weights: -K_PP^{-1} k_Pj wj.
    Eigen::VectorXd shift = half;
    if (p > 0) llt_.matrixU().solveInPlace(shift);
    shift *= -wj;
    for (Eigen::Index a = 0; a < p; ++a) {
      if (!(positive_weights_[a] + shift(a) > 0)) return std::nullopt;
    }
    for (Index i : zero_) {
      double gi = gradient_(i) - kernel_(i, j) * wj;
      for (Eigen::Index a = 0; a < p; ++a) {
        gi -= kernel_(i, positive_[a]) * shift(a);
      }
      if (gi > solver_.kkt_tolerance) return std::nullopt;
    }
    return gj * gj / (2.0 * schur);
  }

  const KernelMatrix& kernel_;
  const MeanMap& mu_;
  const SelectionResult& state_;
  const Eigen::VectorXd& gradient_;
  double value_;
  SolverConfig solver_;
  std::vector<Index> positive_;
  std::vector<double> positive_weights_;
  std::vector<Index> zero_;
  Eigen::LLT<Eigen::MatrixXd> llt_;
  bool factored_ = false;
};

SelectionResult UniformGreedy(Method method, const KernelMatrix& kernel,
                              const MeanMap& mu,
                              const SelectionConfig& config) {
  CheckInstance(kernel, mu);
  const Index n2 = kernel.size();
  config.Validate(n2);
  if (!config.sparsity) {
    ThrowInput("uniform-weight greedy supports sparsity termination only");
  }
  const std::size_t m = *config.sparsity;

  SelectionResult result;
  result.method = method;
  result.weights = WeightVector::Zero(n2);
  std::vector<char> chosen(n2, 0);
  // column_sum(j) = sum over chosen a of K(a, j).
  Eigen::VectorXd column_sum = Eigen::VectorXd::Zero(n2);
  double sum_mu = 0;
  double sum_gram = 0;
  WeightVector optimal = WeightVector::Zero(n2);

  for (std::size_t t = 1; t <= m; ++t) {
    const auto start = Clock::now();
    const double size = static_cast<double>(t);
    Index best = n2;
    double best_value = 0;
    for (Index j = 0; j < n2; ++j) {
      if (chosen[j]) continue;
      const double value =
          (sum_mu + mu[j]) / size -
          (sum_gram + 2.0 * column_sum(j) + kernel(j, j)) / (2.0 * size * size);
      if (best == n2 || value > best_value) {
        best = j;
        best_value = value;
      }
    }
    const double gradient =
        t == 1 ? mu[best] : mu[best] - column_sum(best) / (size - 1.0);

    SupportSet next = result.indices;
    next.Add(best);
    WeightVector w;
    try {
      w = SolveRestricted(kernel, mu, next, config.solver, &optimal);
    } catch (const SolverError& e) {
      throw SelectionError(e, result);
    }
    const double f = Objective(w, kernel, mu);
    optimal = w;

    chosen[best] = 1;
    sum_mu += mu[best];
    sum_gram += 2.0 * column_sum(best) + kernel(best, best);
    column_sum += kernel.entries().col(best);
    result.uniform_objective_trace.push_back(best_value);
    Commit(result, best, WeightVector::Zero(n2), f, gradient, start);
  }
  const std::size_t count = result.indices.size();
  result.weights = WeightVector(
      n2, result.indices,
      std::vector<double>(count, count > 0 ? 1.0 / count : 0.0));
  return result;
}

}  // namespace

SelectionResult ProtoDash(const KernelMatrix& kernel, const MeanMap& mu,
                          const SelectionConfig& config) {
  CheckInstance(kernel, mu);
  const Index n2 = kernel.size();
  config.Validate(n2);

  SelectionResult result;
  result.method = Method::kProtoDash;
  result.weights = WeightVector::Zero(n2);
  std::vector<char> chosen(n2, 0);
  Eigen::VectorXd g = mu.entries();
  double value = 0;

  while (!Reached(config, result, n2)) {
    const auto start = Clock::now();
    const Index j = ArgmaxUnchosen(g, chosen);
    if (g(j) <= config.solver.kkt_tolerance) {
      result.stopped_early = true;
      break;
    }
    SupportSet next = result.indices;
    next.Add(j);
    WeightVector w;
    try {
      w = SolveRestricted(kernel, mu, next, config.solver, &result.weights);
    } catch (const SolverError& e) {
      throw SelectionError(e, result);
    }
    const double next_value = Objective(w, kernel, mu);
    if (config.min_increase && next_value - value < *config.min_increase) {
      break;
    }
    const double gj = g(j);
    g = Gradient(w, kernel, mu);
    chosen[j] = 1;
    value = next_value;
    Commit(result, j, std::move(w), value, gj, start);
  }
  return result;
}

SelectionResult ProtoGreedy(const KernelMatrix& kernel, const MeanMap& mu,
                            const SelectionConfig& config) {
  CheckInstance(kernel, mu);
  const Index n2 = kernel.size();
  config.Validate(n2);

  SelectionResult result;
  result.method = Method::kProtoGreedy;
  result.weights = WeightVector::Zero(n2);
  std::vector<char> chosen(n2, 0);
  Eigen::VectorXd g = mu.entries();
  double value = 0;

  while (!Reached(config, result, n2)) {
    const auto start = Clock::now();
    const Index steepest = ArgmaxUnchosen(g, chosen);
    if (g(steepest) <= config.solver.kkt_tolerance) {
      // No coordinate can raise f any more.
      result.stopped_early = true;
      break;
    }
    std::vector<Index> candidates;
    for (Index j = 0; j < n2; ++j) {
      if (!chosen[j]) candidates.push_back(j);
    }
    std::vector<double> gains(candidates.size(), 0.0);
    const GreedyScan scan(kernel, mu, result, g, value, config.solver);
    try {
      internal::ParallelFor(candidates.size(), config.threads,
                            [&](std::size_t c) {
                              gains[c] = scan.Gain(candidates[c]);
                            });
    } catch (const SolverError& e) {
      throw SelectionError(e, result);
    }
    std::size_t best = 0;
    for (std::size_t c = 1; c < candidates.size(); ++c) {
      if (gains[c] > gains[best]) best = c;
    }
    if (config.min_increase && gains[best] < *config.min_increase) break;

    const Index j = candidates[best];
    SupportSet next = result.indices;
    next.Add(j);
    WeightVector w;
    try {
      w = SolveRestricted(kernel, mu, next, config.solver, &result.weights);
    } catch (const SolverError& e) {
      throw SelectionError(e, result);
    }
    const double gj = g(j);
    g = Gradient(w, kernel, mu);
    chosen[j] = 1;
    value = Objective(w, kernel, mu);
    Commit(result, j, std::move(w), value, gj, start);
  }
  return result;
}

SelectionResult L2cEqual(const KernelMatrix& kernel, const MeanMap& mu,
                         const SelectionConfig& config) {
  return UniformGreedy(Method::kL2cEqual, kernel, mu, config);
}

SelectionResult L2cAdapted(const KernelMatrix& kernel, const MeanMap& mu,
                           const SelectionConfig& config) {
  return UniformGreedy(Method::kL2cAdapted, kernel, mu, config);
}

SelectionResult RandomW(const KernelMatrix& kernel, const MeanMap& mu,
                        const SelectionConfig& config) {
  CheckInstance(kernel, mu);
  const Index n2 = kernel.size();
  config.Validate(n2);
  if (!config.sparsity) ThrowInput("RandomW requires sparsity termination");

  std::vector<Index> pool(n2);
  std::iota(pool.begin(), pool.end(), Index{0});
  std::mt19937_64 rng(config.seed);
  const std::size_t m = *config.sparsity;
  for (std::size_t i = 0; i < m; ++i) {
    std::swap(pool[i], pool[i + internal::UniformBelow(rng, n2 - i)]);
  }
  pool.resize(m);

  SelectionResult result;
  result.method = Method::kRandomW;
  TracePrefixes(kernel, mu, pool, config.solver, result);
  return result;
}

SelectionResult TopMByWeight(const SelectionResult& result, std::size_t m,
                             const KernelMatrix& kernel, const MeanMap& mu,
                             const SolverConfig& solver) {
  CheckInstance(kernel, mu);
  const std::size_t count = result.indices.size();
  if (m > count) {
    ThrowInput("cannot keep " + std::to_string(m) + " of " +
               std::to_string(count) + " prototypes");
  }
  std::vector<std::size_t> positions(count);
  std::iota(positions.begin(), positions.end(), std::size_t{0});
  const auto& w = result.weights;
  std::stable_sort(positions.begin(), positions.end(),
                   [&](std::size_t a, std::size_t b) {
                     return w.at(result.indices[a]) > w.at(result.indices[b]);
                   });
  positions.resize(m);
  std::sort(positions.begin(), positions.end());
  std::vector<Index> kept;
  for (std::size_t pos : positions) kept.push_back(result.indices[pos]);

  SelectionResult truncated;
  truncated.method = result.method;
  truncated.oversample = result.oversample;
  truncated.stopped_early = result.stopped_early;
  TracePrefixes(kernel, mu, kept, solver, truncated);
  return truncated;
}

SelectionResult Select(Method method, const KernelMatrix& kernel,
                       const MeanMap& mu, const SelectionConfig& config) {
  CheckInstance(kernel, mu);
  config.Validate(kernel.size());
  SelectionConfig run = config;
  const bool oversampling = config.oversample > 1;
  if (oversampling) {
    if (!config.sparsity) {
      ThrowInput("oversampling requires sparsity termination");
    }
    if (method == Method::kL2cEqual || method == Method::kL2cAdapted) {
      ThrowInput("oversampling needs learned weights; not available for L2C");
    }
    run.sparsity = std::min<std::size_t>(kernel.size(),
                                         *config.sparsity * config.oversample);
  }
  SelectionResult result;
  switch (method) {
    case Method::kProtoDash:
      result = ProtoDash(kernel, mu, run);
      break;
    case Method::kProtoGreedy:
      result = ProtoGreedy(kernel, mu, run);
      break;
    case Method::kL2cEqual:
      result = L2cEqual(kernel, mu, run);
      break;
    case Method::kL2cAdapted:
      result = L2cAdapted(kernel, mu, run);
      break;
    case Method::kRandomW:
      result = RandomW(kernel, mu, run);
      break;
  }
  if (!oversampling) return result;
  result.oversample = config.oversample;
  if (result.indices.size() <= *config.sparsity) return result;
  return TopMByWeight(result, *config.sparsity, kernel, mu, config.solver);
}

CriticismResult Criticisms(const SelectionResult& result,
                           const KernelMatrix& kernel, const MeanMap& mu,
                           std::size_t count) {
  CheckInstance(kernel, mu);
  const Index n2 = kernel.size();
  const std::size_t available = n2 - result.indices.size();
  if (count > available) {
    ThrowInput("requested " + std::to_string(count) + " criticisms but only " +
               std::to_string(available) + " non-prototype rows exist");
  }
  const Eigen::VectorXd g = Gradient(result.weights, kernel, mu);
  std::vector<Index> pool;
  for (Index j = 0; j < n2; ++j) {
    if (!result.indices.Contains(j)) pool.push_back(j);
  }
  std::stable_sort(pool.begin(), pool.end(), [&](Index a, Index b) {
    return std::abs(g(a)) > std::abs(g(b));
  });
  CriticismResult out;
  for (std::size_t k = 0; k < count; ++k) {
    out.indices.push_back(pool[k]);
    out.scores.push_back(std::abs(g(pool[k])));
  }
  return out;
}

}  // namespace protoselect
