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

#include "protoselect/protoselect.h"

#include <cstdlib>
#include <cstring>
#include <exception>
#include <new>
#include <string>
#include <utility>
#include <vector>

#include "protoselect/dataset.h"
#include "protoselect/experiments.h"
#include "protoselect/instances.h"
#include "protoselect/kernel.h"
#include "protoselect/oracle.h"
#include "protoselect/ranking.h"
#include "protoselect/selectors.h"
#include "protoselect/serialize.h"

struct ps_dataset {
  protoselect::Dataset data;
};

struct ps_problem {
  protoselect::KernelMatrix kernel;
  protoselect::MeanMap mu;
};

struct ps_selection {
  protoselect::SelectionResult result;
};

struct ps_ranking {
  protoselect::RankMatrix matrix;
};

namespace {

namespace ps = protoselect;

thread_local std::string last_error;

ps_status StatusOf(ps::ErrorKind kind) {
  switch (kind) {
    case ps::ErrorKind::kInput:
      return PS_ERROR_INPUT;
    case ps::ErrorKind::kNumeric:
      return PS_ERROR_NUMERIC;
    case ps::ErrorKind::kDegenerate:
      return PS_ERROR_DEGENERATE;
    case ps::ErrorKind::kSolver:
      return PS_ERROR_SOLVER;
    case ps::ErrorKind::kGuard:
      return PS_ERROR_GUARD;
  }
  return PS_ERROR_INTERNAL;
}

ps_status Fail(ps_status status, std::string message) {
  last_error = std::move(message);
  return status;
}

// Runs `body` and maps any exception to a status code.
template <typename Body>
ps_status Guarded(Body&& body) {
  try {
    body();
    return PS_OK;
  } catch (const ps::Error& e) {
    return Fail(StatusOf(e.kind()), e.what());
  } catch (const std::bad_alloc&) {
    return Fail(PS_ERROR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return Fail(PS_ERROR_INTERNAL, e.what());
  } catch (...) {
    return Fail(PS_ERROR_INTERNAL, "unknown error");
  }
}

void Require(bool condition, const char* message) {
  if (!condition) ps::ThrowInput(message);
}

char* CopyString(const std::string& text) {
  char* out = static_cast<char*>(std::malloc(text.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, text.c_str(), text.size() + 1);
  return out;
}

void WriteJson(const ps::Json& doc, char** out) {
  Require(out != nullptr, "null output pointer");
  *out = CopyString(doc.dump());
}

ps::KernelSpec ToSpec(const ps_kernel_spec* spec) {
  Require(spec != nullptr, "null kernel spec");
  ps::KernelSpec out;
  switch (spec->family) {
    case PS_KERNEL_GAUSSIAN:
      out.family = ps::KernelFamily::kGaussian;
      break;
    case PS_KERNEL_LINEAR:
      out.family = ps::KernelFamily::kLinear;
      break;
    default:
      ps::ThrowInput("unknown kernel family");
  }
  out.bandwidth = spec->bandwidth;
  out.jitter = spec->jitter;
  out.Validate();
  return out;
}

ps::Method ToMethod(ps_method method) {
  switch (method) {
    case PS_METHOD_PROTODASH:
      return ps::Method::kProtoDash;
    case PS_METHOD_PROTOGREEDY:
      return ps::Method::kProtoGreedy;
    case PS_METHOD_L2C_EQUAL:
      return ps::Method::kL2cEqual;
    case PS_METHOD_L2C_ADAPTED:
      return ps::Method::kL2cAdapted;
    case PS_METHOD_RANDOM_W:
      return ps::Method::kRandomW;
  }
  ps::ThrowInput("unknown method");
}

ps::SelectionConfig ToConfig(const ps_select_config* config) {
  Require(config != nullptr, "null selection config");
  ps::SelectionConfig out;
  if (config->use_epsilon) {
    out.min_increase = config->epsilon;
  } else {
    out.sparsity = config->m;
  }
  out.seed = config->seed;
  out.oversample = config->oversample;
  out.threads = config->threads;
  out.solver.kkt_tolerance = config->kkt_tolerance;
  out.solver.max_iterations = config->max_iterations;
  return out;
}

ps::Dataset Pooled(const ps_dataset* const* sets, std::size_t count) {
  Require(sets != nullptr && count > 0, "no datasets given");
  ps::Index rows = 0;
  const ps::Index cols = sets[0]->data.cols();
  for (std::size_t s = 0; s < count; ++s) {
    Require(sets[s] != nullptr, "null dataset");
    if (sets[s]->data.cols() != cols) {
      ps::ThrowInput("datasets differ in column count");
    }
    rows += sets[s]->data.rows();
  }
  ps::RowMatrix values(rows, cols);
  ps::Index at = 0;
  for (std::size_t s = 0; s < count; ++s) {
    const ps::RowMatrix& part = sets[s]->data.values();
    values.middleRows(at, part.rows()) = part;
    at += part.rows();
  }
  return ps::Dataset(std::move(values));
}

}  // namespace

extern "C" {

const char* ps_version(void) { return "0.1.0"; }

const char* ps_last_error(void) { return last_error.c_str(); }

const char* ps_status_name(ps_status status) {
  switch (status) {
    case PS_OK:
      return "ok";
    case PS_ERROR_INPUT:
      return "input";
    case PS_ERROR_SOLVER:
      return "solver";
    case PS_ERROR_GUARD:
      return "guard";
    case PS_ERROR_NUMERIC:
      return "numeric";
    case PS_ERROR_DEGENERATE:
      return "degenerate";
    case PS_ERROR_INTERNAL:
      return "internal";
  }
  return "unknown";
}

void ps_string_free(char* text) { std::free(text); }

void ps_kernel_spec_default(ps_kernel_spec* spec) {
  if (spec == nullptr) return;
  spec->family = PS_KERNEL_GAUSSIAN;
  spec->bandwidth = 1.0;
  spec->jitter = ps::kDefaultJitter;
}

void ps_select_config_default(ps_select_config* config) {
  if (config == nullptr) return;
  const ps::SolverConfig solver;
  config->method = PS_METHOD_PROTODASH;
  config->m = 0;
  config->epsilon = 0;
  config->use_epsilon = 0;
  config->seed = 0;
  config->oversample = 1;
  config->kkt_tolerance = solver.kkt_tolerance;
  config->max_iterations = solver.max_iterations;
  config->threads = 1;
}

void ps_verify_config_default(ps_verify_config* config) {
  if (config == nullptr) return;
  const ps::SweepConfig sweep;
  config->instances = sweep.instances;
  config->seed = sweep.seed;
  config->max_n1 = sweep.shape.max_n1;
  config->max_n2 = sweep.shape.max_n2;
  config->max_m = sweep.shape.max_m;
  config->min_sigma = sweep.shape.min_sigma;
  config->max_sigma = sweep.shape.max_sigma;
  config->identity_kernel = sweep.shape.identity_kernel ? 1 : 0;
}

ps_status ps_method_parse(const char* name, ps_method* out) {
  return Guarded([&] {
    Require(name != nullptr && out != nullptr, "null argument");
    switch (ps::ParseMethod(name)) {
      case ps::Method::kProtoDash:
        *out = PS_METHOD_PROTODASH;
        break;
      case ps::Method::kProtoGreedy:
        *out = PS_METHOD_PROTOGREEDY;
        break;
      case ps::Method::kL2cEqual:
        *out = PS_METHOD_L2C_EQUAL;
        break;
      case ps::Method::kL2cAdapted:
        *out = PS_METHOD_L2C_ADAPTED;
        break;
      case ps::Method::kRandomW:
        *out = PS_METHOD_RANDOM_W;
        break;
    }
  });
}

const char* ps_method_name(ps_method method) {
  try {
    return ps::MethodName(ToMethod(method));
  } catch (...) {
    return "unknown";
  }
}

ps_status ps_dataset_load_csv(const char* path, int has_header,
                              ps_dataset** out) {
  return Guarded([&] {
    Require(path != nullptr && out != nullptr, "null argument");
    *out = new ps_dataset{ps::LoadCsv(path, has_header != 0)};
  });
}

ps_status ps_dataset_from_values(const double* values, size_t rows,
                                 size_t cols, ps_dataset** out) {
  return Guarded([&] {
    Require(out != nullptr, "null output pointer");
    Require(values != nullptr || rows * cols == 0, "null values");
    ps::RowMatrix matrix(rows, cols);
    if (rows * cols > 0) {
      std::memcpy(matrix.data(), values, rows * cols * sizeof(double));
    }
    *out = new ps_dataset{ps::Dataset(std::move(matrix))};
  });
}

size_t ps_dataset_rows(const ps_dataset* dataset) {
  return dataset == nullptr ? 0 : dataset->data.rows();
}

size_t ps_dataset_cols(const ps_dataset* dataset) {
  return dataset == nullptr ? 0 : dataset->data.cols();
}

ps_status ps_dataset_standardize(ps_dataset* const* sets, size_t count) {
  return Guarded([&] {
    Require(sets != nullptr && count > 0, "no datasets given");
    std::vector<ps::Dataset*> pointers;
    for (size_t s = 0; s < count; ++s) {
      Require(sets[s] != nullptr, "null dataset");
      pointers.push_back(&sets[s]->data);
    }
    ps::StandardizeJointly(pointers);
  });
}

ps_status ps_median_bandwidth(const ps_dataset* const* sets, size_t count,
                              double* out) {
  return Guarded([&] {
    Require(out != nullptr, "null output pointer");
    *out = count == 1 && sets != nullptr && sets[0] != nullptr
               ? ps::MedianBandwidth(sets[0]->data)
               : ps::MedianBandwidth(Pooled(sets, count));
  });
}

void ps_dataset_free(ps_dataset* dataset) { delete dataset; }

ps_status ps_problem_create(const ps_dataset* target, const ps_dataset* source,
                            const ps_kernel_spec* spec, size_t threads,
                            ps_problem** out) {
  return Guarded([&] {
    Require(target != nullptr && source != nullptr && out != nullptr,
            "null argument");
    const ps::KernelSpec kernel_spec = ToSpec(spec);
    ps::KernelMatrix kernel =
        ps::ComputeKernelMatrix(source->data, kernel_spec, threads);
    ps::MeanMap mu =
        ps::ComputeMeanMap(target->data, source->data, kernel_spec, threads);
    *out = new ps_problem{std::move(kernel), std::move(mu)};
  });
}

ps_status ps_problem_from_matrices(const double* kernel, const double* mean_map,
                                   size_t n2, ps_problem** out) {
  return Guarded([&] {
    Require(kernel != nullptr && mean_map != nullptr && out != nullptr,
            "null argument");
    Eigen::MatrixXd entries(n2, n2);
    for (size_t i = 0; i < n2; ++i) {
      for (size_t j = 0; j < n2; ++j) entries(i, j) = kernel[i * n2 + j];
    }
    Eigen::VectorXd mu =
        Eigen::Map<const Eigen::VectorXd>(mean_map, static_cast<Eigen::Index>(n2));
    *out = new ps_problem{ps::KernelMatrix::FromEntries(std::move(entries)),
                          ps::MeanMap::FromEntries(std::move(mu))};
  });
}

size_t ps_problem_size(const ps_problem* problem) {
  return problem == nullptr ? 0 : problem->kernel.size();
}

void ps_problem_free(ps_problem* problem) { delete problem; }

ps_status ps_select(const ps_problem* problem, const ps_select_config* config,
                    ps_selection** out) {
  if (out != nullptr) *out = nullptr;
  try {
    Require(problem != nullptr && config != nullptr && out != nullptr,
            "null argument");
    *out = new ps_selection{ps::Select(ToMethod(config->method),
                                       problem->kernel, problem->mu,
                                       ToConfig(config))};
    return PS_OK;
  } catch (const ps::SelectionError& e) {
    try {
      *out = new ps_selection{e.partial()};
    } catch (...) {
      *out = nullptr;
    }
    return Fail(PS_ERROR_SOLVER, e.what());
  } catch (...) {
    return Guarded([] { throw; });
  }
}

ps_status ps_selection_truncate(const ps_problem* problem,
                                const ps_selection* selection, size_t m,
                                ps_selection** out) {
  return Guarded([&] {
    Require(problem != nullptr && selection != nullptr && out != nullptr,
            "null argument");
    *out = new ps_selection{ps::TopMByWeight(selection->result, m,
                                             problem->kernel, problem->mu)};
  });
}

size_t ps_selection_size(const ps_selection* selection) {
  return selection == nullptr ? 0 : selection->result.indices.size();
}

ps_status ps_selection_indices(const ps_selection* selection, size_t* out,
                               size_t capacity) {
  return Guarded([&] {
    Require(selection != nullptr, "null selection");
    const auto& indices = selection->result.indices;
    Require(capacity >= indices.size(), "output buffer too small");
    Require(out != nullptr || indices.empty(), "null output buffer");
    for (size_t p = 0; p < indices.size(); ++p) out[p] = indices[p];
  });
}

ps_status ps_selection_weights(const ps_selection* selection, double* out,
                               size_t capacity) {
  return Guarded([&] {
    Require(selection != nullptr, "null selection");
    const auto& weights = selection->result.weights.weights();
    Require(capacity >= weights.size(), "output buffer too small");
    Require(out != nullptr || weights.empty(), "null output buffer");
    for (size_t p = 0; p < weights.size(); ++p) out[p] = weights[p];
  });
}

double ps_selection_objective(const ps_selection* selection) {
  return selection == nullptr ? 0.0 : selection->result.objective();
}

int ps_selection_stopped_early(const ps_selection* selection) {
  return selection != nullptr && selection->result.stopped_early ? 1 : 0;
}

ps_status ps_selection_to_json(const ps_selection* selection, char** json) {
  return Guarded([&] {
    Require(selection != nullptr, "null selection");
    WriteJson(ps::SelectionToJson(selection->result), json);
  });
}

ps_status ps_selection_timings_json(const ps_selection* selection,
                                    char** json) {
  return Guarded([&] {
    Require(selection != nullptr, "null selection");
    WriteJson(ps::TimingsToJson(selection->result), json);
  });
}

ps_status ps_criticisms_json(const ps_problem* problem,
                             const ps_selection* selection, size_t count,
                             char** json) {
  return Guarded([&] {
    Require(problem != nullptr && selection != nullptr, "null argument");
    WriteJson(ps::CriticismsToJson(ps::Criticisms(
                  selection->result, problem->kernel, problem->mu, count)),
              json);
  });
}

void ps_selection_free(ps_selection* selection) { delete selection; }

ps_status ps_rank(const ps_dataset* const* sets, const char* const* names,
                  size_t count, size_t m, const ps_kernel_spec* spec,
                  int reweight, size_t threads, ps_ranking** out) {
  return Guarded([&] {
    Require(sets != nullptr && names != nullptr && out != nullptr,
            "null argument");
    std::vector<ps::Dataset> datasets;
    std::vector<std::string> labels;
    for (size_t s = 0; s < count; ++s) {
      Require(sets[s] != nullptr && names[s] != nullptr, "null dataset entry");
      datasets.push_back(sets[s]->data);
      labels.emplace_back(names[s]);
    }
    ps::RankOptions options;
    options.m = m;
    options.spec = ToSpec(spec);
    options.reweight = reweight != 0;
    options.threads = threads;
    *out = new ps_ranking{ps::RankSources(datasets, labels, options)};
  });
}

ps_status ps_ranking_to_json(const ps_ranking* ranking, char** json) {
  return Guarded([&] {
    Require(ranking != nullptr, "null ranking");
    WriteJson(ps::RankingToJson(ranking->matrix), json);
  });
}

ps_status ps_ranking_averages_json(const ps_ranking* ranking, char** json) {
  return Guarded([&] {
    Require(ranking != nullptr, "null ranking");
    WriteJson(ps::AverageRanksToJson(ps::AverageRanks(ranking->matrix)), json);
  });
}

ps_status ps_ranking_to_dot(const ps_ranking* ranking, size_t top_t,
                            char** dot) {
  return Guarded([&] {
    Require(ranking != nullptr && dot != nullptr, "null argument");
    *dot = CopyString(ps::ExportDot(ranking->matrix, top_t));
  });
}

ps_status ps_ranking_graph_json(const ps_ranking* ranking, size_t top_t,
                                char** json) {
  return Guarded([&] {
    Require(ranking != nullptr, "null ranking");
    WriteJson(ps::GraphToJson(ranking->matrix, top_t), json);
  });
}

void ps_ranking_free(ps_ranking* ranking) { delete ranking; }

ps_status ps_verify_sweep(const ps_verify_config* config,
                          ps_report_callback callback, void* user,
                          size_t* violations, size_t* greedy_violations) {
  return Guarded([&] {
    Require(config != nullptr, "null verify config");
    ps::SweepConfig sweep;
    sweep.instances = config->instances;
    sweep.seed = config->seed;
    sweep.shape.max_n1 = config->max_n1;
    sweep.shape.max_n2 = config->max_n2;
    sweep.shape.max_m = config->max_m;
    sweep.shape.min_sigma = config->min_sigma;
    sweep.shape.max_sigma = config->max_sigma;
    sweep.shape.identity_kernel = config->identity_kernel != 0;
    Require(sweep.shape.max_n1 >= sweep.shape.min_n1 &&
                sweep.shape.max_n2 >= sweep.shape.min_n2 &&
                sweep.shape.max_m >= sweep.shape.min_m,
            "instance size limits below their minimums");
    if (sweep.shape.max_n2 > ps::kMaxEnumeratedSource) {
      ps::ThrowGuard("exhaustive verification limited to n2 <= " +
                     std::to_string(ps::kMaxEnumeratedSource));
    }
    const ps::SweepSummary summary = ps::RunVerifySweep(
        sweep, [&](std::size_t i, const ps::Instance& instance,
                   const ps::GuaranteeReport& report) {
          if (callback == nullptr) return;
          ps::Json doc = ps::GuaranteeToJson(report);
          doc["instance"] = i;
          doc["n2"] = instance.kernel.size();
          doc["n1"] = instance.target ? instance.target->rows() : 0;
          doc["sigma"] = instance.spec.bandwidth;
          const std::string text = doc.dump();
          callback(text.c_str(), user);
        });
    if (violations != nullptr) *violations = summary.violations;
    if (greedy_violations != nullptr) {
      *greedy_violations = summary.greedy_violations;
    }
  });
}

ps_status ps_bench_run(size_t n1, size_t n2, size_t m, size_t dim,
                       uint64_t seed, ps_bench_row* out) {
  return Guarded([&] {
    Require(out != nullptr, "null output pointer");
    Require(n1 > 0 && n2 > 0 && dim > 0, "bench sizes must be positive");
    Require(m <= n2, "bench m exceeds n2");
    const ps::BenchRow row = ps::RunBench(n1, n2, m, dim, seed);
    out->n1 = row.n1;
    out->n2 = row.n2;
    out->m = row.m;
    out->t_dash = row.t_dash;
    out->t_greedy = row.t_greedy;
    out->ratio = row.ratio();
    out->f_dash = row.f_dash;
    out->f_greedy = row.f_greedy;
  });
}

ps_status ps_cv_report(const ps_dataset* target, const ps_dataset* source,
                       const ps_kernel_spec* base, const double* sigmas,
                       size_t count, const ps_select_config* config,
                       double holdout_fraction, char** json) {
  return Guarded([&] {
    Require(target != nullptr && source != nullptr && config != nullptr,
            "null argument");
    Require(sigmas != nullptr && count > 0, "no candidate bandwidths");
    const std::vector<ps::CvEntry> entries = ps::CrossValidateBandwidth(
        target->data, source->data, ToSpec(base),
        std::span<const double>(sigmas, count), ToMethod(config->method),
        ToConfig(config), holdout_fraction);
    ps::Json doc;
    doc["schema"] = "protoselect/bandwidth-cv@1";
    doc["method"] = ps_method_name(config->method);
    doc["holdout_fraction"] = holdout_fraction;
    ps::Json rows = ps::Json::array();
    for (const ps::CvEntry& e : entries) {
      ps::Json row;
      row["sigma"] = e.sigma;
      row["train_objective"] = e.train_objective;
      row["heldout_mmd2"] = e.heldout_mmd2;
      rows.push_back(std::move(row));
    }
    doc["candidates"] = std::move(rows);
    WriteJson(doc, json);
  });
}

}  // extern "C"
