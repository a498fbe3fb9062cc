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

// protoselect command-line tool. Talks to the library only through the C API.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "manifest.h"
#include "protoselect/protoselect.h"

namespace {

using protoselect::cli::Json;
using protoselect::cli::RunManifest;

enum ExitCode {
  kExitOk = 0,
  kExitInput = 1,
  kExitSolver = 2,
  kExitGuard = 3,
  kExitInternal = 4,
};

struct Failure {
  int code;
  std::string message;
};

int ExitFor(ps_status status) {
  switch (status) {
    case PS_OK:
      return kExitOk;
    case PS_ERROR_INPUT:
    case PS_ERROR_NUMERIC:
    case PS_ERROR_DEGENERATE:
      return kExitInput;
    case PS_ERROR_SOLVER:
      return kExitSolver;
    case PS_ERROR_GUARD:
      return kExitGuard;
    case PS_ERROR_INTERNAL:
      break;
  }
  return kExitInternal;
}

void Check(ps_status status, const std::string& context) {
  if (status == PS_OK) return;
  throw Failure{ExitFor(status), context + ": " + ps_last_error()};
}

[[noreturn]] void InputFailure(const std::string& message) {
  throw Failure{kExitInput, message};
}

template <auto Free>
struct Deleter {
  template <typename T>
  void operator()(T* p) const {
    Free(p);
  }
};

using DatasetPtr = std::unique_ptr<ps_dataset, Deleter<ps_dataset_free>>;
using ProblemPtr = std::unique_ptr<ps_problem, Deleter<ps_problem_free>>;
using SelectionPtr =
    std::unique_ptr<ps_selection, Deleter<ps_selection_free>>;
using RankingPtr = std::unique_ptr<ps_ranking, Deleter<ps_ranking_free>>;

std::string Take(char* text) {
  std::string out(text);
  ps_string_free(text);
  return out;
}

Json TakeJson(char* text) { return Json::parse(Take(text)); }

void WriteText(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) InputFailure("cannot write '" + path + "'");
}

void WriteJson(const std::string& path, const Json& doc) {
  WriteText(path, doc.dump(2) + "\n");
}

class Stopwatch {
 public:
  double Lap() {
    const auto now = std::chrono::steady_clock::now();
    const double seconds = std::chrono::duration<double>(now - last_).count();
    last_ = now;
    return seconds;
  }

 private:
  std::chrono::steady_clock::time_point last_ =
      std::chrono::steady_clock::now();
};

// --threads wins; otherwise PROTOSELECT_THREADS caps the hardware count.
std::size_t ResolveThreads(std::size_t flag) {
  if (flag > 0) return flag;
  std::size_t threads = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("PROTOSELECT_THREADS")) {
    char* end = nullptr;
    const unsigned long long cap = std::strtoull(env, &end, 10);
    if (end == env || *end != '\0' || cap == 0) {
      InputFailure("PROTOSELECT_THREADS must be a positive integer");
    }
    threads = std::min<std::size_t>(threads, cap);
  }
  return threads;
}

DatasetPtr Load(const std::string& path, bool header) {
  ps_dataset* raw = nullptr;
  Check(ps_dataset_load_csv(path.c_str(), header ? 1 : 0, &raw), "load");
  return DatasetPtr(raw);
}

// Flags shared by every subcommand that builds a kernel.
struct KernelFlags {
  std::optional<double> sigma;
  bool median = false;
  std::string family = "gaussian";
  double jitter = 1e-10;
  bool standardize = false;
  bool header = false;
  std::size_t threads = 0;

  void Register(CLI::App* app) {
    auto* sigma_opt =
        app->add_option("--sigma", sigma, "Gaussian bandwidth")
            ->check(CLI::PositiveNumber);
    app->add_flag("--median-bandwidth", median,
                  "Median pairwise distance bandwidth (default)")
        ->excludes(sigma_opt);
    app->add_option("--kernel", family, "gaussian or linear")
        ->check(CLI::IsMember({"gaussian", "linear"}));
    app->add_option("--jitter", jitter, "Added to the Gram diagonal")
        ->check(CLI::NonNegativeNumber);
    app->add_flag("--standardize", standardize,
                  "Z-score features with pooled statistics");
    app->add_flag("--header", header, "Skip the first CSV row");
    app->add_option("--threads", threads,
                    "Worker threads (default: PROTOSELECT_THREADS or all)");
  }

  // Bandwidth from --sigma or the median heuristic over `pool`.
  ps_kernel_spec Spec(const std::vector<const ps_dataset*>& pool,
                      RunManifest& manifest) const {
    ps_kernel_spec spec;
    ps_kernel_spec_default(&spec);
    spec.family = family == "linear" ? PS_KERNEL_LINEAR : PS_KERNEL_GAUSSIAN;
    spec.jitter = jitter;
    if (sigma) {
      spec.bandwidth = *sigma;
      manifest.bandwidth_source = "fixed";
    } else if (spec.family == PS_KERNEL_GAUSSIAN) {
      Check(ps_median_bandwidth(pool.data(), pool.size(), &spec.bandwidth),
            "median bandwidth");
      manifest.bandwidth_source = "median";
    }
    manifest.kernel = spec;
    return spec;
  }

  void Describe(RunManifest& manifest) const {
    manifest.has_header = header;
    manifest.standardize = standardize;
    manifest.threads = ResolveThreads(threads);
  }
};

struct SelectFlags {
  std::string target;
  std::string source;
  std::string method = "dash";
  std::optional<std::size_t> m;
  std::optional<double> epsilon;
  std::size_t oversample = 1;
  std::uint64_t seed = 0;
  double kkt_tolerance = 1e-8;
  std::size_t max_iterations = 0;
  std::vector<double> cv;
  double cv_holdout = 0.2;
  std::string out;
  std::string timings_out;
  KernelFlags kernel;

  void Register(CLI::App* app) {
    app->add_option("--target", target, "Target CSV (rows are instances)")
        ->required()
        ->check(CLI::ExistingFile);
    app->add_option("--source", source, "Source CSV to draw prototypes from")
        ->required()
        ->check(CLI::ExistingFile);
    app->add_option("--method", method, "dash|greedy|l2c|l2c-a|random");
    auto* m_opt = app->add_option("--m", m, "Number of prototypes");
    app->add_option("--epsilon", epsilon, "Stop below this objective increase")
        ->check(CLI::PositiveNumber)
        ->excludes(m_opt);
    app->add_option("--oversample", oversample,
                    "Select r*m, keep the m heaviest")
        ->check(CLI::PositiveNumber);
    app->add_option("--seed", seed, "Seed for randomized methods");
    app->add_option("--kkt-tolerance", kkt_tolerance, "NNQP tolerance")
        ->check(CLI::PositiveNumber);
    app->add_option("--max-iterations", max_iterations,
                    "NNQP iteration budget (0: 10|L|+100)");
    app->add_option("--cv", cv,
                    "Candidate bandwidths to score on a held-out split")
        ->delimiter(',');
    app->add_option("--cv-holdout", cv_holdout, "Held-out target fraction");
    app->add_option("--out", out, "Output JSON (default stdout)");
    app->add_option("--timings-out", timings_out,
                    "Write wall-clock timings here");
    kernel.Register(app);
  }

  ps_select_config Config(std::size_t threads) const {
    ps_select_config config;
    ps_select_config_default(&config);
    Check(ps_method_parse(method.c_str(), &config.method), "--method");
    if (epsilon) {
      config.use_epsilon = 1;
      config.epsilon = *epsilon;
    } else if (m) {
      config.m = *m;
    } else {
      InputFailure("one of --m or --epsilon is required");
    }
    config.seed = seed;
    config.oversample = oversample;
    config.kkt_tolerance = kkt_tolerance;
    config.max_iterations = max_iterations;
    config.threads = threads;
    return config;
  }
};

struct Loaded {
  DatasetPtr target;
  DatasetPtr source;
  ProblemPtr problem;
  ps_kernel_spec spec;
  ps_select_config config;
};

Loaded Prepare(const SelectFlags& flags, RunManifest& manifest,
               Stopwatch& clock) {
  flags.kernel.Describe(manifest);
  manifest.inputs = {flags.target, flags.source};
  manifest.seed = flags.seed;
  Loaded run;
  run.config = flags.Config(manifest.threads);
  manifest.selection = run.config;
  run.target = Load(flags.target, flags.kernel.header);
  run.source = Load(flags.source, flags.kernel.header);
  if (ps_dataset_cols(run.target.get()) != ps_dataset_cols(run.source.get())) {
    InputFailure("target and source differ in column count");
  }
  if (flags.kernel.standardize) {
    ps_dataset* both[] = {run.target.get(), run.source.get()};
    Check(ps_dataset_standardize(both, 2), "standardize");
  }
  manifest.timings["load"] = clock.Lap();
  run.spec = flags.kernel.Spec({run.source.get()}, manifest);
  ps_problem* problem = nullptr;
  Check(ps_problem_create(run.target.get(), run.source.get(), &run.spec,
                          manifest.threads, &problem),
        "kernel");
  run.problem.reset(problem);
  manifest.timings["kernel"] = clock.Lap();
  return run;
}

// Selection plus, on a solver failure, the partial result that was reached.
struct Selected {
  SelectionPtr selection;
  ps_status status = PS_OK;
  std::string error;
};

Selected RunSelection(const Loaded& run, RunManifest& manifest,
                      Stopwatch& clock) {
  Selected out;
  ps_selection* raw = nullptr;
  out.status = ps_select(run.problem.get(), &run.config, &raw);
  out.selection.reset(raw);
  if (out.status != PS_OK) {
    out.error = ps_last_error();
    if (out.status != PS_ERROR_SOLVER || raw == nullptr) {
      throw Failure{ExitFor(out.status), "select: " + out.error};
    }
  }
  manifest.timings["select"] = clock.Lap();
  return out;
}

void WriteTimings(const std::string& path, const ps_selection* selection,
                  const RunManifest& manifest) {
  if (path.empty()) return;
  Json doc;
  doc["schema"] = "protoselect/timings@1";
  if (selection != nullptr) {
    char* text = nullptr;
    Check(ps_selection_timings_json(selection, &text), "timings");
    doc["selection"] = TakeJson(text);
  }
  doc["manifest"] = manifest.ToJson(true);
  WriteJson(path, doc);
}

int FinishPartial(const Selected& selected) {
  if (selected.status == PS_OK) return kExitOk;
  std::cerr << "protoselect: solver error (partial result written): "
            << selected.error << "\n";
  return kExitSolver;
}

int RunSelect(const SelectFlags& flags) {
  Stopwatch clock;
  RunManifest manifest;
  manifest.subcommand = "select";
  manifest.tool_version = ps_version();
  Loaded run = Prepare(flags, manifest, clock);

  Json cv_report;
  if (!flags.cv.empty()) {
    char* text = nullptr;
    Check(ps_cv_report(run.target.get(), run.source.get(), &run.spec,
                       flags.cv.data(), flags.cv.size(), &run.config,
                       flags.cv_holdout, &text),
          "cv");
    cv_report = TakeJson(text);
    manifest.options["cv"] = flags.cv;
    manifest.options["cv_holdout"] = flags.cv_holdout;
    manifest.timings["cv"] = clock.Lap();
  }

  const Selected selected = RunSelection(run, manifest, clock);
  char* text = nullptr;
  Check(ps_selection_to_json(selected.selection.get(), &text), "serialize");
  Json doc = TakeJson(text);
  if (selected.status != PS_OK) doc["error"] = selected.error;
  if (!cv_report.is_null()) doc["bandwidth_cv"] = std::move(cv_report);
  doc["manifest"] = manifest.ToJson(false);
  WriteJson(flags.out, doc);
  WriteTimings(flags.timings_out, selected.selection.get(), manifest);
  return FinishPartial(selected);
}

int RunCriticize(const SelectFlags& flags, std::size_t count) {
  Stopwatch clock;
  RunManifest manifest;
  manifest.subcommand = "criticize";
  manifest.tool_version = ps_version();
  manifest.options["count"] = count;
  Loaded run = Prepare(flags, manifest, clock);
  const Selected selected = RunSelection(run, manifest, clock);
  if (selected.status != PS_OK) {
    throw Failure{kExitSolver, "select: " + selected.error};
  }
  char* text = nullptr;
  Check(ps_criticisms_json(run.problem.get(), selected.selection.get(), count,
                           &text),
        "criticize");
  Json doc = TakeJson(text);
  Check(ps_selection_to_json(selected.selection.get(), &text), "serialize");
  doc["prototypes"] = TakeJson(text);
  doc["manifest"] = manifest.ToJson(false);
  manifest.timings["criticize"] = clock.Lap();
  WriteJson(flags.out, doc);
  WriteTimings(flags.timings_out, selected.selection.get(), manifest);
  return kExitOk;
}

struct RankFlags {
  std::vector<std::string> inputs;
  std::vector<std::string> names;
  std::size_t m = 10;
  std::size_t top = 1;
  bool no_reweight = false;
  std::string out_dir;
  std::string timings_out;
  KernelFlags kernel;

  void Register(CLI::App* app) {
    app->add_option("inputs", inputs, "Dataset CSVs (at least two)")
        ->required()
        ->check(CLI::ExistingFile);
    app->add_option("--names", names, "Labels (default: file stems)");
    app->add_option("--m", m, "Prototypes per dataset");
    app->add_option("--top", top, "Edges per target in the graph exports")
        ->check(CLI::PositiveNumber);
    app->add_flag("--no-reweight", no_reweight,
                  "Keep self-fit weights instead of re-solving per target");
    app->add_option("--out-dir", out_dir, "Directory for the report files")
        ->required();
    app->add_option("--timings-out", timings_out,
                    "Write wall-clock timings here");
    kernel.Register(app);
  }
};

int RunRank(RankFlags flags) {
  Stopwatch clock;
  RunManifest manifest;
  manifest.subcommand = "rank";
  manifest.tool_version = ps_version();
  flags.kernel.Describe(manifest);
  manifest.inputs = flags.inputs;
  if (flags.inputs.size() < 2) InputFailure("rank needs at least two inputs");
  if (flags.names.empty()) {
    for (const std::string& path : flags.inputs) {
      flags.names.push_back(std::filesystem::path(path).stem().string());
    }
  }
  if (flags.names.size() != flags.inputs.size()) {
    InputFailure("--names must match the number of inputs");
  }
  if (flags.top > flags.inputs.size() - 1) {
    InputFailure("--top must not exceed the number of inputs minus one");
  }
  manifest.options["names"] = flags.names;
  manifest.options["m"] = flags.m;
  manifest.options["top"] = flags.top;
  manifest.options["reweight"] = !flags.no_reweight;

  std::vector<DatasetPtr> owned;
  std::vector<ps_dataset*> sets;
  for (const std::string& path : flags.inputs) {
    owned.push_back(Load(path, flags.kernel.header));
    sets.push_back(owned.back().get());
  }
  if (flags.kernel.standardize) {
    Check(ps_dataset_standardize(sets.data(), sets.size()), "standardize");
  }
  manifest.timings["load"] = clock.Lap();
  const std::vector<const ps_dataset*> pool(sets.begin(), sets.end());
  const ps_kernel_spec spec = flags.kernel.Spec(pool, manifest);

  std::vector<const char*> labels;
  for (const std::string& name : flags.names) labels.push_back(name.c_str());
  ps_ranking* raw = nullptr;
  Check(ps_rank(pool.data(), labels.data(), pool.size(), flags.m, &spec,
                flags.no_reweight ? 0 : 1, manifest.threads, &raw),
        "rank");
  const RankingPtr ranking(raw);
  manifest.timings["rank"] = clock.Lap();

  std::error_code ec;
  std::filesystem::create_directories(flags.out_dir, ec);
  if (ec) InputFailure("cannot create '" + flags.out_dir + "'");
  const std::filesystem::path dir(flags.out_dir);

  char* text = nullptr;
  Check(ps_ranking_to_json(ranking.get(), &text), "serialize");
  Json matrix = TakeJson(text);
  matrix["manifest"] = manifest.ToJson(false);
  WriteJson((dir / "ranking.json").string(), matrix);
  Check(ps_ranking_averages_json(ranking.get(), &text), "serialize");
  WriteJson((dir / "averages.json").string(), TakeJson(text));
  Check(ps_ranking_graph_json(ranking.get(), flags.top, &text), "graph");
  WriteJson((dir / "graph.json").string(), TakeJson(text));
  Check(ps_ranking_to_dot(ranking.get(), flags.top, &text), "dot");
  WriteText((dir / "ranking.dot").string(), Take(text));
  WriteTimings(flags.timings_out, nullptr, manifest);
  return kExitOk;
}

struct VerifyFlags {
  ps_verify_config config;
  std::string out;

  VerifyFlags() { ps_verify_config_default(&config); }

  void Register(CLI::App* app) {
    app->add_option("--instances", config.instances, "Random instances");
    app->add_option("--seed", config.seed, "Sweep seed");
    app->add_option("--max-n1", config.max_n1, "Largest target size");
    app->add_option("--max-n2", config.max_n2, "Largest source size");
    app->add_option("--max-m", config.max_m, "Largest sparsity");
    app->add_option("--min-sigma", config.min_sigma, "Smallest bandwidth")
        ->check(CLI::PositiveNumber);
    app->add_option("--max-sigma", config.max_sigma, "Largest bandwidth")
        ->check(CLI::PositiveNumber);
    app->add_flag("--identity-kernel", config.identity_kernel,
                  "Use K = I instances");
    app->add_option("--out", out, "Report stream (default stdout)");
  }
};

int RunVerify(const VerifyFlags& flags) {
  std::ofstream file;
  std::ostream* stream = &std::cout;
  if (!flags.out.empty() && flags.out != "-") {
    file.open(flags.out, std::ios::binary);
    if (!file) InputFailure("cannot write '" + flags.out + "'");
    stream = &file;
  }
  auto emit = [](const char* json, void* user) {
    *static_cast<std::ostream*>(user) << json << "\n";
  };
  std::size_t violations = 0;
  std::size_t greedy_violations = 0;
  Check(ps_verify_sweep(&flags.config, emit, stream, &violations,
                        &greedy_violations),
        "verify");
  stream->flush();
  std::cout << "violations: " << violations << "\n"
            << "greedy_violations: " << greedy_violations << "\n";
  return kExitOk;
}

struct BenchFlags {
  std::vector<std::size_t> n2 = {2000};
  std::vector<std::size_t> m = {1, 25, 50, 100};
  std::size_t n1 = 0;
  std::size_t dim = 5;
  std::uint64_t seed = 0;
  std::string out;

  void Register(CLI::App* app) {
    app->add_option("--n2", n2, "Source sizes")->delimiter(',');
    app->add_option("--m", m, "Sparsities")->delimiter(',');
    app->add_option("--n1", n1, "Target size (0: same as n2)");
    app->add_option("--dim", dim, "Feature dimension")
        ->check(CLI::PositiveNumber);
    app->add_option("--seed", seed, "Instance seed");
    app->add_option("--out", out, "CSV output (default stdout)");
  }
};

int RunBench(const BenchFlags& flags) {
  std::string csv = "n2,m,t_dash,t_greedy,ratio\n";
  for (std::size_t n2 : flags.n2) {
    for (std::size_t m : flags.m) {
      ps_bench_row row;
      Check(ps_bench_run(flags.n1 == 0 ? n2 : flags.n1, n2, m, flags.dim,
                         flags.seed, &row),
            "bench");
      char line[160];
      std::snprintf(line, sizeof(line), "%zu,%zu,%.6f,%.6f,%.4f\n", row.n2,
                    row.m, row.t_dash, row.t_greedy, row.ratio);
      csv += line;
    }
  }
  WriteText(flags.out, csv);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Weighted prototype selection under maximum mean discrepancy"};
  app.set_version_flag("--version", std::string(ps_version()));
  app.require_subcommand(1);

  SelectFlags select_flags;
  select_flags.Register(
      app.add_subcommand("select", "Pick weighted prototypes for a target"));

  SelectFlags critic_flags;
  std::size_t critic_count = 5;
  auto* criticize =
      app.add_subcommand("criticize", "List poorly represented source rows");
  critic_flags.Register(criticize);
  criticize->add_option("--count", critic_count, "Number of criticisms");

  RankFlags rank_flags;
  rank_flags.Register(
      app.add_subcommand("rank", "Rank datasets by how well they represent "
                                 "each other"));

  VerifyFlags verify_flags;
  verify_flags.Register(app.add_subcommand(
      "verify", "Check approximation bounds on random instances"));

  BenchFlags bench_flags;
  bench_flags.Register(
      app.add_subcommand("bench", "Time ProtoDash against ProtoGreedy"));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInput;
  }

  try {
    const std::string name = app.get_subcommands().front()->get_name();
    if (name == "select") return RunSelect(select_flags);
    if (name == "criticize") return RunCriticize(critic_flags, critic_count);
    if (name == "rank") return RunRank(rank_flags);
    if (name == "verify") return RunVerify(verify_flags);
    if (name == "bench") return RunBench(bench_flags);
    return kExitInput;
  } catch (const Failure& f) {
    std::cerr << "protoselect: " << f.message << "\n";
    return f.code;
  } catch (const std::exception& e) {
    std::cerr << "protoselect: " << e.what() << "\n";
    return kExitInternal;
  }
}
