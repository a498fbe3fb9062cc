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

#include "manifest.h"

#include <stdexcept>

namespace protoselect::cli {

namespace {

const char* FamilyName(ps_kernel_family family) {
  return family == PS_KERNEL_LINEAR ? "linear" : "gaussian";
}

ps_kernel_family ParseFamily(const std::string& name) {
  if (name == "gaussian") return PS_KERNEL_GAUSSIAN;
  if (name == "linear") return PS_KERNEL_LINEAR;
  throw std::invalid_argument("unknown kernel family '" + name + "'");
}

Json KernelToJson(const ps_kernel_spec& spec) {
  Json out;
  out["family"] = FamilyName(spec.family);
  out["bandwidth"] = spec.bandwidth;
  out["jitter"] = spec.jitter;
  return out;
}

ps_kernel_spec KernelFromJson(const Json& doc) {
  ps_kernel_spec spec;
  ps_kernel_spec_default(&spec);
  spec.family = ParseFamily(doc.at("family").get<std::string>());
  spec.bandwidth = doc.at("bandwidth").get<double>();
  spec.jitter = doc.at("jitter").get<double>();
  return spec;
}

Json SelectionToJson(const ps_select_config& config) {
  Json out;
  out["method"] = ps_method_name(config.method);
  if (config.use_epsilon) {
    out["epsilon"] = config.epsilon;
  } else {
    out["m"] = config.m;
  }
  out["oversample"] = config.oversample;
  out["seed"] = config.seed;
  out["kkt_tolerance"] = config.kkt_tolerance;
  out["max_iterations"] = config.max_iterations;
  return out;
}

ps_select_config SelectionFromJson(const Json& doc, std::size_t threads) {
  ps_select_config config;
  ps_select_config_default(&config);
  const std::string method = doc.at("method").get<std::string>();
  if (ps_method_parse(method.c_str(), &config.method) != PS_OK) {
    throw std::invalid_argument(ps_last_error());
  }
  if (doc.contains("epsilon")) {
    config.use_epsilon = 1;
    config.epsilon = doc.at("epsilon").get<double>();
  } else {
    config.m = doc.at("m").get<std::size_t>();
  }
  config.oversample = doc.at("oversample").get<std::size_t>();
  config.seed = doc.at("seed").get<std::uint64_t>();
  config.kkt_tolerance = doc.at("kkt_tolerance").get<double>();
  config.max_iterations = doc.at("max_iterations").get<std::size_t>();
  config.threads = threads;
  return config;
}

bool SameKernel(const ps_kernel_spec& a, const ps_kernel_spec& b) {
  return a.family == b.family && a.bandwidth == b.bandwidth &&
         a.jitter == b.jitter;
}

bool SameSelection(const ps_select_config& a, const ps_select_config& b) {
  if (a.use_epsilon != b.use_epsilon) return false;
  if (a.use_epsilon ? a.epsilon != b.epsilon : a.m != b.m) return false;
  return a.method == b.method && a.seed == b.seed &&
         a.oversample == b.oversample && a.kkt_tolerance == b.kkt_tolerance &&
         a.max_iterations == b.max_iterations && a.threads == b.threads;
}

}  // namespace

Json RunManifest::ToJson(bool with_timings) const {
  Json out;
  out["schema"] = kManifestSchema;
  out["tool_version"] = tool_version;
  out["subcommand"] = subcommand;
  out["inputs"] = inputs;
  out["has_header"] = has_header;
  out["standardize"] = standardize;
  if (kernel) {
    out["kernel"] = KernelToJson(*kernel);
    out["bandwidth_source"] = bandwidth_source;
  }
  if (selection) out["selection"] = SelectionToJson(*selection);
  out["seed"] = seed;
  out["threads"] = threads;
  out["options"] = options;
  if (with_timings) out["timings"] = timings;
  return out;
}

RunManifest RunManifest::FromJson(const Json& doc) {
  if (doc.value("schema", std::string()) != kManifestSchema) {
    throw std::invalid_argument("not a run manifest");
  }
  RunManifest out;
  out.tool_version = doc.at("tool_version").get<std::string>();
  out.subcommand = doc.at("subcommand").get<std::string>();
  out.inputs = doc.at("inputs").get<std::vector<std::string>>();
  out.has_header = doc.at("has_header").get<bool>();
  out.standardize = doc.at("standardize").get<bool>();
  out.seed = doc.at("seed").get<std::uint64_t>();
  out.threads = doc.at("threads").get<std::size_t>();
  if (doc.contains("kernel")) {
    out.kernel = KernelFromJson(doc.at("kernel"));
    out.bandwidth_source = doc.at("bandwidth_source").get<std::string>();
  }
  if (doc.contains("selection")) {
    out.selection = SelectionFromJson(doc.at("selection"), out.threads);
  }
  out.options = doc.at("options");
  if (doc.contains("timings")) {
    out.timings = doc.at("timings").get<std::map<std::string, double>>();
  }
  return out;
}

bool operator==(const RunManifest& a, const RunManifest& b) {
  if (a.kernel.has_value() != b.kernel.has_value()) return false;
  if (a.kernel && !SameKernel(*a.kernel, *b.kernel)) return false;
  if (a.selection.has_value() != b.selection.has_value()) return false;
  if (a.selection && !SameSelection(*a.selection, *b.selection)) return false;
  return a.subcommand == b.subcommand && a.inputs == b.inputs &&
         a.has_header == b.has_header && a.standardize == b.standardize &&
         a.bandwidth_source == b.bandwidth_source && a.seed == b.seed &&
         a.threads == b.threads && a.tool_version == b.tool_version &&
         a.options == b.options && a.timings == b.timings;
}

}  // namespace protoselect::cli
