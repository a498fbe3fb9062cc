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

#ifndef PROTOSELECT_TOOLS_MANIFEST_H_
#define PROTOSELECT_TOOLS_MANIFEST_H_

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "protoselect/protoselect.h"

namespace protoselect::cli {

using Json = nlohmann::ordered_json;

inline constexpr const char* kManifestSchema = "protoselect/manifest@1";

// Everything that determines one CLI run, plus its wall-clock timings.
struct RunManifest {
  std::string subcommand;
  std::vector<std::string> inputs;
  bool has_header = false;
  bool standardize = false;
  std::optional<ps_kernel_spec> kernel;
  // "fixed" or "median".
  std::string bandwidth_source = "fixed";
  std::optional<ps_select_config> selection;
  std::uint64_t seed = 0;
  std::size_t threads = 1;
  std::string tool_version;
  // Subcommand-specific settings (rank names, verify sizes, bench grid, ...).
  Json options = Json::object();
  // Seconds per phase. Excluded from deterministic outputs.
  std::map<std::string, double> timings;

  Json ToJson(bool with_timings) const;
  static RunManifest FromJson(const Json& doc);

  friend bool operator==(const RunManifest& a, const RunManifest& b);
};

}  // namespace protoselect::cli

#endif  // PROTOSELECT_TOOLS_MANIFEST_H_
