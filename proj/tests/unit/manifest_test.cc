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

#include <gtest/gtest.h>

#include "manifest.h"

namespace protoselect::cli {
namespace {

RunManifest Sample() {
  RunManifest m;
  m.subcommand = "select";
  m.inputs = {"target.csv", "source.csv"};
  m.has_header = true;
  m.standardize = true;
  ps_kernel_spec spec;
  ps_kernel_spec_default(&spec);
  spec.bandwidth = 1.25;
  m.kernel = spec;
  m.bandwidth_source = "median";
  ps_select_config config;
  ps_select_config_default(&config);
  config.method = PS_METHOD_PROTOGREEDY;
  config.m = 7;
  config.threads = 3;
  m.selection = config;
  m.seed = 42;
  m.threads = 3;
  m.tool_version = ps_version();
  m.options = {{"cv", {0.5, 1.0}}};
  m.timings = {{"kernel", 0.25}, {"select", 1.5}};
  return m;
}

TEST(RunManifest, RoundTripsWithTimings) {
  const RunManifest m = Sample();
  const Json doc = m.ToJson(true);
  EXPECT_EQ(doc["schema"], kManifestSchema);
  EXPECT_EQ(RunManifest::FromJson(Json::parse(doc.dump())), m);
}

TEST(RunManifest, TimingsAreOptional) {
  RunManifest m = Sample();
  const Json doc = m.ToJson(false);
  EXPECT_FALSE(doc.contains("timings"));
  m.timings.clear();
  EXPECT_EQ(RunManifest::FromJson(doc), m);
}

TEST(RunManifest, EpsilonSelectionRoundTrips) {
  RunManifest m = Sample();
  m.selection->use_epsilon = 1;
  m.selection->epsilon = 1e-3;
  const Json doc = m.ToJson(true);
  EXPECT_FALSE(doc["selection"].contains("m"));
  EXPECT_EQ(RunManifest::FromJson(doc), m);
}

TEST(RunManifest, WithoutKernelOrSelection) {
  RunManifest m;
  m.subcommand = "verify";
  m.options = {{"instances", 10}};
  EXPECT_EQ(RunManifest::FromJson(m.ToJson(true)), m);
}

TEST(RunManifest, RejectsForeignDocuments) {
  EXPECT_THROW(RunManifest::FromJson(Json{{"schema", "other"}}),
               std::invalid_argument);
  Json doc = Sample().ToJson(true);
  doc["selection"]["method"] = "simplex";
  EXPECT_THROW(RunManifest::FromJson(doc), std::invalid_argument);
}

}  // namespace
}  // namespace protoselect::cli
