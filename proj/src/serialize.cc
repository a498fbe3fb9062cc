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

#include "protoselect/serialize.h"

#include <cmath>

namespace protoselect {

namespace {

Json SupportToJson(const SupportSet& set) {
  Json out = Json::array();
  for (Index i : set) out.push_back(i);
  return out;
}

}  // namespace

Json SelectionToJson(const SelectionResult& result) {
  Json out;
  out["schema"] = kSelectionSchema;
  out["method"] = MethodName(result.method);
  out["indices"] = SupportToJson(result.indices);
  out["weights"] = result.weights.weights();
  out["objective"] = result.objective();
  out["objective_trace"] = result.objective_trace;
  out["gradient_trace"] = result.gradient_trace;
  if (result.method == Method::kL2cEqual ||
      result.method == Method::kL2cAdapted) {
    out["uniform_objective_trace"] = result.uniform_objective_trace;
  }
  out["stopped_early"] = result.stopped_early;
  out["oversample"] = result.oversample;
  return out;
}

Json TimingsToJson(const SelectionResult& result) {
  Json out;
  out["wall_times"] = result.wall_times;
  double total = 0;
  for (double t : result.wall_times) total += t;
  out["total_seconds"] = total;
  return out;
}

Json CriticismsToJson(const CriticismResult& result) {
  Json out;
  out["schema"] = kCriticismSchema;
  out["indices"] = result.indices;
  out["scores"] = result.scores;
  return out;
}

Json GuaranteeToJson(const GuaranteeReport& report) {
  Json out;
  out["schema"] = kGuaranteeSchema;
  out["m"] = report.m;
  out["dash_set"] = SupportToJson(report.dash_set);
  out["greedy_set"] = SupportToJson(report.greedy_set);
  out["optimal_set"] = SupportToJson(report.optimal_set);
  out["f_dash"] = report.f_dash;
  out["f_greedy"] = report.f_greedy;
  out["f_opt"] = report.f_opt;
  out["gamma"] = report.gamma;
  out["gamma_greedy"] = report.gamma_greedy;
  out["degenerate"] = report.degenerate;
  out["c"] = report.c;
  out["C_tilde"] = report.C_tilde;
  out["C"] = report.C;
  out["bound"] = report.bound;
  out["bound_generic"] = report.bound_generic;
  out["greedy_bound"] = report.greedy_bound;
  out["satisfied"] = report.satisfied;
  out["generic_satisfied"] = report.generic_satisfied;
  out["greedy_satisfied"] = report.greedy_satisfied;
  return out;
}

Json RankingToJson(const RankMatrix& matrix) {
  const std::size_t k = matrix.size();
  Json out;
  out["schema"] = kRankingSchema;
  out["names"] = matrix.names;
  Json objective = Json::array();
  for (std::size_t i = 0; i < k; ++i) {
    Json row = Json::array();
    for (std::size_t j = 0; j < k; ++j) {
      if (i == j) {
        row.push_back(nullptr);
      } else {
        row.push_back(matrix.objective(i, j));
      }
    }
    objective.push_back(std::move(row));
  }
  out["objective"] = std::move(objective);
  out["rank"] = matrix.rank;
  out["self_fit"] = matrix.self_fit;
  Json prototypes = Json::array();
  for (const SupportSet& s : matrix.prototypes) {
    prototypes.push_back(SupportToJson(s));
  }
  out["prototypes"] = std::move(prototypes);
  out["weights"] = matrix.weights;
  return out;
}

Json AverageRanksToJson(const std::vector<AverageRank>& ranks) {
  Json out;
  out["schema"] = kAveragesSchema;
  Json entries = Json::array();
  for (const AverageRank& r : ranks) {
    Json e;
    e["dataset"] = r.dataset;
    e["name"] = r.name;
    e["average_rank"] = r.value;
    entries.push_back(std::move(e));
  }
  out["ranks"] = std::move(entries);
  return out;
}

Json GraphToJson(const RankMatrix& matrix, std::size_t top_t) {
  const std::size_t k = matrix.size();
  if (top_t < 1 || top_t > k - 1) ThrowInput("top_t must lie in [1, k-1]");
  Json out;
  out["schema"] = kGraphSchema;
  Json nodes = Json::array();
  for (std::size_t j = 0; j < k; ++j) {
    Json node;
    node["id"] = j;
    node["name"] = matrix.names[j];
    nodes.push_back(std::move(node));
  }
  Json edges = Json::array();
  for (std::size_t i = 0; i < k; ++i) {
    for (int r = 1; r <= static_cast<int>(top_t); ++r) {
      for (std::size_t j = 0; j < k; ++j) {
        if (j == i || matrix.rank[i][j] != r) continue;
        Json edge;
        edge["from"] = j;
        edge["to"] = i;
        edge["rank"] = r;
        edge["objective"] = matrix.objective(i, j);
        edges.push_back(std::move(edge));
      }
    }
  }
  out["nodes"] = std::move(nodes);
  out["edges"] = std::move(edges);
  return out;
}

}  // namespace protoselect
