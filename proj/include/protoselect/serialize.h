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

// JSON documents emitted by the library. Keys keep insertion order and every
// document carries a "schema" tag; the matching JSON Schemas live in
// schemas/.

#ifndef PROTOSELECT_SERIALIZE_H_
#define PROTOSELECT_SERIALIZE_H_

#include <cstddef>
#include <vector>

#include "json.hpp"
#include "protoselect/oracle.h"
#include "protoselect/ranking.h"
#include "protoselect/selectors.h"

namespace protoselect {

using Json = nlohmann::ordered_json;

inline constexpr const char* kSelectionSchema = "protoselect/selection@1";
inline constexpr const char* kCriticismSchema = "protoselect/criticisms@1";
inline constexpr const char* kGuaranteeSchema = "protoselect/guarantee@1";
inline constexpr const char* kRankingSchema = "protoselect/ranking@1";
inline constexpr const char* kAveragesSchema = "protoselect/average-ranks@1";
inline constexpr const char* kGraphSchema = "protoselect/rank-graph@1";

// Deterministic content only; wall-clock timings are in TimingsToJson.
Json SelectionToJson(const SelectionResult& result);
Json TimingsToJson(const SelectionResult& result);
Json CriticismsToJson(const CriticismResult& result);
Json GuaranteeToJson(const GuaranteeReport& report);
Json RankingToJson(const RankMatrix& matrix);
Json AverageRanksToJson(const std::vector<AverageRank>& ranks);
// {nodes: [...], edges: [{from, to, rank, objective}]} mirroring ExportDot.
Json GraphToJson(const RankMatrix& matrix, std::size_t top_t);

}  // namespace protoselect

#endif  // PROTOSELECT_SERIALIZE_H_
