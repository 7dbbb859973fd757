// Copyright 2026 The artctx Authors.
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

#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "artctx/graph.hpp"
#include "json.hpp"

namespace artctx {

// 1 - editDistance(a, b) / max(|a|, |b|) over Unicode code points.
// Two empty strings have similarity 1.
double normalized_levenshtein(std::string_view a, std::string_view b);

// True when both names end in a Roman numeral (I..XX) and the numerals
// differ, as in "Elizabeth I" / "Elizabeth II". Such names never merge.
bool numeral_guard(std::string_view a, std::string_view b);

inline constexpr double kDefaultDedupThreshold = 0.95;

struct MergeEntry {
  NodeId survivor;
  NodeId absorbed;
  std::string survivor_name;
  std::string absorbed_name;
  double similarity = 0.0;
};

struct FilteredNode {
  NodeId id;
  std::string name;
  std::string type;
  std::string reason;
};

// Fuzzy name deduplication. Nodes are visited in ascending (trimmed name, id)
// order; each surviving node absorbs every later node of the same type whose
// name similarity to it exceeds the threshold, unless the numeral guard fires.
std::vector<MergeEntry> dedup_nodes(Ackg& graph, double threshold = kDefaultDedupThreshold);

// Removes nodes whose type is unrecognized or outside `allowed`, together
// with their edges.
std::vector<FilteredNode> filter_by_type(Ackg& graph, std::span<const NodeType> allowed);

struct CleaningReport {
  std::size_t nodes_before = 0;
  std::size_t nodes_after = 0;
  std::size_t edges_before = 0;
  std::size_t edges_after = 0;
  double threshold = kDefaultDedupThreshold;
  std::vector<MergeEntry> merges;
  std::vector<FilteredNode> filtered;
};

nlohmann::ordered_json to_json(const CleaningReport& report);
std::string format_cleaning_summary(const CleaningReport& report);

}  // namespace artctx
