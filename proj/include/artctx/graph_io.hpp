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

#include <filesystem>
#include <iosfwd>
#include <string>

#include "artctx/graph.hpp"
#include "json.hpp"

namespace artctx {

// Line-delimited graph records, nodes first:
//   {"kind":"node","id":...,"name":...,"type":...,"description":...,"provenance":[...]}
//   {"kind":"edge","source":...,"target":...,"description":...,"provenance":[...]}
// Provenance entries are {"doc":<document id>,"chunk":<index>}.
void save_graph(const Ackg& graph, std::ostream& out);
void save_graph(const Ackg& graph, const std::filesystem::path& path);

// Throws kParse (with line number) on malformed records and kIntegrity on
// edges whose endpoints are missing.
Ackg load_graph(std::istream& in);
Ackg load_graph(const std::filesystem::path& path);

nlohmann::ordered_json to_json(const KgNode& node);
nlohmann::ordered_json to_json(const KgEdge& edge);
nlohmann::ordered_json to_json(const Provenance& provenance);
nlohmann::ordered_json to_json(const GraphStats& stats);

// Plain-text table with the columns Node Type / # Nodes / # Edges / Avg. Len.
std::string format_stats_table(const GraphStats& stats);

}  // namespace artctx
