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

#include "artctx/graph_io.hpp"

#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>

#include "artctx/error.hpp"
#include "artctx/text.hpp"

namespace artctx {

using nlohmann::ordered_json;

ordered_json to_json(const Provenance& provenance) {
  ordered_json out = ordered_json::array();
  for (const ChunkRef& ref : provenance) {
    out.push_back({{"doc", ref.document_id}, {"chunk", ref.chunk_index}});
  }
  return out;
}

ordered_json to_json(const KgNode& node) {
  ordered_json out;
  out["kind"] = "node";
  out["id"] = node.id;
  out["name"] = node.name;
  out["type"] = node.has_schema_type() ? std::string(canonical_name(node.type)) : node.raw_type;
  out["description"] = node.description;
  out["provenance"] = to_json(node.provenance);
  return out;
}

ordered_json to_json(const KgEdge& edge) {
  ordered_json out;
  out["kind"] = "edge";
  out["source"] = edge.source;
  out["target"] = edge.target;
  out["description"] = edge.description;
  out["provenance"] = to_json(edge.provenance);
  return out;
}

void save_graph(const Ackg& graph, std::ostream& out) {
  for (const auto& [id, node] : graph.nodes()) out << to_json(node).dump() << '\n';
  for (const auto& [key, edge] : graph.edges()) out << to_json(edge).dump() << '\n';
}

void save_graph(const Ackg& graph, const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  save_graph(graph, out);
}

namespace {

[[noreturn]] void parse_fail(std::size_t line, const std::string& what) {
  throw Error(ErrorCode::kParse, "line " + std::to_string(line) + ": " + what);
}

const std::string& string_field(const nlohmann::json& rec, const char* key, std::size_t line) {
  auto it = rec.find(key);
  if (it == rec.end() || !it->is_string()) {
    parse_fail(line, std::string("missing string field '") + key + "'");
  }
  return it->get_ref<const std::string&>();
}

Provenance parse_provenance(const nlohmann::json& rec, std::size_t line) {
  Provenance out;
  auto it = rec.find("provenance");
  if (it == rec.end()) return out;
  if (!it->is_array()) parse_fail(line, "provenance must be an array");
  for (const auto& entry : *it) {
    if (!entry.is_object() || !entry.contains("doc") || !entry["doc"].is_string() ||
        !entry.contains("chunk") || !entry["chunk"].is_number_unsigned()) {
      parse_fail(line, "malformed provenance entry");
    }
    out.insert(ChunkRef{entry["doc"].get<std::string>(), entry["chunk"].get<std::size_t>()});
  }
  return out;
}

}  // namespace

Ackg load_graph(std::istream& in) {
  Ackg graph;
  std::string line;
  std::size_t line_no = 0;
  bool seen_edge = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (text::trim(line).empty()) continue;
    nlohmann::json rec;
    try {
      rec = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      parse_fail(line_no, e.what());
    }
    if (!rec.is_object()) parse_fail(line_no, "record is not an object");
    const std::string& kind = string_field(rec, "kind", line_no);
    if (kind == "node") {
      if (seen_edge) parse_fail(line_no, "node record after edge records");
      const std::string& type_text = string_field(rec, "type", line_no);
      KgNode node;
      node.id = string_field(rec, "id", line_no);
      node.name = string_field(rec, "name", line_no);
      node.description = string_field(rec, "description", line_no);
      node.provenance = parse_provenance(rec, line_no);
      if (auto type = parse_node_type(type_text)) {
        node.type = *type;
      } else {
        node.type = NodeType::kOther;
        node.raw_type = type_text;
      }
      if (node.id.empty()) parse_fail(line_no, "empty node id");
      try {
        graph.upsert_node(std::move(node));
      } catch (const Error& e) {
        parse_fail(line_no, e.detail());
      }
    } else if (kind == "edge") {
      seen_edge = true;
      const std::string& source = string_field(rec, "source", line_no);
      const std::string& target = string_field(rec, "target", line_no);
      if (!graph.contains(source) || !graph.contains(target)) {
        throw Error(ErrorCode::kIntegrity, "line " + std::to_string(line_no) +
                                               ": edge references missing node");
      }
      try {
        graph.add_edge(source, target, string_field(rec, "description", line_no),
                       parse_provenance(rec, line_no));
      } catch (const Error& e) {
        parse_fail(line_no, e.detail());
      }
    } else {
      parse_fail(line_no, "unknown record kind '" + kind + "'");
    }
  }
  return graph;
}

Ackg load_graph(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open graph file " + path.string());
  return load_graph(in);
}

ordered_json to_json(const GraphStats& stats) {
  auto row = [](std::string_view label, const TypeStats& s) {
    ordered_json r;
    r["node_type"] = label;
    r["nodes"] = s.nodes;
    r["edges"] = s.edges;
    r["avg_len"] = s.avg_description_words;
    return r;
  };
  ordered_json out;
  out["rows"] = ordered_json::array();
  for (const auto& [type, s] : stats.per_type) out["rows"].push_back(row(canonical_name(type), s));
  out["total"] = row("Total (Overall Graph)", stats.total);
  return out;
}

std::string format_stats_table(const GraphStats& stats) {
  std::string out;
  char buf[128];
  auto line = [&](std::string_view label, const TypeStats& s) {
    std::snprintf(buf, sizeof buf, "%-24.*s %10zu %10zu %10.1f\n", static_cast<int>(label.size()),
                  label.data(), s.nodes, s.edges, s.avg_description_words);
    out += buf;
  };
  std::snprintf(buf, sizeof buf, "%-24s %10s %10s %10s\n", "Node Type", "# Nodes", "# Edges",
                "Avg. Len");
  out += buf;
  for (const auto& [type, s] : stats.per_type) line(canonical_name(type), s);
  line("Total (Overall Graph)", stats.total);
  return out;
}

}  // namespace artctx
