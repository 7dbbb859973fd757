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

#include "artctx/graph.hpp"

#include <algorithm>

#include "artctx/error.hpp"
#include "artctx/text.hpp"

namespace artctx {

std::string_view canonical_name(NodeType type) {
  switch (type) {
    case NodeType::kArtist: return "Artist";
    case NodeType::kTheme: return "Theme";
    case NodeType::kCultureHistory: return "Culture & History";
    case NodeType::kStyleTechnique: return "Art style & technique";
    case NodeType::kMovementSchool: return "Art Movement & school";
    case NodeType::kOther: return "Others";
  }
  return "Others";
}

std::string_view type_key(NodeType type) {
  switch (type) {
    case NodeType::kArtist: return "artist";
    case NodeType::kTheme: return "theme";
    case NodeType::kCultureHistory: return "culture-history";
    case NodeType::kStyleTechnique: return "style-technique";
    case NodeType::kMovementSchool: return "movement-school";
    case NodeType::kOther: return "other";
  }
  return "other";
}

std::optional<NodeType> parse_node_type(std::string_view text) {
  const std::string wanted = text::to_lower_ascii(text::trim(text));
  for (NodeType type : kAllNodeTypes) {
    if (text::to_lower_ascii(canonical_name(type)) == wanted) return type;
  }
  return std::nullopt;
}

NodeId canonical_node_id(std::string_view name, std::string_view type_suffix) {
  return text::slug(name) + ":" + text::slug(type_suffix);
}

KgNode make_node(std::string_view name, NodeType type,
                 std::string_view description, Provenance provenance) {
  KgNode node;
  node.name = std::string(text::trim(name));
  node.type = type;
  node.id = canonical_node_id(node.name, type_key(type));
  node.description = std::string(text::trim(description));
  node.provenance = std::move(provenance);
  return node;
}

KgNode make_node(std::string_view name, std::string_view raw_type,
                 std::string_view description, Provenance provenance) {
  if (auto parsed = parse_node_type(raw_type)) {
    return make_node(name, *parsed, description, std::move(provenance));
  }
  KgNode node = make_node(name, NodeType::kOther, description, std::move(provenance));
  node.raw_type = std::string(text::trim(raw_type));
  std::string suffix = text::slug(node.raw_type);
  node.id = canonical_node_id(node.name, suffix.empty() ? "untyped" : suffix);
  return node;
}

EdgeKey::EdgeKey(NodeId a, NodeId b) {
  if (b < a) std::swap(a, b);
  first = std::move(a);
  second = std::move(b);
}

std::string merge_descriptions(std::string_view existing, std::string_view added) {
  constexpr std::string_view kSep = " | ";
  std::vector<std::string> segments;
  auto absorb = [&](std::string_view s) {
    std::size_t start = 0;
    while (start <= s.size()) {
      const std::size_t pos = s.find(kSep, start);
      const std::string_view piece =
          text::trim(s.substr(start, pos == std::string_view::npos ? s.npos : pos - start));
      if (!piece.empty() &&
          std::find(segments.begin(), segments.end(), piece) == segments.end()) {
        segments.emplace_back(piece);
      }
      if (pos == std::string_view::npos) break;
      start = pos + kSep.size();
    }
  };
  absorb(existing);
  absorb(added);
  std::string out;
  for (const auto& seg : segments) {
    if (!out.empty()) out += kSep;
    out += seg;
  }
  return out;
}

void Ackg::require(const NodeId& id) const {
  if (!nodes_.contains(id)) throw Error(ErrorCode::kNotFound, "unknown node '" + id + "'");
}

NodeId Ackg::upsert_node(KgNode node) {
  node.name = std::string(text::trim(node.name));
  if (node.name.empty()) {
    throw Error(ErrorCode::kValidation, "node name is empty");
  }
  if (node.id.empty()) {
    node.id = canonical_node_id(
        node.name, node.has_schema_type() ? type_key(node.type) : node.raw_type);
  }
  auto it = nodes_.find(node.id);
  if (it == nodes_.end()) {
    NodeId id = node.id;
    adjacency_[id];
    nodes_.emplace(id, std::move(node));
    return id;
  }
  KgNode& existing = it->second;
  if (existing.type != node.type || existing.raw_type != node.raw_type) {
    throw Error(ErrorCode::kConflict, "node '" + node.id + "' already exists with type " +
                                          std::string(canonical_name(existing.type)));
  }
  existing.description = merge_descriptions(existing.description, node.description);
  existing.provenance.insert(node.provenance.begin(), node.provenance.end());
  return existing.id;
}

void Ackg::insert_or_merge_edge(KgEdge edge) {
  EdgeKey key = edge.key();
  auto it = edges_.find(key);
  if (it != edges_.end()) {
    it->second.description = merge_descriptions(it->second.description, edge.description);
    it->second.provenance.insert(edge.provenance.begin(), edge.provenance.end());
    return;
  }
  adjacency_[edge.source].insert(edge.target);
  adjacency_[edge.target].insert(edge.source);
  edges_.emplace(std::move(key), std::move(edge));
}

void Ackg::add_edge(const NodeId& source, const NodeId& target,
                    std::string_view description, const Provenance& provenance) {
  if (source == target) {
    throw Error(ErrorCode::kValidation, "self-loop on '" + source + "'");
  }
  for (const NodeId* id : {&source, &target}) {
    if (!nodes_.contains(*id)) {
      throw Error(ErrorCode::kDanglingEdge, "edge endpoint '" + *id + "' does not exist");
    }
  }
  insert_or_merge_edge(KgEdge{source, target, std::string(text::trim(description)), provenance});
}

void Ackg::remove_node(const NodeId& id) {
  require(id);
  for (const NodeId& other : adjacency_.at(id)) {
    edges_.erase(EdgeKey(id, other));
    adjacency_.at(other).erase(id);
  }
  adjacency_.erase(id);
  nodes_.erase(id);
}

void Ackg::merge_nodes(const NodeId& survivor, const NodeId& absorbed) {
  if (survivor == absorbed) {
    throw Error(ErrorCode::kValidation, "cannot merge node '" + survivor + "' into itself");
  }
  require(survivor);
  require(absorbed);

  std::vector<KgEdge> moved;
  for (const NodeId& other : adjacency_.at(absorbed)) {
    auto it = edges_.find(EdgeKey(absorbed, other));
    KgEdge edge = std::move(it->second);
    edges_.erase(it);
    adjacency_.at(other).erase(absorbed);
    if (other == survivor) continue;
    (edge.source == absorbed ? edge.source : edge.target) = survivor;
    moved.push_back(std::move(edge));
  }
  adjacency_.erase(absorbed);
  for (KgEdge& edge : moved) insert_or_merge_edge(std::move(edge));

  KgNode& kept = nodes_.at(survivor);
  const KgNode& gone = nodes_.at(absorbed);
  kept.description = merge_descriptions(kept.description, gone.description);
  kept.provenance.insert(gone.provenance.begin(), gone.provenance.end());
  nodes_.erase(absorbed);
}

const KgNode& Ackg::node(const NodeId& id) const {
  require(id);
  return nodes_.at(id);
}

const std::set<NodeId>& Ackg::neighbors(const NodeId& id) const {
  require(id);
  return adjacency_.at(id);
}

const KgEdge* Ackg::find_edge(const NodeId& u, const NodeId& v) const {
  auto it = edges_.find(EdgeKey(u, v));
  return it == edges_.end() ? nullptr : &it->second;
}

std::size_t Ackg::degree(const NodeId& id) const { return neighbors(id).size(); }

std::size_t Ackg::edge_degree(const NodeId& u, const NodeId& v) const {
  if (find_edge(u, v) == nullptr) {
    throw Error(ErrorCode::kNotFound, "unknown edge {" + u + ", " + v + "}");
  }
  const auto& nu = adjacency_.at(u);
  const auto& nv = adjacency_.at(v);
  std::size_t shared = 0;
  for (const NodeId& x : nu) shared += nv.contains(x) ? 1 : 0;
  return nu.size() + nv.size() - shared - 2;
}

std::vector<KgEdge> Ackg::induced_edges(std::span<const NodeId> ids) const {
  const std::set<NodeId> members(ids.begin(), ids.end());
  for (const NodeId& id : members) require(id);
  std::vector<KgEdge> out;
  // Visit from the lexicographically smaller endpoint so each edge is seen once.
  for (const NodeId& u : members) {
    for (const NodeId& v : adjacency_.at(u)) {
      if (u < v && members.contains(v)) out.push_back(edges_.at(EdgeKey(u, v)));
    }
  }
  std::sort(out.begin(), out.end(),
            [](const KgEdge& a, const KgEdge& b) { return a.key() < b.key(); });
  return out;
}

GraphStats stats(const Ackg& graph) {
  GraphStats result;
  std::map<NodeType, std::size_t> words;
  std::size_t total_words = 0;
  for (NodeType type : kAllNodeTypes) result.per_type[type];
  for (const auto& [id, node] : graph.nodes()) {
    result.per_type[node.type].nodes += 1;
    const std::size_t w = text::count_words(node.description);
    words[node.type] += w;
    total_words += w;
  }
  for (const auto& [key, edge] : graph.edges()) {
    result.per_type[graph.node(edge.source).type].edges += 1;
  }
  for (auto& [type, row] : result.per_type) {
    if (row.nodes > 0) {
      row.avg_description_words = static_cast<double>(words[type]) / static_cast<double>(row.nodes);
    }
  }
  result.total.nodes = graph.node_count();
  result.total.edges = graph.edge_count();
  if (graph.node_count() > 0) {
    result.total.avg_description_words =
        static_cast<double>(total_words) / static_cast<double>(graph.node_count());
  }
  return result;
}

}  // namespace artctx
