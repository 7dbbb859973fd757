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

#include <array>
#include <compare>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace artctx {

enum class NodeType {
  kArtist,
  kTheme,
  kCultureHistory,
  kStyleTechnique,
  kMovementSchool,
  kOther,
};

inline constexpr std::array<NodeType, 6> kAllNodeTypes = {
    NodeType::kArtist,         NodeType::kTheme,
    NodeType::kCultureHistory, NodeType::kStyleTechnique,
    NodeType::kMovementSchool, NodeType::kOther,
};

// "Artist", "Theme", "Culture & History", "Art style & technique",
// "Art Movement & school", "Others".
std::string_view canonical_name(NodeType type);

// Short lowercase key used as the id suffix ("artist", "culture-history").
std::string_view type_key(NodeType type);

// Case-insensitive match against the canonical names only.
std::optional<NodeType> parse_node_type(std::string_view text);

using NodeId = std::string;

struct ChunkRef {
  std::string document_id;
  std::size_t chunk_index = 0;

  auto operator<=>(const ChunkRef&) const = default;
};

using Provenance = std::set<ChunkRef>;

struct KgNode {
  NodeId id;
  std::string name;
  NodeType type = NodeType::kOther;
  std::string description;
  Provenance provenance;
  // Type string as the extractor produced it, kept only when it does not
  // parse as a schema type. Such nodes are removed by type filtering.
  std::string raw_type;

  bool has_schema_type() const { return raw_type.empty(); }
  bool operator==(const KgNode&) const = default;
};

// Lowercase, whitespace-normalized name slug plus a type suffix,
// e.g. "claude-monet:artist". Names differing only in case collide.
NodeId canonical_node_id(std::string_view name, std::string_view type_suffix);

// Builds a node with its canonical id. An unparseable raw type yields
// NodeType::kOther with raw_type set and the raw slug as id suffix.
KgNode make_node(std::string_view name, std::string_view raw_type,
                 std::string_view description, Provenance provenance = {});
KgNode make_node(std::string_view name, NodeType type,
                 std::string_view description, Provenance provenance = {});

// Unordered node pair, stored with first < second.
struct EdgeKey {
  NodeId first;
  NodeId second;

  EdgeKey(NodeId a, NodeId b);
  auto operator<=>(const EdgeKey&) const = default;
};

struct KgEdge {
  NodeId source;
  NodeId target;
  std::string description;
  Provenance provenance;

  EdgeKey key() const { return EdgeKey(source, target); }
  bool operator==(const KgEdge&) const = default;
};

// Joins " | "-separated description segments, dropping duplicates and
// empty segments while keeping first-seen order.
std::string merge_descriptions(std::string_view existing, std::string_view added);

// Undirected typed knowledge graph. Edges keep their written orientation
// for rendering; degree, neighbors and edge degree ignore it.
//
// Mutation requires exclusive access. Once construction is done the graph
// can be shared read-only across threads.
class Ackg {
 public:
  // Inserts the node, or merges description and provenance into an existing
  // node with the same id. Returns the id used. An empty id is replaced by
  // the canonical id.
  NodeId upsert_node(KgNode node);

  // Adds an undirected edge, merging descriptions if the pair is present.
  void add_edge(const NodeId& source, const NodeId& target,
                std::string_view description, const Provenance& provenance = {});

  void remove_node(const NodeId& id);

  // Absorbs `absorbed` into `survivor`: edges re-pointed, duplicate edges
  // merged, self-loops dropped.
  void merge_nodes(const NodeId& survivor, const NodeId& absorbed);

  bool contains(const NodeId& id) const { return nodes_.contains(id); }
  const KgNode& node(const NodeId& id) const;
  const std::set<NodeId>& neighbors(const NodeId& id) const;
  const KgEdge* find_edge(const NodeId& u, const NodeId& v) const;

  std::size_t degree(const NodeId& id) const;

  // |N(u) ∪ N(v)| - 2 for an existing edge {u, v}.
  std::size_t edge_degree(const NodeId& u, const NodeId& v) const;

  // Edges with both endpoints in `ids`, ordered by endpoint-id pair.
  std::vector<KgEdge> induced_edges(std::span<const NodeId> ids) const;

  std::size_t node_count() const { return nodes_.size(); }
  std::size_t edge_count() const { return edges_.size(); }
  const std::map<NodeId, KgNode>& nodes() const { return nodes_; }
  const std::map<EdgeKey, KgEdge>& edges() const { return edges_; }

  bool operator==(const Ackg&) const = default;

 private:
  void require(const NodeId& id) const;
  void insert_or_merge_edge(KgEdge edge);

  std::map<NodeId, KgNode> nodes_;
  std::map<NodeId, std::set<NodeId>> adjacency_;
  std::map<EdgeKey, KgEdge> edges_;
};

struct TypeStats {
  std::size_t nodes = 0;
  // Edges whose source node has this type, so the column sums to the total.
  std::size_t edges = 0;
  double avg_description_words = 0.0;
};

struct GraphStats {
  std::map<NodeType, TypeStats> per_type;
  TypeStats total;
};

GraphStats stats(const Ackg& graph);

}  // namespace artctx
