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
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "artctx/embedding.hpp"
#include "artctx/gateway.hpp"
#include "artctx/graph.hpp"
#include "artctx/prompts.hpp"
#include "json.hpp"

namespace artctx {

// Attribute keys in the order they are rendered. Other keys follow in
// lexicographic order.
inline constexpr std::array<std::string_view, 6> kAttributeOrder = {
    "title", "artist", "technique", "timeframe", "type", "school"};

struct PaintingQuery {
  std::optional<ImageRef> image;
  std::vector<std::pair<std::string, std::string>> attributes;
  std::string question;

  // Throws kValidation when neither an image nor a non-empty attribute is
  // present.
  void validate() const;
  void set_attribute(std::string key, std::string value);
  // Non-empty attributes in rendering order.
  std::vector<std::pair<std::string, std::string>> ordered_attributes() const;
};

// "key: value" lines in rendering order.
std::string format_attributes(const PaintingQuery& painting);

enum class RankScoring { kLinear, kReciprocal };

struct RetrieverConfig {
  std::size_t k_coarse = 5;  // seeds from cosine retrieval
  std::size_t k = 10;        // candidates after edge-degree expansion
  std::size_t m = 5;         // nodes kept after pruning
  double lambda = 0.5;
  std::size_t n_concepts = 5;
  RankScoring rank_scoring = RankScoring::kLinear;
  std::size_t ranking_description_chars = 256;

  void validate() const;
};

struct ConceptList {
  std::vector<std::string> concepts;
  std::size_t target = 0;
  // Number of chat calls made (1 or 2).
  int attempts = 0;
  // Entries appended from attribute values.
  std::size_t padded = 0;
};

// Bulleted or numbered Markdown list items, emphasis stripped, duplicates
// (case-insensitive) removed.
std::vector<std::string> parse_concept_list(std::string_view text);

// One vision call; a second call when the first yields fewer than n items;
// then padding from attribute values. Throws kConceptDetection if neither
// call yields a concept. The list can stay shorter than n when the model and
// attributes together offer fewer distinct descriptors.
ConceptList detect_concepts(Gateway& gateway, const PromptSet& prompts,
                            const PaintingQuery& painting, std::size_t n);

// Attribute lines in fixed key order, then "Concepts: c1; c2; ...".
std::string build_query_text(const PaintingQuery& painting, std::span<const std::string> concepts);

// Seed hits from cosine similarity, best first.
std::vector<RetrievalHit> coarse_retrieve(const VectorIndex& index,
                                          const EmbeddingVector& query, std::size_t k_coarse);

// Grows the seed set one node at a time along the frontier edge with the
// largest edge degree (ties: endpoint-id pair ascending) until k nodes or no
// frontier edges remain. Seeds keep their positions at the front.
std::vector<NodeId> expand_by_edge_degree(const Ackg& graph, std::span<const NodeId> seeds,
                                          std::size_t k);

// Candidate numbers (1-based) from a "RANKING: 3, 1, 2" line, or from a line
// made only of numbers and separators. Out-of-range and repeated numbers are
// ignored; nullopt when nothing usable is found.
std::optional<std::vector<std::size_t>> parse_ranking(std::string_view text, std::size_t count);

// Score for rank r (1-based) among count candidates: count - r + 1, or 1/r.
double rank_score(std::size_t rank, std::size_t count, RankScoring scoring);

struct RankingOutcome {
  std::vector<NodeId> order;  // best first
  std::vector<double> s_ms;   // aligned with the candidate list
  bool fallback = false;
  int attempts = 0;
};

ChatRequest build_ranking_request(const PromptSet& prompts, const PaintingQuery& painting,
                                  const Ackg& graph, std::span<const NodeId> candidates,
                                  std::size_t description_chars);

// Asks the model to rank candidates (one retry). Omitted candidates follow
// in id order. If no ranking parses, candidates are ordered by
// `fallback_similarity` (aligned with candidates) and `fallback` is set.
RankingOutcome rank_multimodal(Gateway& gateway, const PromptSet& prompts,
                               const PaintingQuery& painting, const Ackg& graph,
                               std::span<const NodeId> candidates,
                               std::span<const double> fallback_similarity,
                               const RetrieverConfig& config);

// Degree of each candidate in the full graph.
std::vector<double> centrality_scores(const Ackg& graph, std::span<const NodeId> candidates);

template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, 1> softmax(
    const Eigen::MatrixBase<Derived>& x) {
  using Vec = Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, 1>;
  if (x.size() == 0) return Vec();
  const Vec shifted = (x.array() - x.maxCoeff()).exp().matrix();
  return shifted / shifted.sum();
}

// lambda * softmax(s_ms) + (1 - lambda) * softmax(s_gc).
template <typename DerivedA, typename DerivedB>
Eigen::VectorXd combine_scores(const Eigen::MatrixBase<DerivedA>& s_ms,
                               const Eigen::MatrixBase<DerivedB>& s_gc, double lambda) {
  if (s_ms.size() != s_gc.size()) {
    throw Error(ErrorCode::kValidation, "combine_scores: score vectors differ in length");
  }
  if (!(lambda >= 0.0 && lambda <= 1.0)) {
    throw Error(ErrorCode::kValidation, "combine_scores: lambda must be in [0, 1]");
  }
  return lambda * softmax(s_ms.template cast<double>()) +
         (1.0 - lambda) * softmax(s_gc.template cast<double>());
}

struct ScoredNode {
  NodeId id;
  double s_ms = 0.0;
  double s_gc = 0.0;
  double s = 0.0;
};

struct RetrievalTrace {
  std::vector<std::string> concepts;
  std::size_t concepts_padded = 0;
  std::string query_text;
  std::vector<RetrievalHit> seeds;
  std::vector<NodeId> expansion;      // nodes added by expansion, in order
  std::vector<ScoredNode> candidates;  // every candidate with its scores
  std::vector<NodeId> ranking;         // multimodal order, best first
  bool ranking_fallback = false;
};

struct ContextSubgraph {
  std::vector<KgNode> nodes;        // ordered by combined score, best first
  std::vector<ScoredNode> scores;   // aligned with nodes
  std::vector<KgEdge> edges;        // induced edges, by endpoint-id pair
  RetrievalTrace trace;

  bool empty() const { return nodes.empty(); }
};

// Top-m by combined score (ties: id ascending) and their induced edges.
// m is clamped to the candidate count.
ContextSubgraph prune_to_subgraph(const Ackg& graph, std::vector<ScoredNode> scored, std::size_t m);

// Concepts, query embedding, coarse retrieval, expansion, ranking and
// centrality scoring, score fusion, pruning. Errors carry a "retrieve/..."
// stage tag.
ContextSubgraph retrieve_context(Gateway& gateway, const Ackg& graph, const VectorIndex& index,
                                 const PaintingQuery& painting, const RetrieverConfig& config,
                                 const PromptSet& prompts = PromptSet::defaults());

nlohmann::ordered_json to_json(const ContextSubgraph& subgraph);

// Pretty-printed JSON plus trailing newline; shared by the CLI and service.
std::string render_subgraph_json(const ContextSubgraph& subgraph);

}  // namespace artctx
