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

#include "artctx/retriever.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>
#include <tuple>

#include "artctx/graph_io.hpp"
#include "artctx/text.hpp"

namespace artctx {

void PaintingQuery::validate() const {
  if (image) return;
  for (const auto& [key, value] : attributes) {
    if (!text::trim(value).empty()) return;
  }
  throw Error(ErrorCode::kValidation, "painting query needs an image or at least one attribute");
}

void PaintingQuery::set_attribute(std::string key, std::string value) {
  for (auto& [k, v] : attributes) {
    if (k == key) {
      v = std::move(value);
      return;
    }
  }
  attributes.emplace_back(std::move(key), std::move(value));
}

std::vector<std::pair<std::string, std::string>> PaintingQuery::ordered_attributes() const {
  auto position = [](const std::string& key) {
    auto it = std::find(kAttributeOrder.begin(), kAttributeOrder.end(), key);
    return static_cast<std::size_t>(it - kAttributeOrder.begin());
  };
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& [key, value] : attributes) {
    const std::string_view v = text::trim(value);
    if (!v.empty()) out.emplace_back(key, std::string(v));
  }
  std::stable_sort(out.begin(), out.end(), [&](const auto& a, const auto& b) {
    return std::make_tuple(position(a.first), std::cref(a.first)) <
           std::make_tuple(position(b.first), std::cref(b.first));
  });
  return out;
}

std::string format_attributes(const PaintingQuery& painting) {
  std::string out;
  for (const auto& [key, value] : painting.ordered_attributes()) {
    if (!out.empty()) out += '\n';
    out += key + ": " + value;
  }
  return out;
}

void RetrieverConfig::validate() const {
  auto fail = [](const std::string& what) { throw Error(ErrorCode::kValidation, what); };
  if (k_coarse < 1 || k_coarse > k) fail("retriever: require 1 <= k_coarse <= k");
  if (m < 1 || m > k) fail("retriever: require 1 <= m <= k");
  if (!(lambda >= 0.0 && lambda <= 1.0)) fail("retriever: lambda must be in [0, 1]");
  if (n_concepts < 1) fail("retriever: concepts must be at least 1");
}

// ---------------------------------------------------------------------------
// Concept detection

namespace {

std::optional<std::string_view> list_item(std::string_view line) {
  line = text::trim(line);
  for (std::string_view bullet : {"- ", "* ", "+ ", "• "}) {
    if (line.starts_with(bullet)) return text::trim(line.substr(bullet.size()));
  }
  std::size_t i = 0;
  while (i < line.size() && std::isdigit(static_cast<unsigned char>(line[i]))) ++i;
  if (i > 0 && i + 1 < line.size() && (line[i] == '.' || line[i] == ')') && line[i + 1] == ' ') {
    return text::trim(line.substr(i + 2));
  }
  return std::nullopt;
}

std::string clean_concept(std::string_view item) {
  if (item.starts_with("**")) {
    const std::size_t close = item.find("**", 2);
    if (close != std::string_view::npos && close > 2) return std::string(text::trim(item.substr(2, close - 2)));
  }
  std::string out;
  for (char c : item) {
    if (c != '*' && c != '`' && c != '_') out += c;
  }
  std::string_view v = text::trim(out);
  while (!v.empty() && (v.back() == '.' || v.back() == ';' || v.back() == ',')) v.remove_suffix(1);
  return std::string(text::trim(v));
}

void append_unique(std::vector<std::string>& into, std::string_view item) {
  const std::string key = text::to_lower_ascii(text::trim(item));
  if (key.empty()) return;
  for (const auto& existing : into) {
    if (text::to_lower_ascii(existing) == key) return;
  }
  into.emplace_back(text::trim(item));
}

ChatMessage user_message_with_image(const PaintingQuery& painting, std::string text) {
  ChatMessage msg{Role::kUser, std::move(text), {}};
  if (painting.image) msg.images.push_back(*painting.image);
  return msg;
}

}  // namespace

std::vector<std::string> parse_concept_list(std::string_view text_in) {
  std::vector<std::string> out;
  for (std::string_view line : text::split_lines(text_in)) {
    if (auto item = list_item(line)) append_unique(out, clean_concept(*item));
  }
  return out;
}

ConceptList detect_concepts(Gateway& gateway, const PromptSet& prompts,
                            const PaintingQuery& painting, std::size_t n) {
  painting.validate();
  if (n == 0) throw Error(ErrorCode::kValidation, "concept count must be positive");
  ChatRequest request;
  request.messages.push_back(
      {Role::kSystem, render_template(prompts.concepts, {{"n", std::to_string(n)}}), {}});
  std::string user = "Painting attributes:\n";
  for (const auto& [key, value] : painting.ordered_attributes()) {
    user += "- " + key + ": " + value + "\n";
  }
  if (painting.ordered_attributes().empty()) user += "(none)\n";
  request.messages.push_back(user_message_with_image(painting, std::move(user)));

  ConceptList result;
  result.target = n;
  for (int attempt = 1; attempt <= 2 && result.concepts.size() < n; ++attempt) {
    result.attempts = attempt;
    for (const auto& c : parse_concept_list(gateway.chat(request).text)) {
      append_unique(result.concepts, c);
    }
  }
  if (result.concepts.empty()) {
    throw Error(ErrorCode::kConceptDetection, "no concepts could be parsed after retry");
  }
  if (result.concepts.size() > n) result.concepts.resize(n);
  for (const auto& [key, value] : painting.ordered_attributes()) {
    if (result.concepts.size() >= n) break;
    const std::size_t before = result.concepts.size();
    append_unique(result.concepts, value);
    result.padded += result.concepts.size() - before;
  }
  return result;
}

std::string build_query_text(const PaintingQuery& painting, std::span<const std::string> concepts) {
  std::string out = format_attributes(painting);
  if (!concepts.empty()) {
    if (!out.empty()) out += '\n';
    out += "Concepts: ";
    for (std::size_t i = 0; i < concepts.size(); ++i) {
      if (i > 0) out += "; ";
      out += concepts[i];
    }
  }
  if (out.empty()) throw Error(ErrorCode::kValidation, "query needs attributes or concepts");
  return out;
}

// ---------------------------------------------------------------------------
// Coarse retrieval and expansion

std::vector<RetrievalHit> coarse_retrieve(const VectorIndex& index, const EmbeddingVector& query,
                                          std::size_t k_coarse) {
  return index.top_k(query, k_coarse);
}

std::vector<NodeId> expand_by_edge_degree(const Ackg& graph, std::span<const NodeId> seeds,
                                          std::size_t k) {
  std::vector<NodeId> members;
  std::set<NodeId> in_set;
  for (const NodeId& s : seeds) {
    graph.node(s);
    if (in_set.insert(s).second) members.push_back(s);
  }
  while (members.size() < k) {
    // Frontier edges are recomputed after every addition.
    std::optional<std::tuple<std::size_t, EdgeKey, NodeId>> best;
    for (const NodeId& u : members) {
      for (const NodeId& v : graph.neighbors(u)) {
        if (in_set.contains(v)) continue;
        const std::size_t degree = graph.edge_degree(u, v);
        EdgeKey key(u, v);
        const bool better = !best || degree > std::get<0>(*best) ||
                            (degree == std::get<0>(*best) && key < std::get<1>(*best));
        if (better) best.emplace(degree, std::move(key), v);
      }
    }
    if (!best) break;
    in_set.insert(std::get<2>(*best));
    members.push_back(std::get<2>(*best));
  }
  return members;
}

// ---------------------------------------------------------------------------
// Multimodal ranking

std::optional<std::vector<std::size_t>> parse_ranking(std::string_view response,
                                                      std::size_t count) {
  auto numbers_in = [&](std::string_view s) {
    std::vector<std::size_t> out;
    std::set<std::size_t> seen;
    std::size_t i = 0;
    while (i < s.size()) {
      if (!std::isdigit(static_cast<unsigned char>(s[i]))) {
        ++i;
        continue;
      }
      std::size_t value = 0;
      while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) {
        value = value * 10 + static_cast<std::size_t>(s[i] - '0');
        if (value > 1'000'000) value = 1'000'000;
        ++i;
      }
      if (value >= 1 && value <= count && seen.insert(value).second) out.push_back(value);
    }
    return out;
  };
  auto only_numbers = [](std::string_view s) {
    bool digit = false;
    for (char c : s) {
      if (std::isdigit(static_cast<unsigned char>(c))) {
        digit = true;
      } else if (!std::isspace(static_cast<unsigned char>(c)) &&
                 std::string_view(",;>[]()#.-").find(c) == std::string_view::npos) {
        return false;
      }
    }
    return digit;
  };

  const auto lines = text::split_lines(response);
  for (std::string_view line : lines) {
    const std::string lower = text::to_lower_ascii(line);
    const std::size_t tag = lower.find("ranking:");
    if (tag == std::string::npos) continue;
    auto ranks = numbers_in(line.substr(tag + 8));
    if (!ranks.empty()) return ranks;
  }
  for (std::string_view line : lines) {
    if (!only_numbers(line)) continue;
    auto ranks = numbers_in(line);
    if (!ranks.empty()) return ranks;
  }
  return std::nullopt;
}

double rank_score(std::size_t rank, std::size_t count, RankScoring scoring) {
  if (scoring == RankScoring::kReciprocal) return 1.0 / static_cast<double>(rank);
  return static_cast<double>(count - rank + 1);
}

ChatRequest build_ranking_request(const PromptSet& prompts, const PaintingQuery& painting,
                                  const Ackg& graph, std::span<const NodeId> candidates,
                                  std::size_t description_chars) {
  ChatRequest request;
  request.messages.push_back(
      {Role::kSystem,
       render_template(prompts.ranking, {{"k", std::to_string(candidates.size())}}), {}});
  std::string user = "Painting:\n";
  const std::string attrs = format_attributes(painting);
  user += attrs.empty() ? "(no attributes)" : attrs;
  user += "\n\nCandidates:\n";
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    const KgNode& node = graph.node(candidates[i]);
    const std::string_view type =
        node.has_schema_type() ? canonical_name(node.type) : std::string_view(node.raw_type);
    user += "[" + std::to_string(i + 1) + "] " + node.name + " (" + std::string(type) +
            "): " + text::truncate_utf8(node.description, description_chars) + "\n";
  }
  request.messages.push_back(user_message_with_image(painting, std::move(user)));
  return request;
}

RankingOutcome rank_multimodal(Gateway& gateway, const PromptSet& prompts,
                               const PaintingQuery& painting, const Ackg& graph,
                               std::span<const NodeId> candidates,
                               std::span<const double> fallback_similarity,
                               const RetrieverConfig& config) {
  if (candidates.empty()) throw Error(ErrorCode::kValidation, "no candidates to rank");
  if (fallback_similarity.size() != candidates.size()) {
    throw Error(ErrorCode::kValidation, "fallback similarities must align with candidates");
  }
  const std::size_t count = candidates.size();
  const ChatRequest request =
      build_ranking_request(prompts, painting, graph, candidates, config.ranking_description_chars);

  RankingOutcome outcome;
  std::vector<std::size_t> order;  // 0-based candidate positions, best first
  for (int attempt = 1; attempt <= 2; ++attempt) {
    outcome.attempts = attempt;
    if (auto parsed = parse_ranking(gateway.chat(request).text, count)) {
      for (std::size_t r : *parsed) order.push_back(r - 1);
      break;
    }
  }

  if (order.empty()) {
    outcome.fallback = true;
    order.resize(count);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      if (fallback_similarity[a] != fallback_similarity[b]) {
        return fallback_similarity[a] > fallback_similarity[b];
      }
      return candidates[a] < candidates[b];
    });
  } else {
    std::vector<std::size_t> omitted;
    for (std::size_t i = 0; i < count; ++i) {
      if (std::find(order.begin(), order.end(), i) == order.end()) omitted.push_back(i);
    }
    std::sort(omitted.begin(), omitted.end(),
              [&](std::size_t a, std::size_t b) { return candidates[a] < candidates[b]; });
    order.insert(order.end(), omitted.begin(), omitted.end());
  }

  outcome.s_ms.assign(count, 0.0);
  for (std::size_t r = 0; r < order.size(); ++r) {
    outcome.order.push_back(candidates[order[r]]);
    outcome.s_ms[order[r]] = rank_score(r + 1, count, config.rank_scoring);
  }
  return outcome;
}

std::vector<double> centrality_scores(const Ackg& graph, std::span<const NodeId> candidates) {
  std::vector<double> out;
  out.reserve(candidates.size());
  for (const NodeId& id : candidates) out.push_back(static_cast<double>(graph.degree(id)));
  return out;
}

// ---------------------------------------------------------------------------
// Pruning and the end-to-end retriever

ContextSubgraph prune_to_subgraph(const Ackg& graph, std::vector<ScoredNode> scored, std::size_t m) {
  std::sort(scored.begin(), scored.end(), [](const ScoredNode& a, const ScoredNode& b) {
    if (a.s != b.s) return a.s > b.s;
    return a.id < b.id;
  });
  scored.resize(std::min(m, scored.size()));
  ContextSubgraph out;
  std::vector<NodeId> ids;
  for (const ScoredNode& s : scored) {
    out.nodes.push_back(graph.node(s.id));
    ids.push_back(s.id);
  }
  out.scores = std::move(scored);
  out.edges = graph.induced_edges(ids);
  return out;
}

ContextSubgraph retrieve_context(Gateway& gateway, const Ackg& graph, const VectorIndex& index,
                                 const PaintingQuery& painting, const RetrieverConfig& config,
                                 const PromptSet& prompts) {
  config.validate();
  painting.validate();

  const ConceptList concepts = with_stage("retrieve/concepts", [&] {
    return detect_concepts(gateway, prompts, painting, config.n_concepts);
  });
  const std::string query_text = build_query_text(painting, concepts.concepts);
  const EmbeddingVector z_p = with_stage("retrieve/embed", [&] {
    const std::vector<std::string> input{query_text};
    return gateway.embed(input).front();
  });

  const auto seeds =
      with_stage("retrieve/coarse", [&] { return coarse_retrieve(index, z_p, config.k_coarse); });
  std::vector<NodeId> seed_ids;
  for (const auto& hit : seeds) {
    if (!graph.contains(hit.id)) {
      throw Error(ErrorCode::kIntegrity, "index node '" + hit.id + "' is not in the graph",
                  "retrieve/coarse");
    }
    seed_ids.push_back(hit.id);
  }
  const std::vector<NodeId> candidates =
      with_stage("retrieve/expand", [&] { return expand_by_edge_degree(graph, seed_ids, config.k); });

  ContextSubgraph result;
  if (!candidates.empty()) {
    const Eigen::VectorXd sims = index.similarities(z_p);
    std::vector<double> fallback;
    for (const NodeId& id : candidates) {
      const auto row = index.find(id);
      fallback.push_back(row ? sims[*row] : 0.0);
    }
    const RankingOutcome ranking = with_stage("retrieve/rank", [&] {
      return rank_multimodal(gateway, prompts, painting, graph, candidates, fallback, config);
    });
    const std::vector<double> s_gc = centrality_scores(graph, candidates);
    const auto n = static_cast<Eigen::Index>(candidates.size());
    const Eigen::VectorXd combined =
        combine_scores(Eigen::Map<const Eigen::VectorXd>(ranking.s_ms.data(), n),
                       Eigen::Map<const Eigen::VectorXd>(s_gc.data(), n), config.lambda);
    std::vector<ScoredNode> scored;
    for (std::size_t i = 0; i < candidates.size(); ++i) {
      scored.push_back({candidates[i], ranking.s_ms[i], s_gc[i], combined[static_cast<Eigen::Index>(i)]});
    }
    result = prune_to_subgraph(graph, scored, config.m);
    result.trace.candidates = std::move(scored);
    result.trace.ranking = ranking.order;
    result.trace.ranking_fallback = ranking.fallback;
  }
  result.trace.concepts = concepts.concepts;
  result.trace.concepts_padded = concepts.padded;
  result.trace.query_text = query_text;
  result.trace.seeds = seeds;
  result.trace.expansion.assign(candidates.begin() + static_cast<std::ptrdiff_t>(seed_ids.size()),
                                candidates.end());

  for (const KgEdge& e : result.edges) {
    const auto in_v = [&](const NodeId& id) {
      return std::any_of(result.nodes.begin(), result.nodes.end(),
                         [&](const KgNode& n) { return n.id == id; });
    };
    if (!in_v(e.source) || !in_v(e.target)) {
      throw Error(ErrorCode::kIntegrity, "pruned edge leaves the node set", "retrieve/prune");
    }
  }
  return result;
}

nlohmann::ordered_json to_json(const ContextSubgraph& subgraph) {
  using nlohmann::ordered_json;
  auto scores_json = [](const ScoredNode& s) {
    return ordered_json{{"s_ms", s.s_ms}, {"s_gc", s.s_gc}, {"s", s.s}};
  };
  ordered_json out;
  out["nodes"] = ordered_json::array();
  for (std::size_t i = 0; i < subgraph.nodes.size(); ++i) {
    const KgNode& node = subgraph.nodes[i];
    ordered_json n = to_json(node);
    n.erase("kind");
    n["scores"] = scores_json(subgraph.scores[i]);
    out["nodes"].push_back(std::move(n));
  }
  out["edges"] = ordered_json::array();
  for (const KgEdge& edge : subgraph.edges) {
    ordered_json e = to_json(edge);
    e.erase("kind");
    out["edges"].push_back(std::move(e));
  }
  const RetrievalTrace& t = subgraph.trace;
  ordered_json trace;
  trace["concepts"] = t.concepts;
  trace["concepts_padded"] = t.concepts_padded;
  trace["query_text"] = t.query_text;
  trace["seeds"] = ordered_json::array();
  for (const auto& hit : t.seeds) {
    trace["seeds"].push_back({{"id", hit.id}, {"similarity", hit.similarity}});
  }
  trace["expansion"] = t.expansion;
  trace["candidates"] = ordered_json::array();
  for (const auto& c : t.candidates) {
    ordered_json row{{"id", c.id}};
    row.update(scores_json(c));
    trace["candidates"].push_back(std::move(row));
  }
  trace["ranking"] = t.ranking;
  trace["ranking_fallback"] = t.ranking_fallback;
  out["retrieval"] = std::move(trace);
  return out;
}

std::string render_subgraph_json(const ContextSubgraph& subgraph) {
  return to_json(subgraph).dump(2) + "\n";
}

}  // namespace artctx
