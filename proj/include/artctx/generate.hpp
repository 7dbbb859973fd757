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
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "artctx/embedding.hpp"
#include "artctx/gateway.hpp"
#include "artctx/graph.hpp"
#include "artctx/prompts.hpp"
#include "artctx/retriever.hpp"
#include "json.hpp"

namespace artctx {

inline constexpr std::string_view kDefaultQuestion =
    "Describe and explain this painting, covering content and its artistic, cultural, and "
    "historical context.";

inline constexpr std::size_t kDefaultPromptBudget = 16000;

struct FewShotExample {
  std::string attributes;
  std::string subgraph;
  std::string explanation;
};

// Generation prompt. `instruction` holds {attributes}, {subgraph} and
// {question} exactly once each.
struct PromptTemplate {
  std::string system;
  std::vector<FewShotExample> few_shot;
  std::string context_header;
  std::string instruction;

  static PromptTemplate defaults();
  static PromptTemplate parse(std::string_view json_text);
  static PromptTemplate load(const std::filesystem::path& path);
  // Throws kTemplate.
  void validate() const;
};

// "Entities:" and "Relations:" sections, one "- ..." line per node or edge.
// Descriptions longer than description_chars bytes are cut.
std::string linearize_subgraph(const ContextSubgraph& subgraph,
                               std::size_t description_chars = std::string::npos);

// Few-shot block followed by the rendered instruction.
ChatRequest build_prompt(const PromptTemplate& tmpl, const PaintingQuery& painting,
                         const ContextSubgraph& subgraph, std::string_view question,
                         std::size_t description_chars = std::string::npos);

// Like build_prompt, halving the per-description limit until system plus
// user text fit in max_chars. Throws kValidation when even empty
// descriptions do not fit.
ChatRequest build_prompt_within(const PromptTemplate& tmpl, const PaintingQuery& painting,
                                const ContextSubgraph& subgraph, std::string_view question,
                                std::size_t max_chars);

struct GenerateConfig {
  RetrieverConfig retriever;
  PromptTemplate tmpl = PromptTemplate::defaults();
  PromptSet prompts = PromptSet::defaults();
  std::size_t max_prompt_chars = kDefaultPromptBudget;
  DecodingOptions decoding;
};

struct GenerationResult {
  std::string explanation;
  std::string system_prompt;
  std::string user_prompt;
  std::vector<NodeId> cited_nodes;
  std::vector<EdgeKey> cited_edges;
  std::optional<Usage> usage;
  ContextSubgraph context;
};

GenerationResult explain(Gateway& gateway, const Ackg& graph, const VectorIndex& index,
                         const PaintingQuery& painting, const GenerateConfig& config);

nlohmann::ordered_json to_json(const GenerationResult& result);

}  // namespace artctx
