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

#include <memory>

#include "artctx/config.hpp"
#include "artctx/embedding.hpp"
#include "artctx/gateway.hpp"
#include "artctx/generate.hpp"
#include "artctx/graph.hpp"
#include "json.hpp"

namespace artctx {

// Loaded graph, index, gateway and prompts shared by the query commands and
// the service. Read-only once opened.
struct Pipeline {
  AppConfig config;
  Ackg graph;
  VectorIndex index;
  std::unique_ptr<Gateway> gateway;
  GenerateConfig generate;

  // Requires paths.graph and paths.index. Errors carry the "load" stage.
  static Pipeline open(const AppConfig& config);
  // Uses the given graph, index and gateway as is.
  static Pipeline from_parts(const AppConfig& config, Ackg graph, VectorIndex index,
                             std::unique_ptr<Gateway> gateway);

  ContextSubgraph retrieve(const PaintingQuery& painting) const;
  ContextSubgraph retrieve(const PaintingQuery& painting, const RetrieverConfig& retriever) const;
  GenerationResult explain(const PaintingQuery& painting) const;
  GenerationResult explain(const PaintingQuery& painting, const RetrieverConfig& retriever) const;
};

// Builds a query from a JSON body {"attributes": {...}, "image_base64"?,
// "image_media_type"?, "question"?}. Throws kValidation naming the field.
PaintingQuery painting_from_json(const nlohmann::json& body);

// Applies {"k_coarse", "k", "m", "lambda", "n_concepts"} overrides.
RetrieverConfig apply_overrides(RetrieverConfig base, const nlohmann::json& overrides);

}  // namespace artctx
