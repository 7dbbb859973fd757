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

#include "artctx/pipeline.hpp"

#include "artctx/graph_io.hpp"
#include "artctx/text.hpp"

namespace artctx {

namespace {

GenerateConfig generate_config(const AppConfig& config) {
  GenerateConfig g;
  g.retriever = config.retriever;
  if (!config.paths.prompts.empty()) g.prompts = PromptSet::load(config.paths.prompts);
  if (!config.paths.template_.empty()) g.tmpl = PromptTemplate::load(config.paths.template_);
  g.max_prompt_chars = config.max_prompt_chars;
  return g;
}

std::string sniff_media_type(const std::vector<std::uint8_t>& bytes) {
  auto starts = [&](std::initializer_list<std::uint8_t> magic) {
    return bytes.size() >= magic.size() && std::equal(magic.begin(), magic.end(), bytes.begin());
  };
  if (starts({0xFF, 0xD8, 0xFF})) return "image/jpeg";
  if (starts({'G', 'I', 'F', '8'})) return "image/gif";
  if (starts({'R', 'I', 'F', 'F'})) return "image/webp";
  return "image/png";
}

}  // namespace

Pipeline Pipeline::open(const AppConfig& config) {
  return with_stage("load", [&] {
    config.validate();
    if (config.paths.graph.empty()) {
      throw Error(ErrorCode::kConfiguration, "a graph path is required (--graph or paths.graph)");
    }
    if (config.paths.index.empty()) {
      throw Error(ErrorCode::kConfiguration, "an index path is required (--index or paths.index)");
    }
    Ackg graph = load_graph(config.paths.graph);
    VectorIndex index = load_index(config.paths.index);
    return from_parts(config, std::move(graph), std::move(index), make_gateway(config.gateway));
  });
}

Pipeline Pipeline::from_parts(const AppConfig& config, Ackg graph, VectorIndex index,
                              std::unique_ptr<Gateway> gateway) {
  Pipeline p;
  p.config = config;
  p.graph = std::move(graph);
  p.index = std::move(index);
  p.gateway = std::move(gateway);
  p.generate = generate_config(config);
  return p;
}

ContextSubgraph Pipeline::retrieve(const PaintingQuery& painting) const {
  return retrieve(painting, generate.retriever);
}

ContextSubgraph Pipeline::retrieve(const PaintingQuery& painting,
                                   const RetrieverConfig& retriever) const {
  return retrieve_context(*gateway, graph, index, painting, retriever, generate.prompts);
}

GenerationResult Pipeline::explain(const PaintingQuery& painting) const {
  return explain(painting, generate.retriever);
}

GenerationResult Pipeline::explain(const PaintingQuery& painting,
                                   const RetrieverConfig& retriever) const {
  GenerateConfig g = generate;
  g.retriever = retriever;
  return artctx::explain(*gateway, graph, index, painting, g);
}

PaintingQuery painting_from_json(const nlohmann::json& body) {
  auto fail = [](const std::string& msg) { throw Error(ErrorCode::kValidation, msg); };
  if (!body.is_object()) fail("body must be a JSON object");
  PaintingQuery q;
  if (body.contains("attributes")) {
    const auto& attrs = body["attributes"];
    if (!attrs.is_object()) fail("attributes: expected an object of strings");
    for (const auto& [key, value] : attrs.items()) {
      if (!value.is_string()) fail("attributes." + key + ": expected a string");
      q.set_attribute(key, value.get<std::string>());
    }
  }
  if (body.contains("image_base64")) {
    if (!body["image_base64"].is_string()) fail("image_base64: expected a string");
    std::vector<std::uint8_t> bytes;
    try {
      bytes = text::base64_decode(body["image_base64"].get<std::string>());
    } catch (const Error&) {
      fail("image_base64: not valid base64");
    }
    if (bytes.empty()) fail("image_base64: empty image");
    std::string media;
    if (body.contains("image_media_type")) {
      if (!body["image_media_type"].is_string()) fail("image_media_type: expected a string");
      media = body["image_media_type"].get<std::string>();
    } else {
      media = sniff_media_type(bytes);
    }
    q.image = ImageRef::from_bytes(std::move(bytes), std::move(media));
  }
  if (body.contains("question")) {
    if (!body["question"].is_string()) fail("question: expected a string");
    q.question = body["question"].get<std::string>();
  }
  q.validate();
  return q;
}

RetrieverConfig apply_overrides(RetrieverConfig base, const nlohmann::json& overrides) {
  if (overrides.is_null()) return base;
  auto fail = [](const std::string& msg) { throw Error(ErrorCode::kValidation, msg); };
  if (!overrides.is_object()) fail("overrides: expected an object");
  for (const auto& [key, value] : overrides.items()) {
    if (key == "lambda") {
      if (!value.is_number()) fail("overrides.lambda: expected a number");
      base.lambda = value.get<double>();
      continue;
    }
    std::size_t* slot = key == "k_coarse"     ? &base.k_coarse
                        : key == "k"          ? &base.k
                        : key == "m"          ? &base.m
                        : key == "n_concepts" ? &base.n_concepts
                                              : nullptr;
    if (!slot) fail("overrides." + key + ": unknown field");
    if (!value.is_number_unsigned()) fail("overrides." + key + ": expected a non-negative integer");
    *slot = value.get<std::size_t>();
  }
  base.validate();
  return base;
}

}  // namespace artctx
