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

#include "artctx/generate.hpp"

#include "artctx/graph_io.hpp"
#include "artctx/text.hpp"
#include "default_prompts.hpp"

namespace artctx {

namespace {

std::string required_string(const nlohmann::json& obj, const char* key, std::string_view where) {
  if (!obj.is_object() || !obj.contains(key) || !obj[key].is_string()) {
    throw Error(ErrorCode::kTemplate,
                std::string(where) + ": missing string field '" + key + "'");
  }
  return obj[key].get<std::string>();
}

std::string type_label(const KgNode& node) {
  return node.has_schema_type() ? std::string(canonical_name(node.type)) : node.raw_type;
}

}  // namespace

PromptTemplate PromptTemplate::defaults() { return parse(embedded::kGeneration); }

PromptTemplate PromptTemplate::parse(std::string_view json_text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::kTemplate, std::string("generation template: ") + e.what());
  }
  PromptTemplate t;
  t.system = required_string(doc, "system", "generation template");
  t.context_header = required_string(doc, "context_header", "generation template");
  t.instruction = required_string(doc, "instruction", "generation template");
  if (doc.contains("few_shot")) {
    if (!doc["few_shot"].is_array()) {
      throw Error(ErrorCode::kTemplate, "generation template: few_shot must be an array");
    }
    for (std::size_t i = 0; i < doc["few_shot"].size(); ++i) {
      const auto& ex = doc["few_shot"][i];
      const std::string where = "few_shot[" + std::to_string(i) + "]";
      t.few_shot.push_back({required_string(ex, "attributes", where),
                            required_string(ex, "subgraph", where),
                            required_string(ex, "explanation", where)});
    }
  }
  t.validate();
  return t;
}

PromptTemplate PromptTemplate::load(const std::filesystem::path& path) {
  return parse(text::read_file(path));
}

void PromptTemplate::validate() const {
  if (text::trim(system).empty()) throw Error(ErrorCode::kTemplate, "empty system preamble");
  for (const char* name : {"attributes", "subgraph", "question"}) {
    const std::size_t n = count_placeholder(instruction, name);
    if (n != 1) {
      throw Error(ErrorCode::kTemplate, "instruction must contain {" + std::string(name) +
                                            "} exactly once (found " + std::to_string(n) + ")");
    }
  }
  for (std::size_t i = 0; i < few_shot.size(); ++i) {
    const auto& ex = few_shot[i];
    if (text::trim(ex.attributes).empty() || text::trim(ex.subgraph).empty() ||
        text::trim(ex.explanation).empty()) {
      throw Error(ErrorCode::kTemplate,
                  "few-shot example " + std::to_string(i + 1) + " has an empty part");
    }
  }
}

std::string linearize_subgraph(const ContextSubgraph& subgraph, std::size_t description_chars) {
  if (subgraph.nodes.empty()) return "Entities: (none)\nRelations: (none)";
  std::map<NodeId, std::string> names;
  std::string out = "Entities:";
  for (const KgNode& node : subgraph.nodes) {
    names[node.id] = node.name;
    out += "\n- " + node.name + " (" + type_label(node) + "): " +
           text::truncate_utf8(node.description, description_chars);
  }
  if (subgraph.edges.empty()) return out + "\nRelations: (none)";
  out += "\nRelations:";
  for (const KgEdge& edge : subgraph.edges) {
    out += "\n- " + names.at(edge.source) + " -> " + names.at(edge.target) + ": " +
           text::truncate_utf8(edge.description, description_chars);
  }
  return out;
}

ChatRequest build_prompt(const PromptTemplate& tmpl, const PaintingQuery& painting,
                         const ContextSubgraph& subgraph, std::string_view question,
                         std::size_t description_chars) {
  tmpl.validate();
  std::string user;
  for (std::size_t i = 0; i < tmpl.few_shot.size(); ++i) {
    const auto& ex = tmpl.few_shot[i];
    user += "### EXAMPLE " + std::to_string(i + 1) + "\nPainting attributes:\n" + ex.attributes +
            "\n\n" + tmpl.context_header + "\n" + ex.subgraph + "\n\nExplanation:\n" +
            ex.explanation + "\n\n";
  }
  const std::string attributes = format_attributes(painting);
  const std::string q(text::trim(question));
  user += render_template(
      tmpl.instruction,
      {{"attributes", attributes.empty() ? "(none)" : attributes},
       {"subgraph", tmpl.context_header + "\n" + linearize_subgraph(subgraph, description_chars)},
       {"question", q.empty() ? std::string(kDefaultQuestion) : q}});

  ChatRequest request;
  request.messages.push_back({Role::kSystem, tmpl.system, {}});
  ChatMessage msg{Role::kUser, std::move(user), {}};
  if (painting.image) msg.images.push_back(*painting.image);
  request.messages.push_back(std::move(msg));
  return request;
}

ChatRequest build_prompt_within(const PromptTemplate& tmpl, const PaintingQuery& painting,
                                const ContextSubgraph& subgraph, std::string_view question,
                                std::size_t max_chars) {
  auto size_of = [](const ChatRequest& r) {
    std::size_t n = 0;
    for (const auto& m : r.messages) n += m.text.size();
    return n;
  };
  std::size_t longest = 0;
  for (const auto& n : subgraph.nodes) longest = std::max(longest, n.description.size());
  for (const auto& e : subgraph.edges) longest = std::max(longest, e.description.size());

  ChatRequest request = build_prompt(tmpl, painting, subgraph, question);
  for (std::size_t limit = longest / 2; size_of(request) > max_chars; limit /= 2) {
    request = build_prompt(tmpl, painting, subgraph, question, limit);
    if (limit == 0) break;
  }
  if (size_of(request) > max_chars) {
    throw Error(ErrorCode::kValidation, "prompt exceeds the " + std::to_string(max_chars) +
                                            "-character budget even without descriptions");
  }
  return request;
}

GenerationResult explain(Gateway& gateway, const Ackg& graph, const VectorIndex& index,
                         const PaintingQuery& painting, const GenerateConfig& config) {
  GenerationResult result;
  result.context = retrieve_context(gateway, graph, index, painting, config.retriever, config.prompts);
  ChatRequest request = with_stage("generate/prompt", [&] {
    return build_prompt_within(config.tmpl, painting, result.context, painting.question,
                               config.max_prompt_chars);
  });
  request.decoding = config.decoding;
  for (const auto& node : result.context.nodes) result.cited_nodes.push_back(node.id);
  for (const auto& edge : result.context.edges) result.cited_edges.push_back(edge.key());
  result.system_prompt = request.messages[0].text;
  result.user_prompt = request.messages[1].text;

  const ChatResponse response = with_stage("generate", [&] { return gateway.chat(request); });
  result.explanation = std::string(text::trim(response.text));
  result.usage = response.usage;
  return result;
}

nlohmann::ordered_json to_json(const GenerationResult& result) {
  using nlohmann::ordered_json;
  ordered_json out;
  out["explanation"] = result.explanation;
  out["prompt"] = {{"system", result.system_prompt}, {"user", result.user_prompt}};
  ordered_json edges = ordered_json::array();
  for (const auto& key : result.cited_edges) edges.push_back({key.first, key.second});
  out["cited"] = {{"nodes", result.cited_nodes}, {"edges", std::move(edges)}};
  if (result.usage) {
    out["usage"] = {{"prompt_tokens", result.usage->prompt_tokens},
                    {"completion_tokens", result.usage->completion_tokens}};
  } else {
    out["usage"] = nullptr;
  }
  out["context"] = to_json(result.context);
  return out;
}

}  // namespace artctx
