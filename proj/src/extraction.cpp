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

#include "artctx/extraction.hpp"

#include <algorithm>
#include <map>

#include "artctx/text.hpp"

namespace artctx {

namespace {

constexpr std::string_view kDelimiter = "<|>";

std::vector<std::string> split_fields(std::string_view body) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = body.find(kDelimiter, start);
    std::string_view field = text::trim(body.substr(start, pos == body.npos ? body.npos : pos - start));
    if (field.size() >= 2 && field.front() == '"' && field.back() == '"') {
      field = text::trim(field.substr(1, field.size() - 2));
    }
    fields.emplace_back(field);
    if (pos == std::string_view::npos) break;
    start = pos + kDelimiter.size();
  }
  return fields;
}

}  // namespace

ExtractionResult parse_extraction_output(std::string_view output) {
  ExtractionResult result;
  std::size_t line_no = 0;
  for (std::string_view raw : text::split_lines(output)) {
    ++line_no;
    std::string_view line = text::trim(raw);
    // Tolerate GraphRAG-style record delimiters and list markers.
    while (line.ends_with("##")) line = text::trim(line.substr(0, line.size() - 2));
    if (line.ends_with(',')) line = text::trim(line.substr(0, line.size() - 1));
    if (line.empty() || line.front() != '(') continue;

    auto warn = [&](const std::string& why) {
      result.warnings.push_back("line " + std::to_string(line_no) + ": " + why);
    };
    if (line.back() != ')') {
      warn("record is not closed");
      continue;
    }
    const auto fields = split_fields(line.substr(1, line.size() - 2));
    const std::string kind = text::to_lower_ascii(fields.front());
    if (kind != "entity" && kind != "relationship") {
      warn("unknown record kind '" + fields.front() + "'");
      continue;
    }
    if (fields.size() < 4) {
      warn(kind + " record has " + std::to_string(fields.size()) + " fields, expected 4");
      continue;
    }
    if (fields[1].empty() || (kind == "relationship" && fields[2].empty())) {
      warn(kind + " record with empty name");
      continue;
    }
    ExtractionRecord rec;
    if (kind == "entity") {
      if (fields.size() != 4) {
        warn("entity record has " + std::to_string(fields.size()) + " fields, expected 4");
        continue;
      }
      rec.kind = RecordKind::kEntity;
      rec.name = fields[1];
      rec.raw_type = fields[2];
    } else {
      // Relationship records may carry trailing fields such as a strength;
      // only the first four are used.
      rec.kind = RecordKind::kRelationship;
      rec.source = fields[1];
      rec.target = fields[2];
    }
    rec.description = fields[3];
    result.records.push_back(std::move(rec));
  }
  return result;
}

ChatRequest build_extraction_request(const PromptSet& prompts, const Chunk& chunk,
                                     std::span<const NodeType> entity_types) {
  std::string types;
  for (NodeType t : entity_types) {
    if (!types.empty()) types += ", ";
    types += canonical_name(t);
  }
  ChatRequest request;
  request.messages.push_back(
      {Role::kSystem,
       render_template(prompts.extraction,
                       {{"entity_types", types}, {"examples", prompts.extraction_examples}}),
       {}});
  request.messages.push_back(
      {Role::kUser,
       render_template(prompts.extraction_input,
                       {{"entity_types", types}, {"input_text", chunk.text}}),
       {}});
  return request;
}

ExtractionResult extract_candidates(Gateway& gateway, const PromptSet& prompts,
                                    const Chunk& chunk, std::span<const NodeType> entity_types) {
  if (text::trim(chunk.text).empty()) {
    throw Error(ErrorCode::kValidation, "cannot extract from an empty chunk");
  }
  const ChatResponse response =
      gateway.chat(build_extraction_request(prompts, chunk, entity_types));
  ExtractionResult result = parse_extraction_output(response.text);
  const ChunkRef origin{chunk.document_id, chunk.index};
  for (auto& w : result.warnings) {
    w = chunk.document_id + "#" + std::to_string(chunk.index) + " " + w;
  }
  for (auto& rec : result.records) rec.origin = origin;
  if (result.records.empty()) {
    result.warnings.push_back(chunk.document_id + "#" + std::to_string(chunk.index) +
                              ": no parseable records in model response");
  }
  return result;
}

AggregateResult aggregate_candidates(std::span<const ExtractionRecord> records) {
  std::vector<const ExtractionRecord*> ordered;
  ordered.reserve(records.size());
  for (const auto& r : records) ordered.push_back(&r);
  std::stable_sort(ordered.begin(), ordered.end(),
                   [](const auto* a, const auto* b) { return a->origin < b->origin; });

  AggregateResult result;
  Ackg& graph = result.graph;
  for (const ExtractionRecord* rec : ordered) {
    if (rec->kind != RecordKind::kEntity) continue;
    graph.upsert_node(make_node(rec->name, rec->raw_type, rec->description, {rec->origin}));
  }

  std::map<std::string, std::vector<NodeId>> by_slug;
  for (const auto& [id, node] : graph.nodes()) by_slug[text::slug(node.name)].push_back(id);

  // Several nodes may share a name across types. Prefer one extracted from
  // the same chunk, then a schema-typed one, then the smallest id.
  auto resolve = [&](const std::string& name, const ChunkRef& origin) -> const NodeId* {
    auto it = by_slug.find(text::slug(name));
    if (it == by_slug.end()) return nullptr;
    const NodeId* best = nullptr;
    auto rank = [&](const NodeId& id) {
      const KgNode& n = graph.node(id);
      return std::make_pair(n.provenance.contains(origin) ? 0 : 1, n.has_schema_type() ? 0 : 1);
    };
    for (const NodeId& id : it->second) {
      if (best == nullptr || rank(id) < rank(*best)) best = &id;
    }
    return best;
  };

  for (const ExtractionRecord* rec : ordered) {
    if (rec->kind != RecordKind::kRelationship) continue;
    const std::string where =
        rec->origin.document_id + "#" + std::to_string(rec->origin.chunk_index);
    const NodeId* source = resolve(rec->source, rec->origin);
    const NodeId* target = resolve(rec->target, rec->origin);
    if (source == nullptr || target == nullptr) {
      result.warnings.push_back(where + ": dropped relationship '" + rec->source + "' -> '" +
                                rec->target + "' (unknown " +
                                (source == nullptr ? rec->source : rec->target) + ")");
      continue;
    }
    if (*source == *target) {
      result.warnings.push_back(where + ": dropped self-relationship on '" + rec->source + "'");
      continue;
    }
    graph.add_edge(*source, *target, rec->description, {rec->origin});
  }
  return result;
}

}  // namespace artctx
