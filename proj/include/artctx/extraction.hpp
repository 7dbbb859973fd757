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

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "artctx/chunking.hpp"
#include "artctx/gateway.hpp"
#include "artctx/graph.hpp"
#include "artctx/prompts.hpp"

namespace artctx {

enum class RecordKind { kEntity, kRelationship };

struct ExtractionRecord {
  RecordKind kind = RecordKind::kEntity;
  // Entity: name / raw_type / description.
  std::string name;
  std::string raw_type;
  // Relationship: source / target / description.
  std::string source;
  std::string target;
  std::string description;
  ChunkRef origin;
};

struct ExtractionResult {
  std::vector<ExtractionRecord> records;
  std::vector<std::string> warnings;
};

// Lenient parser for lines of the form
//   ("entity"<|>NAME<|>TYPE<|>DESCRIPTION)
//   ("relationship"<|>SOURCE<|>TARGET<|>DESCRIPTION)
// Lines that look like records but are malformed are skipped with a warning;
// other lines are ignored. Raw type strings are kept verbatim.
ExtractionResult parse_extraction_output(std::string_view text);

// System and user messages for one chunk.
ChatRequest build_extraction_request(const PromptSet& prompts, const Chunk& chunk,
                                     std::span<const NodeType> entity_types);

// One chat call per chunk. A response with no parseable records gives an
// empty result and a warning; gateway errors propagate.
ExtractionResult extract_candidates(Gateway& gateway, const PromptSet& prompts,
                                    const Chunk& chunk,
                                    std::span<const NodeType> entity_types = kAllNodeTypes);

struct AggregateResult {
  Ackg graph;
  std::vector<std::string> warnings;
};

// Entities become nodes (same canonical id merges). Relationships become
// edges when both names resolve to a node; otherwise they are dropped with
// a warning. Records are applied in (document id, chunk index) order.
AggregateResult aggregate_candidates(std::span<const ExtractionRecord> records);

}  // namespace artctx
