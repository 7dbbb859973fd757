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
#include <string>
#include <vector>

#include "artctx/chunking.hpp"
#include "artctx/cleaning.hpp"
#include "artctx/extraction.hpp"
#include "artctx/gateway.hpp"
#include "artctx/graph.hpp"
#include "artctx/prompts.hpp"

namespace artctx {

enum class DocumentCategory { kArtists, kArtSchools, kArtTypes, kCulturalEvents, kArtMovements };

std::string_view to_string(DocumentCategory category);
std::optional<DocumentCategory> parse_category(std::string_view text);

struct ManifestEntry {
  std::string id;
  std::filesystem::path path;
  DocumentCategory category = DocumentCategory::kArtists;
};

struct CorpusManifest {
  std::vector<ManifestEntry> entries;

  // JSON array of {"id", "path", "category"}. Relative paths resolve
  // against base_dir. Throws kValidation on duplicate ids or unknown
  // categories.
  static CorpusManifest parse(std::string_view json_text, const std::filesystem::path& base_dir);
  static CorpusManifest load(const std::filesystem::path& path);
};

// Chunks of every manifest document, in manifest order.
std::vector<Chunk> ingest_manifest(const CorpusManifest& manifest, const ChunkingOptions& options);

struct ConstructConfig {
  ChunkingOptions chunking;
  double dedup_threshold = kDefaultDedupThreshold;
  std::vector<NodeType> allowed_types{kAllNodeTypes.begin(), kAllNodeTypes.end()};
  PromptSet prompts = PromptSet::defaults();
  // Concurrent extraction calls; results are merged in chunk order.
  std::size_t workers = 1;
};

struct BuildResult {
  Ackg raw;
  Ackg graph;
  CleaningReport report;
  std::vector<std::string> warnings;
};

// chunk -> extract -> aggregate -> dedup -> filter. Fatal errors carry the
// failing stage in Error::stage().
BuildResult build_ackg(Gateway& gateway, const CorpusManifest& manifest,
                       const ConstructConfig& config);

// Writes raw_graph.jsonl, graph.jsonl, cleaning_report.json and
// cleaning_report.txt into out_dir.
void persist_build(const BuildResult& result, const std::filesystem::path& out_dir);

}  // namespace artctx
