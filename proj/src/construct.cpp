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

#include "artctx/construct.hpp"

#include <atomic>
#include <exception>
#include <set>
#include <thread>

#include "artctx/graph_io.hpp"
#include "artctx/text.hpp"
#include "json.hpp"

namespace artctx {

std::string_view to_string(DocumentCategory category) {
  switch (category) {
    case DocumentCategory::kArtists: return "Artists";
    case DocumentCategory::kArtSchools: return "ArtSchools";
    case DocumentCategory::kArtTypes: return "ArtTypes";
    case DocumentCategory::kCulturalEvents: return "CulturalEvents";
    case DocumentCategory::kArtMovements: return "ArtMovements";
  }
  return "Artists";
}

std::optional<DocumentCategory> parse_category(std::string_view text) {
  for (auto c : {DocumentCategory::kArtists, DocumentCategory::kArtSchools,
                 DocumentCategory::kArtTypes, DocumentCategory::kCulturalEvents,
                 DocumentCategory::kArtMovements}) {
    if (to_string(c) == text) return c;
  }
  return std::nullopt;
}

CorpusManifest CorpusManifest::parse(std::string_view json_text,
                                     const std::filesystem::path& base_dir) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::kParse, std::string("manifest: ") + e.what());
  }
  if (!doc.is_array()) throw Error(ErrorCode::kValidation, "manifest must be a JSON array");
  CorpusManifest manifest;
  std::set<std::string> seen;
  for (std::size_t i = 0; i < doc.size(); ++i) {
    const auto& item = doc[i];
    const std::string where = "manifest entry " + std::to_string(i);
    for (const char* key : {"id", "path", "category"}) {
      if (!item.is_object() || !item.contains(key) || !item[key].is_string()) {
        throw Error(ErrorCode::kValidation, where + ": missing string field '" + key + "'");
      }
    }
    ManifestEntry entry;
    entry.id = item["id"].get<std::string>();
    if (text::trim(entry.id).empty()) throw Error(ErrorCode::kValidation, where + ": empty id");
    if (!seen.insert(entry.id).second) {
      throw Error(ErrorCode::kValidation, where + ": duplicate document id '" + entry.id + "'");
    }
    const std::string source = item["path"].get<std::string>();
    if (source.starts_with("http://") || source.starts_with("https://")) {
      throw Error(ErrorCode::kValidation,
                  where + ": remote sources must be downloaded first (" + source + ")");
    }
    entry.path = std::filesystem::path(source);
    if (entry.path.is_relative()) entry.path = base_dir / entry.path;
    const auto category = parse_category(item["category"].get<std::string>());
    if (!category) {
      throw Error(ErrorCode::kValidation,
                  where + ": unknown category '" + item["category"].get<std::string>() + "'");
    }
    entry.category = *category;
    manifest.entries.push_back(std::move(entry));
  }
  return manifest;
}

CorpusManifest CorpusManifest::load(const std::filesystem::path& path) {
  return parse(text::read_file(path), path.parent_path());
}

std::vector<Chunk> ingest_manifest(const CorpusManifest& manifest, const ChunkingOptions& options) {
  std::vector<Chunk> chunks;
  for (const ManifestEntry& entry : manifest.entries) {
    const std::string body = text::read_file(entry.path);
    auto doc_chunks = chunk_document(entry.id, body, options);
    std::move(doc_chunks.begin(), doc_chunks.end(), std::back_inserter(chunks));
  }
  return chunks;
}

namespace {

std::vector<ExtractionResult> extract_all(Gateway& gateway, const ConstructConfig& config,
                                          const std::vector<Chunk>& chunks) {
  std::vector<ExtractionResult> results(chunks.size());
  std::vector<std::exception_ptr> failures(chunks.size());
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < chunks.size(); i = next++) {
      try {
        results[i] = extract_candidates(gateway, config.prompts, chunks[i], config.allowed_types);
      } catch (...) {
        failures[i] = std::current_exception();
      }
    }
  };
  const std::size_t workers = std::max<std::size_t>(1, std::min(config.workers, chunks.size()));
  {
    std::vector<std::jthread> pool;
    for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(work);
    work();
  }
  // Report the first failure in chunk order so diagnostics are stable.
  for (std::size_t i = 0; i < chunks.size(); ++i) {
    if (!failures[i]) continue;
    try {
      std::rethrow_exception(failures[i]);
    } catch (const Error& e) {
      throw Error(e.code(),
                  chunks[i].document_id + "#" + std::to_string(chunks[i].index) + ": " + e.detail(),
                  "extract");
    }
  }
  return results;
}

}  // namespace

BuildResult build_ackg(Gateway& gateway, const CorpusManifest& manifest,
                       const ConstructConfig& config) {
  config.prompts.validate();
  BuildResult out;
  const auto chunks =
      with_stage("chunk", [&] { return ingest_manifest(manifest, config.chunking); });
  const auto extracted = extract_all(gateway, config, chunks);

  std::vector<ExtractionRecord> records;
  for (const auto& r : extracted) {
    records.insert(records.end(), r.records.begin(), r.records.end());
    out.warnings.insert(out.warnings.end(), r.warnings.begin(), r.warnings.end());
  }
  AggregateResult aggregated = with_stage("aggregate", [&] { return aggregate_candidates(records); });
  out.warnings.insert(out.warnings.end(), aggregated.warnings.begin(), aggregated.warnings.end());
  out.raw = aggregated.graph;
  out.graph = std::move(aggregated.graph);

  out.report.nodes_before = out.raw.node_count();
  out.report.edges_before = out.raw.edge_count();
  out.report.threshold = config.dedup_threshold;
  out.report.merges =
      with_stage("dedup", [&] { return dedup_nodes(out.graph, config.dedup_threshold); });
  out.report.filtered =
      with_stage("filter", [&] { return filter_by_type(out.graph, config.allowed_types); });
  out.report.nodes_after = out.graph.node_count();
  out.report.edges_after = out.graph.edge_count();
  return out;
}

void persist_build(const BuildResult& result, const std::filesystem::path& out_dir) {
  std::filesystem::create_directories(out_dir);
  save_graph(result.raw, out_dir / "raw_graph.jsonl");
  save_graph(result.graph, out_dir / "graph.jsonl");
  text::write_file(out_dir / "cleaning_report.json", to_json(result.report).dump(2) + "\n");
  text::write_file(out_dir / "cleaning_report.txt", format_cleaning_summary(result.report));
}

}  // namespace artctx
