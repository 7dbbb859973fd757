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

#include <gtest/gtest.h>

#include "artctx/construct.hpp"
#include "artctx/error.hpp"
#include "artctx/extraction.hpp"
#include "artctx/graph_io.hpp"
#include "test_support.hpp"

using namespace artctx;

TEST(ExtractionParse, EntitiesAndRelationships) {
  const auto r = parse_extraction_output(
      "(\"entity\"<|>Claude Monet<|>Artist<|>French painter)##\n"
      "some chatter\n"
      "(\"relationship\"<|>Claude Monet<|>Impressionism<|>founded<|>9)\n");
  ASSERT_EQ(r.records.size(), 2u);
  EXPECT_TRUE(r.warnings.empty());
  EXPECT_EQ(r.records[0].name, "Claude Monet");
  EXPECT_EQ(r.records[0].raw_type, "Artist");
  EXPECT_EQ(r.records[0].description, "French painter");
  EXPECT_EQ(r.records[1].kind, RecordKind::kRelationship);
  EXPECT_EQ(r.records[1].target, "Impressionism");
}

TEST(ExtractionParse, MalformedLinesWarn) {
  const auto r = parse_extraction_output(
      "(\"entity\"<|>Only<|>Two)\n"
      "(\"entity\"<|>Unclosed<|>Theme<|>desc\n"
      "(\"vertex\"<|>a<|>b<|>c)\n"
      "(\"entity\"<|><|>Theme<|>no name)\n");
  EXPECT_TRUE(r.records.empty());
  EXPECT_EQ(r.warnings.size(), 4u);
}

TEST(ExtractionParse, EmptyOutput) {
  const auto r = parse_extraction_output("");
  EXPECT_TRUE(r.records.empty());
  EXPECT_TRUE(r.warnings.empty());
}

TEST(Extraction, RequestKeepsChunkOutOfSystemMessage) {
  const Chunk chunk{"doc", 0, "UNIQUE-CHUNK-TEXT", {0, 1}};
  const ChatRequest req = build_extraction_request(PromptSet::defaults(), chunk, kAllNodeTypes);
  ASSERT_EQ(req.messages.size(), 2u);
  EXPECT_EQ(req.messages[0].text.find("UNIQUE-CHUNK-TEXT"), std::string::npos);
  EXPECT_NE(req.messages[1].text.find("UNIQUE-CHUNK-TEXT"), std::string::npos);
  EXPECT_NE(req.messages[0].text.find("Art Movement & school"), std::string::npos);
  EXPECT_EQ(req.messages[0].text.find("{examples}"), std::string::npos);
}

TEST(Extraction, EchoedChunkYieldsNoRecordsAndWarns) {
  MockGateway gateway;
  const Chunk chunk{"doc", 3, "plain text without records", {0, 4}};
  const auto r = extract_candidates(gateway, PromptSet::defaults(), chunk);
  EXPECT_TRUE(r.records.empty());
  ASSERT_EQ(r.warnings.size(), 1u);
  EXPECT_NE(r.warnings[0].find("doc#3"), std::string::npos);
  EXPECT_THROW(extract_candidates(gateway, PromptSet::defaults(), {"doc", 0, "  ", {}}), Error);
}

TEST(Extraction, GatewayErrorsPropagate) {
  MockGateway gateway({{"### TASK: EXTRACT", "", ErrorCode::kTransport}});
  const Chunk chunk{"doc", 0, "text", {0, 1}};
  try {
    extract_candidates(gateway, PromptSet::defaults(), chunk);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kTransport);
  }
}

TEST(Aggregate, MergesSameIdAndResolvesRelationships) {
  std::vector<ExtractionRecord> recs;
  auto entity = [&](std::string name, std::string type, std::string desc, ChunkRef origin) {
    ExtractionRecord r;
    r.name = std::move(name);
    r.raw_type = std::move(type);
    r.description = std::move(desc);
    r.origin = std::move(origin);
    recs.push_back(r);
  };
  auto rel = [&](std::string s, std::string t, ChunkRef origin) {
    ExtractionRecord r;
    r.kind = RecordKind::kRelationship;
    r.source = std::move(s);
    r.target = std::move(t);
    r.description = "linked";
    r.origin = std::move(origin);
    recs.push_back(r);
  };
  rel("monet", "Giverny", {"b", 0});
  entity("Claude Monet", "Artist", "painter", {"b", 0});
  entity("Monet", "Artist", "first", {"a", 0});
  entity("monet", "Artist", "second", {"b", 0});
  entity("Giverny", "Culture & History", "village", {"b", 0});
  rel("Monet", "Nowhere", {"b", 0});
  rel("Monet", "monet", {"b", 0});

  const AggregateResult out = aggregate_candidates(recs);
  EXPECT_EQ(out.graph.node_count(), 3u);
  EXPECT_EQ(out.graph.node("monet:artist").description, "first | second");
  EXPECT_NE(out.graph.find_edge("monet:artist", "giverny:culture-history"), nullptr);
  EXPECT_EQ(out.warnings.size(), 2u);
}

TEST(Aggregate, PrefersSameChunkThenSchemaType) {
  std::vector<ExtractionRecord> recs(3);
  recs[0].name = "Venus";
  recs[0].raw_type = "Painting";
  recs[0].origin = {"a", 0};
  recs[1].name = "Venus";
  recs[1].raw_type = "Theme";
  recs[1].origin = {"b", 0};
  recs[2].name = "Mars";
  recs[2].raw_type = "Theme";
  recs[2].origin = {"a", 0};
  ExtractionRecord rel;
  rel.kind = RecordKind::kRelationship;
  rel.source = "Venus";
  rel.target = "Mars";
  rel.origin = {"a", 0};
  recs.push_back(rel);
  const auto out = aggregate_candidates(recs);
  EXPECT_NE(out.graph.find_edge("venus:painting", "mars:theme"), nullptr);
}

TEST(Manifest, ParseAndErrors) {
  const auto m = CorpusManifest::parse(
      R"([{"id":"a","path":"a.txt","category":"Artists"}])", "/base");
  ASSERT_EQ(m.entries.size(), 1u);
  EXPECT_EQ(m.entries[0].path, std::filesystem::path("/base/a.txt"));
  for (const char* bad : {
           R"({"id":"a"})",
           R"([{"id":"a","path":"a.txt","category":"Painters"}])",
           R"([{"id":"a","path":"a.txt","category":"Artists"},{"id":"a","path":"b","category":"Artists"}])",
           R"([{"id":"a","path":"https://example.org/a","category":"Artists"}])",
           R"([{"id":"a","category":"Artists"}])",
       }) {
    EXPECT_THROW(CorpusManifest::parse(bad, "."), Error) << bad;
  }
}

TEST(Construct, BuildsAndCleansCorpus) {
  MockGateway gateway(MockGateway::load_fixtures(testkit::data_path("corpus_fixtures.json")));
  const auto manifest = CorpusManifest::load(testkit::data_path("corpus/manifest.json"));
  ConstructConfig config;
  config.workers = 3;
  const BuildResult r = build_ackg(gateway, manifest, config);

  EXPECT_EQ(r.raw.node_count(), 12u);
  EXPECT_EQ(r.graph.node_count(), 10u);
  EXPECT_LE(r.graph.edge_count(), r.raw.edge_count());
  ASSERT_EQ(r.report.merges.size(), 1u);
  EXPECT_EQ(r.report.merges[0].survivor, "dutch-golden-age-of-painting:culture-history");
  ASSERT_EQ(r.report.filtered.size(), 1u);
  EXPECT_EQ(r.report.filtered[0].id, "the-weaver:painting");
  EXPECT_TRUE(r.graph.contains("elizabeth-i:other"));
  EXPECT_TRUE(r.graph.contains("elizabeth-ii:other"));
  // "Vincent Van Gogh" in the second document shares the canonical id.
  EXPECT_EQ(r.graph.node("vincent-van-gogh:artist").provenance.size(), 2u);
  EXPECT_EQ(r.warnings.size(), 2u);

  const auto dir = testkit::temp_dir("construct");
  persist_build(r, dir);
  EXPECT_EQ(load_graph(dir / "graph.jsonl"), r.graph);
  EXPECT_EQ(load_graph(dir / "raw_graph.jsonl"), r.raw);
  EXPECT_TRUE(std::filesystem::exists(dir / "cleaning_report.json"));
}

TEST(Construct, ParallelMatchesSerial) {
  const auto manifest = CorpusManifest::load(testkit::data_path("corpus/manifest.json"));
  const auto fixtures = MockGateway::load_fixtures(testkit::data_path("corpus_fixtures.json"));
  ConstructConfig serial;
  serial.chunking = {12, 2, 0};
  ConstructConfig parallel = serial;
  parallel.workers = 4;
  MockGateway g1(fixtures), g2(fixtures);
  EXPECT_EQ(build_ackg(g1, manifest, serial).graph, build_ackg(g2, manifest, parallel).graph);
}

TEST(Construct, ExtractionFailureIsStageTagged) {
  MockGateway gateway({{"CORPUS-DOC-MILLET", "", ErrorCode::kTransport}});
  const auto manifest = CorpusManifest::load(testkit::data_path("corpus/manifest.json"));
  try {
    build_ackg(gateway, manifest, {});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.stage(), "extract");
    EXPECT_NE(e.detail().find("millet#0"), std::string::npos);
  }
}
