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

#include <fstream>
#include <sstream>
#include <thread>

#include "artctx/cli.hpp"
#include "artctx/graph_io.hpp"
#include "artctx/pipeline.hpp"
#include "artctx/service.hpp"
#include "artctx/text.hpp"
#include "httplib.h"
#include "json.hpp"
#include "test_support.hpp"

using namespace artctx;

namespace {

struct CliRun {
  int code = 0;
  std::string out;
  std::string err;
};

CliRun cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

// Toy graph indexed once with the mock backend.
class ToyWorkspace : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    dir_ = testkit::temp_dir("cli_service");
    const auto r = cli({"index", "--graph", graph(), "--out", index()});
    ASSERT_EQ(r.code, 0) << r.err;
  }

  static std::string graph() { return testkit::data_path("toy_graph.jsonl").string(); }
  static std::string index() { return (dir_ / "toy.index").string(); }
  static std::string fixtures() { return testkit::data_path("toy_fixtures.json").string(); }

  static AppConfig config(const std::string& fixture_file = fixtures()) {
    return load_config(std::nullopt, {{"paths.graph", graph()},
                                      {"paths.index", index()},
                                      {"gateway.mock_fixtures", fixture_file}});
  }

  static inline std::filesystem::path dir_;
};

const char* kBody =
    R"({"attributes": {"title": "The Weaver", "artist": "Vincent van Gogh", "timeframe": "1884"}})";

}  // namespace

TEST(Cli, StatsOnEmptyGraph) {
  const auto dir = testkit::temp_dir("cli_empty");
  std::ofstream(dir / "g.jsonl").close();
  const auto r = cli({"stats", "--graph", (dir / "g.jsonl").string()});
  EXPECT_EQ(r.code, kExitOk) << r.err;
  EXPECT_NE(r.out.find("Total"), std::string::npos);
  const auto j = cli({"stats", "--graph", (dir / "g.jsonl").string(), "--json"});
  EXPECT_EQ(nlohmann::json::parse(j.out)["total"]["nodes"], 0);
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(cli({"stats", "--no-such-flag"}).code, kExitUsage);
  EXPECT_EQ(cli({"frobnicate"}).code, kExitUsage);
  EXPECT_EQ(cli({}).code, kExitUsage);
  const auto help = cli({"--help"});
  EXPECT_EQ(help.code, kExitOk);
  EXPECT_NE(help.out.find("retrieve"), std::string::npos);
}

TEST(Cli, ExplainWithoutGraphIsConfigurationError) {
  const auto r = cli({"explain", "--title", "The Weaver"});
  EXPECT_EQ(r.code, kExitError);
  EXPECT_NE(r.err.find("[load]"), std::string::npos) << r.err;
  EXPECT_NE(r.err.find("configuration"), std::string::npos) << r.err;
}

TEST(Cli, BadConfigOverride) {
  EXPECT_EQ(cli({"--set", "retriever.k", "stats"}).code, kExitError);
  EXPECT_EQ(cli({"--set", "retriever.lambda=2", "stats", "--graph", "x"}).code, kExitError);
}

TEST(Cli, EvalReport) {
  const auto dir = testkit::temp_dir("cli_eval");
  const auto r = cli({"eval", "--candidates", testkit::data_path("eval_candidates.jsonl").string(),
                      "--references", testkit::data_path("eval_references.jsonl").string(),
                      "--report", (dir / "report.json").string()});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_NE(r.out.find("BLEU-1"), std::string::npos);
  const auto report = nlohmann::json::parse(text::read_file(dir / "report.json"));
  EXPECT_EQ(report["pair_count"], 20);
}

TEST(Cli, BuildGraphFromCorpus) {
  const auto dir = testkit::temp_dir("cli_build");
  const auto r = cli({"--fixtures", testkit::data_path("corpus_fixtures.json").string(), "build-graph",
                      "--manifest", testkit::data_path("corpus/manifest.json").string(), "--out",
                      dir.string()});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_EQ(load_graph(dir / "graph.jsonl").node_count(), 10u);
}

TEST_F(ToyWorkspace, CliRetrieveMatchesServiceRetrieve) {
  const auto r = cli({"--fixtures", fixtures(), "retrieve", "--graph", graph(), "--index", index(),
                      "--artist", "Vincent van Gogh", "--title", "The Weaver", "--timeframe", "1884"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const Pipeline pipeline = Pipeline::open(config());
  const Service service(pipeline);
  const HttpReply reply = service.retrieve(kBody);
  EXPECT_EQ(reply.status, 200);
  EXPECT_EQ(reply.body, r.out);
  const auto j = nlohmann::json::parse(reply.body);
  EXPECT_LE(j["nodes"].size(), 5u);
}

TEST_F(ToyWorkspace, ExplainTextOutput) {
  const auto r = cli({"--fixtures", fixtures(), "explain", "--graph", graph(), "--index", index(),
                      "--title", "The Weaver", "--output", "text"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_TRUE(r.out.starts_with("A weaver sits"));
}

TEST_F(ToyWorkspace, ServiceStatusCodes) {
  const Pipeline pipeline = Pipeline::open(config());
  const Service service(pipeline);

  const auto health = nlohmann::json::parse(service.healthz().body);
  EXPECT_EQ(health["nodes"], pipeline.graph.node_count());
  EXPECT_EQ(health["edges"], pipeline.graph.edge_count());
  EXPECT_EQ(health["indexed"], 30);

  EXPECT_EQ(service.explain("").status, 400);
  EXPECT_EQ(service.explain("{not json").status, 400);
  EXPECT_EQ(service.retrieve(R"({"attributes": {"title": 3}})").status, 400);
  EXPECT_EQ(service.retrieve(R"({"attributes": {}})").status, 400);
  EXPECT_EQ(service.retrieve(R"({"attributes": {"title": "x"}, "overrides": {"k": 0}})").status, 400);
  EXPECT_EQ(service.retrieve(R"({"attributes": {"title": "x"}, "image_base64": "@@@"})").status, 400);
  const auto bad = nlohmann::json::parse(service.retrieve(R"({"attributes": 5})").body);
  EXPECT_NE(bad["message"].get<std::string>().find("attributes"), std::string::npos);

  const HttpReply node = service.node("vincent-van-gogh:artist");
  EXPECT_EQ(node.status, 200);
  EXPECT_EQ(nlohmann::json::parse(node.body)["neighbors"].size(), 17u);
  EXPECT_EQ(service.node("nobody:artist").status, 404);

  const HttpReply ex = service.explain(kBody);
  ASSERT_EQ(ex.status, 200) << ex.body;
  EXPECT_TRUE(nlohmann::json::parse(ex.body)["explanation"].get<std::string>().starts_with("A weaver"));
}

TEST_F(ToyWorkspace, GatewayFailureIs502WithStage) {
  const auto fx = dir_ / "failing.json";
  std::ofstream(fx) << R"([{"marker": "### TASK: CONCEPTS", "response": "- weaving"},
                          {"marker": "### TASK: RANK", "error": "transport"}])";
  const Pipeline pipeline = Pipeline::open(config(fx.string()));
  const HttpReply reply = Service(pipeline).retrieve(kBody);
  EXPECT_EQ(reply.status, 502);
  EXPECT_EQ(nlohmann::json::parse(reply.body)["stage"], "retrieve/rank");
}

TEST_F(ToyWorkspace, OverridesChangeSubgraphSize) {
  const Pipeline pipeline = Pipeline::open(config());
  const HttpReply reply = Service(pipeline).retrieve(
      R"({"attributes": {"title": "The Weaver"}, "overrides": {"m": 2}})");
  ASSERT_EQ(reply.status, 200) << reply.body;
  EXPECT_EQ(nlohmann::json::parse(reply.body)["nodes"].size(), 2u);
}

TEST_F(ToyWorkspace, HttpRoundTripAndGraphUnchanged) {
  const Pipeline pipeline = Pipeline::open(config());
  const Ackg before = pipeline.graph;
  const Service service(pipeline);
  httplib::Server server;
  service.mount(server);
  const int port = server.bind_to_any_port("127.0.0.1");
  std::thread thread([&] { server.listen_after_bind(); });
  server.wait_until_ready();

  httplib::Client client("127.0.0.1", port);
  const auto health = client.Get("/healthz");
  ASSERT_TRUE(health);
  EXPECT_EQ(health->status, 200);
  const auto empty = client.Post("/explain", "", "application/json");
  ASSERT_TRUE(empty);
  EXPECT_EQ(empty->status, 400);
  const auto missing = client.Get("/graph/nodes/nobody:artist");
  ASSERT_TRUE(missing);
  EXPECT_EQ(missing->status, 404);

  std::vector<std::thread> workers;
  std::vector<std::string> bodies(4);
  for (int i = 0; i < 4; ++i) {
    workers.emplace_back([&, i] {
      httplib::Client c("127.0.0.1", port);
      if (auto res = c.Post("/retrieve", kBody, "application/json")) bodies[i] = res->body;
    });
  }
  for (auto& w : workers) w.join();
  for (const auto& b : bodies) EXPECT_EQ(b, service.retrieve(kBody).body);

  server.stop();
  thread.join();
  EXPECT_EQ(pipeline.graph, before);
}
