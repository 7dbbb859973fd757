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

#include "artctx/config.hpp"
#include "artctx/error.hpp"
#include "test_support.hpp"

using namespace artctx;

namespace {

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected an Error";
  return ErrorCode::kIo;
}

EnvLookup env_from(std::map<std::string, std::string> vars) {
  return [vars = std::move(vars)](const std::string& name) -> std::optional<std::string> {
    const auto it = vars.find(name);
    if (it == vars.end()) return std::nullopt;
    return it->second;
  };
}

}  // namespace

TEST(ConfigText, ParsesSectionsQuotesAndComments) {
  const auto v = parse_config_text(
      "# top comment\n"
      "[retriever]\n"
      "k = 8   # trailing\n"
      "lambda=0.25\n"
      "\n"
      "[gateway]\n"
      "endpoint = \"http://host/#not-a-comment\"\n");
  EXPECT_EQ(v.at("retriever.k"), "8");
  EXPECT_EQ(v.at("retriever.lambda"), "0.25");
  EXPECT_EQ(v.at("gateway.endpoint"), "http://host/#not-a-comment");
}

TEST(ConfigText, MalformedLinesNameTheLine) {
  for (const char* bad : {"[retriever\nk=1", "[retriever]\nk", "[r]\nk = \"open"}) {
    try {
      parse_config_text(bad);
      ADD_FAILURE() << bad;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::kConfiguration);
      EXPECT_NE(std::string(e.what()).find("line"), std::string::npos) << e.what();
    }
  }
}

TEST(ConfigKeys, EnvNames) {
  EXPECT_EQ(env_name("gateway.endpoint"), "ARTCTX_GATEWAY_ENDPOINT");
  EXPECT_EQ(env_name("retriever.k_coarse"), "ARTCTX_RETRIEVER_K_COARSE");
  const auto keys = config_keys();
  EXPECT_NE(std::find(keys.begin(), keys.end(), "retriever.lambda"), keys.end());
}

TEST(LoadConfig, DefaultsMatchPipelineDefaults) {
  const AppConfig c = load_config(std::nullopt, {}, env_from({}));
  EXPECT_EQ(c.retriever.k_coarse, 5u);
  EXPECT_EQ(c.retriever.k, 10u);
  EXPECT_EQ(c.retriever.m, 5u);
  EXPECT_EQ(c.retriever.lambda, 0.5);
  EXPECT_EQ(c.retriever.n_concepts, 5u);
  EXPECT_EQ(c.gateway.backend, Backend::kMock);
  EXPECT_EQ(c.max_prompt_chars, 16000u);
  EXPECT_NO_THROW(c.validate());
}

// Every combination of file / environment / flag supplying retriever.k.
TEST(LoadConfig, PrecedenceMatrix) {
  const auto dir = testkit::temp_dir("config_matrix");
  const auto file = dir / "artctx.toml";
  std::ofstream(file) << "[retriever]\nk = 6\n";
  for (int mask = 0; mask < 8; ++mask) {
    const bool use_file = mask & 1, use_env = mask & 2, use_flag = mask & 4;
    std::map<std::string, std::string> env;
    if (use_env) env["ARTCTX_RETRIEVER_K"] = "7";
    ConfigValues flags;
    if (use_flag) flags["retriever.k"] = "8";
    const AppConfig c = load_config(use_file ? std::optional(file) : std::nullopt, flags,
                                    env_from(env));
    const std::size_t expected = use_flag ? 8 : use_env ? 7 : use_file ? 6 : 10;
    EXPECT_EQ(c.retriever.k, expected) << "mask " << mask;
  }
}

TEST(LoadConfig, LayersIndependentKeys) {
  const auto dir = testkit::temp_dir("config_layers");
  const auto file = dir / "artctx.toml";
  std::ofstream(file) << "[retriever]\nm = 3\nlambda = 0.2\n[service]\nport = 9000\n"
                         "[paths]\ngraph = \"g.jsonl\"\n";
  const AppConfig c = load_config(file, {{"retriever.lambda", "0.9"}},
                                  env_from({{"ARTCTX_SERVICE_PORT", "9100"}}));
  EXPECT_EQ(c.retriever.m, 3u);
  EXPECT_EQ(c.retriever.lambda, 0.9);
  EXPECT_EQ(c.service.port, 9100);
  EXPECT_EQ(c.paths.graph, std::filesystem::path("g.jsonl"));
}

TEST(LoadConfig, Errors) {
  const auto none = env_from({});
  EXPECT_EQ(code_of([&] { load_config(std::nullopt, {{"retriever.bogus", "1"}}, none); }),
            ErrorCode::kConfiguration);
  EXPECT_EQ(code_of([&] { load_config(std::nullopt, {{"retriever.k", "ten"}}, none); }),
            ErrorCode::kConfiguration);
  EXPECT_EQ(code_of([&] { load_config(std::nullopt, {{"retriever.k", "-1"}}, none); }),
            ErrorCode::kConfiguration);
  EXPECT_EQ(code_of([&] { load_config(std::nullopt, {{"gateway.backend", "magic"}}, none); }),
            ErrorCode::kConfiguration);
  EXPECT_EQ(code_of([&] { load_config(std::nullopt, {}, env_from({{"ARTCTX_RETRIEVER_K", "x"}})); }),
            ErrorCode::kConfiguration);
  EXPECT_EQ(code_of([&] { load_config(std::filesystem::path("/nonexistent/artctx.toml"), {}, none); }),
            ErrorCode::kConfiguration);
}

TEST(AppConfig, ValidateRetrieverInvariants) {
  const auto none = env_from({});
  for (const ConfigValues& bad : std::vector<ConfigValues>{{{"retriever.k_coarse", "11"}},
                                                           {{"retriever.m", "11"}},
                                                           {{"retriever.lambda", "1.5"}},
                                                           {{"retriever.m", "0"}}}) {
    const AppConfig c = load_config(std::nullopt, bad, none);
    EXPECT_THROW(c.validate(), Error) << bad.begin()->first;
  }
  AppConfig remote = load_config(std::nullopt, {{"gateway.backend", "remote"}}, none);
  EXPECT_THROW(remote.validate(), Error);
}
