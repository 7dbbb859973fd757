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
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "artctx/chunking.hpp"
#include "artctx/gateway.hpp"
#include "artctx/retriever.hpp"

namespace artctx {

struct PathsConfig {
  std::filesystem::path graph;
  std::filesystem::path index;
  std::filesystem::path prompts;   // directory overriding prompts/*.txt
  std::filesystem::path template_; // generation template JSON
};

struct ServiceConfig {
  std::string host = "127.0.0.1";
  int port = 8080;
  int threads = 8;
};

struct ConstructSettings {
  ChunkingOptions chunking;
  double dedup_threshold = 0.95;
  std::size_t workers = 4;
};

struct AppConfig {
  GatewayConfig gateway;
  RetrieverConfig retriever;
  PathsConfig paths;
  ServiceConfig service;
  ConstructSettings construct;
  std::size_t max_prompt_chars = 16000;
  std::size_t embed_batch = 64;

  void validate() const;
};

// Flat "section.key" -> value view of a config source.
using ConfigValues = std::map<std::string, std::string>;

// Parses "[section]" headers and "key = value" lines. Values may be bare or
// double-quoted; '#' starts a comment outside quotes. Throws kConfiguration
// with the line number on malformed input.
ConfigValues parse_config_text(std::string_view text);

using EnvLookup = std::function<std::optional<std::string>(const std::string&)>;

// Reads the process environment.
std::optional<std::string> process_env(const std::string& name);

// "gateway.endpoint" -> "ARTCTX_GATEWAY_ENDPOINT".
std::string env_name(std::string_view dotted_key);

// Every key understood by AppConfig, as "section.key".
std::vector<std::string> config_keys();

// Layers file values, then ARTCTX_* environment values, then overrides
// (highest precedence). Unknown keys and unparseable values are
// kConfiguration. The file is optional; a missing explicit file is an error.
AppConfig load_config(const std::optional<std::filesystem::path>& file,
                      const ConfigValues& overrides = {}, const EnvLookup& env = process_env);

}  // namespace artctx
