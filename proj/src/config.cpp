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

#include "artctx/config.hpp"

#include <charconv>
#include <cstdlib>
#include <filesystem>

#include "artctx/text.hpp"

namespace artctx {

namespace {

[[noreturn]] void bad_value(const std::string& key, const std::string& value, const char* want) {
  throw Error(ErrorCode::kConfiguration,
              key + ": expected " + want + ", got '" + value + "'");
}

std::size_t as_size(const std::string& key, const std::string& v) {
  std::size_t out = 0;
  auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || p != v.data() + v.size()) bad_value(key, v, "a non-negative integer");
  return out;
}

int as_int(const std::string& key, const std::string& v) {
  int out = 0;
  auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || p != v.data() + v.size()) bad_value(key, v, "an integer");
  return out;
}

double as_double(const std::string& key, const std::string& v) {
  char* end = nullptr;
  const double out = std::strtod(v.c_str(), &end);
  if (v.empty() || end != v.c_str() + v.size()) bad_value(key, v, "a number");
  return out;
}

using Setter = std::function<void(AppConfig&, const std::string& key, const std::string& value)>;

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = {
      {"gateway.backend",
       [](AppConfig& c, const std::string& k, const std::string& v) {
         if (v == "mock") c.gateway.backend = Backend::kMock;
         else if (v == "remote") c.gateway.backend = Backend::kRemote;
         else bad_value(k, v, "'mock' or 'remote'");
       }},
      {"gateway.endpoint", [](AppConfig& c, auto&, const std::string& v) { c.gateway.endpoint = v; }},
      {"gateway.credential_env",
       [](AppConfig& c, auto&, const std::string& v) { c.gateway.credential_env = v; }},
      {"gateway.chat_model",
       [](AppConfig& c, auto&, const std::string& v) { c.gateway.chat_model = v; }},
      {"gateway.vision_model",
       [](AppConfig& c, auto&, const std::string& v) { c.gateway.vision_model = v; }},
      {"gateway.embedding_model",
       [](AppConfig& c, auto&, const std::string& v) { c.gateway.embedding_model = v; }},
      {"gateway.max_attempts",
       [](AppConfig& c, const std::string& k, const std::string& v) {
         c.gateway.retry.max_attempts = as_int(k, v);
       }},
      {"gateway.backoff_ms",
       [](AppConfig& c, const std::string& k, const std::string& v) {
         c.gateway.retry.backoff_base = std::chrono::milliseconds(as_int(k, v));
       }},
      {"gateway.timeout_ms",
       [](AppConfig& c, const std::string& k, const std::string& v) {
         c.gateway.timeout = std::chrono::milliseconds(as_int(k, v));
       }},
      {"gateway.max_in_flight",
       [](AppConfig& c, const std::string& k, const std::string& v) {
         c.gateway.max_in_flight = as_size(k, v);
       }},
      {"gateway.chat_path", [](AppConfig& c, auto&, const std::string& v) { c.gateway.chat_path = v; }},
      {"gateway.embeddings_path",
       [](AppConfig& c, auto&, const std::string& v) { c.gateway.embeddings_path = v; }},
      {"gateway.mock_fixtures",
       [](AppConfig& c, auto&, const std::string& v) { c.gateway.mock_fixtures = v; }},
      {"retriever.k_coarse",
       [](AppConfig& c, const std::string& k, const std::string& v) {
         c.retriever.k_coarse = as_size(k, v);
       }},
      {"retriever.k",
       [](AppConfig& c, const std::string& k, const std::string& v) { c.retriever.k = as_size(k, v); }},
      {"retriever.m",
       [](AppConfig& c, const std::string& k, const std::string& v) { c.retriever.m = as_size(k, v); }},
      {"retriever.lambda",
       [](AppConfig& c, const std::string& k, const std::string& v) {
         c.retriever.lambda = as_double(k, v);
       }},
      {"retriever.n_concepts",
       [](AppConfig& c, const std::string& k, const std::string& v) {
         c.retriever.n_concepts = as_size(k, v);
       }},
      {"retriever.rank_scoring",
       [](AppConfig& c, const std::string& k, const std::string& v) {
         if (v == "linear") c.retriever.rank_scoring = RankScoring::kLinear;
         else if (v == "reciprocal") c.retriever.rank_scoring = RankScoring::kReciprocal;
         else bad_value(k, v, "'linear' or 'reciprocal'");
       }},
      {"retriever.ranking_description_chars",
       [](AppConfig& c, const std::string& k, const std::string& v) {
         c.retriever.ranking_description_chars = as_size(k, v);
       }},
      {"paths.graph", [](AppConfig& c, auto&, const std::string& v) { c.paths.graph = v; }},
      {"paths.index", [](AppConfig& c, auto&, const std::string& v) { c.paths.index = v; }},
      {"paths.prompts", [](AppConfig& c, auto&, const std::string& v) { c.paths.prompts = v; }},
      {"paths.template", [](AppConfig& c, auto&, const std::string& v) { c.paths.template_ = v; }},
      {"service.host", [](AppConfig& c, auto&, const std::string& v) { c.service.host = v; }},
      {"service.port",
       [](AppConfig& c, const std::string& k, const std::string& v) { c.service.port = as_int(k, v); }},
      {"service.threads",
       [](AppConfig& c, const std::string& k, const std::string& v) {
         c.service.threads = as_int(k, v);
       }},
      {"construct.window_tokens",
       [](AppConfig& c, const std::string& k, const std::string& v) {
         c.construct.chunking.window_tokens = as_size(k, v);
       }},
      {"construct.overlap_tokens",
       [](AppConfig& c, const std::string& k, const std::string& v) {
         c.construct.chunking.overlap_tokens = as_size(k, v);
       }},
      {"construct.stride_tokens",
       [](AppConfig& c, const std::string& k, const std::string& v) {
         c.construct.chunking.stride_tokens = as_size(k, v);
       }},
      {"construct.dedup_threshold",
       [](AppConfig& c, const std::string& k, const std::string& v) {
         c.construct.dedup_threshold = as_double(k, v);
       }},
      {"construct.workers",
       [](AppConfig& c, const std::string& k, const std::string& v) {
         c.construct.workers = as_size(k, v);
       }},
      {"generate.max_prompt_chars",
       [](AppConfig& c, const std::string& k, const std::string& v) {
         c.max_prompt_chars = as_size(k, v);
       }},
      {"index.batch_size",
       [](AppConfig& c, const std::string& k, const std::string& v) {
         c.embed_batch = as_size(k, v);
       }},
  };
  return table;
}

std::string unquote(std::string_view v, std::size_t line_no) {
  if (v.empty() || v.front() != '"') return std::string(v);
  std::string out;
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (v[i] == '\\' && i + 1 < v.size()) {
      const char n = v[++i];
      out += n == 'n' ? '\n' : n == 't' ? '\t' : n;
    } else if (v[i] == '"') {
      if (!text::trim(v.substr(i + 1)).empty()) break;
      return out;
    } else {
      out += v[i];
    }
  }
  throw Error(ErrorCode::kConfiguration,
              "line " + std::to_string(line_no) + ": unterminated or trailing text after string");
}

std::string_view strip_comment(std::string_view line) {
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '\\' && quoted) {
      ++i;
    } else if (line[i] == '"') {
      quoted = !quoted;
    } else if (line[i] == '#' && !quoted) {
      return line.substr(0, i);
    }
  }
  return line;
}

}  // namespace

void AppConfig::validate() const {
  gateway.validate();
  retriever.validate();
  construct.chunking.validate();
  if (!(construct.dedup_threshold > 0.0 && construct.dedup_threshold <= 1.0)) {
    throw Error(ErrorCode::kConfiguration, "construct.dedup_threshold must be in (0, 1]");
  }
  if (service.port < 0 || service.port > 65535) {
    throw Error(ErrorCode::kConfiguration, "service.port out of range");
  }
  if (embed_batch == 0) throw Error(ErrorCode::kConfiguration, "index.batch_size must be positive");
}

ConfigValues parse_config_text(std::string_view body) {
  ConfigValues out;
  std::string section;
  std::size_t line_no = 0;
  for (std::string_view raw : text::split_lines(body)) {
    ++line_no;
    const std::string_view line = text::trim(strip_comment(raw));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']' || line.size() < 3) {
        throw Error(ErrorCode::kConfiguration,
                    "line " + std::to_string(line_no) + ": malformed section header");
      }
      section = std::string(text::trim(line.substr(1, line.size() - 2)));
      continue;
    }
    const std::size_t eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw Error(ErrorCode::kConfiguration, "line " + std::to_string(line_no) + ": expected key = value");
    }
    const std::string key(text::trim(line.substr(0, eq)));
    if (key.empty()) {
      throw Error(ErrorCode::kConfiguration, "line " + std::to_string(line_no) + ": empty key");
    }
    out[section.empty() ? key : section + "." + key] =
        unquote(text::trim(line.substr(eq + 1)), line_no);
  }
  return out;
}

std::optional<std::string> process_env(const std::string& name) {
  if (const char* v = std::getenv(name.c_str())) return std::string(v);
  return std::nullopt;
}

std::string env_name(std::string_view dotted_key) {
  std::string out = "ARTCTX_";
  for (char c : dotted_key) {
    out += c == '.' ? '_' : static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  }
  return out;
}

std::vector<std::string> config_keys() {
  std::vector<std::string> keys;
  for (const auto& [key, setter] : setters()) keys.push_back(key);
  return keys;
}

AppConfig load_config(const std::optional<std::filesystem::path>& file,
                      const ConfigValues& overrides, const EnvLookup& env) {
  ConfigValues values;
  if (file) {
    if (!std::filesystem::exists(*file)) {
      throw Error(ErrorCode::kConfiguration, "config file not found: " + file->string());
    }
    values = parse_config_text(text::read_file(*file));
  }
  for (const auto& key : config_keys()) {
    if (auto v = env(env_name(key))) values[key] = *v;
  }
  for (const auto& [key, value] : overrides) values[key] = value;

  AppConfig config;
  const auto& table = setters();
  for (const auto& [key, value] : values) {
    auto it = table.find(key);
    if (it == table.end()) throw Error(ErrorCode::kConfiguration, "unknown config key '" + key + "'");
    it->second(config, key, value);
  }
  return config;
}

}  // namespace artctx
