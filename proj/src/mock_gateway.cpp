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

#include <algorithm>

#include "artctx/gateway.hpp"
#include "artctx/text.hpp"
#include "json.hpp"

namespace artctx {

EmbeddingVector mock_embedding(std::string_view text) {
  EmbeddingVector v = EmbeddingVector::Zero(kMockEmbeddingDim);
  const auto tokens = text::split_whitespace(text);
  if (tokens.empty()) {
    v[0] = 1.0f;
    return v;
  }
  for (std::string_view token : tokens) {
    v[static_cast<Eigen::Index>(text::fnv1a64(token) % kMockEmbeddingDim)] += 1.0f;
  }
  v.normalize();
  return v;
}

MockGateway::MockGateway(std::vector<MockFixture> fixtures) : fixtures_(std::move(fixtures)) {}

namespace {

std::optional<ErrorCode> parse_error_code(const std::string& name) {
  for (ErrorCode code : {ErrorCode::kTransport, ErrorCode::kEmptyResponse,
                         ErrorCode::kConfiguration, ErrorCode::kValidation}) {
    if (to_string(code) == name) return code;
  }
  return std::nullopt;
}

}  // namespace

std::vector<MockFixture> MockGateway::parse_fixtures(std::string_view json_text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::kConfiguration, std::string("mock fixtures: ") + e.what());
  }
  if (!doc.is_array()) throw Error(ErrorCode::kConfiguration, "mock fixtures must be a JSON array");
  std::vector<MockFixture> out;
  for (const auto& item : doc) {
    if (!item.is_object() || !item.contains("marker") || !item["marker"].is_string()) {
      throw Error(ErrorCode::kConfiguration, "mock fixture without a string 'marker'");
    }
    MockFixture fx;
    fx.marker = item["marker"].get<std::string>();
    if (item.contains("error")) {
      fx.error = parse_error_code(item["error"].get<std::string>());
      if (!fx.error) throw Error(ErrorCode::kConfiguration, "mock fixture: unknown error kind");
    } else if (item.contains("response") && item["response"].is_string()) {
      fx.response = item["response"].get<std::string>();
    } else if (item.contains("response") && item["response"].is_array()) {
      // Multi-line responses may be given as an array of lines.
      for (const auto& line : item["response"]) fx.response += line.get<std::string>() + "\n";
    } else {
      throw Error(ErrorCode::kConfiguration, "mock fixture '" + fx.marker + "' has no response");
    }
    out.push_back(std::move(fx));
  }
  return out;
}

std::vector<MockFixture> MockGateway::load_fixtures(const std::filesystem::path& path) {
  return parse_fixtures(text::read_file(path));
}

std::vector<ChatRequest> MockGateway::chat_log() const {
  std::lock_guard lock(mutex_);
  return log_;
}

std::size_t MockGateway::embed_calls() const {
  std::lock_guard lock(mutex_);
  return embed_calls_;
}

ChatResponse MockGateway::do_chat(const ChatRequest& request) {
  {
    std::lock_guard lock(mutex_);
    log_.push_back(request);
  }
  const std::string prompt = request.prompt_text();
  for (const MockFixture& fx : fixtures_) {
    if (prompt.find(fx.marker) == std::string::npos) continue;
    if (fx.error) throw Error(*fx.error, "mock fixture '" + fx.marker + "' configured to fail");
    return ChatResponse{fx.response, Usage{}};
  }
  auto last_user = std::find_if(request.messages.rbegin(), request.messages.rend(),
                                [](const ChatMessage& m) { return m.role == Role::kUser; });
  const ChatMessage& echoed =
      last_user != request.messages.rend() ? *last_user : request.messages.back();
  return ChatResponse{echoed.text, Usage{}};
}

std::vector<EmbeddingVector> MockGateway::do_embed(std::span<const std::string> texts) {
  {
    std::lock_guard lock(mutex_);
    ++embed_calls_;
  }
  std::vector<EmbeddingVector> out;
  out.reserve(texts.size());
  for (const std::string& t : texts) out.push_back(mock_embedding(t));
  return out;
}

}  // namespace artctx
