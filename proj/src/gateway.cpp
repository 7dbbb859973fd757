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

#include "artctx/gateway.hpp"

#include <cmath>

#include "artctx/text.hpp"

namespace artctx {

std::string_view to_string(Role role) {
  switch (role) {
    case Role::kSystem: return "system";
    case Role::kUser: return "user";
    case Role::kAssistant: return "assistant";
  }
  return "user";
}

namespace {

std::string media_type_for(const std::filesystem::path& path) {
  const std::string ext = text::to_lower_ascii(path.extension().string());
  if (ext == ".png") return "image/png";
  if (ext == ".jpg" || ext == ".jpeg") return "image/jpeg";
  if (ext == ".webp") return "image/webp";
  if (ext == ".gif") return "image/gif";
  return "application/octet-stream";
}

}  // namespace

ImageRef ImageRef::from_file(std::filesystem::path path) {
  ImageRef ref;
  ref.media_type = media_type_for(path);
  ref.path = std::move(path);
  return ref;
}

ImageRef ImageRef::from_bytes(std::vector<std::uint8_t> bytes, std::string media_type) {
  ImageRef ref;
  ref.bytes = std::move(bytes);
  ref.media_type = media_type.empty() ? "image/png" : std::move(media_type);
  return ref;
}

std::pair<std::vector<std::uint8_t>, std::string> ImageRef::load() const {
  if (path.empty()) return {bytes, media_type};
  const std::string raw = text::read_file(path);
  return {std::vector<std::uint8_t>(raw.begin(), raw.end()), media_type};
}

void ChatRequest::validate() const {
  if (messages.empty()) throw Error(ErrorCode::kValidation, "chat request has no messages");
  for (const ChatMessage& m : messages) {
    if (!m.images.empty() && m.role != Role::kUser) {
      throw Error(ErrorCode::kValidation, "images may only be attached to user messages");
    }
  }
}

bool ChatRequest::has_images() const {
  for (const ChatMessage& m : messages) {
    if (!m.images.empty()) return true;
  }
  return false;
}

std::string ChatRequest::prompt_text() const {
  std::string out;
  for (const ChatMessage& m : messages) {
    if (!out.empty()) out += '\n';
    out += m.text;
  }
  return out;
}

void GatewayConfig::validate() const {
  if (backend != Backend::kRemote) return;
  if (endpoint.empty()) {
    throw Error(ErrorCode::kConfiguration, "remote gateway requires an endpoint URL");
  }
  if (credential_env.empty()) {
    throw Error(ErrorCode::kConfiguration,
                "remote gateway requires the name of the credential environment variable");
  }
  if (max_in_flight == 0) {
    throw Error(ErrorCode::kConfiguration, "max_in_flight must be at least 1");
  }
  if (retry.max_attempts < 1) {
    throw Error(ErrorCode::kConfiguration, "retry max_attempts must be at least 1");
  }
}

ChatResponse Gateway::chat(const ChatRequest& request) {
  request.validate();
  ChatResponse response = do_chat(request);
  if (text::trim(response.text).empty()) {
    throw Error(ErrorCode::kEmptyResponse, "provider returned no text");
  }
  return response;
}

std::vector<EmbeddingVector> Gateway::embed(std::span<const std::string> texts) {
  if (texts.empty()) throw Error(ErrorCode::kValidation, "embed: no input texts");
  for (std::size_t i = 0; i < texts.size(); ++i) {
    if (text::trim(texts[i]).empty()) {
      throw Error(ErrorCode::kValidation, "embed: input " + std::to_string(i) + " is blank");
    }
  }
  std::vector<EmbeddingVector> out = do_embed(texts);
  if (out.size() != texts.size()) {
    throw Error(ErrorCode::kTransport, "embed: expected " + std::to_string(texts.size()) +
                                           " vectors, got " + std::to_string(out.size()));
  }
  for (const auto& v : out) {
    if (v.size() == 0 || v.size() != out.front().size()) {
      throw Error(ErrorCode::kTransport, "embed: inconsistent vector dimensions");
    }
    if (!v.allFinite()) throw Error(ErrorCode::kTransport, "embed: non-finite vector entry");
  }
  return out;
}

std::unique_ptr<Gateway> make_gateway(const GatewayConfig& config) {
  config.validate();
  if (config.backend == Backend::kRemote) return std::make_unique<RemoteGateway>(config);
  std::vector<MockFixture> fixtures;
  if (!config.mock_fixtures.empty()) fixtures = MockGateway::load_fixtures(config.mock_fixtures);
  return std::make_unique<MockGateway>(std::move(fixtures));
}

}  // namespace artctx
