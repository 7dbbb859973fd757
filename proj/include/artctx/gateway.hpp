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

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "artctx/vector.hpp"

// The only place that talks to language models. Everything else in the
// pipeline receives a Gateway& and stays free of network I/O.
namespace artctx {

enum class Role { kSystem, kUser, kAssistant };

std::string_view to_string(Role role);

// An image given either as a file path or as raw bytes with a media type.
struct ImageRef {
  std::filesystem::path path;
  std::vector<std::uint8_t> bytes;
  std::string media_type;

  static ImageRef from_file(std::filesystem::path path);
  static ImageRef from_bytes(std::vector<std::uint8_t> bytes, std::string media_type);

  // Returns (bytes, media type), reading the file when needed.
  std::pair<std::vector<std::uint8_t>, std::string> load() const;
};

struct ChatMessage {
  Role role = Role::kUser;
  std::string text;
  std::vector<ImageRef> images;
};

struct DecodingOptions {
  double temperature = 0.0;
  int max_output_tokens = 1024;
};

struct ChatRequest {
  std::vector<ChatMessage> messages;
  DecodingOptions decoding;

  // Throws kValidation: no messages, or images on a non-user message.
  void validate() const;
  bool has_images() const;
  // All message texts joined by newlines; what mock markers are matched on.
  std::string prompt_text() const;
};

struct Usage {
  int prompt_tokens = 0;
  int completion_tokens = 0;
};

struct ChatResponse {
  std::string text;
  std::optional<Usage> usage;
};

enum class Backend { kRemote, kMock };

struct RetryPolicy {
  int max_attempts = 3;
  std::chrono::milliseconds backoff_base{500};
};

struct GatewayConfig {
  Backend backend = Backend::kMock;
  std::string endpoint;
  std::string credential_env;
  std::string chat_model = "gpt-4o-mini";
  std::string vision_model = "gpt-4o-mini";
  std::string embedding_model = "text-embedding-3-small";
  RetryPolicy retry;
  std::chrono::milliseconds timeout{60000};
  std::size_t max_in_flight = 4;
  std::string chat_path = "/v1/chat/completions";
  std::string embeddings_path = "/v1/embeddings";
  std::filesystem::path mock_fixtures;

  // kConfiguration if the remote backend lacks an endpoint or credential
  // variable name.
  void validate() const;
};

class Gateway {
 public:
  virtual ~Gateway() = default;

  // Validates the request; throws kEmptyResponse if the provider returns
  // blank text.
  ChatResponse chat(const ChatRequest& request);

  // One vector per input, order preserved. Inputs must be non-empty after
  // trimming.
  std::vector<EmbeddingVector> embed(std::span<const std::string> texts);

 protected:
  virtual ChatResponse do_chat(const ChatRequest& request) = 0;
  virtual std::vector<EmbeddingVector> do_embed(std::span<const std::string> texts) = 0;
};

inline constexpr int kMockEmbeddingDim = 256;

// Bag of whitespace tokens hashed (FNV-1a 64) into 256 buckets, then
// L2-normalized. No tokens gives the unit vector e0.
EmbeddingVector mock_embedding(std::string_view text);

struct MockFixture {
  std::string marker;
  std::string response;
  // When set, matching requests fail with this error code instead.
  std::optional<ErrorCode> error;
};

// Deterministic offline backend. chat() returns the response of the first
// fixture whose marker occurs in the prompt text, else echoes the last user
// message verbatim.
class MockGateway : public Gateway {
 public:
  MockGateway() = default;
  explicit MockGateway(std::vector<MockFixture> fixtures);

  // JSON array of {"marker", "response"|"error"}.
  static std::vector<MockFixture> load_fixtures(const std::filesystem::path& path);
  static std::vector<MockFixture> parse_fixtures(std::string_view json_text);

  std::vector<ChatRequest> chat_log() const;
  std::size_t embed_calls() const;

 protected:
  ChatResponse do_chat(const ChatRequest& request) override;
  std::vector<EmbeddingVector> do_embed(std::span<const std::string> texts) override;

 private:
  std::vector<MockFixture> fixtures_;
  mutable std::mutex mutex_;
  std::vector<ChatRequest> log_;
  std::size_t embed_calls_ = 0;
};

// Chat-completion and embedding calls over HTTP(S) using an
// OpenAI-compatible JSON wire format.
class RemoteGateway : public Gateway {
 public:
  explicit RemoteGateway(GatewayConfig config);
  ~RemoteGateway() override;

 protected:
  ChatResponse do_chat(const ChatRequest& request) override;
  std::vector<EmbeddingVector> do_embed(std::span<const std::string> texts) override;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

std::unique_ptr<Gateway> make_gateway(const GatewayConfig& config);

}  // namespace artctx
