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

#include <cstdlib>
#include <semaphore>
#include <thread>

#include "artctx/gateway.hpp"
#include "artctx/text.hpp"
#include "httplib.h"
#include "json.hpp"

namespace artctx {

namespace {

struct Endpoint {
  std::string origin;       // scheme://host[:port]
  std::string path_prefix;  // optional base path
};

Endpoint split_endpoint(const std::string& url) {
  const auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos) {
    throw Error(ErrorCode::kConfiguration, "endpoint must include a scheme: " + url);
  }
  const auto path_start = url.find('/', scheme_end + 3);
  Endpoint ep;
  ep.origin = url.substr(0, path_start);
  if (path_start != std::string::npos) {
    ep.path_prefix = url.substr(path_start);
    while (!ep.path_prefix.empty() && ep.path_prefix.back() == '/') ep.path_prefix.pop_back();
  }
  return ep;
}

bool retryable_status(int status) { return status == 408 || status == 429 || status >= 500; }

}  // namespace

struct RemoteGateway::Impl {
  explicit Impl(GatewayConfig c)
      : config(std::move(c)),
        endpoint(split_endpoint(config.endpoint)),
        in_flight(static_cast<std::ptrdiff_t>(config.max_in_flight)) {}

  std::string credential() const {
    const char* value = std::getenv(config.credential_env.c_str());
    if (value == nullptr || *value == '\0') {
      throw Error(ErrorCode::kConfiguration,
                  "credential variable " + config.credential_env + " is not set");
    }
    return value;
  }

  nlohmann::json post(const std::string& path, const nlohmann::json& body) {
    const std::string token = credential();
    in_flight.acquire();
    struct Release {
      std::counting_semaphore<>& s;
      ~Release() { s.release(); }
    } release{in_flight};

    httplib::Client client(endpoint.origin);
    const auto secs = std::chrono::duration_cast<std::chrono::seconds>(config.timeout);
    const auto usecs = std::chrono::duration_cast<std::chrono::microseconds>(config.timeout - secs);
    client.set_connection_timeout(secs.count(), usecs.count());
    client.set_read_timeout(secs.count(), usecs.count());
    client.set_write_timeout(secs.count(), usecs.count());
    client.set_bearer_token_auth(token);

    const std::string payload = body.dump();
    std::string last_error;
    for (int attempt = 1; attempt <= config.retry.max_attempts; ++attempt) {
      if (attempt > 1) {
        std::this_thread::sleep_for(config.retry.backoff_base * (1 << (attempt - 2)));
      }
      auto result = client.Post(endpoint.path_prefix + path, payload, "application/json");
      if (!result) {
        last_error = "request failed: " + httplib::to_string(result.error());
        continue;
      }
      if (result->status == 200) {
        try {
          return nlohmann::json::parse(result->body);
        } catch (const nlohmann::json::parse_error& e) {
          throw Error(ErrorCode::kTransport, std::string("malformed provider response: ") + e.what());
        }
      }
      last_error = "HTTP " + std::to_string(result->status) + ": " +
                   text::truncate_utf8(result->body, 300);
      if (!retryable_status(result->status)) {
        throw Error(ErrorCode::kTransport, last_error);
      }
    }
    throw Error(ErrorCode::kTransport, "retries exhausted after " +
                                           std::to_string(config.retry.max_attempts) +
                                           " attempts; last error: " + last_error);
  }

  GatewayConfig config;
  Endpoint endpoint;
  std::counting_semaphore<> in_flight;
};

RemoteGateway::RemoteGateway(GatewayConfig config) {
  config.validate();
  impl_ = std::make_unique<Impl>(std::move(config));
}

RemoteGateway::~RemoteGateway() = default;

ChatResponse RemoteGateway::do_chat(const ChatRequest& request) {
  nlohmann::json messages = nlohmann::json::array();
  for (const ChatMessage& m : request.messages) {
    nlohmann::json msg{{"role", to_string(m.role)}};
    if (m.images.empty()) {
      msg["content"] = m.text;
    } else {
      nlohmann::json parts = nlohmann::json::array();
      parts.push_back({{"type", "text"}, {"text", m.text}});
      for (const ImageRef& img : m.images) {
        const auto [bytes, media_type] = img.load();
        parts.push_back({{"type", "image_url"},
                         {"image_url",
                          {{"url", "data:" + media_type + ";base64," + text::base64_encode(bytes)}}}});
      }
      msg["content"] = std::move(parts);
    }
    messages.push_back(std::move(msg));
  }
  const auto& cfg = impl_->config;
  nlohmann::json body{
      {"model", request.has_images() ? cfg.vision_model : cfg.chat_model},
      {"messages", std::move(messages)},
      {"temperature", request.decoding.temperature},
      {"max_tokens", request.decoding.max_output_tokens},
  };
  const nlohmann::json reply = impl_->post(cfg.chat_path, body);

  ChatResponse out;
  try {
    const auto& message = reply.at("choices").at(0).at("message");
    if (message.contains("refusal") && message["refusal"].is_string()) {
      throw Error(ErrorCode::kEmptyResponse,
                  "provider refused: " + message["refusal"].get<std::string>());
    }
    if (message.contains("content") && message["content"].is_string()) {
      out.text = message["content"].get<std::string>();
    }
    if (reply.contains("usage") && reply["usage"].is_object()) {
      out.usage = Usage{reply["usage"].value("prompt_tokens", 0),
                        reply["usage"].value("completion_tokens", 0)};
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kTransport, std::string("unexpected chat response shape: ") + e.what());
  }
  return out;
}

std::vector<EmbeddingVector> RemoteGateway::do_embed(std::span<const std::string> texts) {
  const auto& cfg = impl_->config;
  nlohmann::json body{{"model", cfg.embedding_model},
                      {"input", std::vector<std::string>(texts.begin(), texts.end())}};
  const nlohmann::json reply = impl_->post(cfg.embeddings_path, body);
  std::vector<EmbeddingVector> out(texts.size());
  try {
    const auto& data = reply.at("data");
    for (std::size_t i = 0; i < data.size(); ++i) {
      const auto& item = data.at(i);
      const std::size_t index = item.contains("index") ? item["index"].get<std::size_t>() : i;
      if (index >= out.size()) throw Error(ErrorCode::kTransport, "embedding index out of range");
      const auto values = item.at("embedding").get<std::vector<float>>();
      out[index] = Eigen::Map<const EmbeddingVector>(values.data(),
                                                     static_cast<Eigen::Index>(values.size()));
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kTransport,
                std::string("unexpected embedding response shape: ") + e.what());
  }
  return out;
}

}  // namespace artctx
