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

#include "artctx/error.hpp"

namespace artctx {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kValidation: return "validation";
    case ErrorCode::kConflict: return "conflict";
    case ErrorCode::kNotFound: return "not-found";
    case ErrorCode::kDanglingEdge: return "dangling-edge";
    case ErrorCode::kParse: return "parse";
    case ErrorCode::kIntegrity: return "integrity";
    case ErrorCode::kConfiguration: return "configuration";
    case ErrorCode::kTransport: return "transport";
    case ErrorCode::kEmptyResponse: return "empty-response";
    case ErrorCode::kTemplate: return "template";
    case ErrorCode::kConceptDetection: return "concept-detection";
    case ErrorCode::kIo: return "io";
  }
  return "unknown";
}

namespace {

std::string format_what(ErrorCode code, const std::string& message,
                        const std::string& stage) {
  std::string out;
  if (!stage.empty()) out += "[" + stage + "] ";
  out += std::string(to_string(code)) + " error: " + message;
  return out;
}

}  // namespace

Error::Error(ErrorCode code, std::string message, std::string stage)
    : std::runtime_error(format_what(code, message, stage)),
      code_(code),
      detail_(std::move(message)),
      stage_(std::move(stage)) {}

}  // namespace artctx
