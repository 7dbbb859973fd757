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

#include <stdexcept>
#include <string>
#include <string_view>

namespace artctx {

enum class ErrorCode {
  kValidation,
  kConflict,
  kNotFound,
  kDanglingEdge,
  kParse,
  kIntegrity,
  kConfiguration,
  kTransport,
  kEmptyResponse,
  kTemplate,
  kConceptDetection,
  kIo,
};

std::string_view to_string(ErrorCode code);

// Every failure raised by the library. The optional stage tag names the
// pipeline step that failed ("extract", "retrieve/rank", ...).
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, std::string message, std::string stage = {});

  ErrorCode code() const noexcept { return code_; }
  const std::string& stage() const noexcept { return stage_; }
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorCode code_;
  std::string detail_;
  std::string stage_;
};

// Runs fn, tagging any untagged Error with the given stage.
template <typename Fn>
decltype(auto) with_stage(std::string_view stage, Fn&& fn) {
  try {
    return fn();
  } catch (const Error& e) {
    if (!e.stage().empty()) throw;
    throw Error(e.code(), e.detail(), std::string(stage));
  }
}

}  // namespace artctx
