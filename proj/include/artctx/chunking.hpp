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

#include <cstddef>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

namespace artctx {

struct TokenSpan {
  std::size_t begin = 0;  // inclusive token index
  std::size_t end = 0;    // exclusive token index

  bool operator==(const TokenSpan&) const = default;
};

struct Chunk {
  std::string document_id;
  std::size_t index = 0;
  std::string text;
  TokenSpan span;
};

// Splits text into tokens. Returned views must point into the input.
using Tokenizer = std::function<std::vector<std::string_view>(std::string_view)>;

std::vector<std::string_view> whitespace_tokenizer(std::string_view text);

struct ChunkingOptions {
  std::size_t window_tokens = 1000;
  std::size_t overlap_tokens = 100;
  // Non-zero selects strict-stride mode: windows start every stride_tokens
  // tokens and overlap_tokens is ignored.
  std::size_t stride_tokens = 0;

  std::size_t step() const;
  void validate() const;
};

// Sliding windows over the token sequence. Each chunk's text is the slice of
// the original document from its first to its last token.
std::vector<Chunk> chunk_document(std::string_view document_id, std::string_view text,
                                  const ChunkingOptions& options,
                                  const Tokenizer& tokenizer = whitespace_tokenizer);

}  // namespace artctx
