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

#include "artctx/chunking.hpp"

#include <algorithm>

#include "artctx/error.hpp"
#include "artctx/text.hpp"

namespace artctx {

std::vector<std::string_view> whitespace_tokenizer(std::string_view text) {
  return text::split_whitespace(text);
}

std::size_t ChunkingOptions::step() const {
  return stride_tokens != 0 ? stride_tokens : window_tokens - overlap_tokens;
}

void ChunkingOptions::validate() const {
  if (window_tokens == 0) throw Error(ErrorCode::kValidation, "window must be positive");
  if (stride_tokens != 0) {
    if (stride_tokens > window_tokens) {
      throw Error(ErrorCode::kValidation, "stride larger than window leaves gaps");
    }
    return;
  }
  if (window_tokens <= overlap_tokens) {
    throw Error(ErrorCode::kValidation, "window (" + std::to_string(window_tokens) +
                                            ") must exceed overlap (" +
                                            std::to_string(overlap_tokens) + ")");
  }
}

std::vector<Chunk> chunk_document(std::string_view document_id, std::string_view text,
                                  const ChunkingOptions& options, const Tokenizer& tokenizer) {
  options.validate();
  const std::vector<std::string_view> tokens = tokenizer(text);
  std::vector<Chunk> chunks;
  const std::size_t n = tokens.size();
  const std::size_t step = options.step();
  for (std::size_t start = 0; start < n; start += step) {
    const std::size_t end = std::min(start + options.window_tokens, n);
    const char* first = tokens[start].data();
    const char* last = tokens[end - 1].data() + tokens[end - 1].size();
    chunks.push_back(Chunk{std::string(document_id), chunks.size(),
                           std::string(first, static_cast<std::size_t>(last - first)),
                           TokenSpan{start, end}});
    if (end == n) break;
  }
  return chunks;
}

}  // namespace artctx
