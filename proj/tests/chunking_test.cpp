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

#include <gtest/gtest.h>

#include <random>

#include "artctx/chunking.hpp"
#include "artctx/error.hpp"

using namespace artctx;

namespace {

std::string words(std::size_t n) {
  std::string out;
  for (std::size_t i = 0; i < n; ++i) {
    if (i) out += (i % 7 == 0) ? "\n" : " ";
    out += "w" + std::to_string(i);
  }
  return out;
}

}  // namespace

TEST(Chunking, ThousandTokenWindows) {
  const auto chunks = chunk_document("d", words(1900), {1000, 100, 0});
  ASSERT_EQ(chunks.size(), 2u);
  EXPECT_EQ(chunks[0].span, (TokenSpan{0, 1000}));
  EXPECT_EQ(chunks[1].span, (TokenSpan{900, 1900}));
  EXPECT_EQ(chunks[1].index, 1u);
  EXPECT_TRUE(chunks[0].text.starts_with("w0 "));
  EXPECT_TRUE(chunks[1].text.ends_with("w1899"));
}

TEST(Chunking, ShortAndEmptyDocuments) {
  EXPECT_TRUE(chunk_document("d", "", {}).empty());
  EXPECT_TRUE(chunk_document("d", "   \n\t ", {}).empty());
  const auto one = chunk_document("d", "  just three words ", {});
  ASSERT_EQ(one.size(), 1u);
  EXPECT_EQ(one[0].text, "just three words");
  EXPECT_EQ(one[0].span, (TokenSpan{0, 3}));
}

TEST(Chunking, StrictStrideMode) {
  const auto chunks = chunk_document("d", words(25), {10, 0, 5});
  ASSERT_EQ(chunks.size(), 4u);
  EXPECT_EQ(chunks[3].span, (TokenSpan{15, 25}));
}

TEST(Chunking, InvalidOptions) {
  EXPECT_THROW(chunk_document("d", "a b", {100, 100, 0}), Error);
  EXPECT_THROW(chunk_document("d", "a b", {100, 200, 0}), Error);
  EXPECT_THROW(chunk_document("d", "a b", {0, 0, 0}), Error);
  EXPECT_THROW(chunk_document("d", "a b", {10, 0, 11}), Error);
}

TEST(ChunkingProperty, CoverageAndOverlap) {
  std::mt19937 rng(5);
  std::uniform_int_distribution<std::size_t> len(1, 3000), win(2, 400);
  for (int round = 0; round < 50; ++round) {
    const std::size_t n = len(rng);
    const std::size_t w = win(rng);
    const std::size_t o = std::uniform_int_distribution<std::size_t>(0, w - 1)(rng);
    const auto chunks = chunk_document("d", words(n), {w, o, 0});
    std::vector<int> covered(n, 0);
    for (std::size_t i = 0; i < chunks.size(); ++i) {
      const auto& s = chunks[i].span;
      ASSERT_LT(s.begin, s.end);
      ASSERT_LE(s.end - s.begin, w);
      for (std::size_t t = s.begin; t < s.end; ++t) covered[t] = 1;
      if (i + 1 < chunks.size()) {
        ASSERT_EQ(s.end - s.begin, w);
        ASSERT_EQ(s.end - chunks[i + 1].span.begin, o) << "n=" << n << " w=" << w << " o=" << o;
      }
    }
    ASSERT_EQ(std::count(covered.begin(), covered.end(), 1), static_cast<long>(n));
    ASSERT_EQ(chunks.back().span.end, n);
  }
}
