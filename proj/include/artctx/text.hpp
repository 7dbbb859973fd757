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

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

// Small string helpers shared by the pipeline stages.
namespace artctx::text {

std::string_view trim(std::string_view s);
std::string to_lower_ascii(std::string_view s);

// Splits on ASCII whitespace; no empty tokens.
std::vector<std::string_view> split_whitespace(std::string_view s);

std::vector<std::string_view> split_lines(std::string_view s);

// Lowercased, trimmed, whitespace runs collapsed to '-'.
std::string slug(std::string_view s);

// Decodes UTF-8 into code points. Invalid bytes decode as U+FFFD.
std::u32string decode_utf8(std::string_view s);
std::string encode_utf8(std::u32string_view s);

// Truncates to at most max_bytes without splitting a UTF-8 sequence.
std::string truncate_utf8(std::string_view s, std::size_t max_bytes);

std::size_t count_words(std::string_view s);

// 64-bit FNV-1a.
std::uint64_t fnv1a64(std::string_view s);

std::string base64_encode(std::span<const std::uint8_t> bytes);
std::vector<std::uint8_t> base64_decode(std::string_view encoded);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view contents);

}  // namespace artctx::text
