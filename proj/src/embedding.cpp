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

#include "artctx/embedding.hpp"

#include <bit>
#include <cstdint>
#include <fstream>

#include "artctx/text.hpp"
#include "json.hpp"

namespace artctx {

std::string node_text(const KgNode& node, std::size_t max_chars) {
  const std::string_view type =
      node.has_schema_type() ? canonical_name(node.type) : std::string_view(node.raw_type);
  std::string out = node.name + " (" + std::string(type) + "): " + node.description;
  return text::truncate_utf8(out, max_chars);
}

VectorIndex build_index(Gateway& gateway, const Ackg& graph, std::size_t batch_size,
                        std::size_t max_chars) {
  if (batch_size == 0) throw Error(ErrorCode::kValidation, "batch size must be positive");
  std::vector<NodeId> ids;
  std::vector<std::string> texts;
  for (const auto& [id, node] : graph.nodes()) {
    ids.push_back(id);
    texts.push_back(node_text(node, max_chars));
  }
  if (ids.empty()) return VectorIndex{};

  VectorIndex::Matrix matrix;
  for (std::size_t start = 0; start < texts.size(); start += batch_size) {
    const std::size_t n = std::min(batch_size, texts.size() - start);
    std::vector<EmbeddingVector> vectors;
    try {
      vectors = gateway.embed(std::span<const std::string>(texts).subspan(start, n));
    } catch (const Error& e) {
      throw Error(e.code(),
                  "batch " + std::to_string(start / batch_size) + " (nodes " + ids[start] + " .. " +
                      ids[start + n - 1] + "): " + e.detail(),
                  "index");
    }
    if (matrix.size() == 0) {
      matrix.resize(static_cast<Eigen::Index>(texts.size()), vectors.front().size());
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (vectors[i].size() != matrix.cols()) {
        throw Error(ErrorCode::kTransport, "embedding dimension changed between batches", "index");
      }
      matrix.row(static_cast<Eigen::Index>(start + i)) = vectors[i].transpose();
    }
  }
  return VectorIndex(std::move(ids), std::move(matrix));
}

namespace {

void put_u32(std::ostream& out, std::uint32_t v) {
  const char bytes[4] = {static_cast<char>(v & 0xFF), static_cast<char>((v >> 8) & 0xFF),
                         static_cast<char>((v >> 16) & 0xFF), static_cast<char>((v >> 24) & 0xFF)};
  out.write(bytes, 4);
}

std::uint32_t get_u32(std::istream& in) {
  unsigned char bytes[4];
  if (!in.read(reinterpret_cast<char*>(bytes), 4)) {
    throw Error(ErrorCode::kParse, "index file truncated");
  }
  return static_cast<std::uint32_t>(bytes[0]) | (static_cast<std::uint32_t>(bytes[1]) << 8) |
         (static_cast<std::uint32_t>(bytes[2]) << 16) | (static_cast<std::uint32_t>(bytes[3]) << 24);
}

}  // namespace

std::filesystem::path index_ids_path(const std::filesystem::path& index_path) {
  return std::filesystem::path(index_path.string() + ".ids.json");
}

void save_index(const VectorIndex& index, const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  put_u32(out, static_cast<std::uint32_t>(index.dim()));
  put_u32(out, static_cast<std::uint32_t>(index.count()));
  const auto& m = index.vectors();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) put_u32(out, std::bit_cast<std::uint32_t>(m(r, c)));
  }
  if (!out) throw Error(ErrorCode::kIo, "write failed for " + path.string());
  nlohmann::json ids = index.ids();
  text::write_file(index_ids_path(path), ids.dump() + "\n");
}

VectorIndex load_index(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open index file " + path.string());
  const std::uint32_t dim = get_u32(in);
  const std::uint32_t count = get_u32(in);
  VectorIndex::Matrix m(static_cast<Eigen::Index>(count), static_cast<Eigen::Index>(dim));
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) m(r, c) = std::bit_cast<float>(get_u32(in));
  }
  if (in.peek() != std::char_traits<char>::eof()) {
    throw Error(ErrorCode::kParse, "index file has trailing bytes");
  }
  nlohmann::json ids;
  try {
    ids = nlohmann::json::parse(text::read_file(index_ids_path(path)));
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::kParse, std::string("index id sidecar: ") + e.what());
  }
  if (!ids.is_array() || ids.size() != count) {
    throw Error(ErrorCode::kIntegrity, "index id sidecar does not match vector count");
  }
  if (count == 0) return VectorIndex{};
  return VectorIndex(ids.get<std::vector<NodeId>>(), std::move(m));
}

}  // namespace artctx
