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

#include <algorithm>
#include <filesystem>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "artctx/gateway.hpp"
#include "artctx/graph.hpp"
#include "artctx/vector.hpp"

namespace artctx {

inline constexpr std::size_t kDefaultNodeTextChars = 512;

// "NAME (TYPE): DESCRIPTION", cut to at most max_chars bytes.
std::string node_text(const KgNode& node, std::size_t max_chars = kDefaultNodeTextChars);

struct RetrievalHit {
  NodeId id;
  double similarity = 0.0;
};

// Exhaustive cosine index over node embeddings. Rows are stored densely in
// a row-major matrix; row norms are cached at construction.
template <typename Scalar>
class BasicVectorIndex {
 public:
  using Matrix = EmbeddingMatrix<Scalar>;

  BasicVectorIndex() = default;
  BasicVectorIndex(std::vector<NodeId> ids, Matrix vectors)
      : ids_(std::move(ids)), vectors_(std::move(vectors)) {
    if (static_cast<Eigen::Index>(ids_.size()) != vectors_.rows()) {
      throw Error(ErrorCode::kValidation, "index: id count does not match vector count");
    }
    norms_ = vectors_.template cast<double>().rowwise().norm();
  }

  std::size_t dim() const { return static_cast<std::size_t>(vectors_.cols()); }
  std::size_t count() const { return ids_.size(); }
  bool empty() const { return ids_.empty(); }
  const std::vector<NodeId>& ids() const { return ids_; }
  const Matrix& vectors() const { return vectors_; }

  std::optional<Eigen::Index> find(const NodeId& id) const {
    auto it = std::find(ids_.begin(), ids_.end(), id);
    if (it == ids_.end()) return std::nullopt;
    return static_cast<Eigen::Index>(it - ids_.begin());
  }

  // Cosine of the query against every row; zero vectors score 0.
  template <typename Derived>
  Eigen::VectorXd similarities(const Eigen::MatrixBase<Derived>& query) const {
    if (empty()) return {};
    if (static_cast<std::size_t>(query.size()) != dim()) {
      throw Error(ErrorCode::kValidation, "query dimension " + std::to_string(query.size()) +
                                              " does not match index dimension " +
                                              std::to_string(dim()));
    }
    const Eigen::VectorXd q = query.template cast<double>();
    const double qn = q.norm();
    Eigen::VectorXd sims = vectors_.template cast<double>() * q;
    for (Eigen::Index i = 0; i < sims.size(); ++i) {
      sims[i] = (qn == 0.0 || norms_[i] == 0.0) ? 0.0 : sims[i] / (norms_[i] * qn);
    }
    return sims;
  }

  // min(k, count) hits by similarity descending, ties by id ascending.
  template <typename Derived>
  std::vector<RetrievalHit> top_k(const Eigen::MatrixBase<Derived>& query, std::size_t k) const {
    if (k == 0) throw Error(ErrorCode::kValidation, "top_k: k must be at least 1");
    if (empty()) return {};
    const Eigen::VectorXd sims = similarities(query);
    std::vector<std::size_t> order(count());
    std::iota(order.begin(), order.end(), std::size_t{0});
    const std::size_t take = std::min(k, count());
    std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(take), order.end(),
                      [&](std::size_t a, std::size_t b) {
                        const double sa = sims[static_cast<Eigen::Index>(a)];
                        const double sb = sims[static_cast<Eigen::Index>(b)];
                        if (sa != sb) return sa > sb;
                        return ids_[a] < ids_[b];
                      });
    std::vector<RetrievalHit> hits;
    hits.reserve(take);
    for (std::size_t i = 0; i < take; ++i) {
      hits.push_back({ids_[order[i]], sims[static_cast<Eigen::Index>(order[i])]});
    }
    return hits;
  }

 private:
  std::vector<NodeId> ids_;
  Matrix vectors_;
  Eigen::VectorXd norms_;
};

using VectorIndex = BasicVectorIndex<float>;

// Embeds node_text() of every node in id order, batch_size texts per call.
VectorIndex build_index(Gateway& gateway, const Ackg& graph, std::size_t batch_size = 64,
                        std::size_t max_chars = kDefaultNodeTextChars);

// Binary file: little-endian uint32 dim, uint32 count, then count*dim
// little-endian float32 values row by row. Ids go to "<path>.ids.json".
void save_index(const VectorIndex& index, const std::filesystem::path& path);
VectorIndex load_index(const std::filesystem::path& path);

std::filesystem::path index_ids_path(const std::filesystem::path& index_path);

}  // namespace artctx
