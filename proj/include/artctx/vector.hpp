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

#include <Eigen/Core>

#include "artctx/error.hpp"

namespace artctx {

template <typename Scalar>
using Embedding = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

template <typename Scalar>
using EmbeddingMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// Gateway embeddings and stored index rows are single precision.
using EmbeddingVector = Embedding<float>;

// Cosine similarity evaluated in double precision. A zero vector on either
// side has similarity 0.
template <typename DerivedA, typename DerivedB>
double cosine(const Eigen::MatrixBase<DerivedA>& u, const Eigen::MatrixBase<DerivedB>& v) {
  if (u.size() != v.size()) {
    throw Error(ErrorCode::kValidation, "cosine: dimension mismatch (" +
                                            std::to_string(u.size()) + " vs " +
                                            std::to_string(v.size()) + ")");
  }
  const auto ud = u.template cast<double>();
  const auto vd = v.template cast<double>();
  const double nu = ud.norm();
  const double nv = vd.norm();
  if (nu == 0.0 || nv == 0.0) return 0.0;
  return ud.dot(vd) / (nu * nv);
}

}  // namespace artctx
