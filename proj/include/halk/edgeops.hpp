// Copyright 2026 The halk Authors
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

#include <array>
#include <cmath>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "halk/common.hpp"
#include "halk/dimred.hpp"
#include "halk/graph.hpp"

namespace halk {

enum class EdgeOperator { kL1, kL2, kSubtraction, kConcatenation, kAverage, kHadamard };

inline constexpr std::array<EdgeOperator, 6> kAllEdgeOperators = {
    EdgeOperator::kL1,            EdgeOperator::kL2,      EdgeOperator::kSubtraction,
    EdgeOperator::kConcatenation, EdgeOperator::kAverage, EdgeOperator::kHadamard};

inline std::string_view to_string(EdgeOperator op) {
  switch (op) {
    case EdgeOperator::kL1: return "l1";
    case EdgeOperator::kL2: return "l2";
    case EdgeOperator::kSubtraction: return "sub";
    case EdgeOperator::kConcatenation: return "concat";
    case EdgeOperator::kAverage: return "avg";
    case EdgeOperator::kHadamard: return "hadamard";
  }
  return "?";
}

inline EdgeOperator parse_edge_operator(std::string_view s) {
  for (auto op : kAllEdgeOperators)
    if (to_string(op) == s) return op;
  throw ConfigError("unknown edge operator '" + std::string(s) +
                    "' (expected l1|l2|sub|concat|avg|hadamard)");
}

inline std::size_t output_dim(EdgeOperator op, std::size_t d) {
  return op == EdgeOperator::kConcatenation ? 2 * d : d;
}

/// Writes the edge feature of (a, b) into `out` (size output_dim(op, d)).
inline void edge_feature(EdgeOperator op, std::span<const double> a,
                         std::span<const double> b, std::span<double> out) {
  if (a.size() != b.size()) throw Error("edge_feature: dimension mismatch");
  const std::size_t d = a.size();
  if (out.size() != output_dim(op, d)) throw Error("edge_feature: output size mismatch");
  switch (op) {
    case EdgeOperator::kL1:
      for (std::size_t i = 0; i < d; ++i) out[i] = std::abs(a[i] - b[i]);
      break;
    case EdgeOperator::kL2:
      for (std::size_t i = 0; i < d; ++i) out[i] = (a[i] - b[i]) * (a[i] - b[i]);
      break;
    case EdgeOperator::kSubtraction:
      for (std::size_t i = 0; i < d; ++i) out[i] = a[i] - b[i];
      break;
    case EdgeOperator::kConcatenation:
      for (std::size_t i = 0; i < d; ++i) {
        out[i] = a[i];
        out[d + i] = b[i];
      }
      break;
    case EdgeOperator::kAverage:
      for (std::size_t i = 0; i < d; ++i) out[i] = (a[i] + b[i]) / 2;
      break;
    case EdgeOperator::kHadamard:
      for (std::size_t i = 0; i < d; ++i) out[i] = a[i] * b[i];
      break;
  }
}

inline std::vector<double> edge_feature(EdgeOperator op, std::span<const double> a,
                                        std::span<const double> b) {
  std::vector<double> out(output_dim(op, a.size()));
  edge_feature(op, a, b, out);
  return out;
}

/// Feature matrix for node pairs; each pair is ordered by ascending id before
/// the operator is applied, so order-sensitive operators are deterministic.
inline DenseMatrix edge_features(EdgeOperator op, const DenseMatrix& emb,
                                 std::span<const Edge> pairs) {
  const auto d = static_cast<std::size_t>(emb.cols());
  DenseMatrix out(static_cast<Eigen::Index>(pairs.size()),
                  static_cast<Eigen::Index>(output_dim(op, d)));
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    auto [u, v] = pairs[i];
    if (u > v) std::swap(u, v);
    std::span<const double> a(emb.row(u).data(), d), b(emb.row(v).data(), d);
    edge_feature(op, a, b, std::span<double>(out.row(static_cast<Eigen::Index>(i)).data(), out.cols()));
  }
  return out;
}

}  // namespace halk
