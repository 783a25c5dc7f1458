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

#include <random>

#include <gtest/gtest.h>

#include "halk/edgeops.hpp"

namespace halk {
namespace {

using V = std::vector<double>;

TEST(EdgeOps, HandValues) {
  const V a{1, -2, 3}, b{4, 0, -1};
  EXPECT_EQ(edge_feature(EdgeOperator::kL1, a, b), (V{3, 2, 4}));
  EXPECT_EQ(edge_feature(EdgeOperator::kL2, a, b), (V{9, 4, 16}));
  EXPECT_EQ(edge_feature(EdgeOperator::kSubtraction, a, b), (V{-3, -2, 4}));
  EXPECT_EQ(edge_feature(EdgeOperator::kConcatenation, a, b), (V{1, -2, 3, 4, 0, -1}));
  EXPECT_EQ(edge_feature(EdgeOperator::kAverage, a, b), (V{2.5, -1, 1}));
  EXPECT_EQ(edge_feature(EdgeOperator::kHadamard, a, b), (V{4, 0, -3}));
}

TEST(EdgeOps, SymmetryProperties) {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> nd;
  for (int rep = 0; rep < 100; ++rep) {
    V a(7), b(7);
    for (auto& x : a) x = nd(rng);
    for (auto& x : b) x = nd(rng);
    for (auto op : {EdgeOperator::kL1, EdgeOperator::kL2, EdgeOperator::kAverage,
                    EdgeOperator::kHadamard})
      EXPECT_EQ(edge_feature(op, a, b), edge_feature(op, b, a));
    auto ab = edge_feature(EdgeOperator::kSubtraction, a, b);
    auto ba = edge_feature(EdgeOperator::kSubtraction, b, a);
    for (int i = 0; i < 7; ++i) EXPECT_EQ(ab[i], -ba[i]);
    auto l1 = edge_feature(EdgeOperator::kL1, a, b), l2 = edge_feature(EdgeOperator::kL2, a, b);
    for (int i = 0; i < 7; ++i) EXPECT_DOUBLE_EQ(l2[i], l1[i] * l1[i]);
  }
}

TEST(EdgeOps, NamesDimsAndErrors) {
  for (auto op : kAllEdgeOperators) EXPECT_EQ(parse_edge_operator(to_string(op)), op);
  EXPECT_THROW(parse_edge_operator("mean"), ConfigError);
  EXPECT_EQ(output_dim(EdgeOperator::kConcatenation, 5), 10u);
  EXPECT_EQ(output_dim(EdgeOperator::kHadamard, 5), 5u);
  EXPECT_THROW(edge_feature(EdgeOperator::kL1, V{1, 2}, V{1}), Error);
}

TEST(EdgeOps, MatrixRowsOrderPairsByNodeId) {
  DenseMatrix emb(3, 2);
  emb << 1, 2, 10, 20, 100, 200;
  std::vector<Edge> pairs{{2, 0}, {0, 2}, {1, 2}};
  auto f = edge_features(EdgeOperator::kSubtraction, emb, pairs);
  EXPECT_EQ(f.row(0), f.row(1));
  EXPECT_DOUBLE_EQ(f(0, 0), 1 - 100);
  EXPECT_DOUBLE_EQ(f(2, 1), 20 - 200);
  auto c = edge_features(EdgeOperator::kConcatenation, emb, pairs);
  EXPECT_EQ(c.cols(), 4);
  EXPECT_DOUBLE_EQ(c(0, 2), 100);
}

}  // namespace
}  // namespace halk
