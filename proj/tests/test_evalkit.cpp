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
#include <set>
#include <sstream>

#include <gtest/gtest.h>

#include "halk/evalkit.hpp"
#include "oracles.hpp"

namespace halk {
namespace {

using Sets = std::vector<std::vector<int>>;

struct Toy {
  DenseMatrix x;
  Eigen::VectorXd y;
};

Toy toy_problem(std::size_t n, std::size_t d, std::uint64_t seed, double noise) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd;
  Toy t{DenseMatrix(n, d), Eigen::VectorXd(n)};
  for (std::size_t i = 0; i < n; ++i) {
    double z = 0.3;
    for (std::size_t j = 0; j < d; ++j) {
      t.x(i, j) = nd(rng);
      z += (j % 2 ? -1.0 : 1.0) * t.x(i, j);
    }
    t.y(i) = z + noise * nd(rng) > 0 ? 1 : 0;
  }
  return t;
}

TEST(LogReg, MatchesGradientDescentOracle) {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    auto t = toy_problem(20, 3, seed, 1.0);
    if (t.y.sum() == 0 || t.y.sum() == 20) continue;
    LogRegOptions opt;
    opt.l2 = 1.0;
    auto m = fit_logreg(t.x, t.y, opt);
    EXPECT_TRUE(m.converged);
    std::vector<std::vector<double>> rows;
    std::vector<double> ys;
    for (int i = 0; i < 20; ++i) {
      rows.emplace_back(t.x.row(i).data(), t.x.row(i).data() + 3);
      ys.push_back(t.y(i));
    }
    auto w = oracle::logreg_gradient_descent(rows, ys, 1.0, 0.02, 50000);
    for (int j = 0; j < 3; ++j) EXPECT_NEAR(m.weights(j), w[j], 1e-3) << "seed " << seed;
    EXPECT_NEAR(m.bias, w[3], 1e-3);
  }
}

TEST(LogReg, ObjectiveNeverIncreases) {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    auto t = toy_problem(200, 6, seed, 0.5);
    LogRegOptions opt;
    opt.l2 = 0.01;
    auto m = fit_logreg(t.x, t.y, opt);
    for (std::size_t i = 1; i < m.objective_history.size(); ++i)
      EXPECT_LE(m.objective_history[i], m.objective_history[i - 1]);
  }
}

TEST(LogReg, SeparableDataFitsPerfectly) {
  auto t = toy_problem(60, 2, 3, 0.0);
  LogRegOptions opt;
  opt.l2 = 1e-8;
  auto m = fit_logreg(t.x, t.y, opt);
  auto p = m.predict_proba(t.x);
  for (int i = 0; i < 60; ++i) EXPECT_EQ(p(i) > 0.5, t.y(i) == 1) << i;
}

TEST(LogReg, StrongPenaltyPredictsPrior) {
  auto t = toy_problem(100, 4, 5, 0.3);
  LogRegOptions opt;
  opt.l2 = 1e9;
  auto m = fit_logreg(t.x, t.y, opt);
  EXPECT_LT(m.weights.norm(), 1e-6);
  const double prior = t.y.mean();
  auto p = m.predict_proba(t.x);
  for (int i = 0; i < 100; ++i) EXPECT_NEAR(p(i), prior, 1e-4);
}

TEST(LogReg, OneVsRestFallsBackToPrior) {
  DenseMatrix x(4, 1);
  x << -1, -0.5, 0.5, 1;
  Sets labels{{0}, {0}, {1}, {1}};
  auto clf = train_logreg_ovr(x, labels, 3, {});
  ASSERT_EQ(clf.num_classes(), 3u);
  EXPECT_EQ(clf.per_class[2].constant, 0.0);
  auto s = clf.scores(x);
  for (int i = 0; i < 4; ++i) EXPECT_EQ(s(i, 2), 0.0);
  EXPECT_GT(s(3, 1), s(0, 1));
}

TEST(TopK, Examples) {
  DenseMatrix s(1, 3);
  s << 0.1, 0.7, 0.2;
  std::vector<std::size_t> two{2}, three{3}, one{1}, four{4};
  EXPECT_EQ(predict_top_k(s, two), (Sets{{1, 2}}));
  EXPECT_EQ(predict_top_k(s, one), (Sets{{1}}));
  EXPECT_EQ(predict_top_k(s, three), (Sets{{0, 1, 2}}));
  EXPECT_THROW(predict_top_k(s, four), Error);
  DenseMatrix tie(1, 4);
  tie << 0.5, 0.9, 0.5, 0.5;
  EXPECT_EQ(predict_top_k(tie, two), (Sets{{0, 1}}));
}

TEST(F1, HandCase) {
  Sets truth{{0}, {1}, {0}}, pred{{0}, {0}, {1}};
  EXPECT_EQ(macro_f1(pred, truth, 2), 0.25);
  EXPECT_EQ(micro_f1(pred, truth, 2), 1.0 / 3.0);
}

TEST(F1, ExtremesAndAccuracyIdentity) {
  Sets truth{{0}, {1}, {2}, {1}};
  EXPECT_EQ(macro_f1(truth, truth, 3), 1.0);
  EXPECT_EQ(micro_f1(truth, truth, 3), 1.0);
  Sets wrong{{1}, {2}, {0}, {0}};
  EXPECT_EQ(macro_f1(wrong, truth, 3), 0.0);
  EXPECT_EQ(micro_f1(wrong, truth, 3), 0.0);
  std::mt19937_64 rng(4);
  Sets t, p;
  int correct = 0;
  for (int i = 0; i < 500; ++i) {
    t.push_back({static_cast<int>(rng() % 5)});
    p.push_back({static_cast<int>(rng() % 5)});
    correct += t.back() == p.back();
  }
  EXPECT_NEAR(micro_f1(p, t, 5), correct / 500.0, 1e-12);
  const double mf = macro_f1(p, t, 5);
  EXPECT_GE(mf, 0.0);
  EXPECT_LE(mf, 1.0);
  EXPECT_EQ(macro_f1(Sets{{0}}, Sets{{0}}, 2), 0.5);  // class 1 never seen
}

TEST(Auc, HandCaseAndProperties) {
  std::vector<double> s{0.1, 0.4, 0.35, 0.8};
  std::vector<int> y{0, 0, 1, 1};
  EXPECT_EQ(auc(s, y), 0.75);
  EXPECT_EQ(auc(std::vector<double>{1, 2, 3, 4}, y), 1.0);
  EXPECT_EQ(auc(std::vector<double>(4, 0.3), y), 0.5);
  std::vector<double> t;
  for (double v : s) t.push_back(std::exp(3 * v) - 7);
  EXPECT_EQ(auc(t, y), 0.75);
  EXPECT_THROW(auc(s, std::vector<int>{1, 1, 1, 1}), Error);
  EXPECT_THROW(auc(s, std::vector<int>{0, 2, 1, 1}), Error);
}

TEST(Auc, AgreesWithPairCounting) {
  std::mt19937_64 rng(8);
  for (int rep = 0; rep < 50; ++rep) {
    std::vector<double> s(40);
    std::vector<int> y(40);
    for (int i = 0; i < 40; ++i) {
      s[i] = static_cast<double>(rng() % 10);
      y[i] = i % 3 == 0;
    }
    double wins = 0, pairs = 0;
    for (int i = 0; i < 40; ++i)
      for (int j = 0; j < 40; ++j)
        if (y[i] == 1 && y[j] == 0) {
          pairs += 1;
          wins += s[i] > s[j] ? 1 : s[i] == s[j] ? 0.5 : 0;
        }
    EXPECT_NEAR(auc(s, y), wins / pairs, 1e-12);
  }
}

TEST(Regression, ErrorMetrics) {
  std::vector<double> y{1, 2, 4};
  EXPECT_EQ(mean_absolute_error(y, y), 0.0);
  EXPECT_EQ(mean_relative_error(y, y), 0.0);
  std::vector<double> p{2, 2, 2};
  EXPECT_DOUBLE_EQ(mean_absolute_error(p, y), 1.0);
  EXPECT_DOUBLE_EQ(mean_relative_error(p, y), (1.0 + 0 + 0.5) / 3);
  EXPECT_THROW(mean_relative_error(p, std::vector<double>{0, 1, 1}), Error);
}

TEST(Report, SummaryMatchesValues) {
  EvalReport r;
  r.metric("auc").values = {0.5, 0.7, 0.9};
  EXPECT_NEAR(r.at("auc").mean(), 0.7, 1e-15);
  EXPECT_NEAR(r.at("auc").stddev(), std::sqrt(0.08 / 3), 1e-15);
  std::ostringstream os;
  r.write_summary(os);
  EXPECT_EQ(os.str(), "metric=auc mean=0.7 std=0.163299 n=3\n");
  std::ostringstream csv;
  r.write_csv(csv);
  EXPECT_EQ(csv.str(), "split,auc\n0,0.5\n1,0.7\n2,0.9\n");
  EXPECT_THROW(r.at("f1"), Error);
}

TEST(Splits, DeterministicPartitions) {
  SplitSpec spec{0.9, 10, 17};
  for (std::size_t r = 0; r < 10; ++r) {
    auto a = random_split(100, spec, r), b = random_split(100, spec, r);
    EXPECT_EQ(a.train, b.train);
    EXPECT_EQ(a.train.size(), 90u);
    std::set<std::size_t> all(a.train.begin(), a.train.end());
    all.insert(a.test.begin(), a.test.end());
    EXPECT_EQ(all.size(), 100u);
  }
  EXPECT_NE(random_split(100, spec, 0).train, random_split(100, spec, 1).train);
  EXPECT_THROW(random_split(100, SplitSpec{1.0, 1, 1}, 0), ConfigError);
}

TEST(NodeClassification, SeparableEmbeddingsScoreHigh) {
  const int n = 300, classes = 3;
  LabelTable labels;
  labels.class_names = {"a", "b", "c"};
  labels.classes.resize(n + 5);  // trailing unlabeled nodes
  DenseMatrix emb = DenseMatrix::Zero(n + 5, 4);
  std::mt19937_64 rng(1);
  std::normal_distribution<double> nd(0, 0.2);
  for (int i = 0; i < n; ++i) {
    labels.classes[i] = {i % classes};
    emb(i, i % classes) = 1;
    for (int j = 0; j < 4; ++j) emb(i, j) += nd(rng);
  }
  auto rep = node_classification_eval(emb, labels, SplitSpec{0.5, 3, 2});
  EXPECT_GT(rep.at("macro_f1").mean(), 0.95);
  EXPECT_EQ(rep.at("micro_f1").values.size(), 3u);
  auto again = node_classification_eval(emb, labels, SplitSpec{0.5, 3, 2});
  EXPECT_EQ(again.at("macro_f1").values, rep.at("macro_f1").values);
  EXPECT_THROW(node_classification_eval(emb.topRows(100), labels, SplitSpec{}), Error);
}

TEST(LinkPrediction, DatasetIsDisjointAndBalanced) {
  auto g = oracle::random_connected_graph(120, 300, 6);
  auto ds = make_lp_dataset(g, 0.5, 3);
  const auto target = static_cast<std::size_t>(std::llround(0.5 * g.num_edges()));
  EXPECT_EQ(ds.positives.size(), target);
  EXPECT_EQ(ds.negatives.size(), target);
  EXPECT_EQ(ds.residual.num_nodes(), g.num_nodes());
  EXPECT_EQ(ds.residual.num_edges() + ds.positives.size(), g.num_edges());
  std::set<Edge> pos(ds.positives.begin(), ds.positives.end()), neg(ds.negatives.begin(), ds.negatives.end());
  EXPECT_EQ(pos.size(), ds.positives.size());
  EXPECT_EQ(neg.size(), ds.negatives.size());
  for (const auto& [u, v] : ds.negatives) {
    EXPECT_FALSE(g.has_edge(u, v));
    EXPECT_NE(u, v);
  }
  for (const auto& [u, v] : ds.positives) {
    EXPECT_TRUE(g.has_edge(u, v));
    EXPECT_FALSE(ds.residual.has_edge(u, v));
  }
  for (const auto& e : ds.residual.edges()) {
    EXPECT_FALSE(pos.count(e));
    EXPECT_FALSE(neg.count(e));
  }
  for (NodeId u = 0; u < g.num_nodes(); ++u) EXPECT_GT(ds.residual.degree(u), 0u);
  EXPECT_EQ(ds.residual.names(), g.names());
}

TEST(LinkPrediction, SmallFractionAndErrors) {
  auto g = oracle::random_connected_graph(100, 200, 2);
  auto ds = make_lp_dataset(g, 0.01, 1);
  EXPECT_EQ(ds.positives.size(), 3u);
  EXPECT_EQ(ds.residual.num_edges(), g.num_edges() - 3);
  std::vector<Edge> k5;
  for (NodeId a = 0; a < 5; ++a)
    for (NodeId b = a + 1; b < 5; ++b) k5.emplace_back(a, b);
  auto complete = Graph::from_edges({"a", "b", "c", "d", "e"}, k5);
  EXPECT_THROW(make_lp_dataset(complete, 0.5, 1), Error);
  EXPECT_THROW(make_lp_dataset(g, 1.0, 1), ConfigError);
}

TEST(LinkPrediction, RandomEmbeddingsGiveChanceAuc) {
  auto g = oracle::random_connected_graph(600, 2400, 4);
  auto ds = make_lp_dataset(g, 0.5, 1);
  auto emb = init_model<double>(g.num_nodes(), 16, 5).phi_matrix();
  auto rep = link_prediction_eval(emb, ds, EdgeOperator::kHadamard, SplitSpec{0.5, 5, 1});
  EXPECT_NEAR(rep.at("auc").mean(), 0.5, 0.03);
}

TEST(ShortestPath, PathGraphAllPairs) {
  const NodeId n = 12;
  std::vector<std::string> names;
  std::vector<Edge> edges;
  for (NodeId i = 0; i < n; ++i) names.push_back(std::to_string(i));
  for (NodeId i = 0; i + 1 < n; ++i) edges.emplace_back(i, i + 1);
  auto g = Graph::from_edges(names, edges);
  auto ds = make_sp_dataset(g, n * (n - 1) / 2, n, 1);
  EXPECT_EQ(ds.pairs.size(), n * (n - 1) / 2);
  for (std::uint32_t d = 1; d < n; ++d) EXPECT_EQ(ds.per_distance[d], n - d) << d;
  for (const auto& p : ds.pairs) EXPECT_EQ(p.hops, p.v - p.u);
}

TEST(ShortestPath, DistancesMatchBidirectionalOracle) {
  auto g = oracle::random_connected_graph(300, 150, 9);
  auto ds = make_sp_dataset(g, 3000, 6, 4);
  EXPECT_EQ(ds.pairs.size(), 3000u);
  std::set<std::pair<NodeId, NodeId>> seen;
  std::set<NodeId> sources;
  for (const auto& p : ds.pairs) {
    EXPECT_LT(p.u, p.v);
    EXPECT_TRUE(seen.emplace(p.u, p.v).second);
    EXPECT_GE(p.hops, 1u);
    EXPECT_LE(p.hops, 6u);
    EXPECT_EQ(p.hops, oracle::bidirectional_distance(g, p.u, p.v));
    sources.insert(p.u);
  }
  EXPECT_GT(sources.size(), 100u);  // pairs are spread over many nodes
}

TEST(ShortestPath, OneHopIsTheEdgeSet) {
  auto g = oracle::random_connected_graph(50, 40, 1);
  auto ds = make_sp_dataset(g, 100000, 1, 1);
  std::set<Edge> got;
  for (const auto& p : ds.pairs) got.emplace(p.u, p.v);
  auto e = g.edges();
  EXPECT_EQ(got, std::set<Edge>(e.begin(), e.end()));
}

TEST(ShortestPath, PerDistanceCap) {
  auto g = oracle::random_connected_graph(200, 100, 3);
  auto ds = make_sp_dataset(g, 100000, 6, 2, 50);
  for (std::size_t d = 1; d <= 6; ++d) EXPECT_LE(ds.per_distance[d], 50u);
  EXPECT_EQ(ds.per_distance[1], 50u);
  for (const auto& p : ds.pairs) EXPECT_EQ(p.hops, oracle::bidirectional_distance(g, p.u, p.v));
}

TEST(ShortestPath, BaselinesAndEqualDistances) {
  auto g = oracle::random_connected_graph(200, 200, 5);
  auto ones = make_sp_dataset(g, 300, 1, 1);
  auto emb = init_model<double>(g.num_nodes(), 8, 1).phi_matrix();
  auto rep = shortest_path_eval(emb, ones, EdgeOperator::kL1, SplitSpec{0.5, 2, 1});
  EXPECT_EQ(rep.at("trivial_mae").mean(), 0.0);
  EXPECT_EQ(rep.at("trivial_mre").mean(), 0.0);
  auto ds = make_sp_dataset(g, 4000, 8, 2);
  rep = shortest_path_eval(emb, ds, EdgeOperator::kL1, SplitSpec{0.5, 2, 1});
  for (auto name : {"mae", "mre", "trivial_mae", "trivial_mre", "random_mae", "random_mre"})
    EXPECT_EQ(rep.at(name).values.size(), 2u) << name;
  EXPECT_GT(rep.at("trivial_mae").mean(), 0.0);
}

TEST(ShortestPath, LinearFitRecoversExactTarget) {
  DenseMatrix x(50, 2);
  Eigen::VectorXd y(50);
  for (int i = 0; i < 50; ++i) {
    x(i, 0) = i;
    x(i, 1) = (i * 7) % 11;
    y(i) = 2 * x(i, 0) - 3 * x(i, 1) + 5;
  }
  auto lm = fit_linear(x, y);
  EXPECT_NEAR(lm.intercept, 5, 1e-9);
  EXPECT_NEAR((lm.predict(x) - y).cwiseAbs().maxCoeff(), 0.0, 1e-9);
}

}  // namespace
}  // namespace halk
