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

#include <cmath>
#include <random>
#include <set>
#include <sstream>

#include <gtest/gtest.h>

#include "halk/io.hpp"
#include "halk/sgns.hpp"
#include "oracles.hpp"

namespace halk {
namespace {

WalkCorpus corpus_of(const std::vector<std::vector<NodeId>>& walks) {
  WalkCorpus c;
  for (const auto& w : walks) c.add_walk(w);
  return c;
}

TEST(InitModel, RangeShapeAndDeterminism) {
  auto m = init_model<float>(2708, 128, 5);
  EXPECT_EQ(m.num_nodes(), 2708u);
  EXPECT_EQ(m.dim(), 128u);
  for (float x : m.phi_data()) EXPECT_LE(std::abs(x), 0.5f / 128);
  for (float x : m.phi_prime_data()) EXPECT_EQ(x, 0.0f);
  EXPECT_EQ(m, init_model<float>(2708, 128, 5));
  EXPECT_FALSE(m == init_model<float>(2708, 128, 6));
  EXPECT_THROW(init_model<float>(0, 8, 1), Error);
  EXPECT_THROW(init_model<float>(3, 0, 1), ConfigError);
}

TEST(Sigmoid, Values) {
  EXPECT_DOUBLE_EQ(sigmoid(0), 0.5);
  EXPECT_NEAR(sigmoid(2), 0.880797, 1e-6);
  for (double x : {-20.0, -3.3, -0.1, 0.7, 5.0, 15.9})
    EXPECT_NEAR(sigmoid(x) + sigmoid(-x), 1.0, 1e-15);
  EXPECT_GT(sigmoid(-1e6), 0.0);
  EXPECT_LT(sigmoid(1e6), 1.0);
  EXPECT_NEAR(log_sigmoid(-800), -800, 1e-9);
  EXPECT_NEAR(log_sigmoid(0.3), std::log(1 / (1 + std::exp(-0.3))), 1e-15);
}

double empirical_first(const VocabStats& st, double exponent) {
  NoiseSampler s(st, exponent);
  Rng rng(42);
  std::size_t hits = 0;
  const std::size_t n = 1000000;
  for (std::size_t i = 0; i < n; ++i) hits += s(rng) == 0;
  return static_cast<double>(hits) / n;
}

TEST(Noise, Distribution) {
  VocabStats even{{1, 1}, 2};
  EXPECT_DOUBLE_EQ(NoiseSampler(even, 1).probability(0), 0.5);
  VocabStats skew{{3, 1}, 4};
  EXPECT_DOUBLE_EQ(NoiseSampler(skew, 1).probability(0), 0.75);
  EXPECT_NEAR(empirical_first(skew, 1.0), 0.75, 0.005);
  VocabStats smooth{{8, 1}, 9};
  const double want = std::pow(8, 0.75) / (std::pow(8, 0.75) + 1);
  EXPECT_NEAR(empirical_first(smooth, 0.75), want, 0.005);
  VocabStats gap{{0, 2, 0, 2}, 4};
  NoiseSampler g(gap, 1);
  EXPECT_EQ(g.support(), 2u);
  Rng rng(3);
  for (int i = 0; i < 1000; ++i) {
    const NodeId v = g(rng);
    EXPECT_TRUE(v == 1 || v == 3) << v;
  }
  Rng r2(1);
  EXPECT_EQ(draw_noise(VocabStats{{0, 5}, 5}, 1.0, r2), 1u);
}

TEST(PairUpdate, ZeroRateLeavesModelUnchanged) {
  auto m = init_model<double>(6, 4, 1);
  for (NodeId u = 0; u < 6; ++u)
    for (auto& x : m.phi_prime(u)) x = 0.1 * u - 0.2;
  auto before = m;
  std::vector<NodeId> negs{2, 3, 3};
  pair_update(m, 0, 1, negs, 0.0);
  EXPECT_EQ(m, before);
}

// The update divided by the rate must equal the gradient of the pair
// objective, estimated by central differences over every parameter.
TEST(PairUpdate, GradientMatchesFiniteDifferences) {
  std::mt19937_64 rng(11);
  for (int inst = 0; inst < 100; ++inst) {
    const std::size_t n = 2 + rng() % 9, d = 1 + rng() % 8;
    auto m = init_model<double>(n, d, rng());
    std::normal_distribution<double> nd(0, 0.7);
    for (NodeId u = 0; u < n; ++u) {
      for (auto& x : m.phi(u)) x = nd(rng);
      for (auto& x : m.phi_prime(u)) x = nd(rng);
    }
    const NodeId u = static_cast<NodeId>(rng() % n), pos = static_cast<NodeId>(rng() % n);
    std::vector<NodeId> negs(1 + rng() % 5);
    for (auto& v : negs) v = static_cast<NodeId>(rng() % n);

    const double lr = 1e-3;
    auto updated = m;
    pair_update(updated, u, pos, negs, lr);

    auto f = [&](const EmbeddingModel<double>& x) { return sgns_objective(x, u, pos, negs); };
    double num2 = 0, diff2 = 0;
    const double h = 1e-6;
    for (int which = 0; which < 2; ++which)
      for (NodeId r = 0; r < n; ++r)
        for (std::size_t j = 0; j < d; ++j) {
          auto plus = m, minus = m;
          auto& a = which ? plus.phi_prime(r)[j] : plus.phi(r)[j];
          auto& b = which ? minus.phi_prime(r)[j] : minus.phi(r)[j];
          a += h;
          b -= h;
          const double numeric = (f(plus) - f(minus)) / (2 * h);
          const double analytic = which ? (updated.phi_prime(r)[j] - m.phi_prime(r)[j]) / lr
                                        : (updated.phi(r)[j] - m.phi(r)[j]) / lr;
          num2 += numeric * numeric;
          diff2 += (numeric - analytic) * (numeric - analytic);
        }
    EXPECT_LE(std::sqrt(diff2), 1e-5 * std::max(std::sqrt(num2), 1e-8)) << "instance " << inst;
  }
}

TEST(PairUpdate, NegativeEqualToPositiveIsSkipped) {
  auto m = init_model<double>(4, 3, 2);
  for (NodeId u = 0; u < 4; ++u)
    for (auto& x : m.phi_prime(u)) x = 0.3;
  auto a = m, b = m;
  std::vector<NodeId> with{1, 2}, without{2};
  pair_update(a, 0, 1, with, 0.1);
  pair_update(b, 0, 1, without, 0.1);
  EXPECT_EQ(a, b);
}

TEST(PairUpdate, RepeatedUpdatesRaisePositiveScore) {
  auto m = init_model<double>(2, 8, 3);
  double prev = sigmoid(detail::dot(m.phi_prime(1).data(), m.phi(0).data(), 8));
  for (int i = 0; i < 1000; ++i) {
    pair_update(m, 0, 1, std::span<const NodeId>{}, 0.1);
    const double s = sigmoid(detail::dot(m.phi_prime(1).data(), m.phi(0).data(), 8));
    EXPECT_GE(s, prev);
    prev = s;
  }
  EXPECT_GT(prev, 0.99);
}

TEST(LearningRate, LinearAndBounded) {
  EXPECT_DOUBLE_EQ(linear_rate(0.025, 0.0001, 0), 0.025);
  EXPECT_DOUBLE_EQ(linear_rate(0.025, 0.0001, 1), 0.0001);
  double prev = 1;
  for (int i = 0; i <= 100; ++i) {
    const double r = linear_rate(0.025, 0.0001, i / 100.0);
    EXPECT_LE(r, prev);
    EXPECT_GE(r, 0.0001);
    prev = r;
  }
}

TEST(TrainConfig, Validation) {
  TrainConfig c;
  c.window = 0;
  EXPECT_THROW(c.validate(), ConfigError);
  c = {};
  c.alpha_min = 0.1;
  c.alpha = 0.01;
  EXPECT_THROW(c.validate(), ConfigError);
  c = {};
  c.sample_threshold = -1;
  EXPECT_THROW(c.validate(), ConfigError);
}

TEST(TrainEpoch, PairCountMatchesClosedForm) {
  std::mt19937_64 rng(5);
  WalkCorpus c;
  std::uint64_t expected = 0;
  for (int i = 0; i < 50; ++i) {
    std::vector<NodeId> w(1 + rng() % 30);
    for (auto& x : w) x = static_cast<NodeId>(rng() % 40);
    c.add_walk(w);
    expected += oracle::window_pairs(w.size(), 4);
  }
  TrainConfig cfg;
  cfg.dim = 8;
  cfg.window = 4;
  cfg.window_mode = WindowMode::kFixed;
  cfg.sample_threshold = 0;
  auto m = init_model<float>(40, 8, 1);
  auto st = train_epoch(m, c, vocab_stats(c, 40), cfg, 0, 1);
  EXPECT_EQ(st.pairs, expected);
  EXPECT_EQ(st.tokens, c.total_tokens());
  EXPECT_EQ(st.centers, c.total_tokens());
}

TEST(TrainEpoch, SingleTokenWalksDoNothing) {
  auto c = corpus_of({{0}, {1}, {2}, {1}});
  auto m = init_model<float>(3, 4, 1);
  auto before = m;
  TrainConfig cfg;
  cfg.dim = 4;
  auto s = train(m, c, cfg);
  EXPECT_EQ(m, before);
  for (const auto& e : s.epochs) EXPECT_EQ(e.pairs, 0u);
}

TEST(TrainEpoch, MinCountDropsRareTokens) {
  auto c = corpus_of({{0, 1, 0, 2, 0}});
  TrainConfig cfg;
  cfg.dim = 4;
  cfg.min_count = 2;
  cfg.sample_threshold = 0;
  cfg.window_mode = WindowMode::kFixed;
  cfg.window = 5;
  auto m = init_model<float>(3, 4, 1);
  auto st = train_epoch(m, c, vocab_stats(c, 3), cfg, 0, 1);
  EXPECT_EQ(st.centers, 3u);
  EXPECT_EQ(st.pairs, 6u);
}

Graph small_graph() { return oracle::random_connected_graph(200, 400, 21); }

TEST(Train, RatesDecayAcrossEpochsAndStayFinite) {
  auto g = small_graph();
  WalkConfig wc;
  wc.walks_per_node = 4;
  wc.walk_length = 20;
  auto corpus = sample_walks(g, wc);
  TrainConfig cfg;
  cfg.dim = 16;
  cfg.iterations = 4;
  auto m = init_model<float>(g.num_nodes(), 16, 1);
  auto s = train(m, corpus, cfg);
  ASSERT_EQ(s.epochs.size(), 4u);
  EXPECT_DOUBLE_EQ(s.epochs.front().first_rate, cfg.alpha);
  double prev = cfg.alpha;
  for (const auto& e : s.epochs) {
    EXPECT_LE(e.first_rate, prev);
    EXPECT_LE(e.last_rate, e.first_rate);
    EXPECT_GE(e.last_rate, cfg.alpha_min);
    prev = e.last_rate;
  }
  EXPECT_TRUE(m.all_finite());
}

TEST(Train, ObjectiveImproves) {
  auto g = small_graph();
  WalkConfig wc;
  wc.walks_per_node = 10;
  wc.walk_length = 40;
  auto corpus = sample_walks(g, wc);
  wc.seed = 77;
  auto held_out = sample_walks(g, wc);
  TrainConfig cfg;
  cfg.dim = 32;
  cfg.iterations = 3;
  auto m = init_model<float>(g.num_nodes(), 32, 1);
  const double before = sample_objective(m, held_out, cfg, 5000, 9);
  train(m, corpus, cfg);
  const double after = sample_objective(m, held_out, cfg, 5000, 9);
  EXPECT_GT(after, before + 0.5);
}

TEST(Train, DeterministicModeIsBitReproducible) {
  auto g = small_graph();
  WalkConfig wc;
  wc.walks_per_node = 5;
  wc.walk_length = 20;
  wc.seed = 3;
  TrainConfig cfg;
  cfg.dim = 16;
  cfg.iterations = 2;
  cfg.seed = 3;
  auto run = [&] {
    auto m = init_model<float>(g.num_nodes(), 16, cfg.seed);
    train(m, sample_walks(g, wc), cfg);
    return m;
  };
  EXPECT_EQ(run(), run());
}

TEST(Train, ScaledDownRunIsBitReproducible) {
  // Cora-like settings on a 200-node synthetic graph, both plain and leveled.
  auto g = oracle::random_connected_graph(200, 600, 7);
  WalkConfig wc;
  wc.walks_per_node = 10;
  wc.walk_length = 40;
  wc.seed = 5;
  TrainConfig cfg;
  cfg.dim = 64;
  cfg.window = 10;
  cfg.negatives = 5;
  cfg.sample_threshold = 0.1;
  cfg.iterations = 2;
  cfg.seed = 5;
  auto text = [&](const EmbeddingModel<float>& m) {
    std::ostringstream os;
    write_embeddings(os, g.names(), m.phi_matrix());
    return os.str();
  };
  auto plain = [&] {
    auto m = init_model<float>(g.num_nodes(), cfg.dim, cfg.seed);
    train(m, sample_walks(g, wc), cfg);
    return m;
  };
  const auto a = plain(), b = plain();
  EXPECT_TRUE(a == b);
  EXPECT_EQ(text(a), text(b));
  const auto sched = LevelSchedule::halk_default();
  auto leveled = [&] { return train_halk_on<float>(sample_walks(g, wc), g.num_nodes(), cfg, sched); };
  EXPECT_EQ(text(leveled()), text(leveled()));
}

TEST(Train, HogwildModeStaysFinite) {
  auto g = small_graph();
  WalkConfig wc;
  wc.walks_per_node = 5;
  wc.walk_length = 20;
  TrainConfig cfg;
  cfg.dim = 16;
  cfg.threads = 3;
  cfg.deterministic = false;
  auto m = init_model<float>(g.num_nodes(), 16, 1);
  auto s = train(m, sample_walks(g, wc), cfg);
  EXPECT_TRUE(m.all_finite());
  EXPECT_GT(s.epochs[0].pairs, 0u);
}

TEST(LevelSchedule, ParseAndValidate) {
  auto s = LevelSchedule::parse("0.1:10,0.2:5,0.4:3,1.0:1");
  ASSERT_EQ(s.levels.size(), 4u);
  EXPECT_EQ(s.levels[2].iterations, 3u);
  EXPECT_EQ(LevelSchedule::parse(s.str()).str(), s.str());
  EXPECT_EQ(LevelSchedule::parse("0.5:2:0.05,1:1").levels[0].alpha, 0.05);
  EXPECT_THROW(LevelSchedule::parse("0.1:10,0.5:2"), ConfigError);
  EXPECT_THROW(LevelSchedule::parse("0.4:1,0.2:1,1:1"), ConfigError);
  EXPECT_THROW(LevelSchedule::parse("0.4:0,1:1"), ConfigError);
  EXPECT_THROW(LevelSchedule::parse("x:1"), ConfigError);
  EXPECT_THROW(LevelSchedule::parse(""), ConfigError);
}

TEST(Halk, SingleLevelEqualsPlainTraining) {
  auto g = small_graph();
  WalkConfig wc;
  wc.walks_per_node = 3;
  wc.walk_length = 15;
  auto corpus = sample_walks(g, wc);
  TrainConfig cfg;
  cfg.dim = 8;
  cfg.iterations = 2;
  auto h = train_halk_on<float>(corpus, g.num_nodes(), cfg, LevelSchedule::parse("1.0:2"));
  auto plain = init_model<float>(g.num_nodes(), 8, cfg.seed);
  train(plain, corpus, cfg);
  EXPECT_EQ(h, plain);
}

TEST(Halk, UntouchedRowsAndLevelMonotonicity) {
  auto g = small_graph();
  WalkConfig wc;
  wc.walks_per_node = 4;
  wc.walk_length = 20;
  auto corpus = sample_walks(g, wc);
  TrainConfig cfg;
  cfg.dim = 8;
  const auto init = init_model<float>(g.num_nodes(), 8, cfg.seed);
  std::vector<bool> union_keep(g.num_nodes(), false);
  std::size_t prev_changed = 0;
  std::vector<bool> prev_set(g.num_nodes(), false);
  auto observer = [&](std::size_t level, const std::vector<bool>& keep, const EmbeddingModel<float>& m) {
    std::vector<bool> changed(g.num_nodes(), false);
    for (NodeId u = 0; u < g.num_nodes(); ++u) {
      if (keep[u]) union_keep[u] = true;
      changed[u] = !std::equal(m.phi(u).begin(), m.phi(u).end(), init.phi(u).begin());
      if (level == 0 && !keep[u]) EXPECT_FALSE(changed[u]) << "row " << u;
      if (prev_set[u]) EXPECT_TRUE(changed[u]);
      EXPECT_EQ(changed[u], union_keep[u]) << "level " << level << " row " << u;
    }
    const auto count = static_cast<std::size_t>(std::count(changed.begin(), changed.end(), true));
    EXPECT_GE(count, prev_changed);
    prev_changed = count;
    prev_set = changed;
  };
  train_halk_on<float>(corpus, g.num_nodes(), cfg, LevelSchedule::halk_default(), observer);
  EXPECT_EQ(prev_changed, g.num_nodes());
}

TEST(Halk, RejectsScheduleNotEndingAtOne) {
  auto g = small_graph();
  LevelSchedule s;
  s.levels = {{0.1, 1, 0}, {0.5, 1, 0}};
  EXPECT_THROW(train_halk<float>(g, WalkConfig{}, TrainConfig{}, s), ConfigError);
}

TEST(Walklets, BlocksEqualLevelModels) {
  auto g = small_graph();
  WalkConfig wc;
  wc.walks_per_node = 3;
  wc.walk_length = 11;
  auto corpus = sample_walks(g, wc);
  TrainConfig cfg;
  cfg.dim = 6;
  cfg.iterations = 1;
  auto r = train_walklets_on<float>(corpus, g.num_nodes(), cfg, 2, 18);
  ASSERT_EQ(r.levels.size(), 3u);
  ASSERT_EQ(r.embedding.cols(), 18);
  for (std::size_t l = 0; l < 3; ++l)
    EXPECT_EQ(r.embedding.block(0, l * 6, g.num_nodes(), 6), r.levels[l].phi_matrix());
  EXPECT_EQ(r.zero_filled, 0u);

  auto reduced = train_walklets_on<float>(corpus, g.num_nodes(), cfg, 2, 6);
  EXPECT_EQ(reduced.embedding.cols(), 6);
  EXPECT_EQ(concat_phi(reduced.levels), r.embedding);

  auto single = train_walklets_on<float>(corpus, g.num_nodes(), cfg, 0, 6);
  ASSERT_EQ(single.levels.size(), 1u);
  EXPECT_EQ(single.embedding, single.levels[0].phi_matrix());
  EXPECT_THROW(train_walklets_on<float>(corpus, g.num_nodes(), cfg, 1, 13), ConfigError);
}

TEST(Walklets, MissingSegmentsAreZeroFilled) {
  // Node 3 never occurs, so both of its level segments stay zero.
  auto c = corpus_of({{0, 1, 0, 1, 0, 2}});
  TrainConfig cfg;
  cfg.dim = 2;
  cfg.iterations = 1;
  auto r = train_walklets_on<float>(c, 4, cfg, 1, 4);
  EXPECT_EQ(r.zero_filled, 2u);  // node 3 at both levels
  for (int j = 0; j < 4; ++j) EXPECT_EQ(r.embedding(3, j), 0.0);
}

}  // namespace
}  // namespace halk
