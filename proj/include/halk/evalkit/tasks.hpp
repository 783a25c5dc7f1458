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

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <unordered_set>
#include <vector>

#include <Eigen/Dense>

#include "halk/common.hpp"
#include "halk/dimred.hpp"
#include "halk/edgeops.hpp"
#include "halk/evalkit/logreg.hpp"
#include "halk/evalkit/metrics.hpp"
#include "halk/evalkit/report.hpp"
#include "halk/graph.hpp"
#include "halk/sgns.hpp"

namespace halk {

struct SplitSpec {
  double train_fraction = 0.5;
  std::size_t num_repeats = 10;
  std::uint64_t seed = 1;

  void validate() const {
    if (!(train_fraction > 0 && train_fraction < 1))
      throw ConfigError("train_fraction must be in (0, 1)");
    if (num_repeats < 1) throw ConfigError("num_repeats must be >= 1");
  }
};

struct Split {
  std::vector<std::size_t> train, test;
};

/// Uniform random train/test partition of [0, n) for repeat `r`; the train
/// side has round(train_fraction * n) items, clamped to [1, n - 1].
inline Split random_split(std::size_t n, const SplitSpec& spec, std::size_t r) {
  spec.validate();
  if (n < 2) throw Error("cannot split fewer than two samples");
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  Rng rng(derive_seed(spec.seed, 0x5B117, r));
  std::shuffle(perm.begin(), perm.end(), rng);
  auto k = static_cast<std::size_t>(std::llround(spec.train_fraction * static_cast<double>(n)));
  k = std::clamp<std::size_t>(k, 1, n - 1);
  Split s;
  s.train.assign(perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(k));
  s.test.assign(perm.begin() + static_cast<std::ptrdiff_t>(k), perm.end());
  return s;
}

namespace detail {

inline DenseMatrix take_rows(const DenseMatrix& x, std::span<const std::size_t> rows) {
  DenseMatrix out(static_cast<Eigen::Index>(rows.size()), x.cols());
  for (std::size_t i = 0; i < rows.size(); ++i)
    out.row(static_cast<Eigen::Index>(i)) = x.row(static_cast<Eigen::Index>(rows[i]));
  return out;
}

inline std::string fmt(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Node classification

/// One-vs-rest logistic regression on the labeled nodes. Each test node is
/// assigned as many classes as it truly has, taken from the top scores.
/// Reports macro_f1 and micro_f1 per split.
inline EvalReport node_classification_eval(const DenseMatrix& emb, const LabelTable& labels,
                                           const SplitSpec& spec,
                                           const LogRegOptions& opt = {}) {
  spec.validate();
  const auto nodes = labels.labeled_nodes();
  if (nodes.size() < 2) throw Error("node classification needs at least two labeled nodes");
  for (NodeId u : nodes)
    if (u >= static_cast<std::size_t>(emb.rows()))
      throw Error("labeled node without an embedding row");
  std::vector<std::size_t> rows(nodes.begin(), nodes.end());
  const DenseMatrix x = detail::take_rows(emb, rows);

  EvalReport rep;
  rep.add_meta("task", "node-classification");
  rep.add_meta("labeled_nodes", std::to_string(nodes.size()));
  rep.add_meta("classes", std::to_string(labels.num_classes()));
  rep.add_meta("train_fraction", detail::fmt(spec.train_fraction));
  for (std::size_t r = 0; r < spec.num_repeats; ++r) {
    const Split s = random_split(nodes.size(), spec, r);
    std::vector<std::vector<int>> ytr, yte;
    for (auto i : s.train) ytr.push_back(labels.classes[nodes[i]]);
    for (auto i : s.test) yte.push_back(labels.classes[nodes[i]]);
    const auto clf = train_logreg_ovr(detail::take_rows(x, s.train), ytr, labels.num_classes(), opt);
    const DenseMatrix scores = clf.scores(detail::take_rows(x, s.test));
    std::vector<std::size_t> k;
    for (const auto& t : yte) k.push_back(t.size());
    const auto pred = predict_top_k(scores, k);
    rep.metric("macro_f1").values.push_back(macro_f1(pred, yte, labels.num_classes()));
    rep.metric("micro_f1").values.push_back(micro_f1(pred, yte, labels.num_classes()));
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Link prediction

struct LinkPredDataset {
  Graph residual;             // same node ids as the source graph
  std::vector<Edge> positives;  // removed edges
  std::vector<Edge> negatives;  // node pairs that are not edges of the source graph
};

/// Removes round(removal_fraction * |E|) edges chosen uniformly at random,
/// skipping any removal that would leave an endpoint with no remaining edge,
/// and draws as many non-adjacent pairs uniformly without replacement.
inline LinkPredDataset make_lp_dataset(const Graph& g, double removal_fraction,
                                       std::uint64_t seed) {
  if (!(removal_fraction > 0 && removal_fraction < 1))
    throw ConfigError("removal_fraction must be in (0, 1)");
  const std::size_t n = g.num_nodes();
  auto edges = g.edges();
  std::erase_if(edges, [](const Edge& e) { return e.first == e.second; });
  const auto target =
      static_cast<std::size_t>(std::llround(removal_fraction * static_cast<double>(edges.size())));
  if (target == 0) throw Error("link prediction: graph too small to remove any edge");
  const double pairs = static_cast<double>(n) * static_cast<double>(n - 1) / 2;
  if (pairs - static_cast<double>(edges.size()) < static_cast<double>(target))
    throw Error("link prediction: graph too dense to draw enough non-edges");

  Rng rng(derive_seed(seed, 0x11E));
  std::shuffle(edges.begin(), edges.end(), rng);
  std::vector<std::size_t> deg(n);
  for (const auto& [u, v] : edges) ++deg[u], ++deg[v];
  LinkPredDataset ds;
  std::vector<Edge> kept;
  for (const auto& e : edges) {
    if (ds.positives.size() < target && deg[e.first] > 1 && deg[e.second] > 1) {
      --deg[e.first];
      --deg[e.second];
      ds.positives.push_back(e);
    } else {
      kept.push_back(e);
    }
  }
  if (ds.positives.size() < target)
    throw Error("link prediction: only " + std::to_string(ds.positives.size()) + " of " +
                std::to_string(target) + " edges removable without isolating a node");

  std::unordered_set<std::uint64_t> chosen;
  const auto key = [](NodeId a, NodeId b) { return (std::uint64_t{a} << 32) | b; };
  while (ds.negatives.size() < target) {
    auto u = static_cast<NodeId>(uniform_index(rng, n));
    auto v = static_cast<NodeId>(uniform_index(rng, n));
    if (u == v) continue;
    if (u > v) std::swap(u, v);
    if (g.has_edge(u, v) || !chosen.insert(key(u, v)).second) continue;
    ds.negatives.emplace_back(u, v);
  }
  ds.residual = Graph::from_edges(g.names(), kept);
  return ds;
}

/// Logistic regression on edge features of positives and negatives with a
/// split stratified by class; reports the test AUC per split.
inline EvalReport link_prediction_eval(const DenseMatrix& emb, const LinkPredDataset& ds,
                                       EdgeOperator op, const SplitSpec& spec,
                                       const LogRegOptions& opt = {}) {
  spec.validate();
  if (ds.positives.empty() || ds.negatives.empty()) throw Error("link prediction: empty dataset");
  const DenseMatrix xp = edge_features(op, emb, ds.positives);
  const DenseMatrix xn = edge_features(op, emb, ds.negatives);

  EvalReport rep;
  rep.add_meta("task", "link-prediction");
  rep.add_meta("operator", std::string(to_string(op)));
  rep.add_meta("positives", std::to_string(ds.positives.size()));
  rep.add_meta("negatives", std::to_string(ds.negatives.size()));
  rep.add_meta("train_fraction", detail::fmt(spec.train_fraction));
  for (std::size_t r = 0; r < spec.num_repeats; ++r) {
    SplitSpec sp = spec;
    const Split s_pos = random_split(ds.positives.size(), spec, r);
    sp.seed = derive_seed(spec.seed, 0xA11);
    const Split s_neg = random_split(ds.negatives.size(), sp, r);

    const auto ntr = static_cast<Eigen::Index>(s_pos.train.size() + s_neg.train.size());
    const auto nte = static_cast<Eigen::Index>(s_pos.test.size() + s_neg.test.size());
    DenseMatrix xtr(ntr, xp.cols()), xte(nte, xp.cols());
    Eigen::VectorXd ytr(ntr);
    std::vector<int> yte;
    Eigen::Index i = 0;
    for (auto k : s_pos.train) xtr.row(i) = xp.row(static_cast<Eigen::Index>(k)), ytr(i++) = 1;
    for (auto k : s_neg.train) xtr.row(i) = xn.row(static_cast<Eigen::Index>(k)), ytr(i++) = 0;
    i = 0;
    for (auto k : s_pos.test) xte.row(i++) = xp.row(static_cast<Eigen::Index>(k)), yte.push_back(1);
    for (auto k : s_neg.test) xte.row(i++) = xn.row(static_cast<Eigen::Index>(k)), yte.push_back(0);

    const auto model = fit_logreg(xtr, ytr, opt);
    const Eigen::VectorXd z = model.decision(xte);
    rep.metric("auc").values.push_back(auc(std::span<const double>(z.data(), static_cast<std::size_t>(z.size())), yte));
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Shortest-path distance regression

struct DistancePair {
  NodeId u, v;  // u < v
  std::uint32_t hops;
  friend bool operator==(const DistancePair&, const DistancePair&) = default;
};

struct SpDataset {
  std::vector<DistancePair> pairs;
  std::vector<std::size_t> per_distance;  // index = hops
};

/// Distinct unordered node pairs at distance 1..max_hops, found by BFS from
/// sources visited in random order. Each source contributes a random subset
/// of its reachable targets so pairs spread over many sources; a second pass
/// tops up if the first falls short. With `per_distance_cap` > 0 every
/// distance keeps at most that many pairs, reservoir-sampled.
inline SpDataset make_sp_dataset(const Graph& g, std::size_t num_pairs, std::uint32_t max_hops,
                                 std::uint64_t seed, std::size_t per_distance_cap = 0) {
  if (num_pairs < 1) throw ConfigError("num_pairs must be >= 1");
  if (max_hops < 1) throw ConfigError("max_hops must be >= 1");
  const std::size_t n = g.num_nodes();
  if (n < 2) throw Error("shortest-path dataset needs at least two nodes");
  Rng rng(derive_seed(seed, 0x5D));
  std::vector<NodeId> sources(n);
  std::iota(sources.begin(), sources.end(), NodeId{0});
  std::shuffle(sources.begin(), sources.end(), rng);

  std::unordered_set<std::uint64_t> taken;
  const auto key = [](NodeId a, NodeId b) { return (std::uint64_t{a} << 32) | b; };
  std::vector<std::vector<DistancePair>> by_dist(max_hops + 1);
  std::vector<std::size_t> seen(max_hops + 1);
  std::size_t total = 0;

  auto offer = [&](DistancePair p) {
    auto& bucket = by_dist[p.hops];
    if (per_distance_cap == 0 || bucket.size() < per_distance_cap) {
      taken.insert(key(p.u, p.v));
      bucket.push_back(p);
      ++total;
      return;
    }
    // Reservoir over every pair offered at this distance.
    const std::size_t j = uniform_index(rng, seen[p.hops]);
    if (j < per_distance_cap) {
      taken.erase(key(bucket[j].u, bucket[j].v));
      taken.insert(key(p.u, p.v));
      bucket[j] = p;
    }
  };

  const std::size_t quota = (num_pairs + n - 1) / n;
  Bfs bfs(g);
  std::vector<DistancePair> cand;
  const bool capped = per_distance_cap > 0;
  for (int pass = 0; pass < 2 && (capped || total < num_pairs); ++pass) {
    for (NodeId s : sources) {
      if (!capped && total >= num_pairs) break;
      cand.clear();
      for (const auto& r : bfs.run(s, max_hops)) {
        if (r.hops == 0) continue;
        const NodeId a = std::min(s, r.node), b = std::max(s, r.node);
        if (!taken.count(key(a, b))) cand.push_back({a, b, r.hops});
      }
      std::shuffle(cand.begin(), cand.end(), rng);
      std::size_t take = pass == 0 ? std::min(quota, cand.size()) : cand.size();
      if (!capped) take = std::min(take, num_pairs - total);
      for (std::size_t i = 0; i < take; ++i) {
        ++seen[cand[i].hops];
        offer(cand[i]);
      }
    }
    if (capped) break;
  }

  SpDataset ds;
  for (auto& b : by_dist) ds.pairs.insert(ds.pairs.end(), b.begin(), b.end());
  std::shuffle(ds.pairs.begin(), ds.pairs.end(), rng);
  if (ds.pairs.size() > num_pairs) ds.pairs.resize(num_pairs);
  ds.per_distance.assign(max_hops + 1, 0);
  for (const auto& p : ds.pairs) ++ds.per_distance[p.hops];
  return ds;
}

/// Ordinary least squares with an intercept, solved by column-pivoting QR.
struct LinearModel {
  Eigen::VectorXd coef;
  double intercept = 0;

  Eigen::VectorXd predict(const DenseMatrix& x) const {
    return (x * coef).array() + intercept;
  }
};

inline LinearModel fit_linear(const DenseMatrix& x, const Eigen::VectorXd& y) {
  if (x.rows() != y.size() || x.rows() == 0) throw Error("fit_linear: bad input sizes");
  Eigen::MatrixXd a(x.rows(), x.cols() + 1);
  a.leftCols(x.cols()) = x;
  a.col(x.cols()).setOnes();
  const Eigen::VectorXd beta = a.colPivHouseholderQr().solve(y);
  return {beta.head(x.cols()), beta(x.cols())};
}

/// Linear regression from edge features to hop distance. Besides the model's
/// mae/mre, reports the train-mean predictor (trivial_*) and the same
/// regression on random embeddings drawn like an untrained model (random_*).
inline EvalReport shortest_path_eval(const DenseMatrix& emb, const SpDataset& ds,
                                     EdgeOperator op, const SplitSpec& spec) {
  spec.validate();
  if (ds.pairs.size() < 2) throw Error("shortest-path eval needs at least two pairs");
  std::vector<Edge> pairs;
  Eigen::VectorXd y(static_cast<Eigen::Index>(ds.pairs.size()));
  for (std::size_t i = 0; i < ds.pairs.size(); ++i) {
    pairs.emplace_back(ds.pairs[i].u, ds.pairs[i].v);
    y(static_cast<Eigen::Index>(i)) = ds.pairs[i].hops;
  }
  const auto rand_model = init_model<double>(static_cast<std::size_t>(emb.rows()),
                                             static_cast<std::size_t>(emb.cols()),
                                             derive_seed(spec.seed, 0xBA5E));
  const DenseMatrix x = edge_features(op, emb, pairs);
  const DenseMatrix xr = edge_features(op, rand_model.phi_matrix(), pairs);

  EvalReport rep;
  rep.add_meta("task", "shortest-path");
  rep.add_meta("operator", std::string(to_string(op)));
  rep.add_meta("pairs", std::to_string(ds.pairs.size()));
  rep.add_meta("train_fraction", detail::fmt(spec.train_fraction));
  for (std::size_t r = 0; r < spec.num_repeats; ++r) {
    const Split s = random_split(ds.pairs.size(), spec, r);
    Eigen::VectorXd ytr(static_cast<Eigen::Index>(s.train.size()));
    std::vector<double> yte;
    for (std::size_t i = 0; i < s.train.size(); ++i)
      ytr(static_cast<Eigen::Index>(i)) = y(static_cast<Eigen::Index>(s.train[i]));
    for (auto i : s.test) yte.push_back(y(static_cast<Eigen::Index>(i)));

    auto score = [&](const std::string& prefix, const std::vector<double>& pred) {
      rep.metric(prefix + "mae").values.push_back(mean_absolute_error(pred, yte));
      rep.metric(prefix + "mre").values.push_back(mean_relative_error(pred, yte));
    };
    auto regress = [&](const DenseMatrix& feats) {
      const auto lm = fit_linear(detail::take_rows(feats, s.train), ytr);
      const Eigen::VectorXd p = lm.predict(detail::take_rows(feats, s.test));
      return std::vector<double>(p.data(), p.data() + p.size());
    };
    score("", regress(x));
    score("trivial_", std::vector<double>(yte.size(), ytr.mean()));
    score("random_", regress(xr));
  }
  return rep;
}

}  // namespace halk
