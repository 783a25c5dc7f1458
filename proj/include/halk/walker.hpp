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
#include <cstdint>
#include <istream>
#include <numeric>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include "halk/alias.hpp"
#include "halk/common.hpp"
#include "halk/graph.hpp"

namespace halk {

struct WalkConfig {
  std::size_t walks_per_node = 80;
  std::size_t walk_length = 40;
  double p = 1.0;  // return parameter
  double q = 1.0;  // in-out parameter
  std::uint64_t seed = 1;
  unsigned threads = 1;
  // Largest number of per-arc alias entries (sum of deg(v)^2) we precompute
  // for biased walks; beyond it steps use exact rejection sampling.
  std::size_t alias_budget = std::size_t{1} << 26;

  void validate() const {
    if (walks_per_node < 1) throw ConfigError("walks must be >= 1");
    if (walk_length < 1) throw ConfigError("length must be >= 1");
    if (!(p > 0)) throw ConfigError("p must be > 0");
    if (!(q > 0)) throw ConfigError("q must be > 0");
    if (threads < 1) throw ConfigError("threads must be >= 1");
  }
  bool biased() const { return p != 1.0 || q != 1.0; }
};

struct CorpusOrigin {
  enum class Kind { kUniform, kBiased, kSkipped, kPruned };
  Kind kind = Kind::kUniform;
  double param = 0;

  std::string str() const {
    switch (kind) {
      case Kind::kUniform: return "uniform";
      case Kind::kBiased: return "biased";
      case Kind::kSkipped: return "skipped(" + std::to_string(static_cast<long>(param)) + ")";
      case Kind::kPruned: return "pruned(" + std::to_string(param) + ")";
    }
    return "?";
  }
  friend bool operator==(const CorpusOrigin&, const CorpusOrigin&) = default;
};

/// Walks stored back to back in one token buffer.
class WalkCorpus {
 public:
  WalkCorpus() : offsets_(1, 0) {}

  std::size_t size() const { return offsets_.size() - 1; }
  bool empty() const { return size() == 0; }
  std::size_t total_tokens() const { return tokens_.size(); }

  std::span<const NodeId> walk(std::size_t i) const {
    return {tokens_.data() + offsets_[i], offsets_[i + 1] - offsets_[i]};
  }

  void add_walk(std::span<const NodeId> w) {
    if (w.empty()) throw Error("walks must be non-empty");
    tokens_.insert(tokens_.end(), w.begin(), w.end());
    offsets_.push_back(tokens_.size());
  }

  void reserve(std::size_t walks, std::size_t tokens) {
    offsets_.reserve(walks + 1);
    tokens_.reserve(tokens);
  }

  /// Walks of identical length, filled in place by the sampler.
  static WalkCorpus fixed_length(std::size_t walks, std::size_t length) {
    WalkCorpus c;
    c.tokens_.assign(walks * length, 0);
    c.offsets_.resize(walks + 1);
    for (std::size_t i = 0; i <= walks; ++i) c.offsets_[i] = i * length;
    return c;
  }
  std::span<NodeId> mutable_walk(std::size_t i) {
    return {tokens_.data() + offsets_[i], offsets_[i + 1] - offsets_[i]};
  }

  const std::vector<NodeId>& tokens() const { return tokens_; }

  CorpusOrigin origin;

  friend bool operator==(const WalkCorpus& a, const WalkCorpus& b) {
    return a.tokens_ == b.tokens_ && a.offsets_ == b.offsets_ && a.origin == b.origin;
  }

 private:
  std::vector<NodeId> tokens_;
  std::vector<std::size_t> offsets_;
};

/// Second-order transition probabilities out of `cur` given the walk arrived
/// from `prev`, aligned with g.neighbors(cur). Unnormalized weights are 1/p
/// for returning to prev, 1 for neighbors adjacent to prev and 1/q otherwise.
inline std::vector<double> biased_step(const Graph& g, NodeId prev, NodeId cur,
                                       double p, double q) {
  if (prev >= g.num_nodes() || cur >= g.num_nodes() || !g.has_edge(prev, cur))
    throw Error("biased_step: (prev, cur) is not an edge");
  auto nb = g.neighbors(cur);
  if (nb.empty()) throw Error("biased_step: node has no neighbors");
  std::vector<double> w(nb.size());
  double sum = 0;
  for (std::size_t i = 0; i < nb.size(); ++i) {
    NodeId x = nb[i];
    w[i] = x == prev ? 1.0 / p : (g.has_edge(prev, x) ? 1.0 : 1.0 / q);
    sum += w[i];
  }
  for (auto& x : w) x /= sum;
  return w;
}

namespace detail {

// Draws successive steps of a p/q-biased walk. The walk state is the arc
// index (prev -> cur) so alias lookups need no search.
class SecondOrderSampler {
 public:
  SecondOrderSampler(const Graph& g, double p, double q, std::size_t budget)
      : g_(g), p_(p), q_(q), wmax_(std::max({1.0 / p, 1.0, 1.0 / q})) {
    std::size_t entries = 0;
    for (NodeId u = 0; u < g.num_nodes(); ++u)
      for (NodeId v : g.neighbors(u)) entries += g.degree(v);
    if (entries > budget) return;  // rejection mode
    table_offset_.resize(g.num_arcs() + 1, 0);
    prob_.resize(entries);
    alias_.resize(entries);
    std::size_t pos = 0;
    for (NodeId u = 0; u < g.num_nodes(); ++u) {
      auto nb = g.neighbors(u);
      for (std::size_t i = 0; i < nb.size(); ++i) {
        const std::size_t arc = g.arc_offset(u) + i;
        table_offset_[arc] = pos;
        auto probs = biased_step(g, u, nb[i], p, q);
        build_alias(probs, std::span(prob_).subspan(pos, probs.size()),
                    std::span(alias_).subspan(pos, probs.size()));
        pos += probs.size();
      }
    }
    table_offset_[g.num_arcs()] = pos;
    use_alias_ = true;
  }

  /// Returns the rank of the next node within neighbors(cur).
  std::size_t next(NodeId prev, NodeId cur, std::size_t arc, Rng& rng) const {
    const std::size_t deg = g_.degree(cur);
    if (use_alias_) {
      const std::size_t off = table_offset_[arc];
      return sample_alias(std::span<const float>(prob_).subspan(off, deg),
                          std::span<const std::uint32_t>(alias_).subspan(off, deg), rng);
    }
    auto nb = g_.neighbors(cur);
    for (;;) {
      std::size_t i = uniform_index(rng, deg);
      NodeId x = nb[i];
      double w = x == prev ? 1.0 / p_ : (g_.has_edge(prev, x) ? 1.0 : 1.0 / q_);
      if (uniform01(rng) * wmax_ < w) return i;
    }
  }

  bool uses_alias() const { return use_alias_; }

 private:
  const Graph& g_;
  double p_, q_, wmax_;
  bool use_alias_ = false;
  std::vector<std::size_t> table_offset_;
  std::vector<float> prob_;
  std::vector<std::uint32_t> alias_;
};

template <class Fn>
void parallel_for(std::size_t n, unsigned threads, Fn&& fn) {
  if (threads <= 1 || n < 2) {
    fn(std::size_t{0}, n, 0u);
    return;
  }
  std::vector<std::thread> pool;
  const std::size_t chunk = (n + threads - 1) / threads;
  for (unsigned t = 0; t < threads; ++t) {
    std::size_t lo = t * chunk, hi = std::min(n, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([&fn, lo, hi, t] { fn(lo, hi, t); });
  }
  for (auto& th : pool) th.join();
}

}  // namespace detail

/// Samples walks_per_node passes over all nodes; each pass visits the nodes
/// in a freshly shuffled order. Every walk has its own RNG stream derived
/// from (seed, pass, start node), so the corpus does not depend on the
/// thread count.
inline WalkCorpus sample_walks(const Graph& g, const WalkConfig& cfg) {
  cfg.validate();
  const std::size_t n = g.num_nodes();
  if (n == 0) throw Error("cannot sample walks from an empty graph");
  for (NodeId u = 0; u < n; ++u)
    if (g.degree(u) == 0)
      throw Error("node '" + g.name(u) + "' is isolated; preprocess the graph first");

  const bool biased = cfg.biased();
  std::optional<detail::SecondOrderSampler> second;
  if (biased) second.emplace(g, cfg.p, cfg.q, cfg.alias_budget);

  const std::size_t t = cfg.walk_length;
  WalkCorpus corpus = WalkCorpus::fixed_length(cfg.walks_per_node * n, t);
  corpus.origin.kind = biased ? CorpusOrigin::Kind::kBiased : CorpusOrigin::Kind::kUniform;

  std::vector<NodeId> order(n);
  for (std::size_t pass = 0; pass < cfg.walks_per_node; ++pass) {
    std::iota(order.begin(), order.end(), NodeId{0});
    Rng shuffle_rng(derive_seed(derive_seed(cfg.seed, 0x5EEDULL), pass));
    std::shuffle(order.begin(), order.end(), shuffle_rng);
    detail::parallel_for(n, cfg.threads, [&](std::size_t lo, std::size_t hi, unsigned) {
      for (std::size_t j = lo; j < hi; ++j) {
        const NodeId start = order[j];
        Rng rng(derive_seed(cfg.seed, pass, start));
        auto w = corpus.mutable_walk(pass * n + j);
        w[0] = start;
        if (t == 1) continue;
        auto nb = g.neighbors(start);
        std::size_t rank = uniform_index(rng, nb.size());
        w[1] = nb[rank];
        std::size_t arc = g.arc_offset(start) + rank;
        for (std::size_t s = 2; s < t; ++s) {
          const NodeId prev = w[s - 2], cur = w[s - 1];
          auto cn = g.neighbors(cur);
          rank = biased ? second->next(prev, cur, arc, rng) : uniform_index(rng, cn.size());
          w[s] = cn[rank];
          arc = g.arc_offset(cur) + rank;
        }
      }
    });
  }
  return corpus;
}

/// Occurrence counts indexed by node id (zero for nodes absent from the
/// corpus).
struct VocabStats {
  std::vector<std::uint64_t> counts;
  std::uint64_t total = 0;

  bool present(NodeId u) const { return u < counts.size() && counts[u] > 0; }
  std::size_t vocab_size() const {
    return static_cast<std::size_t>(
        std::count_if(counts.begin(), counts.end(), [](auto c) { return c > 0; }));
  }
  std::vector<NodeId> vocabulary() const {
    std::vector<NodeId> v;
    for (NodeId u = 0; u < counts.size(); ++u)
      if (counts[u] > 0) v.push_back(u);
    return v;
  }
};

/// `num_nodes` sizes the count table; 0 means max id + 1.
inline VocabStats vocab_stats(const WalkCorpus& c, std::size_t num_nodes = 0) {
  if (c.total_tokens() == 0) throw Error("vocab_stats: empty corpus");
  if (num_nodes == 0)
    num_nodes = static_cast<std::size_t>(*std::max_element(c.tokens().begin(), c.tokens().end())) + 1;
  VocabStats s;
  s.counts.assign(num_nodes, 0);
  for (NodeId u : c.tokens()) {
    if (u >= num_nodes) throw Error("vocab_stats: token id out of range");
    ++s.counts[u];
  }
  s.total = c.total_tokens();
  return s;
}

/// Keep-set of the ceil(fraction * |vocab|) most frequent nodes; equal counts
/// rank the lower id first.
inline std::vector<bool> top_fraction(const VocabStats& stats, double retain_fraction) {
  if (!(retain_fraction > 0 && retain_fraction <= 1))
    throw ConfigError("retain fraction must be in (0, 1]");
  auto vocab = stats.vocabulary();
  // The epsilon keeps products like 0.1 * 30 from rounding up to 4.
  auto k = static_cast<std::size_t>(
      std::ceil(retain_fraction * static_cast<double>(vocab.size()) - 1e-9));
  k = std::min(k, vocab.size());
  std::stable_sort(vocab.begin(), vocab.end(), [&](NodeId a, NodeId b) {
    return stats.counts[a] > stats.counts[b];
  });
  std::vector<bool> keep(stats.counts.size(), false);
  for (std::size_t i = 0; i < k; ++i) keep[vocab[i]] = true;
  return keep;
}

/// Deletes every occurrence of nodes outside the top retain_fraction of the
/// vocabulary. Survivors keep their order; walks left empty are dropped.
inline WalkCorpus prune_walks(const WalkCorpus& c, const VocabStats& stats,
                              double retain_fraction) {
  auto keep = top_fraction(stats, retain_fraction);
  WalkCorpus out;
  out.reserve(c.size(), c.total_tokens());
  std::vector<NodeId> buf;
  for (std::size_t i = 0; i < c.size(); ++i) {
    buf.clear();
    for (NodeId u : c.walk(i))
      if (u < keep.size() && keep[u]) buf.push_back(u);
    if (!buf.empty()) out.add_walk(buf);
  }
  out.origin = {CorpusOrigin::Kind::kPruned, retain_fraction};
  return out;
}

/// For every walk and offset o in [0, k], emits the elements at positions
/// o, o + (k+1), o + 2(k+1), ... ; k = 0 is the identity.
inline WalkCorpus skip_transform(const WalkCorpus& c, std::size_t k) {
  if (k == 0) return c;
  WalkCorpus out;
  out.reserve(c.size() * (k + 1), c.total_tokens());
  std::vector<NodeId> buf;
  for (std::size_t i = 0; i < c.size(); ++i) {
    auto w = c.walk(i);
    for (std::size_t o = 0; o <= k && o < w.size(); ++o) {
      buf.clear();
      for (std::size_t j = o; j < w.size(); j += k + 1) buf.push_back(w[j]);
      out.add_walk(buf);
    }
  }
  out.origin = {CorpusOrigin::Kind::kSkipped, static_cast<double>(k)};
  return out;
}

/// One walk per line, space-separated external names.
inline void write_corpus(std::ostream& out, const WalkCorpus& c, const Graph& g) {
  for (std::size_t i = 0; i < c.size(); ++i) {
    auto w = c.walk(i);
    for (std::size_t j = 0; j < w.size(); ++j) {
      if (j) out << ' ';
      out << g.name(w[j]);
    }
    out << '\n';
  }
}

inline WalkCorpus read_corpus(std::istream& in, const Graph& g) {
  WalkCorpus c;
  std::string line;
  std::size_t lineno = 0;
  std::vector<NodeId> buf;
  while (std::getline(in, line)) {
    ++lineno;
    auto tok = detail::split_ws(line);
    if (tok.empty()) continue;
    buf.clear();
    for (const auto& s : tok) {
      auto id = g.find(s);
      if (!id) throw ParseError("unknown node '" + s + "' in corpus", lineno);
      buf.push_back(*id);
    }
    c.add_walk(buf);
  }
  return c;
}

}  // namespace halk
