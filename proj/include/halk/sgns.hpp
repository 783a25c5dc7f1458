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

// Skip-gram with negative sampling over walk corpora, plus the two multi-level
// training pipelines built on top of it: frequency-pruned hierarchical levels
// (coarse to fine over one shared model) and skip-level models merged by PCA.

#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <functional>
#include <iostream>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "halk/alias.hpp"
#include "halk/common.hpp"
#include "halk/dimred.hpp"
#include "halk/graph.hpp"
#include "halk/walker.hpp"

#if defined(__GNUC__) || defined(__clang__)
#define HALK_PRAGMA(x) _Pragma(#x)
#define HALK_SIMD HALK_PRAGMA(omp simd)
#define HALK_SIMD_SUM(v) HALK_PRAGMA(omp simd reduction(+ : v))
#else
#define HALK_SIMD
#define HALK_SIMD_SUM(v)
#endif

namespace halk {

/// Input embeddings (phi) and output projections (phi_prime), both
/// num_nodes x dim, row-major.
template <class Real = float>
class EmbeddingModel {
 public:
  using value_type = Real;

  EmbeddingModel() = default;
  EmbeddingModel(std::size_t num_nodes, std::size_t dim)
      : n_(num_nodes), d_(dim), phi_(num_nodes * dim, Real(0)),
        phi_prime_(num_nodes * dim, Real(0)) {}

  std::size_t num_nodes() const { return n_; }
  std::size_t dim() const { return d_; }

  std::span<Real> phi(NodeId u) { return {phi_.data() + u * d_, d_}; }
  std::span<const Real> phi(NodeId u) const { return {phi_.data() + u * d_, d_}; }
  std::span<Real> phi_prime(NodeId u) { return {phi_prime_.data() + u * d_, d_}; }
  std::span<const Real> phi_prime(NodeId u) const {
    return {phi_prime_.data() + u * d_, d_};
  }

  const std::vector<Real>& phi_data() const { return phi_; }
  const std::vector<Real>& phi_prime_data() const { return phi_prime_; }

  bool all_finite() const {
    auto fin = [](Real x) { return std::isfinite(x); };
    return std::all_of(phi_.begin(), phi_.end(), fin) &&
           std::all_of(phi_prime_.begin(), phi_prime_.end(), fin);
  }

  /// phi as a dense double matrix, the form evaluation consumes.
  DenseMatrix phi_matrix() const {
    DenseMatrix m(n_, d_);
    for (std::size_t i = 0; i < n_ * d_; ++i) m.data()[i] = static_cast<double>(phi_[i]);
    return m;
  }

  friend bool operator==(const EmbeddingModel& a, const EmbeddingModel& b) {
    return a.n_ == b.n_ && a.d_ == b.d_ && a.phi_ == b.phi_ && a.phi_prime_ == b.phi_prime_;
  }

 private:
  std::size_t n_ = 0, d_ = 0;
  std::vector<Real> phi_, phi_prime_;
};

/// phi rows uniform in [-0.5/d, 0.5/d], phi_prime zero.
template <class Real = float>
EmbeddingModel<Real> init_model(std::size_t num_nodes, std::size_t dim,
                                std::uint64_t seed) {
  if (num_nodes == 0) throw Error("init_model: empty vocabulary");
  if (dim < 1) throw ConfigError("dim must be >= 1");
  EmbeddingModel<Real> m(num_nodes, dim);
  Rng rng(derive_seed(seed, 0x1A17ULL));
  const double half = 0.5 / static_cast<double>(dim);
  std::uniform_real_distribution<double> dist(-half, half);
  for (NodeId u = 0; u < num_nodes; ++u)
    for (auto& x : m.phi(u)) x = static_cast<Real>(dist(rng));
  return m;
}

inline constexpr double kSigmoidClamp = 16.0;

/// Logistic sigmoid with the argument clamped to +-16.
inline double sigmoid(double x) {
  x = std::clamp(x, -kSigmoidClamp, kSigmoidClamp);
  return 1.0 / (1.0 + std::exp(-x));
}

/// log(sigmoid(x)) without overflow.
inline double log_sigmoid(double x) {
  return x >= 0 ? -std::log1p(std::exp(-x)) : x - std::log1p(std::exp(x));
}

/// Negative-sampling noise distribution: P(v) proportional to count(v)^exponent
/// over nodes present in the corpus.
class NoiseSampler {
 public:
  NoiseSampler(const VocabStats& stats, double exponent) {
    if (stats.total == 0) throw Error("noise distribution needs a non-empty corpus");
    std::vector<double> w;
    double sum = 0;
    prob_.assign(stats.counts.size(), 0.0);
    for (NodeId u = 0; u < stats.counts.size(); ++u) {
      if (!stats.counts[u]) continue;
      nodes_.push_back(u);
      w.push_back(std::pow(static_cast<double>(stats.counts[u]), exponent));
      sum += w.back();
    }
    for (std::size_t i = 0; i < nodes_.size(); ++i) prob_[nodes_[i]] = w[i] / sum;
    table_ = AliasTable(w);
  }

  NodeId operator()(Rng& rng) const { return nodes_[table_(rng)]; }
  double probability(NodeId u) const { return u < prob_.size() ? prob_[u] : 0.0; }
  std::size_t support() const { return nodes_.size(); }

 private:
  std::vector<NodeId> nodes_;
  std::vector<double> prob_;
  AliasTable table_;
};

/// Single draw; builds the table each call, so prefer NoiseSampler in loops.
inline NodeId draw_noise(const VocabStats& stats, double exponent, Rng& rng) {
  return NoiseSampler(stats, exponent)(rng);
}

namespace detail {

template <class Real>
inline Real dot(const Real* a, const Real* b, std::size_t d) {
  Real s = 0;
  HALK_SIMD_SUM(s)
  for (std::size_t i = 0; i < d; ++i) s += a[i] * b[i];
  return s;
}

template <class Real>
inline void axpy(Real alpha, const Real* x, Real* y, std::size_t d) {
  HALK_SIMD
  for (std::size_t i = 0; i < d; ++i) y[i] += alpha * x[i];
}

}  // namespace detail

/// Per-worker buffers for pair_update.
template <class Real>
struct PairScratch {
  std::vector<Real> grad;   // accumulated update for phi(u)
  std::vector<Real> coeff;  // g for the positive and each negative
};

/// Negative-sampling objective of one (center, context) pair:
/// log s(<phi'(v+), phi(u)>) + sum_k log s(-<phi'(v_k), phi(u)>).
template <class Real>
double sgns_objective(const EmbeddingModel<Real>& m, NodeId u, NodeId pos,
                      std::span<const NodeId> negatives) {
  const std::size_t d = m.dim();
  double obj = log_sigmoid(detail::dot(m.phi_prime(pos).data(), m.phi(u).data(), d));
  for (NodeId v : negatives) {
    if (v == pos) continue;
    obj += log_sigmoid(-static_cast<double>(detail::dot(m.phi_prime(v).data(), m.phi(u).data(), d)));
  }
  return obj;
}

/// Full-softmax P(v | u) over every node; a reference scorer, never trained.
template <class Real>
double softmax_probability(const EmbeddingModel<Real>& m, NodeId u, NodeId v) {
  std::vector<double> s(m.num_nodes());
  for (NodeId x = 0; x < m.num_nodes(); ++x)
    s[x] = detail::dot(m.phi_prime(x).data(), m.phi(u).data(), m.dim());
  const double mx = *std::max_element(s.begin(), s.end());
  double z = 0;
  for (double x : s) z += std::exp(x - mx);
  return std::exp(s[v] - mx) / z;
}

namespace detail {

template <bool kTrack, class Real>
double pair_step(EmbeddingModel<Real>& m, NodeId u, NodeId pos,
                 std::span<const NodeId> negatives, Real lr, PairScratch<Real>& scratch) {
  const std::size_t d = m.dim();
  Real* center = m.phi(u).data();
  scratch.grad.assign(d, Real(0));
  scratch.coeff.resize(negatives.size() + 1);

  double obj = 0;
  const Real s_pos = dot(m.phi_prime(pos).data(), center, d);
  if constexpr (kTrack) obj += log_sigmoid(s_pos);
  scratch.coeff[0] = static_cast<Real>(1.0 - sigmoid(s_pos));
  for (std::size_t k = 0; k < negatives.size(); ++k) {
    if (negatives[k] == pos) {
      scratch.coeff[k + 1] = 0;
      continue;
    }
    const Real s = dot(m.phi_prime(negatives[k]).data(), center, d);
    if constexpr (kTrack) obj += log_sigmoid(-static_cast<double>(s));
    scratch.coeff[k + 1] = static_cast<Real>(-sigmoid(s));
  }

  axpy(scratch.coeff[0], m.phi_prime(pos).data(), scratch.grad.data(), d);
  for (std::size_t k = 0; k < negatives.size(); ++k)
    if (negatives[k] != pos)
      axpy(scratch.coeff[k + 1], m.phi_prime(negatives[k]).data(), scratch.grad.data(), d);

  axpy(lr * scratch.coeff[0], center, m.phi_prime(pos).data(), d);
  for (std::size_t k = 0; k < negatives.size(); ++k)
    if (negatives[k] != pos)
      axpy(lr * scratch.coeff[k + 1], center, m.phi_prime(negatives[k]).data(), d);

  axpy(lr, scratch.grad.data(), center, d);
  return obj;
}

}  // namespace detail

/// One gradient-ascent step on the pair objective. All coefficients and the
/// phi(u) update are computed from pre-update rows, so the step is the exact
/// gradient even when a negative repeats. Negatives equal to `pos` are
/// skipped. Returns the objective before the update.
template <class Real>
double pair_update(EmbeddingModel<Real>& m, NodeId u, NodeId pos,
                   std::span<const NodeId> negatives, Real lr,
                   PairScratch<Real>& scratch) {
  return detail::pair_step<true>(m, u, pos, negatives, lr, scratch);
}

template <class Real>
double pair_update(EmbeddingModel<Real>& m, NodeId u, NodeId pos,
                   std::span<const NodeId> negatives, Real lr) {
  PairScratch<Real> scratch;
  return pair_update(m, u, pos, negatives, lr, scratch);
}

enum class WindowMode {
  kUniform,  // effective window drawn uniformly from {1..w} per position
  kFixed,    // always w
};

struct TrainConfig {
  std::size_t dim = 128;
  std::size_t window = 10;
  std::size_t negatives = 5;
  double alpha = 0.025;
  double alpha_min = 0.0001;
  std::size_t iterations = 5;
  // Keep probability min(1, sqrt(threshold / f(v))); 0 disables subsampling.
  double sample_threshold = 0.1;
  std::size_t min_count = 0;
  double noise_exponent = 1.0;
  std::uint64_t seed = 1;
  WindowMode window_mode = WindowMode::kUniform;
  unsigned threads = 1;
  // Single worker, bit-reproducible. Parallel (hogwild) mode needs
  // deterministic = false and threads > 1.
  bool deterministic = true;

  void validate() const {
    if (dim < 1) throw ConfigError("dim must be >= 1");
    if (window < 1) throw ConfigError("window must be >= 1");
    if (negatives < 1) throw ConfigError("negatives must be >= 1");
    if (!(alpha_min > 0)) throw ConfigError("alpha-min must be > 0");
    if (!(alpha_min <= alpha)) throw ConfigError("alpha must be >= alpha-min");
    if (iterations < 1) throw ConfigError("iterations must be >= 1");
    if (!(sample_threshold >= 0)) throw ConfigError("sample must be >= 0");
    if (!std::isfinite(noise_exponent)) throw ConfigError("noise exponent must be finite");
    if (threads < 1) throw ConfigError("threads must be >= 1");
  }
};

/// Linear decay from alpha at progress 0 to alpha_min at progress 1.
inline double linear_rate(double alpha, double alpha_min, double progress) {
  progress = std::clamp(progress, 0.0, 1.0);
  return std::max(alpha_min, alpha - (alpha - alpha_min) * progress);
}

struct EpochStats {
  std::uint64_t tokens = 0;        // raw corpus tokens visited
  std::uint64_t centers = 0;       // tokens surviving min_count and subsampling
  std::uint64_t pairs = 0;         // pair_update calls
  std::uint64_t tracked = 0;       // pairs whose objective was recorded
  double objective_sum = 0;        // sum of their pre-update objectives
  double first_rate = 0, last_rate = 0;

  double mean_objective() const {
    return tracked ? objective_sum / static_cast<double>(tracked) : 0.0;
  }
};

namespace detail {

template <class Real>
class SgnsWorker {
 public:
  SgnsWorker(EmbeddingModel<Real>& m, const VocabStats& stats,
             const NoiseSampler& noise, const TrainConfig& cfg, Rng rng)
      : m_(m), stats_(stats), noise_(noise), cfg_(cfg), rng_(std::move(rng)),
        negs_(cfg.negatives) {}

  // Trains on one walk at learning rate lr.
  void walk(std::span<const NodeId> w, Real lr, EpochStats& st) {
    buf_.clear();
    const double total = static_cast<double>(stats_.total);
    for (NodeId u : w) {
      const auto cnt = stats_.counts[u];
      if (cnt < cfg_.min_count) continue;
      if (cfg_.sample_threshold > 0) {
        const double f = static_cast<double>(cnt) / total;
        const double keep = std::sqrt(cfg_.sample_threshold / f);
        if (keep < 1.0 && uniform01(rng_) >= keep) continue;
      }
      buf_.push_back(u);
    }
    st.centers += buf_.size();
    const std::size_t len = buf_.size();
    for (std::size_t i = 0; i < len; ++i) {
      const std::size_t b = cfg_.window_mode == WindowMode::kFixed
                                ? cfg_.window
                                : 1 + uniform_index(rng_, cfg_.window);
      const std::size_t lo = i >= b ? i - b : 0;
      const std::size_t hi = std::min(len - 1, i + b);
      for (std::size_t j = lo; j <= hi; ++j) {
        if (j == i) continue;
        const NodeId ctx = buf_[j];
        std::size_t k = 0;
        for (std::size_t s = 0; s < cfg_.negatives; ++s) {
          for (int attempt = 0; attempt < 100; ++attempt) {
            NodeId v = noise_(rng_);
            if (v != ctx) {
              negs_[k++] = v;
              break;
            }
          }
        }
        const std::span<const NodeId> negs(negs_.data(), k);
        // Objective bookkeeping costs a log per target; sample 1 pair in 16.
        if ((st.pairs & 15) == 0) {
          st.objective_sum += pair_step<true>(m_, buf_[i], ctx, negs, lr, scratch_);
          ++st.tracked;
        } else {
          pair_step<false>(m_, buf_[i], ctx, negs, lr, scratch_);
        }
        ++st.pairs;
      }
    }
  }

 private:
  EmbeddingModel<Real>& m_;
  const VocabStats& stats_;
  const NoiseSampler& noise_;
  const TrainConfig& cfg_;
  Rng rng_;
  std::vector<NodeId> negs_;
  std::vector<NodeId> buf_;
  PairScratch<Real> scratch_;
};

}  // namespace detail

/// One pass over the corpus. The learning rate follows linear_rate() with
/// progress moving from progress_begin to progress_end in proportion to the
/// raw tokens visited. `stream` selects an independent RNG stream under
/// cfg.seed so consecutive epochs draw different windows and negatives.
template <class Real>
EpochStats train_epoch(EmbeddingModel<Real>& m, const WalkCorpus& corpus,
                       const VocabStats& stats, const TrainConfig& cfg,
                       double progress_begin, double progress_end,
                       std::uint64_t stream = 0) {
  cfg.validate();
  if (stats.counts.size() > m.num_nodes()) throw Error("corpus vocabulary exceeds model");
  EpochStats st;
  if (corpus.empty() || stats.total == 0) return st;
  const NoiseSampler noise(stats, cfg.noise_exponent);
  const double span = progress_end - progress_begin;
  const double total_tokens = static_cast<double>(corpus.total_tokens());
  auto rate_at = [&](std::uint64_t done) {
    return linear_rate(cfg.alpha, cfg.alpha_min,
                       progress_begin + span * static_cast<double>(done) / total_tokens);
  };
  st.first_rate = rate_at(0);

  if (cfg.deterministic || cfg.threads <= 1) {
    detail::SgnsWorker<Real> worker(m, stats, noise, cfg, Rng(derive_seed(cfg.seed, 0x5C1D, stream)));
    for (std::size_t i = 0; i < corpus.size(); ++i) {
      const double lr = rate_at(st.tokens);
      st.last_rate = lr;
      worker.walk(corpus.walk(i), static_cast<Real>(lr), st);
      st.tokens += corpus.walk(i).size();
    }
    return st;
  }

  // Hogwild: workers update shared rows without synchronization.
  std::atomic<std::uint64_t> done{0};
  std::vector<EpochStats> per(cfg.threads);
  detail::parallel_for(corpus.size(), cfg.threads, [&](std::size_t lo, std::size_t hi, unsigned t) {
    auto& local = per[t];
    detail::SgnsWorker<Real> worker(m, stats, noise, cfg,
                                    Rng(derive_seed(derive_seed(cfg.seed, 0x5C1D, stream), t)));
    for (std::size_t i = lo; i < hi; ++i) {
      const double lr = rate_at(done.load(std::memory_order_relaxed));
      local.last_rate = lr;
      worker.walk(corpus.walk(i), static_cast<Real>(lr), local);
      done.fetch_add(corpus.walk(i).size(), std::memory_order_relaxed);
      local.tokens += corpus.walk(i).size();
    }
  });
  for (const auto& p : per) {
    st.tokens += p.tokens;
    st.centers += p.centers;
    st.pairs += p.pairs;
    st.tracked += p.tracked;
    st.objective_sum += p.objective_sum;
    st.last_rate = std::min(st.last_rate == 0 ? p.last_rate : st.last_rate, p.last_rate);
  }
  return st;
}

struct TrainSummary {
  std::vector<EpochStats> epochs;
};

/// cfg.iterations epochs sharing one linear decay from alpha to alpha_min.
/// Epoch e draws from RNG stream stream_base + e.
template <class Real>
TrainSummary train(EmbeddingModel<Real>& m, const WalkCorpus& corpus,
                   const TrainConfig& cfg, std::uint64_t stream_base = 0) {
  cfg.validate();
  TrainSummary s;
  if (corpus.total_tokens() == 0) return s;
  const VocabStats stats = vocab_stats(corpus, m.num_nodes());
  const double iters = static_cast<double>(cfg.iterations);
  for (std::size_t e = 0; e < cfg.iterations; ++e) {
    s.epochs.push_back(train_epoch(m, corpus, stats, cfg, static_cast<double>(e) / iters,
                                   static_cast<double>(e + 1) / iters, stream_base + e));
    if (!m.all_finite()) throw Error("training diverged: non-finite parameters");
  }
  return s;
}

/// Mean pair objective over `num_pairs` (center, context) pairs drawn from
/// `corpus` windows of size cfg.window with fixed-seed negatives. Used to
/// monitor training; does not modify the model.
template <class Real>
double sample_objective(const EmbeddingModel<Real>& m, const WalkCorpus& corpus,
                        const TrainConfig& cfg, std::size_t num_pairs, std::uint64_t seed) {
  const VocabStats stats = vocab_stats(corpus, m.num_nodes());
  const NoiseSampler noise(stats, cfg.noise_exponent);
  Rng rng(derive_seed(seed, 0x0B1EC7ULL));
  std::vector<NodeId> negs(cfg.negatives);
  double sum = 0;
  std::size_t got = 0;
  for (std::size_t guard = 0; got < num_pairs && guard < num_pairs * 100; ++guard) {
    auto w = corpus.walk(uniform_index(rng, corpus.size()));
    if (w.size() < 2) continue;
    const std::size_t i = uniform_index(rng, w.size());
    const std::size_t lo = i >= cfg.window ? i - cfg.window : 0;
    const std::size_t hi = std::min(w.size() - 1, i + cfg.window);
    std::size_t j = lo + uniform_index(rng, hi - lo + 1);
    if (j == i) continue;
    for (auto& v : negs) v = noise(rng);
    sum += sgns_objective(m, w[i], w[j], negs);
    ++got;
  }
  return got ? sum / static_cast<double>(got) : 0.0;
}

struct Level {
  double retain_fraction = 1.0;
  std::size_t iterations = 1;
  double alpha = 0;  // <= 0: use TrainConfig::alpha
};

/// Ordered pruning levels for hierarchical training.
struct LevelSchedule {
  std::vector<Level> levels;

  void validate() const {
    if (levels.empty()) throw ConfigError("level schedule is empty");
    double prev = 0;
    for (const auto& l : levels) {
      if (!(l.retain_fraction > 0 && l.retain_fraction <= 1))
        throw ConfigError("level fraction must be in (0, 1]");
      if (!(l.retain_fraction > prev))
        throw ConfigError("level fractions must be strictly increasing");
      if (l.iterations < 1) throw ConfigError("level iterations must be >= 1");
      prev = l.retain_fraction;
    }
    if (levels.back().retain_fraction != 1.0)
      throw ConfigError("level schedule must end at fraction 1.0");
  }

  /// "0.1:10,0.2:5,0.4:3,1.0:1"; an optional third field sets the level's
  /// initial learning rate ("0.1:10:0.05").
  static LevelSchedule parse(std::string_view text) {
    LevelSchedule s;
    std::string item;
    std::istringstream in{std::string(text)};
    while (std::getline(in, item, ',')) {
      std::vector<std::string> parts;
      std::istringstream f(item);
      std::string part;
      while (std::getline(f, part, ':')) parts.push_back(part);
      if (parts.size() < 2 || parts.size() > 3)
        throw ConfigError("bad level '" + item + "', expected fraction:iterations[:alpha]");
      Level l;
      try {
        l.retain_fraction = std::stod(parts[0]);
        long it = std::stol(parts[1]);
        if (it < 1) throw ConfigError("level iterations must be >= 1");
        l.iterations = static_cast<std::size_t>(it);
        if (parts.size() == 3) l.alpha = std::stod(parts[2]);
      } catch (const std::logic_error&) {
        throw ConfigError("bad level '" + item + "'");
      }
      s.levels.push_back(l);
    }
    s.validate();
    return s;
  }

  std::string str() const {
    std::ostringstream out;
    for (std::size_t i = 0; i < levels.size(); ++i) {
      if (i) out << ',';
      out << levels[i].retain_fraction << ':' << levels[i].iterations;
      if (levels[i].alpha > 0) out << ':' << levels[i].alpha;
    }
    return out.str();
  }

  static LevelSchedule halk_default() { return parse("0.1:10,0.2:5,0.4:3,1.0:1"); }
};

template <class Real>
using LevelObserver = std::function<void(std::size_t level, const std::vector<bool>& keep,
                                         const EmbeddingModel<Real>& model)>;

/// Hierarchical training: one corpus, ranked once by frequency; level l
/// trains the shared model on the corpus pruned to its retain fraction,
/// with noise and subsampling statistics of that pruned corpus and its own
/// linear decay from the level rate to alpha_min.
template <class Real = float>
EmbeddingModel<Real> train_halk_on(const WalkCorpus& corpus, std::size_t num_nodes,
                                   const TrainConfig& cfg, const LevelSchedule& schedule,
                                   const LevelObserver<Real>& observer = {}) {
  schedule.validate();
  const VocabStats stats = vocab_stats(corpus, num_nodes);
  auto model = init_model<Real>(num_nodes, cfg.dim, cfg.seed);
  for (std::size_t l = 0; l < schedule.levels.size(); ++l) {
    const Level& level = schedule.levels[l];
    const WalkCorpus pruned = prune_walks(corpus, stats, level.retain_fraction);
    TrainConfig lc = cfg;
    lc.iterations = level.iterations;
    if (level.alpha > 0) lc.alpha = level.alpha;
    lc.alpha_min = std::min(lc.alpha_min, lc.alpha);
    train(model, pruned, lc, static_cast<std::uint64_t>(l) << 32);
    if (observer) observer(l, top_fraction(stats, level.retain_fraction), model);
  }
  return model;
}


template <class Real = float>
EmbeddingModel<Real> train_halk(const Graph& g, const WalkConfig& walk_cfg,
                                const TrainConfig& cfg, const LevelSchedule& schedule,
                                const LevelObserver<Real>& observer = {}) {
  schedule.validate();
  cfg.validate();
  const WalkCorpus corpus = sample_walks(g, walk_cfg);
  return train_halk_on(corpus, g.num_nodes(), cfg, schedule, observer);
}

template <class Real>
struct WalkletsResult {
  std::vector<EmbeddingModel<Real>> levels;  // one per skip level 0..k
  DenseMatrix embedding;                     // concatenated, PCA-reduced if wider than final_dim
  std::size_t zero_filled = 0;               // (node, level) segments with no training data
};

/// Column-wise concatenation of the levels' phi matrices.
template <class Real>
DenseMatrix concat_phi(const std::vector<EmbeddingModel<Real>>& levels) {
  if (levels.empty()) return {};
  const std::size_t n = levels[0].num_nodes();
  std::size_t width = 0;
  for (const auto& l : levels) width += l.dim();
  DenseMatrix out(n, width);
  std::size_t col = 0;
  for (const auto& l : levels) {
    out.block(0, col, n, l.dim()) = l.phi_matrix();
    col += l.dim();
  }
  return out;
}

/// Skip-level models: level l trains an independent model on
/// skip_transform(corpus, l); phi matrices are concatenated and reduced to
/// final_dim by PCA when wider.
template <class Real = float>
WalkletsResult<Real> train_walklets_on(const WalkCorpus& corpus, std::size_t num_nodes,
                                       const TrainConfig& cfg, std::size_t k,
                                       std::size_t final_dim) {
  cfg.validate();
  if (final_dim < 1 || final_dim > (k + 1) * cfg.dim)
    throw ConfigError("walklets final dim must be in [1, (k+1)*dim]");
  WalkletsResult<Real> r;
  for (std::size_t l = 0; l <= k; ++l) {
    const WalkCorpus level_corpus = skip_transform(corpus, l);
    TrainConfig lc = cfg;
    lc.seed = derive_seed(cfg.seed, 0x5A1E7ULL, l);
    auto model = init_model<Real>(num_nodes, cfg.dim, lc.seed);
    train(model, level_corpus, lc);
    r.levels.push_back(std::move(model));
  }
  DenseMatrix concat = concat_phi(r.levels);
  for (std::size_t l = 0; l <= k; ++l) {
    const VocabStats st = vocab_stats(skip_transform(corpus, l), num_nodes);
    for (NodeId u = 0; u < num_nodes; ++u) {
      if (st.counts[u] >= std::max<std::size_t>(cfg.min_count, 1)) continue;
      concat.block(u, l * cfg.dim, 1, cfg.dim).setZero();
      ++r.zero_filled;
    }
  }
  if (r.zero_filled)
    std::clog << "walklets: zero-filled " << r.zero_filled << " untrained segments\n";
  if (static_cast<std::size_t>(concat.cols()) > final_dim)
    r.embedding = pca(concat, final_dim).projected;
  else
    r.embedding = std::move(concat);
  return r;
}

template <class Real = float>
WalkletsResult<Real> train_walklets(const Graph& g, const WalkConfig& walk_cfg,
                                    const TrainConfig& cfg, std::size_t k,
                                    std::size_t final_dim) {
  const WalkCorpus corpus = sample_walks(g, walk_cfg);
  return train_walklets_on<Real>(corpus, g.num_nodes(), cfg, k, final_dim);
}

}  // namespace halk
