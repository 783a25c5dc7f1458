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
#include <cstdint>
#include <istream>
#include <limits>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "halk/common.hpp"

namespace halk {

using Edge = std::pair<NodeId, NodeId>;

/// Undirected graph in CSR form. Node names are interned to dense ids on
/// construction; adjacency lists are sorted and free of duplicates. Self-loops
/// survive construction (stored once in the owner's list) until preprocess().
/// Immutable once built.
class Graph {
 public:
  Graph() : offsets_(1, 0) {}

  /// Builds a graph over ids [0, names.size()). Edges are symmetrized and
  /// duplicates (in either direction) collapsed.
  static Graph from_edges(std::vector<std::string> names,
                          std::vector<Edge> edges) {
    const std::size_t n = names.size();
    for (auto& e : edges) {
      if (e.first >= n || e.second >= n)
        throw Error("edge endpoint out of range");
      if (e.first > e.second) std::swap(e.first, e.second);
    }
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

    Graph g;
    g.names_ = std::move(names);
    g.index_.reserve(n);
    for (NodeId i = 0; i < n; ++i) {
      if (!g.index_.emplace(g.names_[i], i).second)
        throw Error("duplicate node name: " + g.names_[i]);
    }
    std::vector<std::size_t> deg(n, 0);
    for (const auto& [u, v] : edges) {
      ++deg[u];
      if (u != v) ++deg[v];
    }
    g.offsets_.assign(n + 1, 0);
    for (std::size_t i = 0; i < n; ++i) g.offsets_[i + 1] = g.offsets_[i] + deg[i];
    g.adj_.resize(g.offsets_[n]);
    std::vector<std::size_t> fill(g.offsets_.begin(), g.offsets_.end() - 1);
    for (const auto& [u, v] : edges) {
      g.adj_[fill[u]++] = v;
      if (u != v) g.adj_[fill[v]++] = u;
      if (u == v) ++g.self_loops_;
    }
    for (std::size_t i = 0; i < n; ++i)
      std::sort(g.adj_.begin() + g.offsets_[i], g.adj_.begin() + g.offsets_[i + 1]);
    g.num_edges_ = edges.size();
    return g;
  }

  std::size_t num_nodes() const { return names_.size(); }
  /// Undirected edge count, self-loops included.
  std::size_t num_edges() const { return num_edges_; }
  std::size_t num_self_loops() const { return self_loops_; }

  std::span<const NodeId> neighbors(NodeId u) const {
    return {adj_.data() + offsets_[u], offsets_[u + 1] - offsets_[u]};
  }
  std::size_t degree(NodeId u) const { return offsets_[u + 1] - offsets_[u]; }

  /// Position of u's adjacency block in the flat arc array; arcs (u, v) are
  /// numbered arc_offset(u) + rank of v in neighbors(u).
  std::size_t arc_offset(NodeId u) const { return offsets_[u]; }
  std::size_t num_arcs() const { return adj_.size(); }

  bool has_edge(NodeId u, NodeId v) const {
    auto nb = neighbors(u);
    return std::binary_search(nb.begin(), nb.end(), v);
  }

  /// Index of v inside neighbors(u), if adjacent.
  std::optional<std::size_t> neighbor_rank(NodeId u, NodeId v) const {
    auto nb = neighbors(u);
    auto it = std::lower_bound(nb.begin(), nb.end(), v);
    if (it == nb.end() || *it != v) return std::nullopt;
    return static_cast<std::size_t>(it - nb.begin());
  }

  const std::string& name(NodeId u) const { return names_[u]; }
  const std::vector<std::string>& names() const { return names_; }

  std::optional<NodeId> find(const std::string& name) const {
    auto it = index_.find(name);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  /// Every undirected edge once, as (u, v) with u <= v, in ascending order.
  std::vector<Edge> edges() const {
    std::vector<Edge> out;
    out.reserve(num_edges_);
    for (NodeId u = 0; u < num_nodes(); ++u)
      for (NodeId v : neighbors(u))
        if (u <= v) out.emplace_back(u, v);
    return out;
  }

  friend bool operator==(const Graph& a, const Graph& b) {
    return a.names_ == b.names_ && a.offsets_ == b.offsets_ && a.adj_ == b.adj_;
  }

 private:
  std::vector<std::size_t> offsets_;
  std::vector<NodeId> adj_;
  std::vector<std::string> names_;
  std::unordered_map<std::string, NodeId> index_;
  std::size_t num_edges_ = 0;
  std::size_t self_loops_ = 0;
};

namespace detail {

inline bool is_comment_or_blank(const std::string& line) {
  auto pos = line.find_first_not_of(" \t\r\n");
  if (pos == std::string::npos) return true;
  return line[pos] == '#' || line[pos] == '%';
}

inline std::vector<std::string> split_ws(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream ss(line);
  std::string tok;
  while (ss >> tok) out.push_back(std::move(tok));
  return out;
}

}  // namespace detail

struct EdgeListStats {
  std::size_t lines = 0;
  std::size_t comment_lines = 0;
  std::size_t edge_records = 0;
};

/// Reads a whitespace-separated edge list. Lines starting with '#' or '%'
/// are comments; tokens after the first two are ignored. The graph is
/// undirected either way; `directed_input` only records that each line is
/// one arc, so reciprocal lines collapse into a single edge.
inline Graph load_edge_list(std::istream& in, bool directed_input = false,
                            EdgeListStats* stats = nullptr) {
  (void)directed_input;
  std::vector<std::string> names;
  std::unordered_map<std::string, NodeId> index;
  std::vector<Edge> edges;
  EdgeListStats st;
  auto intern = [&](const std::string& s) {
    auto [it, inserted] = index.emplace(s, static_cast<NodeId>(names.size()));
    if (inserted) names.push_back(s);
    return it->second;
  };
  std::string line;
  while (std::getline(in, line)) {
    ++st.lines;
    if (detail::is_comment_or_blank(line)) {
      ++st.comment_lines;
      continue;
    }
    auto tok = detail::split_ws(line);
    if (tok.size() < 2)
      throw ParseError("expected two node names, got '" + line + "'", st.lines);
    NodeId u = intern(tok[0]);
    NodeId v = intern(tok[1]);
    edges.emplace_back(u, v);
    ++st.edge_records;
  }
  if (stats) *stats = st;
  return Graph::from_edges(std::move(names), std::move(edges));
}

struct PreprocessResult {
  Graph graph;
  std::size_t self_loops_removed = 0;
  std::size_t isolates_removed = 0;
  /// Old id -> new id, or kRemoved.
  std::vector<NodeId> remap;
  static constexpr NodeId kRemoved = std::numeric_limits<NodeId>::max();
};

/// Drops self-loops, then nodes left without any edge, and re-compacts ids
/// in their original relative order.
inline PreprocessResult preprocess(const Graph& g) {
  PreprocessResult r;
  r.self_loops_removed = g.num_self_loops();
  r.remap.assign(g.num_nodes(), PreprocessResult::kRemoved);
  std::vector<std::string> names;
  for (NodeId u = 0; u < g.num_nodes(); ++u) {
    bool has_other = false;
    for (NodeId v : g.neighbors(u))
      if (v != u) {
        has_other = true;
        break;
      }
    if (has_other) {
      r.remap[u] = static_cast<NodeId>(names.size());
      names.push_back(g.name(u));
    } else {
      ++r.isolates_removed;
    }
  }
  std::vector<Edge> edges;
  edges.reserve(g.num_edges());
  for (const auto& [u, v] : g.edges())
    if (u != v) edges.emplace_back(r.remap[u], r.remap[v]);
  r.graph = Graph::from_edges(std::move(names), std::move(edges));
  return r;
}

/// Node -> set of class ids. Indexed by internal node id; unlabeled nodes
/// have an empty set.
struct LabelTable {
  std::vector<std::vector<int>> classes;
  std::vector<std::string> class_names;

  std::size_t num_classes() const { return class_names.size(); }
  bool labeled(NodeId u) const { return u < classes.size() && !classes[u].empty(); }

  std::vector<NodeId> labeled_nodes() const {
    std::vector<NodeId> out;
    for (NodeId u = 0; u < classes.size(); ++u)
      if (!classes[u].empty()) out.push_back(u);
    return out;
  }
};

struct LabelLoadStats {
  std::size_t lines = 0;
  std::size_t unknown_nodes = 0;
};

/// Reads "node-name class [class...]" lines against any index exposing
/// num_nodes() and find(name). Lines naming nodes the index does not know are
/// skipped and counted. Class ids follow first appearance.
template <class NameIndex>
LabelTable load_labels(std::istream& in, const NameIndex& index,
                       LabelLoadStats* stats = nullptr) {
  LabelTable t;
  t.classes.resize(index.num_nodes());
  std::unordered_map<std::string, int> class_ids;
  LabelLoadStats st;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (detail::is_comment_or_blank(line)) continue;
    ++st.lines;
    auto tok = detail::split_ws(line);
    if (tok.size() < 2)
      throw ParseError("label line needs a node and at least one class", lineno);
    auto node = index.find(tok[0]);
    if (!node) {
      ++st.unknown_nodes;
      continue;
    }
    auto& set = t.classes[*node];
    for (std::size_t i = 1; i < tok.size(); ++i) {
      auto [it, inserted] =
          class_ids.emplace(tok[i], static_cast<int>(t.class_names.size()));
      if (inserted) t.class_names.push_back(tok[i]);
      set.push_back(it->second);
    }
    std::sort(set.begin(), set.end());
    set.erase(std::unique(set.begin(), set.end()), set.end());
  }
  if (stats) *stats = st;
  return t;
}

struct Reached {
  NodeId node;
  std::uint32_t hops;
  friend bool operator==(const Reached&, const Reached&) = default;
};

/// Reusable BFS workspace; one per thread.
class Bfs {
 public:
  explicit Bfs(const Graph& g) : g_(g), dist_(g.num_nodes(), kUnseen) {}

  /// Exact hop distances from `source`, in BFS order, up to `cap` hops.
  std::vector<Reached> run(NodeId source, std::uint32_t cap) {
    if (source >= g_.num_nodes()) throw Error("unknown BFS source");
    if (cap < 1) throw ConfigError("BFS cap must be >= 1");
    std::vector<Reached> out;
    out.push_back({source, 0});
    dist_[source] = 0;
    for (std::size_t head = 0; head < out.size(); ++head) {
      const auto [u, d] = out[head];
      if (d == cap) continue;
      for (NodeId v : g_.neighbors(u)) {
        if (dist_[v] != kUnseen) continue;
        dist_[v] = d + 1;
        out.push_back({v, d + 1});
      }
    }
    for (const auto& r : out) dist_[r.node] = kUnseen;
    return out;
  }

 private:
  static constexpr std::uint32_t kUnseen = std::numeric_limits<std::uint32_t>::max();
  const Graph& g_;
  std::vector<std::uint32_t> dist_;
};

inline std::vector<Reached> bfs_distances(const Graph& g, NodeId source,
                                          std::uint32_t cap) {
  return Bfs(g).run(source, cap);
}

}  // namespace halk
