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

#include <charconv>
#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <unordered_map>
#include <vector>

#include "halk/common.hpp"
#include "halk/dimred.hpp"
#include "halk/graph.hpp"

namespace halk {

/// Text embeddings: header "|V| d", then "name x_1 ... x_d" per node.
inline void write_embeddings(std::ostream& os, const std::vector<std::string>& names,
                             const DenseMatrix& emb) {
  if (names.size() != static_cast<std::size_t>(emb.rows()))
    throw Error("write_embeddings: one name per row required");
  os << emb.rows() << ' ' << emb.cols() << '\n';
  char buf[32];
  for (Eigen::Index i = 0; i < emb.rows(); ++i) {
    os << names[static_cast<std::size_t>(i)];
    for (Eigen::Index j = 0; j < emb.cols(); ++j) {
      // Shortest text that parses back to the same float.
      auto r = std::to_chars(buf, buf + sizeof buf, static_cast<float>(emb(i, j)));
      os << ' ';
      os.write(buf, r.ptr - buf);
    }
    os << '\n';
  }
  if (!os) throw Error("write_embeddings: write failed");
}

struct EmbeddingTable {
  std::vector<std::string> names;
  DenseMatrix vectors;

  std::size_t num_nodes() const { return names.size(); }
  std::size_t dim() const { return static_cast<std::size_t>(vectors.cols()); }
  std::optional<NodeId> find(const std::string& name) const {
    auto it = index_.find(name);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  void build_index() {
    index_.clear();
    for (NodeId i = 0; i < names.size(); ++i)
      if (!index_.emplace(names[i], i).second) throw Error("duplicate embedding row '" + names[i] + "'");
  }

 private:
  std::unordered_map<std::string, NodeId> index_;
};

inline EmbeddingTable read_embeddings(std::istream& in) {
  std::string line;
  std::size_t lineno = 0;
  auto next = [&]() {
    while (std::getline(in, line)) {
      ++lineno;
      if (!detail::is_comment_or_blank(line)) return true;
    }
    return false;
  };
  if (!next()) throw ParseError("empty embedding file", 0);
  auto head = detail::split_ws(line);
  std::size_t n = 0, d = 0;
  try {
    if (head.size() != 2) throw std::invalid_argument("header");
    n = std::stoul(head[0]);
    d = std::stoul(head[1]);
  } catch (const std::exception&) {
    throw ParseError("header must be '<num_nodes> <dim>'", lineno);
  }
  if (d == 0) throw ParseError("embedding dimension must be positive", lineno);
  EmbeddingTable t;
  t.vectors.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d));
  for (std::size_t i = 0; i < n; ++i) {
    if (!next()) throw ParseError("expected " + std::to_string(n) + " rows", lineno);
    auto tok = detail::split_ws(line);
    if (tok.size() != d + 1)
      throw ParseError("expected a name and " + std::to_string(d) + " values", lineno);
    t.names.push_back(tok[0]);
    for (std::size_t j = 0; j < d; ++j) {
      double v = 0;
      const auto& s = tok[j + 1];
      auto r = std::from_chars(s.data(), s.data() + s.size(), v);
      if (r.ec != std::errc() || r.ptr != s.data() + s.size())
        throw ParseError("bad number '" + s + "'", lineno);
      t.vectors(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = v;
    }
  }
  if (next()) throw ParseError("more rows than the header declares", lineno);
  t.build_index();
  return t;
}

/// Rows of `t` reordered to the graph's node ids. Every graph node needs a row.
inline DenseMatrix align_embeddings(const EmbeddingTable& t, const Graph& g) {
  DenseMatrix out(static_cast<Eigen::Index>(g.num_nodes()), t.vectors.cols());
  for (NodeId u = 0; u < g.num_nodes(); ++u) {
    auto row = t.find(g.name(u));
    if (!row) throw Error("no embedding for node '" + g.name(u) + "'");
    out.row(u) = t.vectors.row(*row);
  }
  return out;
}

}  // namespace halk
