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

#include <cstdint>
#include <span>
#include <vector>

#include "halk/common.hpp"

namespace halk {

/// Vose alias method: O(n) build, O(1) draws from a discrete distribution.
/// Built into caller-provided spans so many small tables can share one
/// flat buffer (per-arc second-order tables).
inline void build_alias(std::span<const double> weights, std::span<float> prob,
                        std::span<std::uint32_t> alias) {
  const std::size_t n = weights.size();
  double sum = 0;
  for (double w : weights) sum += w;
  if (n == 0 || !(sum > 0)) throw Error("alias table needs positive total weight");
  std::vector<double> scaled(n);
  std::vector<std::uint32_t> small, large;
  small.reserve(n);
  large.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    scaled[i] = weights[i] * static_cast<double>(n) / sum;
    (scaled[i] < 1.0 ? small : large).push_back(static_cast<std::uint32_t>(i));
  }
  while (!small.empty() && !large.empty()) {
    auto s = small.back();
    small.pop_back();
    auto l = large.back();
    prob[s] = static_cast<float>(scaled[s]);
    alias[s] = l;
    scaled[l] = (scaled[l] + scaled[s]) - 1.0;
    if (scaled[l] < 1.0) {
      large.pop_back();
      small.push_back(l);
    }
  }
  for (auto i : large) {
    prob[i] = 1.0f;
    alias[i] = i;
  }
  for (auto i : small) {  // leftovers from rounding
    prob[i] = 1.0f;
    alias[i] = i;
  }
}

inline std::size_t sample_alias(std::span<const float> prob,
                                std::span<const std::uint32_t> alias, Rng& rng) {
  std::size_t i = uniform_index(rng, prob.size());
  return uniform01(rng) < prob[i] ? i : alias[i];
}

class AliasTable {
 public:
  AliasTable() = default;
  explicit AliasTable(std::span<const double> weights)
      : prob_(weights.size()), alias_(weights.size()) {
    build_alias(weights, prob_, alias_);
  }

  std::size_t size() const { return prob_.size(); }
  std::size_t operator()(Rng& rng) const { return sample_alias(prob_, alias_, rng); }

 private:
  std::vector<float> prob_;
  std::vector<std::uint32_t> alias_;
};

}  // namespace halk
