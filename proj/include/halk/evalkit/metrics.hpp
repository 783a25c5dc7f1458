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
#include <span>
#include <vector>

#include "halk/common.hpp"

namespace halk {

struct ConfusionCounts {
  std::vector<std::size_t> tp, fp, fn;
};

/// Per-class counts for multi-label predictions. Both inputs hold one class
/// set per sample; sets need not be sorted.
inline ConfusionCounts confusion(const std::vector<std::vector<int>>& predicted,
                                 const std::vector<std::vector<int>>& truth,
                                 std::size_t num_classes) {
  if (predicted.size() != truth.size()) throw Error("metrics: sample count mismatch");
  ConfusionCounts c{std::vector<std::size_t>(num_classes), std::vector<std::size_t>(num_classes),
                    std::vector<std::size_t>(num_classes)};
  auto check = [&](int k) {
    if (k < 0 || static_cast<std::size_t>(k) >= num_classes)
      throw Error("metrics: class id out of range");
    return static_cast<std::size_t>(k);
  };
  for (std::size_t i = 0; i < truth.size(); ++i) {
    const auto& p = predicted[i];
    const auto& t = truth[i];
    for (int k : p) {
      if (std::find(t.begin(), t.end(), k) != t.end())
        ++c.tp[check(k)];
      else
        ++c.fp[check(k)];
    }
    for (int k : t)
      if (std::find(p.begin(), p.end(), k) == p.end()) ++c.fn[check(k)];
  }
  return c;
}

/// 2TP / (2TP + FP + FN), defined as 0 when nothing was predicted or present.
inline double f1_from_counts(std::size_t tp, std::size_t fp, std::size_t fn) {
  const std::size_t den = 2 * tp + fp + fn;
  return den == 0 ? 0.0 : 2.0 * static_cast<double>(tp) / static_cast<double>(den);
}

inline double macro_f1(const std::vector<std::vector<int>>& predicted,
                       const std::vector<std::vector<int>>& truth, std::size_t num_classes) {
  if (num_classes == 0) throw Error("metrics: no classes");
  const auto c = confusion(predicted, truth, num_classes);
  double sum = 0;
  for (std::size_t k = 0; k < num_classes; ++k) sum += f1_from_counts(c.tp[k], c.fp[k], c.fn[k]);
  return sum / static_cast<double>(num_classes);
}

inline double micro_f1(const std::vector<std::vector<int>>& predicted,
                       const std::vector<std::vector<int>>& truth, std::size_t num_classes) {
  const auto c = confusion(predicted, truth, num_classes);
  const auto sum = [](const std::vector<std::size_t>& v) {
    return std::accumulate(v.begin(), v.end(), std::size_t{0});
  };
  return f1_from_counts(sum(c.tp), sum(c.fp), sum(c.fn));
}

/// Area under the ROC curve by the rank-sum statistic; tied scores share
/// their average rank. Labels are 0/1 and both classes must be present.
inline double auc(std::span<const double> scores, std::span<const int> labels) {
  if (scores.size() != labels.size()) throw Error("auc: size mismatch");
  const std::size_t n = scores.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return scores[a] < scores[b]; });
  double rank_sum = 0;
  std::size_t pos = 0;
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j < n && scores[order[j]] == scores[order[i]]) ++j;
    const double avg_rank = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2;
    for (std::size_t k = i; k < j; ++k)
      if (labels[order[k]] == 1) {
        rank_sum += avg_rank;
        ++pos;
      } else if (labels[order[k]] != 0) {
        throw Error("auc: labels must be 0 or 1");
      }
    i = j;
  }
  const std::size_t neg = n - pos;
  if (pos == 0 || neg == 0) throw Error("auc: needs both positive and negative samples");
  const double p = static_cast<double>(pos);
  return (rank_sum - p * (p + 1) / 2) / (p * static_cast<double>(neg));
}

/// Mean absolute error and mean relative error |y_hat - y| / y; the latter
/// requires strictly positive targets.
inline double mean_absolute_error(std::span<const double> pred, std::span<const double> truth) {
  if (pred.size() != truth.size() || pred.empty()) throw Error("mae: bad input sizes");
  double s = 0;
  for (std::size_t i = 0; i < pred.size(); ++i) s += std::abs(pred[i] - truth[i]);
  return s / static_cast<double>(pred.size());
}

inline double mean_relative_error(std::span<const double> pred, std::span<const double> truth) {
  if (pred.size() != truth.size() || pred.empty()) throw Error("mre: bad input sizes");
  double s = 0;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    if (!(truth[i] > 0)) throw Error("mre: targets must be positive");
    s += std::abs(pred[i] - truth[i]) / truth[i];
  }
  return s / static_cast<double>(pred.size());
}

}  // namespace halk
