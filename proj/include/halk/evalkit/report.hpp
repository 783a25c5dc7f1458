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

#include <cmath>
#include <iomanip>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "halk/common.hpp"

namespace halk {

struct MetricSeries {
  std::string name;
  std::vector<double> values;  // one per split

  double mean() const {
    if (values.empty()) return std::nan("");
    double s = 0;
    for (double v : values) s += v;
    return s / static_cast<double>(values.size());
  }
  /// Population standard deviation.
  double stddev() const {
    if (values.empty()) return std::nan("");
    const double m = mean();
    double s = 0;
    for (double v : values) s += (v - m) * (v - m);
    return std::sqrt(s / static_cast<double>(values.size()));
  }
};

struct EvalReport {
  std::vector<std::pair<std::string, std::string>> metadata;
  std::vector<MetricSeries> metrics;

  /// Series `name`, created on first use. The reference is invalidated when
  /// another series is added.
  MetricSeries& metric(const std::string& name) {
    for (auto& m : metrics)
      if (m.name == name) return m;
    metrics.push_back({name, {}});
    return metrics.back();
  }
  const MetricSeries* find(const std::string& name) const {
    for (const auto& m : metrics)
      if (m.name == name) return &m;
    return nullptr;
  }
  const MetricSeries& at(const std::string& name) const {
    if (auto* m = find(name)) return *m;
    throw Error("report has no metric '" + name + "'");
  }
  void add_meta(std::string key, std::string value) {
    metadata.emplace_back(std::move(key), std::move(value));
  }

  /// One line per metric: "metric=<name> mean=<v> std=<v> n=<repeats>".
  void write_summary(std::ostream& os) const {
    const auto flags = os.flags();
    os << std::setprecision(6);
    for (const auto& m : metrics)
      os << "metric=" << m.name << " mean=" << m.mean() << " std=" << m.stddev()
         << " n=" << m.values.size() << '\n';
    os.flags(flags);
  }

  void write_table(std::ostream& os) const {
    for (const auto& [k, v] : metadata) os << "# " << k << ": " << v << '\n';
    std::size_t w = 6;
    for (const auto& m : metrics) w = std::max(w, m.name.size());
    const auto flags = os.flags();
    os << std::left << std::setw(static_cast<int>(w)) << "metric" << "  " << std::right
       << std::setw(10) << "mean" << "  " << std::setw(10) << "std" << "  n\n";
    os << std::fixed << std::setprecision(4);
    for (const auto& m : metrics)
      os << std::left << std::setw(static_cast<int>(w)) << m.name << "  " << std::right
         << std::setw(10) << m.mean() << "  " << std::setw(10) << m.stddev() << "  "
         << m.values.size() << '\n';
    os.flags(flags);
  }

  /// Per-split values, one row per split.
  void write_csv(std::ostream& os) const {
    os << "split";
    for (const auto& m : metrics) os << ',' << m.name;
    os << '\n';
    std::size_t rows = 0;
    for (const auto& m : metrics) rows = std::max(rows, m.values.size());
    const auto flags = os.flags();
    os << std::setprecision(9);
    for (std::size_t r = 0; r < rows; ++r) {
      os << r;
      for (const auto& m : metrics) {
        os << ',';
        if (r < m.values.size()) os << m.values[r];
      }
      os << '\n';
    }
    os.flags(flags);
  }
};

}  // namespace halk
