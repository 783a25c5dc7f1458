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
#include <charconv>
#include <functional>
#include <iomanip>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "halk/common.hpp"
#include "halk/edgeops.hpp"
#include "halk/evalkit/logreg.hpp"
#include "halk/evalkit/tasks.hpp"
#include "halk/sgns.hpp"
#include "halk/walker.hpp"

namespace halk {

inline const std::vector<std::string> kCommands = {"walk", "embed", "eval-nc", "eval-lp",
                                                   "eval-sp"};
inline const std::vector<std::string> kMethods = {"deepwalk", "node2vec", "halk", "walklets",
                                                  "random"};
inline const std::vector<std::string> kPresets = {"deepwalk-repro", "node2vec-repro",
                                                  "walklets-repro", "halk-default"};

/// Everything one invocation needs. Field names match the config keys and
/// the long flags (e.g. key "alpha-min" is flag --alpha-min).
struct RunConfig {
  std::string command;
  std::string preset;
  std::string method = "deepwalk";
  std::string input;
  std::string labels;
  std::string output;
  std::string embeddings;       // evaluate these instead of training
  std::string residual_output;  // eval-lp: write the residual edge list here
  std::string report_csv;
  bool directed = false;
  bool preprocess = true;

  WalkConfig walk;
  TrainConfig train;
  LevelSchedule schedule = LevelSchedule::halk_default();
  std::size_t walklets_k = 2;

  std::string op = "hadamard";
  double train_fraction = 0.5;
  std::size_t repeats = 10;
  double l2 = 1.0;
  std::size_t max_iter = 100;
  double removal_fraction = 0.5;
  std::size_t sp_pairs = 50000;
  std::uint32_t max_hops = 6;
  std::size_t sp_cap = 0;

  std::uint64_t seed() const { return walk.seed; }

  SplitSpec split() const { return {train_fraction, repeats, derive_seed(seed(), 0x5917)}; }
  LogRegOptions logreg() const { return {l2, max_iter, 1e-5}; }
  EdgeOperator edge_op() const { return parse_edge_operator(op); }

  void validate() const {
    auto one_of = [](const std::string& field, const std::string& v,
                     const std::vector<std::string>& allowed) {
      if (std::find(allowed.begin(), allowed.end(), v) != allowed.end()) return;
      std::string list;
      for (const auto& a : allowed) list += (list.empty() ? "" : "|") + a;
      throw ConfigError(field + " must be one of " + list + ", got '" + v + "'");
    };
    if (!command.empty()) one_of("command", command, kCommands);
    if (!preset.empty()) one_of("preset", preset, kPresets);
    one_of("method", method, kMethods);
    walk.validate();
    train.validate();
    schedule.validate();
    if (walklets_k < 1) throw ConfigError("walklets-k must be >= 1");
    edge_op();
    if (!(train_fraction > 0 && train_fraction < 1))
      throw ConfigError("train-fraction must be in (0, 1)");
    if (repeats < 1) throw ConfigError("repeats must be >= 1");
    if (!(l2 >= 0)) throw ConfigError("l2 must be >= 0");
    if (max_iter < 1) throw ConfigError("max-iter must be >= 1");
    if (!(removal_fraction > 0 && removal_fraction < 1))
      throw ConfigError("removal-fraction must be in (0, 1)");
    if (sp_pairs < 1) throw ConfigError("sp-pairs must be >= 1");
    if (max_hops < 1) throw ConfigError("max-hops must be >= 1");
  }
};

namespace detail {

template <class T>
T parse_number(const std::string& key, const std::string& s) {
  T v{};
  auto r = std::from_chars(s.data(), s.data() + s.size(), v);
  if (r.ec != std::errc() || r.ptr != s.data() + s.size())
    throw ConfigError(key + ": cannot parse '" + s + "' as a number");
  return v;
}

inline bool parse_bool(const std::string& key, const std::string& s) {
  if (s == "true" || s == "1" || s == "yes" || s == "on") return true;
  if (s == "false" || s == "0" || s == "no" || s == "off") return false;
  throw ConfigError(key + ": expected true or false, got '" + s + "'");
}

template <class T>
std::string num_str(T v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

inline std::string bool_str(bool b) { return b ? "true" : "false"; }

}  // namespace detail

struct ConfigField {
  std::string key;
  std::string help;
  std::function<void(RunConfig&, const std::string&)> set;
  std::function<std::string(const RunConfig&)> get;
  bool is_flag = false;  // boolean switch on the command line
};

/// The full key table, in echo order.
inline const std::vector<ConfigField>& config_fields() {
  using detail::parse_number;
  using detail::num_str;
  static const std::vector<ConfigField> fields = [] {
    std::vector<ConfigField> f;
    auto str = [&](std::string key, std::string help, std::string RunConfig::*m) {
      f.push_back({key, help, [m](RunConfig& c, const std::string& v) { c.*m = v; },
                   [m](const RunConfig& c) { return c.*m; }});
    };
    auto flag = [&](std::string key, std::string help, std::function<bool&(RunConfig&)> ref) {
      f.push_back({key, help,
                   [ref, key](RunConfig& c, const std::string& v) { ref(c) = detail::parse_bool(key, v); },
                   [ref](const RunConfig& c) { return detail::bool_str(ref(const_cast<RunConfig&>(c))); },
                   true});
    };
    auto size = [&](std::string key, std::string help, std::function<std::size_t&(RunConfig&)> ref) {
      f.push_back({key, help,
                   [ref, key](RunConfig& c, const std::string& v) { ref(c) = parse_number<std::size_t>(key, v); },
                   [ref](const RunConfig& c) { return num_str(ref(const_cast<RunConfig&>(c))); }});
    };
    auto real = [&](std::string key, std::string help, std::function<double&(RunConfig&)> ref) {
      f.push_back({key, help,
                   [ref, key](RunConfig& c, const std::string& v) { ref(c) = parse_number<double>(key, v); },
                   [ref](const RunConfig& c) { return num_str(ref(const_cast<RunConfig&>(c))); }});
    };

    str("command", "walk|embed|eval-nc|eval-lp|eval-sp", &RunConfig::command);
    str("preset", "deepwalk-repro|node2vec-repro|walklets-repro|halk-default", &RunConfig::preset);
    str("method", "deepwalk|node2vec|halk|walklets|random", &RunConfig::method);
    str("input", "edge list file", &RunConfig::input);
    str("labels", "node label file (eval-nc)", &RunConfig::labels);
    str("output", "output file (corpus, embeddings or report)", &RunConfig::output);
    str("embeddings", "evaluate this embedding file instead of training", &RunConfig::embeddings);
    str("residual-output", "eval-lp: write the residual edge list here", &RunConfig::residual_output);
    str("report-csv", "write per-split metric values here", &RunConfig::report_csv);
    flag("directed", "input lines are arcs; reciprocal pairs collapse",
         [](RunConfig& c) -> bool& { return c.directed; });
    flag("preprocess", "drop self-loops and isolated nodes after loading",
         [](RunConfig& c) -> bool& { return c.preprocess; });

    size("walks", "walks per node", [](RunConfig& c) -> std::size_t& { return c.walk.walks_per_node; });
    size("length", "walk length", [](RunConfig& c) -> std::size_t& { return c.walk.walk_length; });
    real("p", "return parameter (> 0)", [](RunConfig& c) -> double& { return c.walk.p; });
    real("q", "in-out parameter (> 0)", [](RunConfig& c) -> double& { return c.walk.q; });
    f.push_back({"seed", "master seed",
                 [](RunConfig& c, const std::string& v) {
                   c.walk.seed = c.train.seed = parse_number<std::uint64_t>("seed", v);
                 },
                 [](const RunConfig& c) { return num_str(c.walk.seed); }});
    f.push_back({"threads", "worker threads",
                 [](RunConfig& c, const std::string& v) {
                   c.walk.threads = c.train.threads = parse_number<unsigned>("threads", v);
                 },
                 [](const RunConfig& c) { return num_str(c.walk.threads); }});
    flag("deterministic", "single training worker, bit-reproducible",
         [](RunConfig& c) -> bool& { return c.train.deterministic; });

    size("dim", "embedding dimension", [](RunConfig& c) -> std::size_t& { return c.train.dim; });
    size("window", "skip-gram window", [](RunConfig& c) -> std::size_t& { return c.train.window; });
    size("negatives", "negative samples per pair", [](RunConfig& c) -> std::size_t& { return c.train.negatives; });
    real("alpha", "initial learning rate", [](RunConfig& c) -> double& { return c.train.alpha; });
    real("alpha-min", "final learning rate", [](RunConfig& c) -> double& { return c.train.alpha_min; });
    size("iterations", "training epochs", [](RunConfig& c) -> std::size_t& { return c.train.iterations; });
    real("sample", "subsampling threshold (0 disables)", [](RunConfig& c) -> double& { return c.train.sample_threshold; });
    size("min-count", "ignore nodes seen fewer times", [](RunConfig& c) -> std::size_t& { return c.train.min_count; });
    real("noise-exponent", "noise distribution exponent", [](RunConfig& c) -> double& { return c.train.noise_exponent; });
    f.push_back({"window-mode", "uniform|fixed",
                 [](RunConfig& c, const std::string& v) {
                   if (v == "uniform") c.train.window_mode = WindowMode::kUniform;
                   else if (v == "fixed") c.train.window_mode = WindowMode::kFixed;
                   else throw ConfigError("window-mode must be uniform|fixed, got '" + v + "'");
                 },
                 [](const RunConfig& c) {
                   return std::string(c.train.window_mode == WindowMode::kFixed ? "fixed" : "uniform");
                 }});
    f.push_back({"halk-schedule", "fraction:iterations[:alpha],...",
                 [](RunConfig& c, const std::string& v) { c.schedule = LevelSchedule::parse(v); },
                 [](const RunConfig& c) { return c.schedule.str(); }});
    size("walklets-k", "walklets skip window", [](RunConfig& c) -> std::size_t& { return c.walklets_k; });

    str("op", "edge operator l1|l2|sub|concat|avg|hadamard", &RunConfig::op);
    real("train-fraction", "training share of each split", [](RunConfig& c) -> double& { return c.train_fraction; });
    size("repeats", "number of random splits", [](RunConfig& c) -> std::size_t& { return c.repeats; });
    real("l2", "classifier L2 strength", [](RunConfig& c) -> double& { return c.l2; });
    size("max-iter", "classifier iteration cap", [](RunConfig& c) -> std::size_t& { return c.max_iter; });
    real("removal-fraction", "eval-lp: share of edges removed", [](RunConfig& c) -> double& { return c.removal_fraction; });
    size("sp-pairs", "eval-sp: node pairs to sample", [](RunConfig& c) -> std::size_t& { return c.sp_pairs; });
    f.push_back({"max-hops", "eval-sp: largest distance sampled",
                 [](RunConfig& c, const std::string& v) { c.max_hops = parse_number<std::uint32_t>("max-hops", v); },
                 [](const RunConfig& c) { return num_str(c.max_hops); }});
    size("sp-cap", "eval-sp: pairs kept per distance (0 = no cap)", [](RunConfig& c) -> std::size_t& { return c.sp_cap; });
    return f;
  }();
  return fields;
}

inline const ConfigField& config_field(const std::string& key) {
  for (const auto& f : config_fields())
    if (f.key == key) return f;
  throw ConfigError("unknown config key '" + key + "'");
}

inline void set_config_value(RunConfig& c, const std::string& key, const std::string& value) {
  config_field(key).set(c, value);
}

/// Parameter settings of the reproduction presets.
inline void apply_preset(RunConfig& c, const std::string& name) {
  auto common = [&c] {
    c.walk.walks_per_node = 80;
    c.walk.walk_length = 40;
    c.walk.p = c.walk.q = 1.0;
    c.train.window = 10;
    c.train.dim = 128;
    c.train.iterations = 5;
    c.train.negatives = 5;
    c.train.sample_threshold = 0.1;
    c.train.alpha = 0.025;
    c.train.alpha_min = 0.0001;
    c.train.min_count = 0;
  };
  common();
  if (name == "deepwalk-repro") {
    c.method = "deepwalk";
  } else if (name == "node2vec-repro") {
    c.method = "node2vec";
    c.walk.walks_per_node = 10;
    c.walk.walk_length = 80;
    c.walk.p = c.walk.q = 0.25;
  } else if (name == "walklets-repro") {
    c.method = "walklets";
    c.walk.walks_per_node = 1000;
    c.walk.walk_length = 11;
    c.walklets_k = 2;
    c.train.alpha_min = 0.001;
  } else if (name == "halk-default") {
    c.method = "halk";
    c.train.alpha_min = 0.001;
    c.schedule = LevelSchedule::halk_default();
  } else {
    throw ConfigError("preset must be one of deepwalk-repro|node2vec-repro|walklets-repro|halk-default, got '" +
                      name + "'");
  }
  c.preset = name;
}

using ConfigValues = std::vector<std::pair<std::string, std::string>>;

/// Reads "key=value" lines; '#' starts a comment line. Keys are checked
/// against the field table.
inline ConfigValues read_config_values(std::istream& in) {
  ConfigValues out;
  std::string line;
  std::size_t lineno = 0;
  auto trim = [](std::string s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return std::string();
    return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
  };
  while (std::getline(in, line)) {
    ++lineno;
    if (detail::is_comment_or_blank(line)) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ParseError("expected key=value", lineno);
    std::string key = trim(line.substr(0, eq)), value = trim(line.substr(eq + 1));
    try {
      config_field(key);
    } catch (const ConfigError& e) {
      throw ConfigError(std::string(e.what()) + " (line " + std::to_string(lineno) + ")");
    }
    out.emplace_back(std::move(key), std::move(value));
  }
  return out;
}

/// Resolves defaults < preset < file values < flag values and validates.
/// The preset named by a flag wins over one named in the file.
inline RunConfig resolve_config(const ConfigValues& file, const ConfigValues& flags) {
  std::string preset;
  for (const auto* src : {&file, &flags})
    for (const auto& [k, v] : *src)
      if (k == "preset") preset = v;
  RunConfig c;
  if (!preset.empty()) apply_preset(c, preset);
  for (const auto* src : {&file, &flags})
    for (const auto& [k, v] : *src)
      if (k != "preset") set_config_value(c, k, v);
  c.validate();
  return c;
}

/// Every field as "key=value", readable by read_config_values.
inline void write_config(std::ostream& os, const RunConfig& c, const std::string& prefix = "") {
  for (const auto& f : config_fields()) os << prefix << f.key << '=' << f.get(c) << '\n';
}

inline std::string config_text(const RunConfig& c) {
  std::ostringstream os;
  write_config(os, c);
  return os.str();
}

}  // namespace halk
