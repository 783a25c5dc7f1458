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

// Command-line driver. run_cli() is the whole program; tools/halk.cpp only
// forwards argv so tests can call it in-process.

#pragma once

#include <fstream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "halk/config.hpp"
#include "halk/edgeops.hpp"
#include "halk/evalkit.hpp"
#include "halk/graph.hpp"
#include "halk/io.hpp"
#include "halk/sgns.hpp"
#include "halk/walker.hpp"

namespace halk {

inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntime = 1;
inline constexpr int kExitUsage = 2;

namespace cli {

inline std::ifstream open_in(const std::string& path, const std::string& what) {
  if (path.empty()) throw ConfigError(what + " is required");
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + what + " '" + path + "'");
  return in;
}

inline std::ofstream open_out(const std::string& path, const std::string& what) {
  if (path.empty()) throw ConfigError(what + " is required");
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + what + " '" + path + "'");
  return out;
}

inline Graph load_graph(const RunConfig& c, std::ostream& log) {
  auto in = open_in(c.input, "--input");
  EdgeListStats st;
  Graph g = load_edge_list(in, c.directed, &st);
  log << "loaded " << c.input << ": " << g.num_nodes() << " nodes, " << g.num_edges()
      << " edges from " << st.edge_records << " records\n";
  if (!c.preprocess) return g;
  auto r = preprocess(g);
  if (r.self_loops_removed || r.isolates_removed)
    log << "preprocess: removed " << r.self_loops_removed << " self-loops and "
        << r.isolates_removed << " isolated nodes\n";
  return std::move(r.graph);
}

/// Trains the configured method on `g` and returns one row per node.
inline DenseMatrix train_embedding(const RunConfig& c, const Graph& g, std::ostream& log) {
  WalkConfig wc = c.walk;
  if (c.method == "random") {
    log << "random embeddings, dim " << c.train.dim << '\n';
    return init_model<double>(g.num_nodes(), c.train.dim, c.train.seed).phi_matrix();
  }
  if (c.method == "deepwalk" || c.method == "halk" || c.method == "walklets") {
    if (wc.biased()) log << c.method << ": ignoring p/q, walks are uniform\n";
    wc.p = wc.q = 1.0;
  }
  log << c.method << ": sampling " << wc.walks_per_node << " walks of length " << wc.walk_length
      << " per node\n";
  const WalkCorpus corpus = sample_walks(g, wc);
  log << c.method << ": training on " << corpus.total_tokens() << " tokens\n";
  if (c.method == "halk") return train_halk_on<float>(corpus, g.num_nodes(), c.train, c.schedule).phi_matrix();
  if (c.method == "walklets")
    return train_walklets_on<float>(corpus, g.num_nodes(), c.train, c.walklets_k, c.train.dim).embedding;
  auto model = init_model<float>(g.num_nodes(), c.train.dim, c.train.seed);
  train(model, corpus, c.train);
  return model.phi_matrix();
}

inline DenseMatrix obtain_embedding(const RunConfig& c, const Graph& g, std::ostream& log) {
  if (c.embeddings.empty()) return train_embedding(c, g, log);
  auto in = open_in(c.embeddings, "--embeddings");
  const EmbeddingTable t = read_embeddings(in);
  log << "read " << t.num_nodes() << " embeddings of dim " << t.dim() << '\n';
  return align_embeddings(t, g);
}

inline void write_sidecar(const RunConfig& c, const std::string& path) {
  auto out = open_out(path + ".config", "config sidecar");
  write_config(out, c);
}

inline void emit_report(const RunConfig& c, const EvalReport& rep, std::ostream& out) {
  auto emit = [&](std::ostream& os) {
    write_config(os, c, "# ");
    rep.write_table(os);
    rep.write_summary(os);
  };
  emit(out);
  if (!c.output.empty()) {
    auto f = open_out(c.output, "--output");
    emit(f);
  }
  if (!c.report_csv.empty()) {
    auto f = open_out(c.report_csv, "--report-csv");
    rep.write_csv(f);
  }
}

inline int execute(const RunConfig& c, std::ostream& out, std::ostream& log) {
  const Graph g = load_graph(c, log);
  if (c.command == "walk") {
    WalkConfig wc = c.walk;
    if (c.method != "node2vec") wc.p = wc.q = 1.0;
    const WalkCorpus corpus = sample_walks(g, wc);
    auto f = open_out(c.output, "--output");
    write_corpus(f, corpus, g);
    write_sidecar(c, c.output);
    log << "wrote " << corpus.size() << " walks to " << c.output << '\n';
    return kExitOk;
  }
  if (c.command == "embed") {
    auto f = open_out(c.output, "--output");
    write_embeddings(f, g.names(), train_embedding(c, g, log));
    write_sidecar(c, c.output);
    log << "wrote embeddings to " << c.output << '\n';
    return kExitOk;
  }
  if (c.command == "eval-nc") {
    auto in = open_in(c.labels, "--labels");
    LabelLoadStats ls;
    const LabelTable labels = load_labels(in, g, &ls);
    if (ls.unknown_nodes) log << "labels: skipped " << ls.unknown_nodes << " unknown nodes\n";
    const DenseMatrix emb = obtain_embedding(c, g, log);
    EvalReport rep = node_classification_eval(emb, labels, c.split(), c.logreg());
    rep.add_meta("method", c.embeddings.empty() ? c.method : c.embeddings);
    rep.add_meta("dataset", c.input);
    emit_report(c, rep, out);
    return kExitOk;
  }
  if (c.command == "eval-lp") {
    const LinkPredDataset ds = make_lp_dataset(g, c.removal_fraction, derive_seed(c.seed(), 0x1B));
    if (!c.residual_output.empty()) {
      auto f = open_out(c.residual_output, "--residual-output");
      for (const auto& [u, v] : ds.residual.edges()) f << g.name(u) << ' ' << g.name(v) << '\n';
      log << "wrote residual graph to " << c.residual_output << '\n';
    }
    // Training sees only the residual graph; ids are shared with g.
    const DenseMatrix emb = c.embeddings.empty() ? train_embedding(c, ds.residual, log)
                                                 : obtain_embedding(c, g, log);
    EvalReport rep = link_prediction_eval(emb, ds, c.edge_op(), c.split(), c.logreg());
    rep.add_meta("method", c.embeddings.empty() ? c.method : c.embeddings);
    rep.add_meta("dataset", c.input);
    emit_report(c, rep, out);
    return kExitOk;
  }
  if (c.command == "eval-sp") {
    const SpDataset ds = make_sp_dataset(g, c.sp_pairs, c.max_hops, derive_seed(c.seed(), 0x5B), c.sp_cap);
    const DenseMatrix emb = obtain_embedding(c, g, log);
    EvalReport rep = shortest_path_eval(emb, ds, c.edge_op(), c.split());
    rep.add_meta("method", c.embeddings.empty() ? c.method : c.embeddings);
    rep.add_meta("dataset", c.input);
    std::ostringstream counts;
    for (std::size_t d = 1; d < ds.per_distance.size(); ++d)
      counts << (d > 1 ? " " : "") << d << ':' << ds.per_distance[d];
    rep.add_meta("pairs_per_distance", counts.str());
    emit_report(c, rep, out);
    return kExitOk;
  }
  throw ConfigError("unknown command '" + c.command + "'");
}

}  // namespace cli

/// Parses argv, resolves the configuration and runs the command. Returns 0 on
/// success, 2 on usage errors and 1 on runtime failures.
inline int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Random-walk graph embeddings and their evaluation"};
  app.require_subcommand(1);
  app.fallthrough();
  std::string config_path;
  app.add_option("--config", config_path, "key=value file; flags override its values");
  std::map<std::string, std::string> values;
  std::map<std::string, bool> flags;
  std::vector<std::pair<std::string, CLI::Option*>> opts;
  const RunConfig defaults;
  for (const auto& f : config_fields()) {
    if (f.key == "command") continue;
    const std::string help = f.help + " [default: " + f.get(defaults) + "]";
    if (f.is_flag)
      opts.emplace_back(f.key, app.add_flag("--" + f.key + ",!--no-" + f.key, flags[f.key], help));
    else
      opts.emplace_back(f.key, app.add_option("--" + f.key, values[f.key], help));
  }
  app.add_subcommand("walk", "sample random walks and write a corpus");
  app.add_subcommand("embed", "train embeddings and write them as text");
  app.add_subcommand("eval-nc", "node classification with one-vs-rest logistic regression");
  app.add_subcommand("eval-lp", "link prediction on held-out edges (AUC)");
  app.add_subcommand("eval-sp", "shortest-path distance regression (MAE/MRE)");

  std::vector<std::string> args;
  for (int i = argc - 1; i > 0; --i) args.emplace_back(argv[i]);
  try {
    app.parse(args);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  RunConfig cfg;
  try {
    ConfigValues file;
    if (!config_path.empty()) {
      auto in = cli::open_in(config_path, "--config");
      file = read_config_values(in);
    }
    ConfigValues cmdline;
    cmdline.emplace_back("command", app.get_subcommands().front()->get_name());
    for (const auto& [key, opt] : opts) {
      if (opt->count() == 0) continue;
      cmdline.emplace_back(key, config_field(key).is_flag ? (flags[key] ? "true" : "false")
                                                          : values[key]);
    }
    cfg = resolve_config(file, cmdline);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitRuntime;
  }

  try {
    return cli::execute(cfg, out, err);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
}

}  // namespace halk
