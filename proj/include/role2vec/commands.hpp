#pragma once

#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <memory>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "role2vec/config.hpp"
#include "role2vec/embedding.hpp"
#include "role2vec/evaluation.hpp"
#include "role2vec/features.hpp"
#include "role2vec/graph.hpp"
#include "role2vec/motifs.hpp"
#include "role2vec/phi.hpp"
#include "role2vec/pipeline.hpp"
#include "role2vec/theory.hpp"

namespace role2vec {

namespace detail {

// Output sink: a file inside cfg.output, or stdout when output is "-".
class Sink {
 public:
  Sink(const RunConfig& cfg, const std::string& filename) {
    if (cfg.output == "-") {
      out_ = &std::cout;
      return;
    }
    std::filesystem::create_directories(cfg.output);
    path_ = (std::filesystem::path(cfg.output) / filename).string();
    file_ = std::make_unique<std::ofstream>(path_);
    if (!*file_) throw IoError("cannot write '" + path_ + "'");
    out_ = file_.get();
  }
  std::ostream& stream() { return *out_; }
  const std::string& path() const { return path_; }
  void close() {
    if (!file_) return;
    file_->close();
    if (!*file_) throw IoError("failed writing '" + path_ + "'");
  }

 private:
  std::ostream* out_ = nullptr;
  std::unique_ptr<std::ofstream> file_;
  std::string path_;
};

inline void write_file(const std::string& dir, const std::string& name, const std::string& text) {
  std::filesystem::create_directories(dir);
  const std::string path = (std::filesystem::path(dir) / name).string();
  std::ofstream out(path);
  out << text;
  out.close();
  if (!out) throw IoError("cannot write '" + path + "'");
}

inline Graph load_input(const RunConfig& cfg) {
  if (cfg.input.empty()) throw ParameterError("no input graph given (--input)");
  return load_edge_list(cfg.input);
}

inline nlohmann::ordered_json config_json(const RunConfig& cfg) {
  nlohmann::ordered_json j;
  RunConfig::visit(cfg, [&](const char* name, const auto& value) { j[name] = config_io::format(value); });
  return j;
}

inline std::string tsv_number(double x) { return format_number(x); }

}  // namespace detail

/// Per-node motif counts (plus any attribute columns) as TSV.
inline int cmd_motifs(const RunConfig& cfg) {
  cfg.validate();
  const Graph g = detail::load_input(cfg);
  FeatureMatrix x = structural_features(g, cfg.phi_config(), cfg.threads);
  if (cfg.features) x = x.select(*cfg.features);
  detail::Sink sink(cfg, "motifs.tsv");
  write_features_tsv(x, g, sink.stream());
  sink.close();
  return 0;
}

/// Full embedding run: types, walks, SGNS. Writes embedding.txt (alpha),
/// context.txt (beta), types.tsv, config.txt and manifest.json.
inline int cmd_embed(const RunConfig& cfg) {
  cfg.validate();
  if (cfg.output == "-") throw ParameterError("embed writes several files; --output must be a directory");
  const Graph g = detail::load_input(cfg);
  const Role2VecConfig rc = cfg.role2vec_config();

  // Same stages as embed_graph, kept inline so the corpus can be exported.
  Role2VecResult res;
  auto t0 = std::chrono::steady_clock::now();
  res.types = compute_types(g, rc.phi, derive_seed(cfg.seed, 0x7e5), cfg.threads);
  res.timings.types_ms = detail::elapsed_ms(t0);
  t0 = std::chrono::steady_clock::now();
  const WalkCorpus corpus =
      generate_walks(g, res.types, rc.walk, WalkOptions{derive_seed(cfg.seed, 0x3a1c), cfg.threads});
  res.timings.walks_ms = detail::elapsed_ms(t0);
  t0 = std::chrono::steady_clock::now();
  TrainConfig tc = rc.train;
  tc.seed = derive_seed(cfg.seed, 0x5e9);
  res.model = train(corpus, res.types.num_types(), tc);
  res.timings.train_ms = detail::elapsed_ms(t0);

  std::vector<std::string> outputs;
  auto emit = [&](const std::string& name, auto&& writer) {
    std::ostringstream s;
    writer(s);
    detail::write_file(cfg.output, name, s.str());
    outputs.push_back(name);
  };
  emit("embedding.txt", [&](std::ostream& s) { write_embedding(res.model, s); });
  emit("context.txt", [&](std::ostream& s) { write_context(res.model, s); });
  emit("types.tsv", [&](std::ostream& s) { write_types_tsv(res.types, g, s); });
  if (cfg.write_corpus) emit("corpus.txt", [&](std::ostream& s) { write_corpus(corpus, s); });
  emit("config.txt", [&](std::ostream& s) { s << to_text(cfg); });

  nlohmann::ordered_json m;
  m["command"] = "embed";
  m["config"] = detail::config_json(cfg);
  m["graph"] = {{"path", cfg.input}, {"num_nodes", g.num_nodes()}, {"num_edges", g.num_edges()}};
  m["num_types"] = res.types.num_types();
  m["dims"] = res.model.dims;
  m["num_walks"] = corpus.num_walks();
  m["embedding_bytes"] = res.bytes();
  m["per_node_embedding_bytes"] = per_node_embedding_bytes(g.num_nodes(), res.model.dims);
  m["timings_ms"] = {{"types", res.timings.types_ms},
                     {"walks", res.timings.walks_ms},
                     {"train", res.timings.train_ms},
                     {"total", res.timings.total()}};
  m["outputs"] = outputs;
  detail::write_file(cfg.output, "manifest.json", m.dump(2) + "\n");
  return 0;
}

/// Link prediction over `repeats` seeds (seed, seed + 1, ...). One TSV row
/// per seed, then "#"-prefixed mean and standard deviation of the AUC.
inline int cmd_eval(const RunConfig& cfg) {
  cfg.validate();
  const Graph g = detail::load_input(cfg);
  const EvalConfig ec = cfg.eval_config();
  detail::Sink sink(cfg, "eval.tsv");
  auto& out = sink.stream();
  out << "seed\toperator\tphi\tm\tD\tauc\tl2\tembedding_bytes\truntime_ms\n";
  std::vector<double> aucs;
  for (std::size_t k = 0; k < cfg.repeats; ++k) {
    const std::uint64_t seed = cfg.seed + k;
    const EvalReport r = evaluate_pipeline(g, ec, seed);
    aucs.push_back(r.auc);
    out << seed << '\t' << to_string(cfg.op) << '\t' << to_string(cfg.phi) << '\t' << r.num_types << '\t' << r.dims
        << '\t' << detail::tsv_number(r.auc) << '\t' << detail::tsv_number(r.l2) << '\t' << r.embedding_bytes
        << '\t' << detail::tsv_number(std::round(r.runtime_ms * 1000.0) / 1000.0) << '\n';
  }
  const Summary s = summarize(aucs);
  out << "# auc_mean\t" << detail::tsv_number(s.mean) << "\n# auc_std\t" << detail::tsv_number(s.stddev) << '\n';
  sink.close();
  if (cfg.output != "-") std::cerr << "AUC " << s.mean << " +- " << s.stddev << " over " << cfg.repeats << " seeds\n";
  return 0;
}

namespace detail {

// Default pair for lemma checks: u is the lowest id in the largest
// component, v the first node at maximum distance from u.
inline std::optional<std::pair<NodeId, NodeId>> default_pair(const Graph& g) {
  const auto comp = connected_components(g);
  std::vector<std::size_t> size(g.num_nodes(), 0);
  for (auto c : comp) ++size[c];
  const std::size_t big = static_cast<std::size_t>(std::max_element(size.begin(), size.end()) - size.begin());
  NodeId u = 0;
  while (comp[u] != big) ++u;
  std::vector<std::size_t> dist(g.num_nodes(), std::numeric_limits<std::size_t>::max());
  std::vector<NodeId> frontier{u};
  dist[u] = 0;
  for (std::size_t k = 0; k < frontier.size(); ++k) {
    for (NodeId w : g.neighbors(frontier[k])) {
      if (dist[w] == std::numeric_limits<std::size_t>::max()) {
        dist[w] = dist[frontier[k]] + 1;
        frontier.push_back(w);
      }
    }
  }
  NodeId v = u;
  for (NodeId w : frontier) {
    if (dist[w] > dist[v]) v = w;
  }
  if (dist[v] < 2) return std::nullopt;
  return std::pair{u, v};
}

inline NodeId resolve(const Graph& g, std::uint64_t original) {
  auto id = g.find_node(original);
  if (!id) throw ParameterError("node " + std::to_string(original) + " is not in the graph");
  return *id;
}

}  // namespace detail

/// Lemma checks. TSV columns: lemma, quantity, estimate, exact, bound,
/// pass. Returns 1 when any check fails.
inline int cmd_analyze(const RunConfig& cfg) {
  cfg.validate();
  const Graph g = detail::load_input(cfg);
  detail::Sink sink(cfg, "analyze.tsv");
  auto& out = sink.stream();
  out << "lemma\tquantity\testimate\texact\tbound\tpass\n";
  bool all_pass = true;
  auto row = [&](const std::string& lemma, const std::string& what, double est, double exact, const std::string& bound,
                 bool pass) {
    all_pass = all_pass && pass;
    out << lemma << '\t' << what << '\t' << detail::tsv_number(est) << '\t' << detail::tsv_number(exact) << '\t'
        << bound << '\t' << (pass ? "pass" : "FAIL") << '\n';
  };
  const bool want1 = cfg.lemma == "1" || cfg.lemma == "all";
  const bool want2 = cfg.lemma == "2" || cfg.lemma == "all";
  const bool want3 = cfg.lemma == "3" || cfg.lemma == "all";

  std::optional<std::pair<NodeId, NodeId>> pair;
  if (cfg.u && cfg.v) {
    pair = std::pair{detail::resolve(g, *cfg.u), detail::resolve(g, *cfg.v)};
  } else if (cfg.u || cfg.v) {
    throw ParameterError("give both --u and --v, or neither");
  } else {
    pair = detail::default_pair(g);
  }
  if ((want1 || want2) && !pair) {
    std::cerr << "no non-adjacent connected pair; lemmas 1 and 2 skipped\n";
  }
  if (want1 && pair) {
    const auto [u, v] = *pair;
    const Lemma1Report r = check_lemma1(g, u, v, cfg.t);
    const auto sampled = sampled_first_passage(g, u, v, cfg.t, cfg.trials, cfg.seed);
    row("1", "r_uv^t sampled", sampled[cfg.t], r.r_uv, "-", true);
    row("1", "neighbor mean of r_jv^(t-1)", r.neighbor_mean, r.r_uv, "1e-10",
        r.identity_error <= 1e-10);
    row("1", "witness r_jv^(t-1), j=" + std::to_string(g.original_id(r.witness)), r.witness_value, r.r_uv,
        ">= exact", r.holds());
  }
  if (want2 && pair) {
    const auto [u, v] = *pair;
    const Lemma2Report r = check_lemma2(g, u, v, cfg.trials, cfg.seed);
    row("2", "1 + neighbor mean of h_jv", 1.0 + r.neighbor_mean, r.h_uv, "1e-10",
        r.identity_error <= 1e-10 * std::max(1.0, r.h_uv));
    row("2", "sampled mean hitting time", r.mc_mean_time, r.h_uv, "-", true);
    row("2", "Pr(T >= 2 h_uv)", r.tail_prob, 0.5, detail::tsv_number(0.5 + 3.0 * r.tail_stderr), r.markov_ok());
  }
  if (want3) {
    const Lemma3Report r = check_lemma3(g, cfg.lemma_length, cfg.trials, cfg.seed);
    std::size_t worst = 0;
    double undirected = 0.0;
    for (std::size_t e = 0; e < r.mean_visits.size(); ++e) {
      if (r.mean_visits[e] - r.stderr_visits[e] * 3.0 > r.mean_visits[worst] - r.stderr_visits[worst] * 3.0) worst = e;
    }
    for (auto [a, b] : g.edges()) undirected = std::max(undirected, r.undirected_mean(g, a, b));
    const double len = static_cast<double>(cfg.lemma_length);
    row("3", "max directed traversals", r.max_mean(), *std::max_element(r.exact_visits.begin(), r.exact_visits.end()),
        detail::tsv_number(len + 3.0 * r.stderr_visits[worst]), r.holds());
    row("3", "max undirected traversals", undirected, 2.0 * len, "-", true);
  }
  sink.close();
  return all_pass ? 0 : 1;
}

/// Cartesian grid over delta, p, q and optionally the default feature
/// subsets; each cell is a `repeats`-seed link-prediction run.
inline int cmd_sweep(const RunConfig& cfg) {
  cfg.validate();
  const Graph g = detail::load_input(cfg);
  const std::vector<double> deltas = cfg.sweep_delta.empty() ? std::vector<double>{cfg.delta} : cfg.sweep_delta;
  const std::vector<double> ps = cfg.sweep_pq.empty() ? std::vector<double>{cfg.p} : cfg.sweep_pq;
  const std::vector<double> qs = cfg.sweep_pq.empty() ? std::vector<double>{cfg.q} : cfg.sweep_pq;
  std::vector<std::vector<std::string>> subsets;
  if (cfg.sweep_features) subsets = default_feature_subsets();
  else subsets.push_back(cfg.phi_config().features);

  detail::Sink sink(cfg, "sweep.tsv");
  auto& out = sink.stream();
  out << "delta\tp\tq\tfeatures\tm_mean\tauc_mean\tauc_std\n";
  for (double delta : deltas) {
    for (double p : ps) {
      for (double q : qs) {
        for (const auto& subset : subsets) {
          RunConfig c = cfg;
          c.delta = delta;
          c.p = p;
          c.q = q;
          c.features = subset;
          const EvalConfig ec = c.eval_config();
          std::vector<double> aucs;
          double types = 0.0;
          for (std::size_t k = 0; k < c.repeats; ++k) {
            const EvalReport r = evaluate_pipeline(g, ec, c.seed + k);
            aucs.push_back(r.auc);
            types += static_cast<double>(r.num_types);
          }
          const Summary s = summarize(aucs);
          out << detail::tsv_number(delta) << '\t' << detail::tsv_number(p) << '\t' << detail::tsv_number(q) << '\t'
              << join_features(subset) << '\t' << detail::tsv_number(types / static_cast<double>(c.repeats)) << '\t'
              << detail::tsv_number(s.mean) << '\t' << detail::tsv_number(s.stddev) << '\n';
          out.flush();
        }
      }
    }
  }
  sink.close();
  return 0;
}

inline int run_command(const RunConfig& cfg) {
  if (cfg.command == "motifs") return cmd_motifs(cfg);
  if (cfg.command == "embed") return cmd_embed(cfg);
  if (cfg.command == "eval") return cmd_eval(cfg);
  if (cfg.command == "analyze") return cmd_analyze(cfg);
  if (cfg.command == "sweep") return cmd_sweep(cfg);
  throw ParameterError("unknown command '" + cfg.command + "'");
}

}  // namespace role2vec
