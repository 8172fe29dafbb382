// Acceptance run: one PASS/FAIL line per criterion, followed by the
// measurements behind it. Exits 0 whenever every criterion was evaluated,
// so a red criterion is reported rather than hidden behind a crash; a
// nonzero exit means the harness itself broke.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <nlohmann/json.hpp>
#include <regex>
#include <sstream>
#include <string>

#include "../tests/test_util.hpp"
#include "role2vec/commands.hpp"

using namespace role2vec;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(double x, int digits = 4) {
  std::ostringstream s;
  s.precision(digits);
  s << x;
  return s.str();
}

// ---------------------------------------------------------------- 1
Outcome motif_oracle() {
  const auto t0 = std::chrono::steady_clock::now();
  Rng rng(101);
  std::size_t mismatches = 0;
  for (int rep = 0; rep < 200; ++rep) {
    const std::size_t n = 5 + rng.index(26);
    const double p = 0.1 * static_cast<double>(1 + rng.index(9));
    const Graph g = erdos_renyi(n, p, rng());
    if (!(count_motifs(g) == brute_force_motifs(g))) ++mismatches;
  }
  const double secs = seconds_since(t0);
  return {mismatches == 0 && secs < 30.0,
          "200 ER graphs, " + std::to_string(mismatches) + " mismatches, " + fmt(secs) + " s (limit 30 s)"};
}

// ---------------------------------------------------------------- 2
Outcome binning() {
  const std::vector<double> fib{1, 1, 2, 3, 5, 8, 13, 21};
  const bool example = log_bin(fib, 0.5) == std::vector<BinId>{0, 0, 0, 0, 1, 1, 2, 3};
  Rng rng(202);
  const double deltas[] = {0.01, 0.1, 0.5, 0.9, 0.99};
  std::size_t bad = 0;
  for (int rep = 0; rep < 100; ++rep) {
    std::vector<double> v(1 + rng.index(300));
    for (double& x : v) x = std::floor(std::exp(rng.uniform(0.0, 6.0)));
    const double delta = deltas[rep % 5];
    const auto bins = log_bin(v, delta);
    bool ok = true;
    std::vector<std::size_t> idx(v.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
    for (std::size_t k = 1; k < idx.size(); ++k) ok = ok && bins[idx[k - 1]] <= bins[idx[k]];
    for (std::size_t i = 0; i < v.size(); ++i)
      for (std::size_t j = 0; j < v.size(); ++j)
        if (v[i] == v[j] && i < j) ok = ok && bins[i] <= bins[j];
    // Schedule: bin b holds max(1, ceil(delta * remaining)) items.
    std::size_t remaining = v.size();
    const BinId top = *std::max_element(bins.begin(), bins.end());
    for (BinId b = 0; b <= top; ++b) {
      const auto size = static_cast<std::size_t>(std::count(bins.begin(), bins.end(), b));
      const auto want = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(delta * static_cast<double>(remaining) - 1e-9)));
      ok = ok && size == want;
      remaining -= size;
    }
    ok = ok && remaining == 0;
    if (!ok) ++bad;
  }
  return {example && bad == 0, std::string("worked example ") + (example ? "matches" : "differs") + ", " +
                                   std::to_string(bad) + "/100 random columns violate order or schedule"};
}

// ---------------------------------------------------------------- 3
Outcome samplers() {
  Rng rng(303);
  std::size_t rejected = 0;
  double min_p = 1.0;
  for (int rep = 0; rep < 50; ++rep) {
    std::vector<double> w(2 + rng.index(19));
    for (double& x : w) x = rng.uniform() < 0.15 ? 0.0 : rng.uniform(0.01, 10.0);
    w[rng.index(w.size())] += 1.0;
    const AliasTable t(w);
    std::vector<double> counts(w.size(), 0.0);
    for (int k = 0; k < 100000; ++k) counts[t.sample(rng)] += 1;
    const double total = std::accumulate(w.begin(), w.end(), 0.0);
    std::vector<double> probs(w.size());
    for (std::size_t k = 0; k < w.size(); ++k) probs[k] = w[k] / total;
    const double p = testutil::chi_square_p(counts, probs);
    min_p = std::min(min_p, p);
    if (!(p > 0.001)) ++rejected;
  }
  std::size_t differ = 0;
  WalkParams wp;
  wp.walks_per_node = 5;
  wp.walk_length = 30;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Graph g = erdos_renyi(60, 0.08, seed);
    WalkOptions opt;
    opt.seed = seed;
    const WalkCorpus first = generate_node_walks(FirstOrderSampler(g), wp, opt);
    const WalkCorpus second = generate_node_walks(SecondOrderSampler(g, wp), wp, opt);
    std::ostringstream a, b;
    write_corpus(first, a);
    write_corpus(second, b);
    if (a.str() != b.str()) ++differ;
  }
  return {rejected == 0 && differ == 0,
          std::to_string(rejected) + "/50 alias tables rejected (min p " + fmt(min_p) + "), " +
              std::to_string(differ) + "/10 unbiased second-order corpora differ from first-order"};
}

// ---------------------------------------------------------------- 4
Outcome gradients() {
  Rng rng(404);
  const double h = 1e-6;
  double worst = 0.0;
  for (int rep = 0; rep < 100; ++rep) {
    BasicEmbeddingModel<double> model(1 + rng.index(5), 1 + rng.index(8));
    for (double& x : model.alpha) x = rng.uniform(-1, 1);
    for (double& x : model.beta) x = rng.uniform(-1, 1);
    const std::size_t i = rng.index(model.num_types), j = rng.index(model.num_types);
    std::vector<std::size_t> neg(1 + rng.index(5));
    for (auto& k : neg) k = rng.index(model.num_types);
    const SgnsGradient g = sgns_gradient(model, i, j, neg);
    auto sweep = [&](std::vector<double>& params, const std::vector<double>& analytic) {
      for (std::size_t q = 0; q < params.size(); ++q) {
        const double saved = params[q];
        params[q] = saved + h;
        const double up = sgns_objective(model, i, j, neg);
        params[q] = saved - h;
        const double down = sgns_objective(model, i, j, neg);
        params[q] = saved;
        const double fd = (up - down) / (2 * h);
        const double scale = std::max({std::abs(fd), std::abs(analytic[q]), 1e-3});
        worst = std::max(worst, std::abs(fd - analytic[q]) / scale);
      }
    };
    sweep(model.alpha, g.alpha);
    sweep(model.beta, g.beta);
  }
  return {worst <= 1e-5, "worst relative error " + fmt(worst, 3) + " over 100 models (limit 1e-5)"};
}

// ---------------------------------------------------------------- 5
Outcome baseline_recovery() {
  Rng rng(505);
  WalkParams wp;
  wp.walks_per_node = 4;
  wp.walk_length = 25;
  std::size_t identity_bad = 0, image_bad = 0;
  const Graph karate = load_edge_list(testutil::karate_path());
  for (int rep = 0; rep < 20; ++rep) {
    const Graph g = rep % 2 ? karate : erdos_renyi(80, 0.06, rng());
    WalkOptions opt;
    opt.seed = rng();
    const WalkCorpus nodes = generate_node_walks(g, wp, opt);
    if (!(generate_walks(g, TypeAssignment::identity(g.num_nodes()), wp, opt) == nodes)) ++identity_bad;
    std::vector<TypeId> raw(g.num_nodes());
    const std::size_t m = 1 + rng.index(g.num_nodes());
    for (auto& t : raw) t = static_cast<TypeId>(rng.index(m));
    const TypeAssignment types = TypeAssignment::from_keys<TypeId>(raw);
    const WalkCorpus typed = generate_walks(g, types, wp, opt);
    bool same = typed.symbols.size() == nodes.symbols.size() && typed.start_nodes == nodes.start_nodes;
    for (std::size_t k = 0; same && k < nodes.symbols.size(); ++k) same = typed.symbols[k] == types[nodes.symbols[k]];
    if (!same) ++image_bad;
  }
  return {identity_bad == 0 && image_bad == 0,
          std::to_string(identity_bad) + "/20 identity corpora differ from node corpora, " +
              std::to_string(image_bad) + "/20 type corpora differ from the type image"};
}

// ---------------------------------------------------------------- 6
Outcome lemmas() {
  const auto t0 = std::chrono::steady_clock::now();
  Rng rng(606);
  double worst1 = 0.0, worst2 = 0.0;
  std::size_t graphs = 0, witness_missing = 0;
  for (int rep = 0; rep < 50; ++rep) {
    const std::size_t n = 4 + rng.index(17);
    const Graph g = erdos_renyi(n, rng.uniform(0.15, 0.6), rng());
    if (!is_connected(g)) continue;
    ++graphs;
    for (NodeId v = 0; v < g.num_nodes(); ++v) {
      const Eigen::VectorXd h = hitting_times(g, v);
      for (NodeId u = 0; u < g.num_nodes(); ++u) {
        if (u == v || g.has_edge(u, v)) continue;
        for (std::size_t t : {2u, 3u, 6u}) {
          const Lemma1Report r = check_lemma1(g, u, v, t);
          worst1 = std::max(worst1, r.identity_error);
          if (!r.holds()) ++witness_missing;
        }
        double mean = 0.0;
        for (NodeId j : g.neighbors(u)) mean += h[j];
        mean /= static_cast<double>(g.degree(u));
        worst2 = std::max(worst2, std::abs(h[u] - (1.0 + mean)) / h[u]);
      }
    }
  }
  const bool identities = worst1 <= 1e-10 && worst2 <= 1e-10 && witness_missing == 0;

  const std::size_t trials = 10000;
  const Graph path3 = testutil::path(3);
  const Graph tri = testutil::triangle();
  const Graph karate = load_edge_list(testutil::karate_path());
  const Lemma2Report m_path = check_lemma2(path3, 0, 2, trials, 61);
  const auto pair = detail::default_pair(karate);
  const Lemma2Report m_karate = check_lemma2(karate, pair->first, pair->second, trials, 62);
  const Lemma3Report l_path = check_lemma3(path3, 10, trials, 63);
  const Lemma3Report l_tri = check_lemma3(tri, 2, trials, 64);
  const Lemma3Report l_karate = check_lemma3(karate, 10, trials, 65);
  const bool bounds = m_path.markov_ok() && m_karate.markov_ok() && l_path.holds() && l_tri.holds() &&
                      l_karate.holds();
  const double secs = seconds_since(t0);
  std::ostringstream d;
  d << graphs << " connected graphs; lemma 1 identity err " << fmt(worst1, 3) << ", lemma 2 rel err " << fmt(worst2, 3)
    << ", witnesses missing " << witness_missing << "; Markov tail 3-path " << fmt(m_path.tail_prob) << ", karate "
    << fmt(m_karate.tail_prob) << " (<= 0.5 + 3se; triangle has no non-adjacent pair); lemma 3 max directed mean "
    << "3-path " << fmt(l_path.max_mean()) << "/10, triangle " << fmt(l_tri.max_mean()) << "/2, karate "
    << fmt(l_karate.max_mean()) << "/10 (3se slack per edge); " << fmt(secs) << " s (limit 60 s)";
  return {identities && bounds && secs < 60.0, d.str()};
}

// ---------------------------------------------------------------- 7
Outcome space() {
  const auto t0 = std::chrono::steady_clock::now();
  const Graph g = barabasi_albert(5000, 3, 707);
  Role2VecConfig cfg;
  cfg.phi.kind = PhiKind::concat;
  cfg.phi.features = {"x2", "x3"};
  cfg.phi.delta = 0.5;
  cfg.train.dims = 128;
  const Role2VecResult r = embed_graph(g, cfg, 7);
  const double secs = seconds_since(t0);
  const std::size_t per_node = per_node_embedding_bytes(g.num_nodes(), 128);
  const std::size_t bytes = r.bytes();
  std::ostringstream d;
  d << "BA n=5000: m=" << r.num_types() << ", model bytes " << bytes << " vs per-node " << per_node << " (ratio "
    << fmt(static_cast<double>(per_node) / static_cast<double>(bytes)) << "x, need >= 10x), full R=10 L=80 run "
    << fmt(secs) << " s (limit 120 s)";
  return {bytes * 10 <= per_node && secs < 120.0, d.str()};
}

// ---------------------------------------------------------------- 8, 9
struct LinkRun {
  std::vector<double> auc;
  double mean() const { return summarize(auc).mean; }
  double stddev() const { return summarize(auc).stddev; }
};

LinkRun link_prediction(const Graph& g, PhiKind kind, EdgeOp op) {
  EvalConfig cfg;
  cfg.embed.phi.kind = kind;
  cfg.op = op;
  LinkRun run;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) run.auc.push_back(evaluate_pipeline(g, cfg, seed).auc);
  return run;
}

std::string dolphins_path() { return std::string(ROLE2VEC_DATA_DIR) + "/soc-dolphins.mtx"; }

std::string describe(const std::string& name, const LinkRun& r) {
  return name + " " + fmt(r.mean(), 3) + " +- " + fmt(r.stddev(), 2);
}

Outcome link_criteria(const Graph& g, std::string* parity_detail, bool* parity_pass) {
  const auto t0 = std::chrono::steady_clock::now();
  const LinkRun had = link_prediction(g, PhiKind::concat, EdgeOp::hadamard);
  const LinkRun mean = link_prediction(g, PhiKind::concat, EdgeOp::mean);
  const LinkRun base = link_prediction(g, PhiKind::identity, EdgeOp::hadamard);
  int wins = 0;
  for (std::size_t k = 0; k < 10; ++k) wins += had.auc[k] >= base.auc[k];
  const double secs = seconds_since(t0);
  const bool pass = had.mean() >= 0.60 && mean.mean() >= 0.55 && wins >= 6 && secs < 300.0;
  const LinkRun fact = [&] {
    EvalConfig cfg;
    cfg.embed.phi.kind = PhiKind::factorized;
    cfg.embed.phi.rank = 10;
    LinkRun run;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) run.auc.push_back(evaluate_pipeline(g, cfg, seed).auc);
    return run;
  }();
  const double gap = std::abs(had.mean() - fact.mean());
  *parity_pass = gap <= 0.12;
  *parity_detail = describe("concat", had) + ", " + describe("factorized r=10", fact) + ", gap " + fmt(gap, 3) +
                   " (limit 0.12)";
  return {pass, describe("hadamard", had) + " (need 0.60), " + describe("mean", mean) + " (need 0.55), " +
                    describe("identity baseline", base) + ", role2vec >= baseline on " + std::to_string(wins) +
                    "/10 seeds (need 6), " + fmt(secs) + " s (limit 300 s)"};
}

// ---------------------------------------------------------------- 10
Outcome determinism() {
  namespace fs = std::filesystem;
  testutil::TempDir dir;
  auto run = [&](const std::string& command, const std::string& sub) {
    RunConfig cfg;
    cfg.command = command;
    cfg.input = testutil::karate_path();
    cfg.output = dir.file(sub);
    cfg.seed = 42;
    cfg.threads = 1;
    cfg.repeats = 3;
    cfg.write_corpus = true;
    return run_command(cfg);
  };
  for (const char* sub : {"embed_a", "embed_b"}) run("embed", sub);
  for (const char* sub : {"eval_a", "eval_b"}) run("eval", sub);

  // Wall-clock fields are the only legitimately varying content.
  auto masked = [&](const std::string& sub, const std::string& file) {
    const std::string text = testutil::slurp(dir.file(sub) + "/" + file);
    if (file == "manifest.json") {
      auto m = nlohmann::ordered_json::parse(text);
      m.erase("timings_ms");
      m["config"].erase("output");
      return m.dump();
    }
    if (file == "config.txt") return std::regex_replace(text, std::regex("output = [^\n]*\n"), "");
    if (file == "eval.tsv") return std::regex_replace(text, std::regex("\t[^\t\n]*\n"), "\n");
    return text;
  };
  std::vector<std::string> differing;
  std::size_t compared = 0;
  for (const auto& [a, b] : {std::pair<std::string, std::string>{"embed_a", "embed_b"}, {"eval_a", "eval_b"}}) {
    for (const auto& entry : fs::directory_iterator(dir.file(a))) {
      const std::string name = entry.path().filename().string();
      ++compared;
      if (!fs::exists(dir.file(b) + "/" + name) || masked(a, name) != masked(b, name)) differing.push_back(name);
    }
  }
  std::string d = std::to_string(compared) + " files compared (timing fields masked)";
  for (const auto& f : differing) d += ", differs: " + f;
  return {differing.empty() && compared >= 7, d};
}

}  // namespace

int main() {
  warning_handler() = [](std::string_view) {};
  std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"1 motif oracle equivalence", motif_oracle},
      {"2 binning conformance", binning},
      {"3 sampler correctness", samplers},
      {"4 gradient check", gradients},
      {"5 baseline recovery", baseline_recovery},
      {"6 lemma validation", lemmas},
      {"7 space efficiency", space},
  };

  int failed = 0;
  auto report = [&](const std::string& name, const Outcome& o) {
    std::cout << (o.pass ? "PASS" : "FAIL") << "  criterion " << name << "  [" << o.detail << "]" << std::endl;
    failed += !o.pass;
  };
  try {
    for (const auto& [name, fn] : criteria) report(name, fn());

    std::string parity;
    bool parity_pass = false;
    if (std::filesystem::exists(dolphins_path())) {
      const Graph dolphins = load_edge_list(dolphins_path());
      report("8 link prediction (soc-dolphins)", link_criteria(dolphins, &parity, &parity_pass));
      report("9 factorized parity (soc-dolphins)", {parity_pass, parity});
    } else {
      const std::string missing = "dataset " + dolphins_path() + " is not available in this environment";
      // The same protocol on the bundled karate graph, for reference only;
      // it does not stand in for the criterion.
      const Graph karate = load_edge_list(testutil::karate_path());
      bool proxy_parity = false;
      const Outcome proxy = link_criteria(karate, &parity, &proxy_parity);
      report("8 link prediction (soc-dolphins)",
             {false, missing + "; karate reference run: " + proxy.detail +
                         (proxy.pass ? " (thresholds met)" : " (thresholds not met)")});
      report("9 factorized parity (soc-dolphins)",
             {false, missing + "; karate reference run: " + parity +
                         (proxy_parity ? " (within limit)" : " (outside limit)")});
    }
    report("10 end-to-end determinism", determinism());
  } catch (const std::exception& e) {
    std::cout << "ERROR  acceptance harness aborted: " << e.what() << std::endl;
    return 2;
  }
  std::cout << (10 - failed) << "/10 criteria passed" << std::endl;
  return 0;
}
