// role2vec command-line front end.
//
//   role2vec motifs  --input g.edges [--features x2,x3] [--output dir|-]
//   role2vec embed   --input g.edges --output dir [--phi concat --features x2,x3 --delta 0.5 ...]
//   role2vec eval    --input g.edges [--repeats 10 --op hadamard ...]
//   role2vec analyze --input g.edges [--lemma all --u 0 --v 5 --t 4 ...]
//   role2vec sweep   --input g.edges [--sweep-delta ... --sweep-pq ... --sweep-features]
//
// Every option can also come from a "key = value" file given with --config;
// flags on the command line win. Exit codes: 0 success, 1 a checked
// property failed or bad usage, 2 and up per error class (see error.hpp).

#include <CLI11.hpp>

#include <iostream>
#include <map>
#include <string>

#include "role2vec/commands.hpp"

namespace {

const std::map<std::string, std::string>& help_text() {
  static const std::map<std::string, std::string> h{
      {"input", "edge list (two integer ids per line; '#' and '%' lines skipped)"},
      {"attributes", "extra per-node attribute TSV appended to the motif counts"},
      {"types", "vertex -> type TSV for --phi external"},
      {"output", "output directory, or '-' for stdout (single-file commands)"},
      {"phi", "type mapping: concat, factorized, identity, external"},
      {"features", "comma-separated feature columns, e.g. x2,x3"},
      {"delta", "logarithmic bin fraction in (0,1)"},
      {"combine", "how binned features combine into a type: concat or sum"},
      {"rank", "factorization rank (factorized phi)"},
      {"num_types", "number of k-means types (factorized phi); auto = as many as concat"},
      {"walks", "walks per node R"},
      {"length", "walk length L"},
      {"window", "skip-gram window"},
      {"dims", "embedding dimension D"},
      {"p", "return parameter"},
      {"q", "in-out parameter"},
      {"negatives", "negative samples per positive pair"},
      {"epochs", "passes over the corpus"},
      {"learning_rate", "initial SGD step size"},
      {"seed", "master seed"},
      {"repeats", "eval/sweep: number of seeds"},
      {"threads", "worker threads; 1 gives bit-reproducible output"},
      {"op", "edge operator: hadamard or mean"},
      {"test_fraction", "fraction of edges held out"},
      {"train_fraction", "fraction of labeled pairs used to select and fit the classifier"},
      {"allow_isolation", "let the edge split isolate nodes"},
      {"lemma", "analyze: 1, 2, 3 or all"},
      {"u", "analyze: start node (original id)"},
      {"v", "analyze: target node (original id)"},
      {"t", "analyze: first-passage time for lemma 1"},
      {"lemma_length", "analyze: walk length for lemma 3"},
      {"trials", "analyze: Monte-Carlo trials"},
      {"write_corpus", "embed: also write corpus.txt"},
      {"sweep_delta", "sweep: delta grid"},
      {"sweep_pq", "sweep: grid for both p and q (empty = use --p/--q)"},
      {"sweep_features", "sweep: also iterate over the default feature subsets"},
  };
  return h;
}

std::string flag_name(std::string key) {
  for (char& c : key) {
    if (c == '_') c = '-';
  }
  return "--" + key;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Role-based graph embeddings from attributed random walks"};
  app.require_subcommand(1);
  std::string config_path;
  app.add_option("--config", config_path, "key = value file; command-line flags override it");

  // One string slot per config key, applied after parsing only if given.
  role2vec::RunConfig defaults;
  std::map<std::string, std::string> raw;
  std::map<std::string, CLI::Option*> opts;
  role2vec::RunConfig::visit(defaults, [&](const char* name, const auto& value) {
    const std::string key = name;
    if (key == "command") return;
    const std::string help = help_text().count(key) ? help_text().at(key) : "";
    const std::string shown = role2vec::config_io::format(value);
    if constexpr (std::is_same_v<std::decay_t<decltype(value)>, bool>) {
      opts[key] = app.add_flag(flag_name(key) + "{true}", raw[key], help);
    } else {
      opts[key] = app.add_option(flag_name(key), raw[key], help)->default_str(shown);
    }
  });

  for (const char* sub : {"motifs", "embed", "eval", "analyze", "sweep"}) {
    app.add_subcommand(sub, std::string("run ") + sub)->fallthrough();
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // --help exits 0; every other usage error collapses to 1.
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    role2vec::RunConfig cfg;
    if (!config_path.empty()) cfg = role2vec::load_config(config_path);
    cfg.command = app.get_subcommands().front()->get_name();
    role2vec::RunConfig::visit(cfg, [&](const char* name, auto& member) {
      auto it = opts.find(name);
      if (it == opts.end() || it->second->count() == 0) return;
      try {
        role2vec::config_io::parse(raw[name], member);
      } catch (const role2vec::ParameterError& e) {
        throw role2vec::ParameterError(flag_name(name) + ": " + e.what());
      }
    });
    return role2vec::run_command(cfg);
  } catch (const role2vec::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return e.exit_code();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
