#pragma once

#include <charconv>
#include <cstdint>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "role2vec/error.hpp"
#include "role2vec/evaluation.hpp"
#include "role2vec/features.hpp"
#include "role2vec/phi.hpp"
#include "role2vec/pipeline.hpp"

namespace role2vec {

/// All knobs of a CLI run. Serialized as "key = value" lines; optional
/// values are written as "auto" when unset.
struct RunConfig {
  std::string command = "embed";
  std::string input;
  std::string attributes;
  std::string types;              // external phi
  std::string output = ".";

  PhiKind phi = PhiKind::concat;
  std::optional<std::vector<std::string>> features;  // phi default x2,x3; motifs default all
  double delta = 0.5;
  CombineOp combine = CombineOp::concat;
  std::optional<std::size_t> rank;        // default 10
  std::optional<std::size_t> num_types;   // default: number of concat types

  std::size_t walks = 10;         // R
  std::size_t length = 80;        // L
  std::size_t window = 10;        // omega
  std::size_t dims = 128;         // D
  double p = 1.0;
  double q = 1.0;
  std::size_t negatives = 5;
  std::size_t epochs = 1;
  double learning_rate = 0.025;

  std::uint64_t seed = 1;
  std::size_t repeats = 10;
  unsigned threads = 1;

  EdgeOp op = EdgeOp::hadamard;
  double test_fraction = 0.5;
  double train_fraction = 0.1;
  bool allow_isolation = false;

  std::string lemma = "all";      // 1, 2, 3 or all
  std::optional<std::uint64_t> u;  // original ids; auto picks a pair
  std::optional<std::uint64_t> v;
  std::size_t t = 4;
  std::size_t lemma_length = 10;
  std::size_t trials = 10000;
  bool write_corpus = false;      // embed: also write the walk corpus

  std::vector<double> sweep_delta{0.01, 0.1, 0.5, 0.9, 0.99};
  std::vector<double> sweep_pq{0.25, 0.5, 1.0, 2.0, 4.0};
  bool sweep_features = false;    // also sweep the default feature subsets

  friend bool operator==(const RunConfig&, const RunConfig&) = default;

  /// Calls f(name, member) for every field, in file order.
  template <typename Self, typename F>
  static void visit(Self& c, F&& f) {
    f("command", c.command);
    f("input", c.input);
    f("attributes", c.attributes);
    f("types", c.types);
    f("output", c.output);
    f("phi", c.phi);
    f("features", c.features);
    f("delta", c.delta);
    f("combine", c.combine);
    f("rank", c.rank);
    f("num_types", c.num_types);
    f("walks", c.walks);
    f("length", c.length);
    f("window", c.window);
    f("dims", c.dims);
    f("p", c.p);
    f("q", c.q);
    f("negatives", c.negatives);
    f("epochs", c.epochs);
    f("learning_rate", c.learning_rate);
    f("seed", c.seed);
    f("repeats", c.repeats);
    f("threads", c.threads);
    f("op", c.op);
    f("test_fraction", c.test_fraction);
    f("train_fraction", c.train_fraction);
    f("allow_isolation", c.allow_isolation);
    f("lemma", c.lemma);
    f("u", c.u);
    f("v", c.v);
    f("t", c.t);
    f("lemma_length", c.lemma_length);
    f("trials", c.trials);
    f("write_corpus", c.write_corpus);
    f("sweep_delta", c.sweep_delta);
    f("sweep_pq", c.sweep_pq);
    f("sweep_features", c.sweep_features);
  }

  void validate() const {
    PhiConfig pc = phi_config();
    if (phi != PhiKind::external) pc.types_path = "-";
    pc.validate();
    if ((phi == PhiKind::identity || phi == PhiKind::external) && (rank || num_types)) {
      throw ParameterError("rank and num_types apply only to factorized phi");
    }
    if (phi == PhiKind::external && types.empty()) throw ParameterError("external phi needs --types");
    walk_params().validate();
    train_config().validate();
    require(repeats >= 1, "repeats must be >= 1");
    require(threads >= 1, "threads must be >= 1");
    require(test_fraction > 0.0 && test_fraction < 1.0, "test fraction must lie in (0, 1)");
    require(train_fraction > 0.0 && train_fraction < 1.0, "train fraction must lie in (0, 1)");
    require(lemma == "1" || lemma == "2" || lemma == "3" || lemma == "all", "lemma must be 1, 2, 3 or all");
    require(t >= 2, "t must be >= 2");
    require(lemma_length >= 1, "lemma length must be >= 1");
    require(trials >= 2, "trials must be >= 2");
    for (double d : sweep_delta) require(d > 0.0 && d < 1.0, "sweep deltas must lie in (0, 1)");
    for (double x : sweep_pq) require(x > 0.0, "sweep p, q values must be > 0");
  }

  PhiConfig phi_config() const {
    PhiConfig pc;
    pc.kind = phi;
    if (features) pc.features = *features;
    pc.delta = delta;
    pc.combine = combine;
    pc.rank = rank.value_or(10);
    pc.num_types = num_types.value_or(0);
    pc.attributes_path = attributes;
    pc.types_path = types;
    return pc;
  }

  WalkParams walk_params() const {
    WalkParams w;
    w.walks_per_node = walks;
    w.walk_length = length;
    w.return_param = p;
    w.inout_param = q;
    return w;
  }

  TrainConfig train_config() const {
    TrainConfig tc;
    tc.dims = dims;
    tc.window = window;
    tc.negatives = negatives;
    tc.learning_rate = learning_rate;
    tc.epochs = epochs;
    tc.seed = seed;
    tc.threads = threads;
    return tc;
  }

  Role2VecConfig role2vec_config() const { return {phi_config(), walk_params(), train_config(), threads}; }

  EvalConfig eval_config() const {
    EvalConfig ec;
    ec.embed = role2vec_config();
    ec.op = op;
    ec.test_fraction = test_fraction;
    ec.train_fraction = train_fraction;
    ec.allow_isolation = allow_isolation;
    return ec;
  }
};

namespace config_io {

inline std::string format(const std::string& s) { return s; }
inline std::string format(double x) { return format_number(x); }
inline std::string format(bool b) { return b ? "true" : "false"; }
inline std::string format(PhiKind k) { return to_string(k); }
inline std::string format(CombineOp k) { return to_string(k); }
inline std::string format(EdgeOp k) { return to_string(k); }
template <typename T>
  requires std::is_integral_v<T>
std::string format(T x) {
  return std::to_string(x);
}
inline std::string format(const std::vector<std::string>& v) { return join_features(v); }
inline std::string format(const std::vector<double>& v) {
  std::string out;
  for (std::size_t k = 0; k < v.size(); ++k) out += (k ? "," : "") + format(v[k]);
  return out;
}
template <typename T>
std::string format(const std::optional<T>& x) {
  return x ? format(*x) : "auto";
}

inline void parse(const std::string& s, std::string& out) { out = s; }
inline void parse(const std::string& s, double& out) {
  const char* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, out);
  if (ec != std::errc() || ptr != end) throw ParameterError("'" + s + "' is not a number");
}
inline void parse(const std::string& s, bool& out) {
  if (s == "true" || s == "1") out = true;
  else if (s == "false" || s == "0") out = false;
  else throw ParameterError("'" + s + "' is not a boolean");
}
inline void parse(const std::string& s, PhiKind& out) { out = parse_phi_kind(s); }
inline void parse(const std::string& s, CombineOp& out) { out = parse_combine_op(s); }
inline void parse(const std::string& s, EdgeOp& out) { out = parse_edge_op(s); }
template <typename T>
  requires std::is_integral_v<T>
void parse(const std::string& s, T& out) {
  const char* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, out);
  if (ec != std::errc() || ptr != end) throw ParameterError("'" + s + "' is not a non-negative integer");
}
inline void parse(const std::string& s, std::vector<std::string>& out) { out = parse_feature_list(s); }
inline void parse(const std::string& s, std::vector<double>& out) {
  out.clear();
  for (const auto& item : parse_feature_list(s)) {
    double x = 0.0;
    parse(item, x);
    out.push_back(x);
  }
}

template <typename T>
void parse(const std::string& s, std::optional<T>& out) {
  if (s == "auto" || s.empty()) {
    out.reset();
  } else {
    T x{};
    parse(s, x);
    out = x;
  }
}
}  // namespace config_io

inline std::string to_text(const RunConfig& c) {
  std::string out;
  RunConfig::visit(c, [&](const char* name, const auto& value) {
    out += name;
    out += " = ";
    out += config_io::format(value);
    out += '\n';
  });
  return out;
}

/// Applies "key = value" lines on top of `base`. Blank lines and '#'
/// comments are skipped; unknown keys are errors.
inline RunConfig parse_config(std::istream& in, RunConfig base = {}) {
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ParseError("expected 'key = value'", line_no);
    auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t\r");
      const auto e = s.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    bool found = false;
    RunConfig::visit(base, [&](const char* name, auto& member) {
      if (key != name) return;
      found = true;
      try {
        config_io::parse(value, member);
      } catch (const ParameterError& e) {
        throw ParseError(key + ": " + e.what(), line_no);
      }
    });
    if (!found) throw ParseError("unknown key '" + key + "'", line_no);
  }
  return base;
}

inline RunConfig parse_config_string(const std::string& text, RunConfig base = {}) {
  std::istringstream in(text);
  return parse_config(in, std::move(base));
}

inline RunConfig load_config(const std::string& path, RunConfig base = {}) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read config file '" + path + "'");
  return parse_config(in, std::move(base));
}

}  // namespace role2vec
