#pragma once

#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "role2vec/binning.hpp"
#include "role2vec/error.hpp"
#include "role2vec/features.hpp"
#include "role2vec/graph.hpp"
#include "role2vec/kmeans.hpp"
#include "role2vec/motifs.hpp"
#include "role2vec/typing.hpp"

namespace role2vec {

enum class PhiKind { concat, factorized, identity, external };

inline std::string to_string(PhiKind k) {
  switch (k) {
    case PhiKind::concat: return "concat";
    case PhiKind::factorized: return "factorized";
    case PhiKind::identity: return "identity";
    case PhiKind::external: return "external";
  }
  return "?";
}

inline PhiKind parse_phi_kind(const std::string& s) {
  if (s == "concat") return PhiKind::concat;
  if (s == "factorized") return PhiKind::factorized;
  if (s == "identity") return PhiKind::identity;
  if (s == "external") return PhiKind::external;
  throw ParameterError("unknown phi kind '" + s + "' (expected concat, factorized, identity or external)");
}

inline std::string to_string(CombineOp op) { return op == CombineOp::concat ? "concat" : "sum"; }

inline CombineOp parse_combine_op(const std::string& s) {
  if (s == "concat") return CombineOp::concat;
  if (s == "sum") return CombineOp::sum;
  throw ParameterError("unknown combine operator '" + s + "' (expected concat or sum)");
}

/// "x2,x3" -> {"x2", "x3"}
inline std::vector<std::string> parse_feature_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto b = item.find_first_not_of(" \t");
    const auto e = item.find_last_not_of(" \t");
    if (b != std::string::npos) out.push_back(item.substr(b, e - b + 1));
  }
  return out;
}

inline std::string join_features(const std::vector<std::string>& names) {
  std::string out;
  for (std::size_t k = 0; k < names.size(); ++k) out += (k ? "," : "") + names[k];
  return out;
}

/// Ten motif subsets used by `sweep` when no subset is given. They run from
/// the cheapest wedge/triangle signature up to all nine motifs.
inline std::vector<std::vector<std::string>> default_feature_subsets() {
  return {
      {"x2", "x3"},
      {"x1", "x3"},
      {"x1", "x2", "x3"},
      {"x2", "x3", "x4", "x6", "x9"},
      {"x2", "x3", "x4", "x5", "x6", "x7", "x8", "x9"},
      {"x1", "x2", "x3", "x4", "x5", "x6", "x7", "x8", "x9"},
      {"x1"},
      {"x3"},
      {"x1", "x2"},
      {"x3", "x6", "x8", "x9"},
  };
}

/// How vertices are mapped to types.
struct PhiConfig {
  PhiKind kind = PhiKind::concat;
  std::vector<std::string> features{"x2", "x3"};
  double delta = 0.5;
  CombineOp combine = CombineOp::concat;
  std::size_t rank = 10;         // factorized only
  std::size_t num_types = 0;     // factorized only; 0 = as many types as concat yields
  std::size_t als_sweeps = 50;
  std::size_t kmeans_iters = 100;
  std::string attributes_path;   // optional extra columns appended to the motif counts
  std::string types_path;        // external only

  void validate() const {
    if (!(delta > 0.0 && delta < 1.0)) throw ParameterError("delta must lie in (0, 1)");
    if (kind == PhiKind::concat || kind == PhiKind::factorized) {
      require(!features.empty(), "feature subset must not be empty");
    }
    if (kind == PhiKind::factorized) require(rank >= 1, "factorization rank must be >= 1");
    if (kind == PhiKind::external && types_path.empty()) {
      throw ParameterError("external phi needs a type file");
    }
  }
};

/// Motif counts, with external attribute columns appended when configured.
inline FeatureMatrix structural_features(const Graph& g, const PhiConfig& cfg, unsigned threads = 1) {
  FeatureMatrix x = count_motifs(g, threads);
  if (!cfg.attributes_path.empty()) x = FeatureMatrix::concat(x, ingest_attributes(cfg.attributes_path, g));
  return x;
}

inline std::vector<std::size_t> feature_columns(const FeatureMatrix& x, const std::vector<std::string>& names) {
  std::vector<std::size_t> cols;
  for (const auto& n : names) cols.push_back(x.column_index(n));
  return cols;
}

/// Types for every vertex of g under the configured mapping.
inline TypeAssignment compute_types(const Graph& g, const PhiConfig& cfg, std::uint64_t seed,
                                    unsigned threads = 1) {
  cfg.validate();
  switch (cfg.kind) {
    case PhiKind::identity: return TypeAssignment::identity(g.num_nodes());
    case PhiKind::external: return read_types_tsv(cfg.types_path, g);
    case PhiKind::concat: {
      const FeatureMatrix x = structural_features(g, cfg, threads);
      const BinnedMatrix binned = log_bin(x, cfg.delta);
      return phi_concat(binned, feature_columns(x, cfg.features), cfg.combine);
    }
    case PhiKind::factorized: {
      const FeatureMatrix x = structural_features(g, cfg, threads);
      const BinnedMatrix binned = log_bin(x, cfg.delta);
      std::size_t m = cfg.num_types;
      if (m == 0) m = phi_concat(binned, feature_columns(x, cfg.features), cfg.combine).num_types();
      FactorizedTypingOptions opt;
      opt.factorization.rank = cfg.rank;
      opt.factorization.max_sweeps = cfg.als_sweeps;
      opt.factorization.seed = seed;
      opt.num_types = std::min<std::size_t>(m, g.num_nodes());
      opt.kmeans_iters = cfg.kmeans_iters;
      return phi_factorized(to_feature_matrix(binned), opt);
    }
  }
  throw ParameterError("unknown phi kind");
}

}  // namespace role2vec
