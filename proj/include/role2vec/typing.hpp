#pragma once

#include <cstdint>
#include <fstream>
#include <map>
#include <ostream>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "role2vec/binning.hpp"
#include "role2vec/error.hpp"
#include "role2vec/graph.hpp"
#include "role2vec/random.hpp"

namespace role2vec {

using TypeId = std::uint32_t;

/// Total, surjective map from vertices onto types 0..m-1.
class TypeAssignment {
 public:
  TypeAssignment() = default;

  /// Takes type ids as given; they must cover 0..m-1 exactly.
  explicit TypeAssignment(std::vector<TypeId> type_of) : type_of_(std::move(type_of)) {
    TypeId max_id = 0;
    for (TypeId t : type_of_) max_id = std::max(max_id, t);
    num_types_ = type_of_.empty() ? 0 : static_cast<std::size_t>(max_id) + 1;
    std::vector<char> used(num_types_, 0);
    for (TypeId t : type_of_) used[t] = 1;
    for (std::size_t t = 0; t < num_types_; ++t) {
      if (!used[t]) throw ParameterError("type id " + std::to_string(t) + " has no vertices");
    }
  }

  /// Relabels arbitrary keys to dense ids in order of first appearance.
  template <typename Key, typename Hash = std::hash<Key>>
  static TypeAssignment from_keys(std::span<const Key> keys) {
    std::unordered_map<Key, TypeId, Hash> ids;
    std::vector<TypeId> type_of(keys.size());
    for (std::size_t i = 0; i < keys.size(); ++i) {
      auto [it, inserted] = ids.emplace(keys[i], static_cast<TypeId>(ids.size()));
      type_of[i] = it->second;
    }
    return TypeAssignment(std::move(type_of));
  }

  static TypeAssignment identity(std::size_t n) {
    std::vector<TypeId> t(n);
    for (std::size_t i = 0; i < n; ++i) t[i] = static_cast<TypeId>(i);
    return TypeAssignment(std::move(t));
  }

  static TypeAssignment constant(std::size_t n) { return TypeAssignment(std::vector<TypeId>(n, 0)); }

  std::size_t num_nodes() const noexcept { return type_of_.size(); }
  std::size_t num_types() const noexcept { return num_types_; }
  TypeId operator[](NodeId i) const noexcept { return type_of_[i]; }
  std::span<const TypeId> types() const noexcept { return type_of_; }

  std::vector<std::vector<NodeId>> partition() const {
    std::vector<std::vector<NodeId>> parts(num_types_);
    for (NodeId i = 0; i < type_of_.size(); ++i) parts[type_of_[i]].push_back(i);
    return parts;
  }

  /// Same partition, ids renumbered by first appearance.
  TypeAssignment canonical() const { return from_keys<TypeId>(type_of_); }

  friend bool operator==(const TypeAssignment&, const TypeAssignment&) = default;

 private:
  std::vector<TypeId> type_of_;
  std::size_t num_types_ = 0;
};

enum class CombineOp { concat, sum };

namespace detail {

struct BinTupleHash {
  std::size_t operator()(const std::vector<BinId>& v) const noexcept {
    std::uint64_t h = 0x84222325cbf29ce4ULL;
    for (BinId b : v) h = mix64(h ^ b);
    return static_cast<std::size_t>(h);
  }
};

}  // namespace detail

/// Types from binned attributes: vertices share a type iff their selected
/// bin tuples are equal (concat) or their bin sums are equal (sum).
inline TypeAssignment phi_concat(const BinnedMatrix& binned, std::span<const std::size_t> columns,
                                 CombineOp op = CombineOp::concat) {
  if (columns.empty()) throw ParameterError("feature subset must not be empty");
  for (std::size_t c : columns) {
    if (c >= binned.cols) throw ParameterError("feature column " + std::to_string(c) + " out of range");
  }
  if (op == CombineOp::sum) {
    std::vector<std::uint64_t> sums(binned.rows, 0);
    for (std::size_t r = 0; r < binned.rows; ++r) {
      for (std::size_t c : columns) sums[r] += binned(r, c);
    }
    return TypeAssignment::from_keys<std::uint64_t>(sums);
  }
  std::vector<std::vector<BinId>> tuples(binned.rows);
  for (std::size_t r = 0; r < binned.rows; ++r) {
    for (std::size_t c : columns) tuples[r].push_back(binned(r, c));
  }
  return TypeAssignment::from_keys<std::vector<BinId>, detail::BinTupleHash>(tuples);
}

inline TypeAssignment phi_concat(const BinnedMatrix& binned, CombineOp op = CombineOp::concat) {
  std::vector<std::size_t> all(binned.cols);
  for (std::size_t c = 0; c < binned.cols; ++c) all[c] = c;
  return phi_concat(binned, all, op);
}

/// "node_id<TAB>type_id", keyed by original node id.
inline void write_types_tsv(const TypeAssignment& types, const Graph& g, std::ostream& out) {
  for (NodeId i = 0; i < types.num_nodes(); ++i) {
    out << g.original_id(i) << '\t' << types[i] << '\n';
  }
}

/// Reads an externally supplied vertex -> type map. Every graph vertex must
/// appear; type ids are renumbered by first appearance in vertex order.
inline TypeAssignment read_types_tsv(std::istream& in, const Graph& g) {
  std::vector<std::int64_t> raw(g.num_nodes(), -1);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto tokens = detail::tokenize(line);
    if (tokens.empty() || tokens[0][0] == '#') continue;
    if (tokens.size() < 2) throw ParseError("expected 'node_id type_id'", line_no);
    auto node = g.find_node(detail::parse_id(tokens[0], line_no));
    if (!node) throw ParseError("node id '" + std::string(tokens[0]) + "' is not in the graph", line_no);
    raw[*node] = static_cast<std::int64_t>(detail::parse_id(tokens[1], line_no));
  }
  for (NodeId i = 0; i < raw.size(); ++i) {
    if (raw[i] < 0) {
      throw ParameterError("type file has no entry for node " + std::to_string(g.original_id(i)));
    }
  }
  return TypeAssignment::from_keys<std::int64_t>(raw);
}

inline TypeAssignment read_types_tsv(const std::string& path, const Graph& g) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read type file '" + path + "'");
  return read_types_tsv(in, g);
}

}  // namespace role2vec
