#pragma once

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "role2vec/error.hpp"

namespace role2vec {

using NodeId = std::uint32_t;
using Edge = std::pair<NodeId, NodeId>;

/// Immutable undirected simple graph in CSR form.
///
/// Neighbor lists are sorted ascending with no duplicates or self-loops, and
/// adjacency is symmetric. Directed edge (u -> neighbors(u)[k]) has the dense
/// index `edge_offset(u) + k`, which second-order samplers use as a state id.
/// Each node also remembers the id it carried in the source file.
class Graph {
 public:
  Graph() = default;

  /// Builds from an arbitrary edge list over dense ids 0..n-1. Self-loops
  /// are dropped, reverse and repeated edges merged.
  static Graph from_edges(std::size_t num_nodes, std::span<const Edge> edges) {
    std::vector<Edge> directed;
    directed.reserve(edges.size() * 2);
    for (auto [u, v] : edges) {
      if (u >= num_nodes || v >= num_nodes) {
        throw ParameterError("edge (" + std::to_string(u) + ", " + std::to_string(v) +
                             ") out of range for " + std::to_string(num_nodes) + " nodes");
      }
      if (u == v) continue;
      directed.emplace_back(u, v);
      directed.emplace_back(v, u);
    }
    std::sort(directed.begin(), directed.end());
    directed.erase(std::unique(directed.begin(), directed.end()), directed.end());

    Graph g;
    g.offsets_.assign(num_nodes + 1, 0);
    for (auto [u, v] : directed) ++g.offsets_[u + 1];
    for (std::size_t i = 0; i < num_nodes; ++i) g.offsets_[i + 1] += g.offsets_[i];
    g.adjacency_.reserve(directed.size());
    for (auto [u, v] : directed) g.adjacency_.push_back(v);
    g.original_ids_.resize(num_nodes);
    for (std::size_t i = 0; i < num_nodes; ++i) g.original_ids_[i] = i;
    return g;
  }

  static Graph from_edges(std::size_t num_nodes, std::initializer_list<Edge> edges) {
    return from_edges(num_nodes, std::span<const Edge>(edges.begin(), edges.size()));
  }

  std::size_t num_nodes() const noexcept { return original_ids_.size(); }
  std::size_t num_edges() const noexcept { return adjacency_.size() / 2; }
  std::size_t num_directed_edges() const noexcept { return adjacency_.size(); }

  std::size_t degree(NodeId i) const noexcept { return offsets_[i + 1] - offsets_[i]; }
  std::size_t edge_offset(NodeId i) const noexcept { return offsets_[i]; }

  std::span<const NodeId> neighbors(NodeId i) const noexcept {
    return {adjacency_.data() + offsets_[i], degree(i)};
  }

  bool has_edge(NodeId u, NodeId v) const noexcept {
    auto nb = neighbors(u);
    return std::binary_search(nb.begin(), nb.end(), v);
  }

  /// Index of v within neighbors(u), if adjacent.
  std::optional<std::size_t> neighbor_index(NodeId u, NodeId v) const noexcept {
    auto nb = neighbors(u);
    auto it = std::lower_bound(nb.begin(), nb.end(), v);
    if (it == nb.end() || *it != v) return std::nullopt;
    return static_cast<std::size_t>(it - nb.begin());
  }

  std::vector<std::size_t> degrees() const {
    std::vector<std::size_t> d(num_nodes());
    for (NodeId i = 0; i < num_nodes(); ++i) d[i] = degree(i);
    return d;
  }

  /// Undirected edges as (u, v) with u < v, in lexicographic order.
  std::vector<Edge> edges() const {
    std::vector<Edge> out;
    out.reserve(num_edges());
    for (NodeId u = 0; u < num_nodes(); ++u) {
      for (NodeId v : neighbors(u)) {
        if (u < v) out.emplace_back(u, v);
      }
    }
    return out;
  }

  std::size_t num_isolated() const noexcept {
    std::size_t n = 0;
    for (NodeId i = 0; i < num_nodes(); ++i) n += degree(i) == 0;
    return n;
  }

  std::uint64_t original_id(NodeId i) const noexcept { return original_ids_[i]; }
  std::span<const std::uint64_t> original_ids() const noexcept { return original_ids_; }

  /// Resolves an id from the source file to the dense id.
  std::optional<NodeId> find_node(std::uint64_t original) const {
    if (lookup_.empty()) {
      if (original < num_nodes() && original_ids_[original] == original) {
        return static_cast<NodeId>(original);
      }
      for (NodeId i = 0; i < num_nodes(); ++i) {
        if (original_ids_[i] == original) return i;
      }
      return std::nullopt;
    }
    auto it = lookup_.find(original);
    if (it == lookup_.end()) return std::nullopt;
    return it->second;
  }

  void set_original_ids(std::vector<std::uint64_t> ids) {
    if (ids.size() != num_nodes()) throw ParameterError("original id table has wrong length");
    original_ids_ = std::move(ids);
    lookup_.clear();
    for (NodeId i = 0; i < num_nodes(); ++i) lookup_.emplace(original_ids_[i], i);
  }

  /// Same node set with the given undirected edges removed.
  Graph without_edges(std::span<const Edge> removed) const {
    std::vector<Edge> sorted_removed;
    sorted_removed.reserve(removed.size());
    for (auto [u, v] : removed) sorted_removed.emplace_back(std::min(u, v), std::max(u, v));
    std::sort(sorted_removed.begin(), sorted_removed.end());
    std::vector<Edge> kept;
    for (const Edge& e : edges()) {
      if (!std::binary_search(sorted_removed.begin(), sorted_removed.end(), e)) kept.push_back(e);
    }
    Graph g = from_edges(num_nodes(), kept);
    g.original_ids_ = original_ids_;
    g.lookup_ = lookup_;
    return g;
  }

  /// Structural equality (original ids are not compared).
  friend bool operator==(const Graph& a, const Graph& b) {
    return a.offsets_ == b.offsets_ && a.adjacency_ == b.adjacency_;
  }

 private:
  std::vector<std::size_t> offsets_{0};
  std::vector<NodeId> adjacency_;
  std::vector<std::uint64_t> original_ids_;
  std::unordered_map<std::uint64_t, NodeId> lookup_;
};

namespace detail {

inline bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r' || c == ','; }

// Splits on whitespace (and commas, for CSV-ish edge lists).
inline std::vector<std::string_view> tokenize(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && is_space(line[i])) ++i;
    std::size_t j = i;
    while (j < line.size() && !is_space(line[j])) ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

inline std::uint64_t parse_id(std::string_view tok, std::size_t line_no) {
  std::uint64_t value = 0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
  if (ec != std::errc{} || ptr != tok.data() + tok.size()) {
    throw ParseError("expected a non-negative integer node id, got '" + std::string(tok) + "'",
                     line_no);
  }
  return value;
}

inline double parse_real(std::string_view tok, std::size_t line_no, std::size_t column) {
  double value = 0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
  if (ec != std::errc{} || ptr != tok.data() + tok.size()) {
    throw ParseError("column " + std::to_string(column) + ": expected a number, got '" +
                         std::string(tok) + "'",
                     line_no);
  }
  return value;
}

}  // namespace detail

/// Parses an edge list. Lines starting with '#' or '%' are comments; every
/// other non-blank line needs at least two integer tokens (further tokens are
/// ignored). Ids are compacted in first-appearance order. Self-loops are
/// dropped before ids are registered, so a node that only occurs in
/// self-loops (e.g. a MatrixMarket size line) does not become a vertex.
inline Graph parse_edge_list(std::istream& in) {
  std::unordered_map<std::uint64_t, NodeId> remap;
  std::vector<std::uint64_t> original;
  std::vector<Edge> edges;
  auto intern = [&](std::uint64_t id) {
    auto [it, inserted] = remap.emplace(id, static_cast<NodeId>(original.size()));
    if (inserted) original.push_back(id);
    return it->second;
  };

  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto tokens = detail::tokenize(line);
    if (tokens.empty() || tokens[0][0] == '#' || tokens[0][0] == '%') continue;
    if (tokens.size() < 2) throw ParseError("expected two node ids", line_no);
    const std::uint64_t a = detail::parse_id(tokens[0], line_no);
    const std::uint64_t b = detail::parse_id(tokens[1], line_no);
    if (a == b) continue;
    const NodeId u = intern(a);
    const NodeId v = intern(b);
    edges.emplace_back(u, v);
  }
  if (edges.empty()) throw EmptyGraphError("edge list contains no edges after cleaning");

  Graph g = Graph::from_edges(original.size(), edges);
  g.set_original_ids(std::move(original));
  return g;
}

inline Graph load_edge_list(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read edge list '" + path + "'");
  return parse_edge_list(in);
}

inline Graph parse_edge_list_string(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_edge_list(in);
}

/// Writes one line per undirected edge using dense ids, in lexicographic
/// order. Re-parsing yields an isomorphic graph whose original_id() maps back
/// to these ids; the dense numbering itself can change because the parser
/// numbers nodes by first appearance.
inline void write_edge_list(const Graph& g, std::ostream& out) {
  for (const Edge& e : g.edges()) out << e.first << ' ' << e.second << '\n';
}

}  // namespace role2vec
