#pragma once

#include <concepts>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "role2vec/alias_table.hpp"
#include "role2vec/error.hpp"
#include "role2vec/graph.hpp"
#include "role2vec/random.hpp"

namespace role2vec {

struct WalkParams {
  std::size_t walks_per_node = 10;  // R
  std::size_t walk_length = 80;     // L, counted in emitted symbols
  double return_param = 1.0;        // p
  double inout_param = 1.0;         // q

  void validate() const {
    require(walks_per_node >= 1, "walks per node must be >= 1");
    require(walk_length >= 1, "walk length must be >= 1");
    require(return_param > 0.0, "return parameter p must be > 0");
    require(inout_param > 0.0, "in-out parameter q must be > 0");
  }

  bool unbiased() const noexcept { return return_param == 1.0 && inout_param == 1.0; }
};

/// Many alias tables packed into flat arrays; table t covers
/// [offset(t), offset(t+1)).
class AliasTableSet {
 public:
  void reserve(std::size_t tables, std::size_t outcomes) {
    offsets_.reserve(tables + 1);
    prob_.reserve(outcomes);
    alias_.reserve(outcomes);
  }

  void add(std::span<const double> weights) {
    if (weights.empty()) {
      offsets_.push_back(prob_.size());
      return;
    }
    AliasTable table(weights);
    auto p = table.probabilities();
    auto a = table.aliases();
    prob_.insert(prob_.end(), p.begin(), p.end());
    alias_.insert(alias_.end(), a.begin(), a.end());
    offsets_.push_back(prob_.size());
  }

  std::size_t num_tables() const noexcept { return offsets_.size() - 1; }
  std::size_t table_size(std::size_t t) const noexcept { return offsets_[t + 1] - offsets_[t]; }

  std::size_t sample(std::size_t t, Rng& rng) const {
    const std::size_t base = offsets_[t];
    const std::size_t column = rng.index(offsets_[t + 1] - base);
    return rng.uniform() < prob_[base + column] ? column : alias_[base + column];
  }

  std::vector<double> distribution(std::size_t t) const {
    const std::size_t base = offsets_[t];
    const std::size_t n = table_size(t);
    std::vector<double> p(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      p[i] += prob_[base + i] / static_cast<double>(n);
      p[alias_[base + i]] += (1.0 - prob_[base + i]) / static_cast<double>(n);
    }
    return p;
  }

 private:
  std::vector<std::size_t> offsets_{0};
  std::vector<double> prob_;
  std::vector<std::uint32_t> alias_;
};

/// A sampler picks the index of the next node within neighbors(cur).
/// `arrived_by` is the directed edge id the walk used to reach `cur`.
template <typename S>
concept StepSampler = requires(const S& s, NodeId cur, std::size_t edge, Rng& rng) {
  { s.first_step(cur, rng) } -> std::convertible_to<std::size_t>;
  { s.next_step(edge, cur, rng) } -> std::convertible_to<std::size_t>;
  { s.graph() } -> std::convertible_to<const Graph&>;
};

/// Uniform 1/d_i transitions, one alias table per node.
class FirstOrderSampler {
 public:
  explicit FirstOrderSampler(const Graph& g) : graph_(&g) {
    tables_.reserve(g.num_nodes(), g.num_directed_edges());
    std::vector<double> ones;
    for (NodeId i = 0; i < g.num_nodes(); ++i) {
      ones.assign(g.degree(i), 1.0);
      tables_.add(ones);
    }
  }

  const Graph& graph() const noexcept { return *graph_; }
  const AliasTableSet& tables() const noexcept { return tables_; }

  std::size_t first_step(NodeId cur, Rng& rng) const { return tables_.sample(cur, rng); }
  std::size_t next_step(std::size_t, NodeId cur, Rng& rng) const { return tables_.sample(cur, rng); }

 private:
  const Graph* graph_;
  AliasTableSet tables_;
};

namespace detail {

// Unnormalized node2vec bias weights for the state (prev -> cur), aligned
// with neighbors(cur).
inline void bias_weights(const Graph& g, NodeId prev, NodeId cur, double p, double q,
                         std::vector<double>& out) {
  auto next = g.neighbors(cur);
  auto back = g.neighbors(prev);
  out.resize(next.size());
  std::size_t b = 0;
  for (std::size_t k = 0; k < next.size(); ++k) {
    const NodeId x = next[k];
    while (b < back.size() && back[b] < x) ++b;
    if (x == prev) {
      out[k] = 1.0 / p;
    } else if (b < back.size() && back[b] == x) {
      out[k] = 1.0;
    } else {
      out[k] = 1.0 / q;
    }
  }
}

}  // namespace detail

/// node2vec-style second-order transitions: one alias table per directed
/// edge (t -> v) over neighbors(v). The first step of a walk has no
/// predecessor and falls back to the first-order table.
class SecondOrderSampler {
 public:
  SecondOrderSampler(const Graph& g, const WalkParams& params) : first_(g) {
    params.validate();
    std::size_t outcomes = 0;
    for (NodeId v = 0; v < g.num_nodes(); ++v) outcomes += g.degree(v) * g.degree(v);
    edge_tables_.reserve(g.num_directed_edges(), outcomes);
    std::vector<double> weights;
    for (NodeId t = 0; t < g.num_nodes(); ++t) {
      for (NodeId v : g.neighbors(t)) {
        detail::bias_weights(g, t, v, params.return_param, params.inout_param, weights);
        edge_tables_.add(weights);
      }
    }
  }

  const Graph& graph() const noexcept { return first_.graph(); }
  const AliasTableSet& edge_tables() const noexcept { return edge_tables_; }

  std::size_t first_step(NodeId cur, Rng& rng) const { return first_.first_step(cur, rng); }
  std::size_t next_step(std::size_t arrived_by, NodeId, Rng& rng) const {
    return edge_tables_.sample(arrived_by, rng);
  }

 private:
  FirstOrderSampler first_;
  AliasTableSet edge_tables_;
};

inline FirstOrderSampler build_first_order(const Graph& g) { return FirstOrderSampler(g); }

inline SecondOrderSampler build_second_order(const Graph& g, const WalkParams& params) {
  return SecondOrderSampler(g, params);
}

/// Walk state: current node plus, after the first step, the previous node.
struct WalkState {
  std::optional<NodeId> previous;
  NodeId current = 0;
};

/// Exact next-step distribution aligned with neighbors(state.current),
/// computed directly from the transition rule (not from alias tables).
inline std::vector<double> walk_step_distribution(const Graph& g, const WalkState& state,
                                                  const WalkParams& params) {
  const std::size_t d = g.degree(state.current);
  if (d == 0) throw DegenerateError("node " + std::to_string(state.current) + " has no neighbors");
  std::vector<double> w;
  if (!state.previous || params.unbiased()) {
    w.assign(d, 1.0 / static_cast<double>(d));
    return w;
  }
  if (!g.has_edge(*state.previous, state.current)) {
    throw ParameterError("walk state (prev -> cur) is not an edge");
  }
  detail::bias_weights(g, *state.previous, state.current, params.return_param, params.inout_param,
                       w);
  double total = 0.0;
  for (double x : w) total += x;
  for (double& x : w) x /= total;
  return w;
}

}  // namespace role2vec
