#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <queue>
#include <vector>

#include "role2vec/error.hpp"
#include "role2vec/graph.hpp"
#include "role2vec/random.hpp"

namespace role2vec {

/// Component id per node (ids in order of lowest member).
inline std::vector<std::size_t> connected_components(const Graph& g) {
  constexpr auto unset = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> comp(g.num_nodes(), unset);
  std::size_t next = 0;
  for (NodeId s = 0; s < g.num_nodes(); ++s) {
    if (comp[s] != unset) continue;
    std::queue<NodeId> q;
    q.push(s);
    comp[s] = next;
    while (!q.empty()) {
      const NodeId u = q.front();
      q.pop();
      for (NodeId v : g.neighbors(u)) {
        if (comp[v] == unset) {
          comp[v] = next;
          q.push(v);
        }
      }
    }
    ++next;
  }
  return comp;
}

inline bool is_connected(const Graph& g) {
  const auto comp = connected_components(g);
  return std::all_of(comp.begin(), comp.end(), [](std::size_t c) { return c == 0; });
}

/// Simple random walk chain: P_ij = 1/d_i on edges, 0 elsewhere.
struct ChainModel {
  Eigen::MatrixXd P;
  Eigen::VectorXd degrees;

  explicit ChainModel(const Graph& g) : P(Eigen::MatrixXd::Zero(g.num_nodes(), g.num_nodes())), degrees(g.num_nodes()) {
    for (NodeId i = 0; i < g.num_nodes(); ++i) {
      degrees[i] = static_cast<double>(g.degree(i));
      for (NodeId j : g.neighbors(i)) P(i, j) = 1.0 / degrees[i];
    }
  }

  /// P^m by repeated multiplication.
  Eigen::MatrixXd power(std::size_t m) const {
    Eigen::MatrixXd out = Eigen::MatrixXd::Identity(P.rows(), P.cols());
    for (std::size_t k = 0; k < m; ++k) out = out * P;
    return out;
  }

  /// max_i |(d^T P)_i - d_i|: zero when the degree vector is stationary.
  double stationarity_residual() const {
    const Eigen::RowVectorXd lhs = degrees.transpose() * P;
    return (lhs - degrees.transpose()).cwiseAbs().maxCoeff();
  }

  /// max over non-isolated rows of |row sum - 1|.
  static double row_sum_error(const Eigen::MatrixXd& m, const Eigen::VectorXd& degrees) {
    double worst = 0.0;
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      if (degrees[i] > 0) worst = std::max(worst, std::abs(m.row(i).sum() - 1.0));
    }
    return worst;
  }
};

/// r[t] = probability that a walk from `start` first reaches `target` at
/// step t (t = 0..horizon; r[0] = 0). Mass is propagated along edges with
/// the target made absorbing, so the result is exact up to rounding.
inline std::vector<double> first_passage(const Graph& g, NodeId start, NodeId target, std::size_t horizon,
                                         double* survival = nullptr) {
  if (g.degree(start) == 0) throw DegenerateError("first passage from an isolated node");
  std::vector<double> mass(g.num_nodes(), 0.0), next(g.num_nodes());
  mass[start] = 1.0;
  std::vector<double> r(horizon + 1, 0.0);
  for (std::size_t t = 1; t <= horizon; ++t) {
    std::fill(next.begin(), next.end(), 0.0);
    for (NodeId i = 0; i < g.num_nodes(); ++i) {
      if (mass[i] == 0.0) continue;
      const double share = mass[i] / static_cast<double>(g.degree(i));
      for (NodeId j : g.neighbors(i)) next[j] += share;
    }
    r[t] = next[target];
    next[target] = 0.0;
    mass.swap(next);
  }
  if (survival) {
    double s = 0.0;
    for (double m : mass) s += m;
    *survival = s;
  }
  return r;
}

/// r(t, j) for every target j from one start.
struct FirstPassageTable {
  NodeId start = 0;
  std::size_t horizon = 0;
  Eigen::MatrixXd r;              // (horizon + 1) x Nv
  Eigen::VectorXd survival;       // mass that has not reached j by the horizon

  double operator()(std::size_t t, NodeId j) const { return r(static_cast<Eigen::Index>(t), j); }
  double total(NodeId j) const { return r.col(j).sum(); }
};

inline FirstPassageTable exact_first_passage(const Graph& g, NodeId start, std::size_t horizon) {
  require(horizon >= 1, "horizon must be >= 1");
  FirstPassageTable table;
  table.start = start;
  table.horizon = horizon;
  table.r.resize(static_cast<Eigen::Index>(horizon + 1), g.num_nodes());
  table.survival.resize(g.num_nodes());
  for (NodeId j = 0; j < g.num_nodes(); ++j) {
    double s = 0.0;
    const auto col = first_passage(g, start, j, horizon, &s);
    for (std::size_t t = 0; t <= horizon; ++t) table.r(static_cast<Eigen::Index>(t), j) = col[t];
    table.survival[j] = s;
  }
  return table;
}

/// Monte-Carlo estimate of r[0..horizon] from `trials` walks.
inline std::vector<double> sampled_first_passage(const Graph& g, NodeId start, NodeId target, std::size_t horizon,
                                                 std::size_t trials, std::uint64_t seed) {
  std::vector<double> r(horizon + 1, 0.0);
  Rng rng = Rng::derived(seed, 0xf1a5);
  for (std::size_t k = 0; k < trials; ++k) {
    NodeId cur = start;
    for (std::size_t t = 1; t <= horizon; ++t) {
      const auto nb = g.neighbors(cur);
      cur = nb[rng.index(nb.size())];
      if (cur == target) {
        r[t] += 1.0;
        break;
      }
    }
  }
  for (double& x : r) x /= static_cast<double>(trials);
  return r;
}

namespace detail {

inline void require_nonadjacent_pair(const Graph& g, NodeId u, NodeId v) {
  if (u >= g.num_nodes() || v >= g.num_nodes()) throw ParameterError("node id out of range");
  if (u == v) throw PreconditionError("u and v must be distinct");
  if (g.has_edge(u, v)) throw PreconditionError("u and v must not be adjacent");
}

}  // namespace detail

struct Lemma1Report {
  double r_uv = 0.0;              // r_uv^t
  double neighbor_mean = 0.0;     // (1/d_u) sum_j r_jv^{t-1}
  double identity_error = 0.0;    // |r_uv - neighbor_mean|
  NodeId witness = 0;             // neighbor with the largest r_jv^{t-1}
  double witness_value = 0.0;
  double margin = 0.0;            // witness_value - r_uv, >= 0 when the lemma holds
  bool holds() const { return margin >= -1e-15; }
};

/// For non-adjacent u, v, the first step from u must go to a neighbor, so
/// r_uv^t is the neighbor average of r_jv^{t-1}; some neighbor is therefore
/// at least as likely to first reach v one step sooner.
inline Lemma1Report check_lemma1(const Graph& g, NodeId u, NodeId v, std::size_t t) {
  detail::require_nonadjacent_pair(g, u, v);
  if (t < 2) throw PreconditionError("t must be >= 2");
  if (g.degree(u) == 0) throw PreconditionError("u is isolated");
  Lemma1Report rep;
  rep.r_uv = first_passage(g, u, v, t)[t];
  double sum = 0.0;
  rep.witness_value = -1.0;
  for (NodeId j : g.neighbors(u)) {
    const double rj = first_passage(g, j, v, t - 1)[t - 1];
    sum += rj;
    if (rj > rep.witness_value) {
      rep.witness_value = rj;
      rep.witness = j;
    }
  }
  rep.neighbor_mean = sum / static_cast<double>(g.degree(u));
  rep.identity_error = std::abs(rep.r_uv - rep.neighbor_mean);
  rep.margin = rep.witness_value - rep.r_uv;
  return rep;
}

/// Expected hitting times h_iv for all i, by solving (I - Q) h = 1 where Q
/// is P with v's row and column removed.
inline Eigen::VectorXd hitting_times(const Graph& g, NodeId v) {
  const auto comp = connected_components(g);
  const Eigen::Index n = g.num_nodes();
  std::vector<Eigen::Index> index(n, -1);
  std::vector<NodeId> states;
  for (NodeId i = 0; i < n; ++i) {
    if (i != v && comp[i] == comp[v]) {
      index[i] = static_cast<Eigen::Index>(states.size());
      states.push_back(i);
    }
  }
  const Eigen::Index k = static_cast<Eigen::Index>(states.size());
  Eigen::MatrixXd a = Eigen::MatrixXd::Identity(k, k);
  for (Eigen::Index s = 0; s < k; ++s) {
    const NodeId i = states[s];
    const double p = 1.0 / static_cast<double>(g.degree(i));
    for (NodeId j : g.neighbors(i)) {
      if (j != v) a(s, index[j]) -= p;
    }
  }
  const Eigen::VectorXd h = a.partialPivLu().solve(Eigen::VectorXd::Ones(k));
  Eigen::VectorXd out = Eigen::VectorXd::Constant(n, std::numeric_limits<double>::infinity());
  out[v] = 0.0;
  for (Eigen::Index s = 0; s < k; ++s) out[states[s]] = h[s];
  return out;
}

struct Lemma2Report {
  double h_uv = 0.0;
  double neighbor_mean = 0.0;    // average of h_jv over neighbors j of u
  double identity_error = 0.0;   // |h_uv - (1 + neighbor_mean)|
  NodeId witness = 0;            // neighbor with the smallest h_jv
  double witness_value = 0.0;
  std::size_t trials = 0;
  double mc_mean_time = 0.0;     // sampled mean hitting time
  double tail_prob = 0.0;        // sampled Pr(T >= 2 h_uv)
  double tail_stderr = 0.0;
  bool markov_ok() const { return tail_prob <= 0.5 + 3.0 * tail_stderr; }
};

/// Access-time identity h_uv = 1 + mean_j h_jv and the Markov bound
/// Pr(T_uv >= 2 h_uv) <= 1/2, the latter checked by sampling.
inline Lemma2Report check_lemma2(const Graph& g, NodeId u, NodeId v, std::size_t trials, std::uint64_t seed) {
  detail::require_nonadjacent_pair(g, u, v);
  const auto comp = connected_components(g);
  if (comp[u] != comp[v]) throw DegenerateError("v is unreachable from u; the hitting time is infinite");
  const Eigen::VectorXd h = hitting_times(g, v);
  Lemma2Report rep;
  rep.h_uv = h[u];
  double sum = 0.0;
  rep.witness_value = std::numeric_limits<double>::infinity();
  for (NodeId j : g.neighbors(u)) {
    sum += h[j];
    if (h[j] < rep.witness_value) {
      rep.witness_value = h[j];
      rep.witness = j;
    }
  }
  rep.neighbor_mean = sum / static_cast<double>(g.degree(u));
  rep.identity_error = std::abs(rep.h_uv - (1.0 + rep.neighbor_mean));

  rep.trials = trials;
  if (trials > 0) {
    Rng rng = Rng::derived(seed, 0x12a2);
    const double threshold = 2.0 * rep.h_uv;
    std::size_t tail = 0;
    double total = 0.0;
    for (std::size_t k = 0; k < trials; ++k) {
      NodeId cur = u;
      std::size_t steps = 0;
      while (cur != v) {
        const auto nb = g.neighbors(cur);
        cur = nb[rng.index(nb.size())];
        ++steps;
      }
      total += static_cast<double>(steps);
      tail += static_cast<double>(steps) >= threshold;
    }
    const double n = static_cast<double>(trials);
    rep.mc_mean_time = total / n;
    rep.tail_prob = static_cast<double>(tail) / n;
    rep.tail_stderr = std::sqrt(rep.tail_prob * (1.0 - rep.tail_prob) / n);
  }
  return rep;
}

struct Lemma3Report {
  std::size_t walk_length = 0;
  std::size_t trials = 0;
  std::vector<Edge> directed_edges;     // (u, v) per directed edge, CSR order
  std::vector<double> mean_visits;      // sampled mean traversals of u -> v
  std::vector<double> stderr_visits;
  std::vector<double> exact_visits;     // expectation from the degree-weighted start
  double max_mean() const { return mean_visits.empty() ? 0.0 : *std::max_element(mean_visits.begin(), mean_visits.end()); }
  /// Every directed edge within L + 3 standard errors.
  bool holds() const {
    for (std::size_t e = 0; e < mean_visits.size(); ++e) {
      if (mean_visits[e] > static_cast<double>(walk_length) + 3.0 * stderr_visits[e]) return false;
    }
    return true;
  }
  /// Both directions of {u, v} together; bounded by 2L.
  double undirected_mean(const Graph& g, NodeId u, NodeId v) const {
    const auto a = g.neighbor_index(u, v);
    const auto b = g.neighbor_index(v, u);
    if (!a || !b) throw ParameterError("not an edge");
    return mean_visits[g.edge_offset(u) + *a] + mean_visits[g.edge_offset(v) + *b];
  }
};

/// Expected directed traversals of each edge when every u starts d_u walks
/// of L steps: sum_{t<L} (d^T P^t)_u / d_u, which is exactly L because the
/// degree vector is stationary.
inline std::vector<double> exact_edge_visits(const Graph& g, std::size_t walk_length) {
  const ChainModel chain(g);
  Eigen::RowVectorXd occupancy = chain.degrees.transpose();
  Eigen::VectorXd per_node = Eigen::VectorXd::Zero(g.num_nodes());
  for (std::size_t t = 0; t < walk_length; ++t) {
    per_node += occupancy.transpose();
    occupancy = occupancy * chain.P;
  }
  std::vector<double> out(g.num_directed_edges(), 0.0);
  for (NodeId u = 0; u < g.num_nodes(); ++u) {
    for (std::size_t k = 0; k < g.degree(u); ++k) out[g.edge_offset(u) + k] = per_node[u] / chain.degrees[u];
  }
  return out;
}

/// Directed traversal counts I_(u->v) over `trials` independent repetitions
/// of the d_u-walks-per-node experiment.
inline Lemma3Report check_lemma3(const Graph& g, std::size_t walk_length, std::size_t trials, std::uint64_t seed) {
  require(walk_length >= 1, "walk length must be >= 1");
  require(trials >= 2, "need at least two trials");
  if (!is_connected(g)) throw PreconditionError("graph must be connected");
  const std::size_t m = g.num_directed_edges();
  Lemma3Report rep;
  rep.walk_length = walk_length;
  rep.trials = trials;
  for (NodeId u = 0; u < g.num_nodes(); ++u) {
    for (NodeId v : g.neighbors(u)) rep.directed_edges.emplace_back(u, v);
  }
  std::vector<double> sum(m, 0.0), sum_sq(m, 0.0);
  std::vector<std::uint32_t> counts(m);
  Rng rng = Rng::derived(seed, 0x13e3);
  for (std::size_t trial = 0; trial < trials; ++trial) {
    std::fill(counts.begin(), counts.end(), 0);
    for (NodeId s = 0; s < g.num_nodes(); ++s) {
      for (std::size_t w = 0; w < g.degree(s); ++w) {
        NodeId cur = s;
        for (std::size_t step = 0; step < walk_length; ++step) {
          const std::size_t k = rng.index(g.degree(cur));
          ++counts[g.edge_offset(cur) + k];
          cur = g.neighbors(cur)[k];
        }
      }
    }
    for (std::size_t e = 0; e < m; ++e) {
      sum[e] += counts[e];
      sum_sq[e] += static_cast<double>(counts[e]) * counts[e];
    }
  }
  const double n = static_cast<double>(trials);
  rep.mean_visits.resize(m);
  rep.stderr_visits.resize(m);
  for (std::size_t e = 0; e < m; ++e) {
    const double mean = sum[e] / n;
    const double var = std::max(0.0, (sum_sq[e] - n * mean * mean) / (n - 1.0));
    rep.mean_visits[e] = mean;
    rep.stderr_visits[e] = std::sqrt(var / n);
  }
  rep.exact_visits = exact_edge_visits(g, walk_length);
  return rep;
}

}  // namespace role2vec
