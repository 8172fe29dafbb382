#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "role2vec/error.hpp"
#include "role2vec/features.hpp"
#include "role2vec/graph.hpp"

namespace role2vec {

// Connected motifs on 2-4 nodes, in feature-column order x1..x9.
enum class Motif : std::size_t {
  edge = 0,
  two_star,
  triangle,
  three_star,
  four_path,
  four_cycle,
  tailed_triangle,
  diamond,
  four_clique,
};

inline constexpr std::size_t kNumMotifs = 9;

inline std::vector<std::string> motif_labels() {
  std::vector<std::string> labels;
  for (std::size_t k = 1; k <= kNumMotifs; ++k) labels.push_back("x" + std::to_string(k));
  return labels;
}

using MotifCounts = std::array<std::int64_t, kNumMotifs>;

namespace detail {

inline std::int64_t choose2(std::int64_t n) { return n < 2 ? 0 : n * (n - 1) / 2; }
inline std::int64_t choose3(std::int64_t n) { return n < 3 ? 0 : n * (n - 1) * (n - 2) / 6; }

// Triangles through each directed edge, indexed like the CSR adjacency.
inline std::vector<std::int64_t> edge_triangles(const Graph& g) {
  std::vector<std::int64_t> t(g.num_directed_edges(), 0);
  for (NodeId u = 0; u < g.num_nodes(); ++u) {
    auto nu = g.neighbors(u);
    for (std::size_t k = 0; k < nu.size(); ++k) {
      const NodeId v = nu[k];
      if (v < u) continue;
      auto nv = g.neighbors(v);
      std::int64_t common = 0;
      std::size_t a = 0, b = 0;
      while (a < nu.size() && b < nv.size()) {
        if (nu[a] < nv[b]) {
          ++a;
        } else if (nu[a] > nv[b]) {
          ++b;
        } else {
          ++common;
          ++a;
          ++b;
        }
      }
      t[g.edge_offset(u) + k] = common;
      t[g.edge_offset(v) + *g.neighbor_index(v, u)] = common;
    }
  }
  return t;
}

// Per-node scratch space so nodes can be processed independently.
struct MotifScratch {
  explicit MotifScratch(std::size_t n) : is_neighbor(n, 0), common_stamp(n, 0), codegree(n, 0) {}
  std::vector<char> is_neighbor;
  std::vector<std::uint32_t> common_stamp;
  std::vector<std::int64_t> codegree;
  std::vector<NodeId> touched;
  std::vector<std::pair<NodeId, std::size_t>> common;  // (v, index of v in N(u))
  std::uint32_t stamp = 0;
};

// Counts non-induced copies of each connected 4-node pattern that contain
// node i, then converts them to induced participation counts.
inline MotifCounts node_motifs(const Graph& g, NodeId i, const std::vector<std::int64_t>& tri_edge,
                               const std::vector<std::int64_t>& tri_node, MotifScratch& s) {
  const auto ni = g.neighbors(i);
  const std::int64_t di = static_cast<std::int64_t>(ni.size());
  auto deg = [&](NodeId x) { return static_cast<std::int64_t>(g.degree(x)); };

  std::int64_t wedge_ends = 0;    // sum_j (d_j - 1)
  std::int64_t star_leaf = 0;     // sum_j C(d_j - 1, 2)
  std::int64_t path_end = 0;      // i is an end of a 4-path
  std::int64_t path_mid = 0;      // i is interior to a 4-path
  std::int64_t tt_tail = 0;       // i is the pendant of a tailed triangle
  std::int64_t tt_tri = 0;        // i is on the triangle of a tailed triangle
  std::int64_t di_chord = 0;      // i is a chord endpoint of a diamond
  std::int64_t di_tip = 0;        // i is a degree-2 tip of a diamond
  std::int64_t k4_triple = 0;     // 3 * 4-cliques containing i
  std::int64_t c4 = 0;

  for (NodeId x : ni) s.is_neighbor[x] = 1;

  for (std::size_t ku = 0; ku < ni.size(); ++ku) {
    const NodeId u = ni[ku];
    const std::int64_t du = deg(u);
    const std::int64_t t_iu = tri_edge[g.edge_offset(i) + ku];
    wedge_ends += du - 1;
    star_leaf += choose2(du - 1);

    std::int64_t s_u = 0;  // sum over c in N(u) of (d_c - 1)
    auto nu = g.neighbors(u);
    s.common.clear();
    for (std::size_t kv = 0; kv < nu.size(); ++kv) {
      const NodeId c = nu[kv];
      s_u += deg(c) - 1;
      if (s.is_neighbor[c]) s.common.emplace_back(c, kv);
    }
    path_end += (s_u - (di - 1)) - t_iu;
    path_mid += (di - 1) * (du - 1) - t_iu;
    tt_tail += tri_node[u] - t_iu;
    di_chord += choose2(t_iu);

    ++s.stamp;
    for (auto [v, kv] : s.common) s.common_stamp[v] = s.stamp;
    for (auto [v, kv] : s.common) {
      if (v < u) continue;
      tt_tri += di + du + deg(v) - 6;
      di_tip += tri_edge[g.edge_offset(u) + kv] - 1;
      for (NodeId w : g.neighbors(v)) {
        if (s.common_stamp[w] == s.stamp) ++k4_triple;
      }
    }

    for (NodeId w : nu) {
      if (w == i) continue;
      if (s.codegree[w]++ == 0) s.touched.push_back(w);
    }
  }
  for (NodeId w : s.touched) {
    c4 += choose2(s.codegree[w]);
    s.codegree[w] = 0;
  }
  s.touched.clear();
  for (NodeId x : ni) s.is_neighbor[x] = 0;

  const std::int64_t ti = tri_node[i];
  const std::int64_t n_star = choose3(di) + star_leaf;
  const std::int64_t n_path = path_end + path_mid;
  const std::int64_t n_tt = tt_tri + tt_tail;
  const std::int64_t n_di = di_chord + di_tip;
  const std::int64_t n_k4 = k4_triple / 3;

  // Spanning-subgraph multiplicities of each pattern inside each induced
  // 4-node graph give a triangular system.
  const std::int64_t k4 = n_k4;
  const std::int64_t diamond = n_di - 6 * k4;
  const std::int64_t cycle = c4 - diamond - 3 * k4;
  const std::int64_t tailed = n_tt - 4 * diamond - 12 * k4;
  const std::int64_t star = n_star - tailed - 2 * diamond - 4 * k4;
  const std::int64_t path = n_path - 4 * cycle - 2 * tailed - 6 * diamond - 12 * k4;

  return {di, choose2(di) + wedge_ends - 3 * ti, ti, star, path, cycle, tailed, diamond, k4};
}

}  // namespace detail

/// Per-node induced participation counts of the nine 2-4 node motifs.
inline FeatureMatrix count_motifs(const Graph& g, unsigned threads = 1) {
  const std::size_t n = g.num_nodes();
  const auto tri_edge = detail::edge_triangles(g);
  std::vector<std::int64_t> tri_node(n, 0);
  for (NodeId i = 0; i < n; ++i) {
    std::int64_t sum = 0;
    for (std::size_t k = 0; k < g.degree(i); ++k) sum += tri_edge[g.edge_offset(i) + k];
    tri_node[i] = sum / 2;
  }

  FeatureMatrix x(n, motif_labels());
  auto work = [&](std::size_t begin, std::size_t end) {
    detail::MotifScratch scratch(n);
    for (std::size_t i = begin; i < end; ++i) {
      auto counts = detail::node_motifs(g, static_cast<NodeId>(i), tri_edge, tri_node, scratch);
      for (std::size_t k = 0; k < kNumMotifs; ++k) x(i, k) = static_cast<double>(counts[k]);
    }
  };
  threads = std::max(1u, threads);
  if (threads == 1 || n < 2 * threads) {
    work(0, n);
  } else {
    std::vector<std::jthread> pool;
    const std::size_t chunk = (n + threads - 1) / threads;
    for (std::size_t b = 0; b < n; b += chunk) pool.emplace_back(work, b, std::min(n, b + chunk));
  }
  return x;
}

inline constexpr std::size_t kBruteForceMaxNodes = 64;

/// Reference counts by enumerating every 2-, 3- and 4-node subset and
/// classifying its induced subgraph by edge count and degree sequence.
inline FeatureMatrix brute_force_motifs(const Graph& g) {
  const std::size_t n = g.num_nodes();
  if (n > kBruteForceMaxNodes) {
    throw SizeError("brute-force motif enumeration supports at most " +
                    std::to_string(kBruteForceMaxNodes) + " nodes, got " + std::to_string(n));
  }
  std::vector<std::vector<char>> adj(n, std::vector<char>(n, 0));
  for (auto [u, v] : g.edges()) adj[u][v] = adj[v][u] = 1;

  FeatureMatrix x(n, motif_labels());
  auto bump = [&](std::initializer_list<std::size_t> nodes, Motif m) {
    for (std::size_t v : nodes) x(v, static_cast<std::size_t>(m)) += 1.0;
  };

  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a + 1; b < n; ++b) {
      if (adj[a][b]) bump({a, b}, Motif::edge);
      for (std::size_t c = b + 1; c < n; ++c) {
        const int e3 = adj[a][b] + adj[a][c] + adj[b][c];
        if (e3 == 2) bump({a, b, c}, Motif::two_star);
        if (e3 == 3) bump({a, b, c}, Motif::triangle);
        for (std::size_t d = c + 1; d < n; ++d) {
          std::array<int, 4> deg{adj[a][b] + adj[a][c] + adj[a][d], adj[a][b] + adj[b][c] + adj[b][d],
                                 adj[a][c] + adj[b][c] + adj[c][d], adj[a][d] + adj[b][d] + adj[c][d]};
          const int edges = (deg[0] + deg[1] + deg[2] + deg[3]) / 2;
          std::sort(deg.begin(), deg.end());
          std::optional<Motif> m;
          if (edges == 3 && deg == std::array<int, 4>{1, 1, 2, 2}) m = Motif::four_path;
          if (edges == 3 && deg == std::array<int, 4>{1, 1, 1, 3}) m = Motif::three_star;
          if (edges == 4 && deg == std::array<int, 4>{2, 2, 2, 2}) m = Motif::four_cycle;
          if (edges == 4 && deg == std::array<int, 4>{1, 2, 2, 3}) m = Motif::tailed_triangle;
          if (edges == 5) m = Motif::diamond;
          if (edges == 6) m = Motif::four_clique;
          if (m) bump({a, b, c, d}, *m);
        }
      }
    }
  }
  return x;
}

}  // namespace role2vec
