#pragma once

#include <algorithm>
#include <cstdint>
#include <set>
#include <vector>

#include "role2vec/error.hpp"
#include "role2vec/graph.hpp"
#include "role2vec/random.hpp"

namespace role2vec {

/// G(n, p): each of the n(n-1)/2 pairs is an edge independently.
inline Graph erdos_renyi(std::size_t n, double p, std::uint64_t seed) {
  require(p >= 0.0 && p <= 1.0, "edge probability must lie in [0, 1]");
  Rng rng = Rng::derived(seed, 0xe7d05);
  std::vector<Edge> edges;
  for (NodeId u = 0; u < n; ++u) {
    for (NodeId v = u + 1; v < n; ++v) {
      if (rng.uniform() < p) edges.emplace_back(u, v);
    }
  }
  return Graph::from_edges(n, edges);
}

/// Preferential attachment: each new node links to `m` distinct earlier
/// nodes chosen proportionally to degree. Degrees follow a power law with
/// exponent about 3. Starts from a clique on m + 1 nodes.
inline Graph barabasi_albert(std::size_t n, std::size_t m, std::uint64_t seed) {
  require(m >= 1, "attachment count must be >= 1");
  require(n > m, "need more nodes than attachments per node");
  Rng rng = Rng::derived(seed, 0xba);
  std::vector<Edge> edges;
  std::vector<NodeId> endpoints;  // node repeated once per incident edge
  for (NodeId u = 0; u <= m; ++u) {
    for (NodeId v = u + 1; v <= m; ++v) {
      edges.emplace_back(u, v);
      endpoints.push_back(u);
      endpoints.push_back(v);
    }
  }
  std::vector<NodeId> targets;
  for (NodeId v = static_cast<NodeId>(m + 1); v < n; ++v) {
    targets.clear();
    while (targets.size() < m) {
      const NodeId t = endpoints[rng.index(endpoints.size())];
      if (std::find(targets.begin(), targets.end(), t) == targets.end()) targets.push_back(t);
    }
    for (NodeId t : targets) {
      edges.emplace_back(t, v);
      endpoints.push_back(t);
      endpoints.push_back(v);
    }
  }
  return Graph::from_edges(n, edges);
}

/// Relabels vertices: vertex i of g becomes perm[i].
inline Graph permute(const Graph& g, const std::vector<NodeId>& perm) {
  if (perm.size() != g.num_nodes()) throw ParameterError("permutation has wrong length");
  std::vector<Edge> edges;
  for (auto [u, v] : g.edges()) edges.emplace_back(perm[u], perm[v]);
  return Graph::from_edges(g.num_nodes(), edges);
}

}  // namespace role2vec
