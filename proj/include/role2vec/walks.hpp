#pragma once

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <ostream>
#include <span>
#include <thread>
#include <variant>
#include <vector>

#include "role2vec/error.hpp"
#include "role2vec/graph.hpp"
#include "role2vec/random.hpp"
#include "role2vec/transitions.hpp"
#include "role2vec/typing.hpp"

namespace role2vec {

using Symbol = std::uint32_t;

/// Fixed-length symbol sequences stored back to back.
struct WalkCorpus {
  std::size_t walk_length = 0;
  std::size_t rounds = 0;
  std::vector<Symbol> symbols;       // num_walks() * walk_length
  std::vector<NodeId> start_nodes;   // one per walk

  std::size_t num_walks() const noexcept { return start_nodes.size(); }
  std::span<const Symbol> walk(std::size_t w) const {
    return {symbols.data() + w * walk_length, walk_length};
  }

  /// Largest symbol + 1 (0 for an empty corpus).
  std::size_t alphabet_size() const {
    Symbol max_s = 0;
    for (Symbol s : symbols) max_s = std::max(max_s, s);
    return symbols.empty() ? 0 : static_cast<std::size_t>(max_s) + 1;
  }

  /// Image of this corpus under a vertex -> type map.
  WalkCorpus map_types(const TypeAssignment& types) const {
    WalkCorpus out = *this;
    for (Symbol& s : out.symbols) s = types[s];
    return out;
  }

  friend bool operator==(const WalkCorpus&, const WalkCorpus&) = default;
};

struct WalkOptions {
  std::uint64_t seed = 1;
  unsigned threads = 1;
};

namespace detail {

template <StepSampler Sampler>
void run_walk(const Sampler& sampler, NodeId start, std::size_t length, Rng& rng, Symbol* out) {
  const Graph& g = sampler.graph();
  NodeId cur = start;
  out[0] = cur;
  if (length < 2) return;
  std::size_t k = sampler.first_step(cur, rng);
  std::size_t edge = g.edge_offset(cur) + k;
  cur = g.neighbors(cur)[k];
  out[1] = cur;
  for (std::size_t step = 2; step < length; ++step) {
    k = sampler.next_step(edge, cur, rng);
    edge = g.edge_offset(cur) + k;
    cur = g.neighbors(cur)[k];
    out[step] = cur;
  }
}

}  // namespace detail

/// Node-id walks. Each round visits nodes in a seeded random order; a walk
/// from node v in round r draws from its own stream (seed, r, v), so the
/// corpus does not depend on thread scheduling. Isolated nodes start no
/// walks. Walks are stored by round, then by position in that round's order.
template <StepSampler Sampler>
WalkCorpus generate_node_walks(const Sampler& sampler, const WalkParams& params,
                               const WalkOptions& opt = {}) {
  params.validate();
  const Graph& g = sampler.graph();
  const std::size_t isolated = g.num_isolated();
  if (isolated == g.num_nodes()) throw EmptyGraphError("every node is isolated; no walks possible");
  if (isolated > 0) warn(std::to_string(isolated) + " isolated node(s) start no walks");

  WalkCorpus corpus;
  corpus.walk_length = params.walk_length;
  corpus.rounds = params.walks_per_node;
  for (std::size_t round = 0; round < params.walks_per_node; ++round) {
    Rng order_rng = Rng::derived(opt.seed, 0x0de5, round);
    for (NodeId v : random_permutation(g.num_nodes(), order_rng)) {
      if (g.degree(v) > 0) corpus.start_nodes.push_back(v);
    }
  }
  const std::size_t per_round = g.num_nodes() - isolated;
  corpus.symbols.resize(corpus.start_nodes.size() * params.walk_length);

  auto work = [&](std::size_t begin, std::size_t end) {
    for (std::size_t w = begin; w < end; ++w) {
      const std::size_t round = w / per_round;
      const NodeId start = corpus.start_nodes[w];
      Rng rng = Rng::derived(opt.seed, 0x3a1c, round, start);
      detail::run_walk(sampler, start, params.walk_length, rng,
                       corpus.symbols.data() + w * params.walk_length);
    }
  };
  const std::size_t total = corpus.start_nodes.size();
  const unsigned threads = std::max(1u, opt.threads);
  if (threads == 1 || total < 2 * threads) {
    work(0, total);
  } else {
    std::vector<std::jthread> pool;
    const std::size_t chunk = (total + threads - 1) / threads;
    for (std::size_t b = 0; b < total; b += chunk) pool.emplace_back(work, b, std::min(total, b + chunk));
  }
  return corpus;
}

/// Node walks with first-order sampling when p = q = 1, second-order
/// otherwise.
inline WalkCorpus generate_node_walks(const Graph& g, const WalkParams& params,
                                      const WalkOptions& opt = {}) {
  params.validate();
  if (params.unbiased()) return generate_node_walks(FirstOrderSampler(g), params, opt);
  return generate_node_walks(SecondOrderSampler(g, params), params, opt);
}

/// Attributed walks: the node walks emitted as vertex types.
inline WalkCorpus generate_walks(const Graph& g, const TypeAssignment& types, const WalkParams& params,
                                 const WalkOptions& opt = {}) {
  if (types.num_nodes() != g.num_nodes()) {
    throw MismatchError("type assignment covers " + std::to_string(types.num_nodes()) +
                        " nodes but the graph has " + std::to_string(g.num_nodes()));
  }
  return generate_node_walks(g, params, opt).map_types(types);
}

template <StepSampler Sampler>
WalkCorpus generate_walks(const Sampler& sampler, const TypeAssignment& types, const WalkParams& params,
                          const WalkOptions& opt = {}) {
  if (types.num_nodes() != sampler.graph().num_nodes()) {
    throw MismatchError("type assignment and graph disagree on node count");
  }
  return generate_node_walks(sampler, params, opt).map_types(types);
}

/// One walk per line, space-separated symbols.
inline void write_corpus(const WalkCorpus& corpus, std::ostream& out) {
  for (std::size_t w = 0; w < corpus.num_walks(); ++w) {
    auto walk = corpus.walk(w);
    for (std::size_t k = 0; k < walk.size(); ++k) {
      if (k) out << ' ';
      out << walk[k];
    }
    out << '\n';
  }
}

}  // namespace role2vec
