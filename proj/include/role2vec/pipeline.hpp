#pragma once

#include <chrono>
#include <cstdint>

#include "role2vec/embedding.hpp"
#include "role2vec/graph.hpp"
#include "role2vec/phi.hpp"
#include "role2vec/random.hpp"
#include "role2vec/transitions.hpp"
#include "role2vec/typing.hpp"
#include "role2vec/walks.hpp"

namespace role2vec {

/// Everything needed to go from a graph to type embeddings.
struct Role2VecConfig {
  PhiConfig phi;
  WalkParams walk;
  TrainConfig train;
  unsigned threads = 1;
};

struct StageTimings {
  double types_ms = 0.0;
  double walks_ms = 0.0;
  double train_ms = 0.0;
  double total() const { return types_ms + walks_ms + train_ms; }
};

struct Role2VecResult {
  TypeAssignment types;
  EmbeddingModel model;
  StageTimings timings;

  std::size_t num_types() const { return types.num_types(); }
  std::size_t bytes() const { return embedding_bytes(model.num_types, model.dims, types.num_nodes()); }
};

namespace detail {

inline double elapsed_ms(std::chrono::steady_clock::time_point since) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - since).count();
}

}  // namespace detail

/// Types, walk corpus, then SGNS. Each stage gets its own stream derived
/// from `seed`.
inline Role2VecResult embed_graph(const Graph& g, const Role2VecConfig& cfg, std::uint64_t seed) {
  cfg.walk.validate();
  cfg.train.validate();
  Role2VecResult out;
  auto t0 = std::chrono::steady_clock::now();
  out.types = compute_types(g, cfg.phi, derive_seed(seed, 0x7e5), cfg.threads);
  out.timings.types_ms = detail::elapsed_ms(t0);

  t0 = std::chrono::steady_clock::now();
  const WalkCorpus corpus =
      generate_walks(g, out.types, cfg.walk, WalkOptions{derive_seed(seed, 0x3a1c), cfg.threads});
  out.timings.walks_ms = detail::elapsed_ms(t0);

  t0 = std::chrono::steady_clock::now();
  TrainConfig tc = cfg.train;
  tc.seed = derive_seed(seed, 0x5e9);
  tc.threads = cfg.threads;
  out.model = train(corpus, out.types.num_types(), tc);
  out.timings.train_ms = detail::elapsed_ms(t0);
  return out;
}

}  // namespace role2vec
