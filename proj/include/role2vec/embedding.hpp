#pragma once

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <ostream>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include "role2vec/alias_table.hpp"
#include "role2vec/error.hpp"
#include "role2vec/random.hpp"
#include "role2vec/typing.hpp"
#include "role2vec/walks.hpp"

namespace role2vec {

/// Per-type embedding vectors (alpha) and context vectors (beta), m x D each.
template <typename Real>
struct BasicEmbeddingModel {
  std::size_t num_types = 0;
  std::size_t dims = 0;
  std::vector<Real> alpha;
  std::vector<Real> beta;

  BasicEmbeddingModel() = default;
  BasicEmbeddingModel(std::size_t m, std::size_t d)
      : num_types(m), dims(d), alpha(m * d, Real{0}), beta(m * d, Real{0}) {}

  std::span<Real> embedding(std::size_t t) { return {alpha.data() + t * dims, dims}; }
  std::span<const Real> embedding(std::size_t t) const { return {alpha.data() + t * dims, dims}; }
  std::span<Real> context(std::size_t t) { return {beta.data() + t * dims, dims}; }
  std::span<const Real> context(std::size_t t) const { return {beta.data() + t * dims, dims}; }

  /// Bytes held by the parameters; independent of the number of vertices.
  std::size_t parameter_bytes() const noexcept { return (alpha.size() + beta.size()) * sizeof(Real); }

  bool all_finite() const {
    auto ok = [](Real x) { return std::isfinite(static_cast<double>(x)); };
    return std::all_of(alpha.begin(), alpha.end(), ok) && std::all_of(beta.begin(), beta.end(), ok);
  }

  friend bool operator==(const BasicEmbeddingModel&, const BasicEmbeddingModel&) = default;
};

using EmbeddingModel = BasicEmbeddingModel<float>;

/// Stored size of a type-level embedding: m*D floats plus a vertex -> type
/// table.
constexpr std::size_t embedding_bytes(std::size_t num_types, std::size_t dims, std::size_t num_nodes) {
  return num_types * dims * sizeof(float) + num_nodes * sizeof(TypeId);
}

/// Stored size of a per-vertex embedding of the same dimension.
constexpr std::size_t per_node_embedding_bytes(std::size_t num_nodes, std::size_t dims) {
  return num_nodes * dims * sizeof(float);
}

template <typename A, typename B>
double dot(std::span<A> a, std::span<B> b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += static_cast<double>(a[k]) * static_cast<double>(b[k]);
  return s;
}

inline double sigmoid(double x) {
  if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

inline double log_sigmoid(double x) {
  return x >= 0 ? -std::log1p(std::exp(-x)) : x - std::log1p(std::exp(x));
}

/// Full softmax P(j | i) over all context vectors, with max-subtraction.
template <typename Real>
double softmax_prob(const BasicEmbeddingModel<Real>& model, std::size_t i, std::size_t j) {
  if (i >= model.num_types || j >= model.num_types) throw ParameterError("type id out of range");
  std::vector<double> logits(model.num_types);
  for (std::size_t k = 0; k < model.num_types; ++k) logits[k] = dot(model.embedding(i), model.context(k));
  const double top = *std::max_element(logits.begin(), logits.end());
  double z = 0.0;
  for (double l : logits) z += std::exp(l - top);
  return std::exp(logits[j] - top) / z;
}

/// log sigma(a_i . b_j) + sum_k log sigma(-a_i . b_k)
template <typename Real>
double sgns_objective(const BasicEmbeddingModel<Real>& model, std::size_t i, std::size_t j,
                      std::span<const std::size_t> negatives) {
  double value = log_sigmoid(dot(model.embedding(i), model.context(j)));
  for (std::size_t k : negatives) value += log_sigmoid(-dot(model.embedding(i), model.context(k)));
  return value;
}

/// Dense gradient of sgns_objective with respect to every alpha and beta.
struct SgnsGradient {
  std::vector<double> alpha;
  std::vector<double> beta;
};

template <typename Real>
SgnsGradient sgns_gradient(const BasicEmbeddingModel<Real>& model, std::size_t i, std::size_t j,
                           std::span<const std::size_t> negatives) {
  const std::size_t d = model.dims;
  SgnsGradient g{std::vector<double>(model.alpha.size(), 0.0), std::vector<double>(model.beta.size(), 0.0)};
  auto accumulate = [&](std::size_t target, double coeff) {
    auto a = model.embedding(i);
    auto b = model.context(target);
    for (std::size_t k = 0; k < d; ++k) {
      g.alpha[i * d + k] += coeff * static_cast<double>(b[k]);
      g.beta[target * d + k] += coeff * static_cast<double>(a[k]);
    }
  };
  accumulate(j, 1.0 - sigmoid(dot(model.embedding(i), model.context(j))));
  for (std::size_t k : negatives) accumulate(k, -sigmoid(dot(model.embedding(i), model.context(k))));
  return g;
}

struct TrainConfig {
  std::size_t dims = 128;         // D
  std::size_t window = 10;        // omega
  std::size_t negatives = 5;
  double learning_rate = 0.025;   // initial step size
  std::size_t epochs = 1;
  std::uint64_t seed = 1;
  unsigned threads = 1;           // > 1 runs lock-free asynchronous updates

  void validate() const {
    require(dims >= 1, "embedding dimension must be >= 1");
    require(window >= 1, "window size must be >= 1");
    require(negatives >= 1, "negatives per positive must be >= 1");
    require(learning_rate > 0.0, "learning rate must be > 0");
    require(epochs >= 1, "epochs must be >= 1");
  }
};

/// Negative-sampling distribution: corpus frequency of each type to the 3/4.
inline AliasTable negative_table(const WalkCorpus& corpus, std::size_t num_types) {
  std::vector<double> counts(num_types, 0.0);
  for (Symbol s : corpus.symbols) counts[s] += 1.0;
  for (double& c : counts) c = std::pow(c, 0.75);
  if (std::all_of(counts.begin(), counts.end(), [](double c) { return c == 0.0; })) {
    std::fill(counts.begin(), counts.end(), 1.0);
  }
  return AliasTable(counts);
}

namespace detail {

// Parameter access policy: plain for single-threaded training, relaxed
// atomics when several workers share the parameter arrays.
struct PlainAccess {
  static float load(const float& x) { return x; }
  static void add(float& x, float delta) { x += delta; }
};

struct RelaxedAccess {
  static float load(const float& x) {
    return std::atomic_ref<float>(const_cast<float&>(x)).load(std::memory_order_relaxed);
  }
  static void add(float& x, float delta) {
    std::atomic_ref<float> ref(x);
    ref.store(ref.load(std::memory_order_relaxed) + delta, std::memory_order_relaxed);
  }
};

template <typename Access>
class SgnsWorker {
 public:
  SgnsWorker(EmbeddingModel& model, const AliasTable& negatives, const TrainConfig& cfg)
      : model_(model), negatives_(negatives), cfg_(cfg), grad_(cfg.dims) {}

  // `rate(k)` is the step size for the k-th center of this walk.
  template <typename Rate>
  void run_walk(std::span<const Symbol> walk, Rng& rng, Rate rate) {
    const std::size_t len = walk.size();
    for (std::size_t c = 0; c < len; ++c) {
      const double lr = rate(c);
      const std::size_t reach = 1 + rng.index(cfg_.window);
      const std::size_t lo = c >= reach ? c - reach : 0;
      const std::size_t hi = std::min(len - 1, c + reach);
      for (std::size_t ctx = lo; ctx <= hi; ++ctx) {
        if (ctx != c) update_pair(walk[c], walk[ctx], rng, lr);
      }
    }
  }

  void update_pair(Symbol center, Symbol context, Rng& rng, double lr) {
    const std::size_t d = cfg_.dims;
    float* a = model_.alpha.data() + static_cast<std::size_t>(center) * d;
    std::fill(grad_.begin(), grad_.end(), 0.0f);
    for (std::size_t n = 0; n <= cfg_.negatives; ++n) {
      std::size_t target = context;
      double label = 1.0;
      if (n > 0) {
        target = negatives_.sample(rng);
        if (target == context) continue;
        label = 0.0;
      }
      float* b = model_.beta.data() + target * d;
      double f = 0.0;
      for (std::size_t k = 0; k < d; ++k) f += static_cast<double>(Access::load(a[k])) * Access::load(b[k]);
      const float g = static_cast<float>((label - sigmoid(f)) * lr);
      for (std::size_t k = 0; k < d; ++k) grad_[k] += g * Access::load(b[k]);
      for (std::size_t k = 0; k < d; ++k) Access::add(b[k], g * Access::load(a[k]));
    }
    for (std::size_t k = 0; k < d; ++k) Access::add(a[k], grad_[k]);
  }

 private:
  EmbeddingModel& model_;
  const AliasTable& negatives_;
  const TrainConfig& cfg_;
  std::vector<float> grad_;
};

}  // namespace detail

/// Skip-gram with negative sampling over a type corpus.
///
/// alpha starts uniform in [-0.5/D, 0.5/D], beta at zero. Each center uses
/// a window drawn uniformly from 1..omega; every (center, context) pair gets
/// `negatives` draws from the unigram^0.75 table (draws equal to the context
/// are skipped). The step size decays linearly to 1e-4 of its initial value
/// over all center positions. Each walk draws from its own stream
/// (seed, epoch, walk), so the single-threaded result is bit-reproducible.
inline EmbeddingModel train(const WalkCorpus& corpus, std::size_t num_types, const TrainConfig& cfg) {
  cfg.validate();
  require(num_types >= 1, "number of types must be >= 1");
  for (Symbol s : corpus.symbols) {
    if (s >= num_types) {
      throw MismatchError("corpus symbol " + std::to_string(s) + " is outside the model's " +
                          std::to_string(num_types) + " types");
    }
  }
  EmbeddingModel model(num_types, cfg.dims);
  {
    Rng init = Rng::derived(cfg.seed, 0xa1fa);
    const double half = 0.5 / static_cast<double>(cfg.dims);
    for (float& x : model.alpha) x = static_cast<float>(init.uniform(-half, half));
  }
  if (corpus.num_walks() == 0) return model;

  const AliasTable negatives = negative_table(corpus, num_types);
  const double total = static_cast<double>(cfg.epochs * corpus.symbols.size());
  const std::size_t walk_len = corpus.walk_length;
  auto rate_at = [&](std::size_t processed) {
    return cfg.learning_rate * (1.0 - (1.0 - 1e-4) * static_cast<double>(processed) / total);
  };

  const unsigned threads = std::max(1u, cfg.threads);
  for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    const std::size_t base = epoch * corpus.symbols.size();
    if (threads == 1) {
      detail::SgnsWorker<detail::PlainAccess> worker(model, negatives, cfg);
      for (std::size_t w = 0; w < corpus.num_walks(); ++w) {
        Rng rng = Rng::derived(cfg.seed, 0x5e9, epoch, w);
        worker.run_walk(corpus.walk(w), rng, [&, w](std::size_t c) { return rate_at(base + w * walk_len + c); });
      }
    } else {
      std::atomic<std::size_t> next{0};
      auto work = [&] {
        detail::SgnsWorker<detail::RelaxedAccess> worker(model, negatives, cfg);
        for (std::size_t w = next++; w < corpus.num_walks(); w = next++) {
          Rng rng = Rng::derived(cfg.seed, 0x5e9, epoch, w);
          worker.run_walk(corpus.walk(w), rng, [&, w](std::size_t c) { return rate_at(base + w * walk_len + c); });
        }
      };
      std::vector<std::jthread> pool;
      for (unsigned t = 0; t < threads; ++t) pool.emplace_back(work);
    }
  }
  if (!model.all_finite()) throw DegenerateError("training produced non-finite parameters");
  return model;
}

/// Embedding of a vertex: alpha of its type.
inline std::span<const float> node_embedding(const EmbeddingModel& model, const TypeAssignment& types,
                                             NodeId i) {
  return model.embedding(types[i]);
}

namespace detail {

inline void write_matrix(std::size_t m, std::size_t d, const std::vector<float>& values, std::ostream& out) {
  out << m << ' ' << d << '\n';
  char buf[32];
  for (std::size_t t = 0; t < m; ++t) {
    out << t;
    for (std::size_t k = 0; k < d; ++k) {
      auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), values[t * d + k]);
      out << ' ' << std::string_view(buf, static_cast<std::size_t>(ptr - buf));
    }
    out << '\n';
  }
}

}  // namespace detail

/// Text export: "m D" header, then "type v_1 ... v_D" per type (alpha).
inline void write_embedding(const EmbeddingModel& model, std::ostream& out) {
  detail::write_matrix(model.num_types, model.dims, model.alpha, out);
}

inline void write_context(const EmbeddingModel& model, std::ostream& out) {
  detail::write_matrix(model.num_types, model.dims, model.beta, out);
}

/// Reads the alpha export back (beta is left zero).
inline EmbeddingModel read_embedding(std::istream& in) {
  std::size_t m = 0, d = 0;
  if (!(in >> m >> d)) throw ParseError("missing 'm D' header", 1);
  EmbeddingModel model(m, d);
  for (std::size_t t = 0; t < m; ++t) {
    std::size_t id = 0;
    if (!(in >> id) || id != t) throw ParseError("expected type id " + std::to_string(t), t + 2);
    for (std::size_t k = 0; k < d; ++k) {
      if (!(in >> model.alpha[t * d + k])) throw ParseError("short embedding row", t + 2);
    }
  }
  return model;
}

}  // namespace role2vec
