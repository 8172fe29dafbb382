#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "role2vec/embedding.hpp"
#include "role2vec/error.hpp"
#include "role2vec/graph.hpp"
#include "role2vec/pipeline.hpp"
#include "role2vec/random.hpp"

namespace role2vec {

/// Held-out edges and an equal number of non-edges; the residual graph is
/// what the embedding sees.
struct EdgeSplit {
  Graph residual;
  std::vector<Edge> positives;
  std::vector<Edge> negatives;
  std::uint64_t seed = 0;
};

/// Removes floor(fraction * Ne) edges uniformly at random. Unless
/// `allow_isolation`, an edge whose removal would leave an endpoint with no
/// edges is rejected and another is drawn. Since degrees only go down, a
/// rejected edge never becomes removable, so drawing from a shuffled list
/// is the same as redrawing with replacement from what remains.
inline EdgeSplit split_edges(const Graph& g, double fraction, std::uint64_t seed, bool allow_isolation = false) {
  if (!(fraction > 0.0 && fraction < 1.0)) throw ParameterError("split fraction must lie in (0, 1)");
  const std::vector<Edge> edges = g.edges();
  const std::size_t target = static_cast<std::size_t>(std::floor(fraction * static_cast<double>(edges.size())));
  EdgeSplit split;
  split.seed = seed;

  Rng rng = Rng::derived(seed, 0x5b17);
  std::vector<std::size_t> order(edges.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  rng.shuffle(order);
  std::vector<std::size_t> degree(g.num_nodes());
  for (NodeId i = 0; i < g.num_nodes(); ++i) degree[i] = g.degree(i);
  std::size_t rejections = 0;
  const std::size_t max_rejections = 100 * std::max<std::size_t>(edges.size(), 1);
  for (std::size_t k = 0; k < order.size() && split.positives.size() < target; ++k) {
    const auto [u, v] = edges[order[k]];
    if (!allow_isolation && (degree[u] < 2 || degree[v] < 2)) {
      if (++rejections > max_rejections) break;
      continue;
    }
    --degree[u];
    --degree[v];
    split.positives.push_back(edges[order[k]]);
  }
  if (split.positives.size() < target) {
    throw SplitInfeasibleError("only " + std::to_string(split.positives.size()) + " of " +
                               std::to_string(target) + " edges can be removed without isolating a node");
  }

  // Negatives: distinct non-adjacent pairs of the original graph.
  const std::size_t n = g.num_nodes();
  const std::size_t pairs = n * (n - 1) / 2;
  const std::size_t non_edges = pairs - edges.size();
  if (non_edges < target) {
    throw SplitInfeasibleError("graph has " + std::to_string(non_edges) + " non-adjacent pairs but " +
                               std::to_string(target) + " negatives are needed");
  }
  if (non_edges <= 4 * target || n <= 2048) {
    std::vector<Edge> pool;
    pool.reserve(non_edges);
    for (NodeId u = 0; u < n; ++u) {
      for (NodeId v = u + 1; v < n; ++v) {
        if (!g.has_edge(u, v)) pool.emplace_back(u, v);
      }
    }
    for (std::size_t k = 0; k < target; ++k) {
      std::swap(pool[k], pool[k + rng.index(pool.size() - k)]);
      split.negatives.push_back(pool[k]);
    }
  } else {
    std::set<Edge> seen;
    while (split.negatives.size() < target) {
      NodeId u = static_cast<NodeId>(rng.index(n));
      NodeId v = static_cast<NodeId>(rng.index(n));
      if (u == v) continue;
      if (u > v) std::swap(u, v);
      if (g.has_edge(u, v) || !seen.emplace(u, v).second) continue;
      split.negatives.emplace_back(u, v);
    }
  }
  split.residual = g.without_edges(split.positives);
  return split;
}

enum class EdgeOp { mean, hadamard };

inline std::string to_string(EdgeOp op) { return op == EdgeOp::mean ? "mean" : "hadamard"; }

inline EdgeOp parse_edge_op(const std::string& s) {
  if (s == "mean") return EdgeOp::mean;
  if (s == "hadamard") return EdgeOp::hadamard;
  throw ParameterError("unknown edge operator '" + s + "' (expected mean or hadamard)");
}

template <typename A, typename B>
std::vector<double> edge_features(std::span<A> a, std::span<B> b, EdgeOp op) {
  if (a.size() != b.size()) throw ParameterError("edge feature operands differ in dimension");
  std::vector<double> out(a.size());
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double x = static_cast<double>(a[k]);
    const double y = static_cast<double>(b[k]);
    out[k] = op == EdgeOp::mean ? 0.5 * (x + y) : x * y;
  }
  return out;
}

inline std::vector<double> edge_features(const std::vector<double>& a, const std::vector<double>& b, EdgeOp op) {
  return edge_features(std::span<const double>(a), std::span<const double>(b), op);
}

/// L2-regularized logistic regression. The bias is not penalized.
struct LRModel {
  Eigen::VectorXd weights;
  double bias = 0.0;
  double l2 = 0.0;
  std::vector<double> loss_trace;  // regularized objective per iteration
  std::size_t iterations = 0;

  double decision(const Eigen::Ref<const Eigen::RowVectorXd>& x) const { return x.dot(weights) + bias; }
  Eigen::VectorXd decision(const Eigen::MatrixXd& x) const {
    return (x * weights).array() + bias;
  }
  Eigen::VectorXd predict_proba(const Eigen::MatrixXd& x) const {
    return decision(x).unaryExpr([](double z) { return sigmoid(z); });
  }
};

namespace detail {

// Mean negative log-likelihood + (l2 / 2) * |w|^2.
inline double lr_objective(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, const Eigen::VectorXd& w, double b,
                           double l2) {
  const Eigen::VectorXd z = (x * w).array() + b;
  double nll = 0.0;
  for (Eigen::Index i = 0; i < z.size(); ++i) nll -= y[i] > 0.5 ? log_sigmoid(z[i]) : log_sigmoid(-z[i]);
  return nll / static_cast<double>(z.size()) + 0.5 * l2 * w.squaredNorm();
}

inline void check_two_classes(const Eigen::VectorXd& y) {
  const double pos = y.sum();
  if (pos < 0.5 || pos > static_cast<double>(y.size()) - 0.5) {
    throw DegenerateError("labels contain a single class");
  }
}

}  // namespace detail

/// Full-batch gradient descent with Armijo backtracking, stopping when the
/// gradient norm drops below 1e-6 or after `max_iters` steps.
inline LRModel train_lr(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, double l2, std::size_t max_iters = 500) {
  require(l2 >= 0.0, "l2 strength must be >= 0");
  if (x.rows() != y.size()) throw ParameterError("feature and label counts differ");
  detail::check_two_classes(y);
  const double n = static_cast<double>(x.rows());
  LRModel model;
  model.l2 = l2;
  model.weights = Eigen::VectorXd::Zero(x.cols());
  double f = detail::lr_objective(x, y, model.weights, model.bias, l2);
  model.loss_trace.push_back(f);
  double step = 1.0;
  for (std::size_t it = 0; it < max_iters; ++it) {
    const Eigen::VectorXd p = model.predict_proba(x);
    const Eigen::VectorXd r = p - y;
    const Eigen::VectorXd gw = x.transpose() * r / n + l2 * model.weights;
    const double gb = r.sum() / n;
    const double gnorm2 = gw.squaredNorm() + gb * gb;
    if (std::sqrt(gnorm2) < 1e-6) break;
    step *= 2.0;
    for (;;) {
      const Eigen::VectorXd w = model.weights - step * gw;
      const double b = model.bias - step * gb;
      const double fn = detail::lr_objective(x, y, w, b, l2);
      if (fn <= f - 0.5 * step * gnorm2) {
        model.weights = w;
        model.bias = b;
        f = fn;
        break;
      }
      step *= 0.5;
      if (step < 1e-20) break;
    }
    model.loss_trace.push_back(f);
    model.iterations = it + 1;
    if (step < 1e-20) break;
  }
  return model;
}

/// Mann-Whitney statistic with ties counted as 1/2.
inline double auc(std::span<const double> scores, std::span<const int> labels) {
  if (scores.size() != labels.size()) throw ParameterError("score and label counts differ");
  const std::size_t n = scores.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });
  double pos_rank_sum = 0.0;
  std::size_t pos = 0;
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j < n && scores[order[j]] == scores[order[i]]) ++j;
    const double mid_rank = 0.5 * static_cast<double>(i + 1 + j);  // ranks are 1-based
    for (std::size_t k = i; k < j; ++k) {
      if (labels[order[k]]) {
        pos_rank_sum += mid_rank;
        ++pos;
      }
    }
    i = j;
  }
  const std::size_t neg = n - pos;
  if (pos == 0 || neg == 0) throw DegenerateError("AUC is undefined with a single class");
  const double np = static_cast<double>(pos);
  return (pos_rank_sum - np * (np + 1.0) / 2.0) / (np * static_cast<double>(neg));
}

inline double auc(const std::vector<double>& scores, const std::vector<int>& labels) {
  return auc(std::span<const double>(scores), std::span<const int>(labels));
}

inline const std::vector<double>& default_l2_grid() {
  static const std::vector<double> grid{1e-4, 1e-3, 1e-2, 1e-1, 1.0, 10.0};
  return grid;
}

/// Assigns each example to one of `folds` folds, round-robin within each
/// class after a seeded shuffle.
inline std::vector<std::size_t> stratified_folds(const Eigen::VectorXd& y, std::size_t folds, Rng& rng) {
  std::vector<std::size_t> fold(y.size());
  for (int cls = 0; cls < 2; ++cls) {
    std::vector<std::size_t> idx;
    for (Eigen::Index i = 0; i < y.size(); ++i) {
      if ((y[i] > 0.5) == (cls == 1)) idx.push_back(static_cast<std::size_t>(i));
    }
    rng.shuffle(idx);
    for (std::size_t k = 0; k < idx.size(); ++k) fold[idx[k]] = k % folds;
  }
  return fold;
}

namespace detail {

inline Eigen::MatrixXd take_rows(const Eigen::MatrixXd& x, const std::vector<std::size_t>& rows) {
  Eigen::MatrixXd out(rows.size(), x.cols());
  for (std::size_t k = 0; k < rows.size(); ++k) out.row(k) = x.row(rows[k]);
  return out;
}

inline Eigen::VectorXd take(const Eigen::VectorXd& y, const std::vector<std::size_t>& rows) {
  Eigen::VectorXd out(rows.size());
  for (std::size_t k = 0; k < rows.size(); ++k) out[k] = y[rows[k]];
  return out;
}

}  // namespace detail

/// Picks the l2 strength with the lowest pooled held-out log-loss under
/// stratified k-fold cross-validation. Folds whose training part has a
/// single class are skipped.
inline double select_l2(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, std::span<const double> grid,
                        std::size_t folds, std::uint64_t seed) {
  detail::check_two_classes(y);
  require(!grid.empty(), "l2 grid must not be empty");
  folds = std::clamp<std::size_t>(folds, 2, static_cast<std::size_t>(y.size()));
  Rng rng = Rng::derived(seed, 0xcf01d);
  const auto fold = stratified_folds(y, folds, rng);
  double best_l2 = grid.front();
  double best_loss = std::numeric_limits<double>::infinity();
  for (double l2 : grid) {
    double loss = 0.0;
    std::size_t scored = 0;
    for (std::size_t f = 0; f < folds; ++f) {
      std::vector<std::size_t> train_rows, test_rows;
      for (std::size_t i = 0; i < fold.size(); ++i) (fold[i] == f ? test_rows : train_rows).push_back(i);
      if (test_rows.empty()) continue;
      const Eigen::VectorXd ytr = detail::take(y, train_rows);
      const double pos = ytr.sum();
      if (pos < 0.5 || pos > static_cast<double>(ytr.size()) - 0.5) continue;
      const LRModel m = train_lr(detail::take_rows(x, train_rows), ytr, l2);
      const Eigen::VectorXd z = m.decision(detail::take_rows(x, test_rows));
      for (std::size_t k = 0; k < test_rows.size(); ++k) {
        loss -= y[test_rows[k]] > 0.5 ? log_sigmoid(z[k]) : log_sigmoid(-z[k]);
      }
      scored += test_rows.size();
    }
    if (scored > 0 && loss / static_cast<double>(scored) < best_loss) {
      best_loss = loss / static_cast<double>(scored);
      best_l2 = l2;
    }
  }
  return best_l2;
}

/// Column z-scores with statistics from the fitting rows only. Constant
/// columns are centered and left unscaled.
struct Standardizer {
  Eigen::RowVectorXd mean;
  Eigen::RowVectorXd scale;

  static Standardizer fit(const Eigen::MatrixXd& x) {
    Standardizer z;
    z.mean = x.colwise().mean();
    const Eigen::MatrixXd centered = x.rowwise() - z.mean;
    z.scale = (centered.colwise().squaredNorm() / static_cast<double>(std::max<Eigen::Index>(x.rows(), 1))).cwiseSqrt();
    for (Eigen::Index c = 0; c < z.scale.size(); ++c) {
      if (!(z.scale[c] > 1e-12)) z.scale[c] = 1.0;
    }
    return z;
  }
  void apply(Eigen::MatrixXd& x) const { x = (x.rowwise() - mean).array().rowwise() / scale.array(); }
};

struct ClassifierReport {
  double auc = 0.0;
  double l2 = 0.0;
  std::size_t train_examples = 0;
  std::size_t test_examples = 0;
};

/// Model selection and fitting on a stratified `train_fraction` of the
/// examples; AUC on the rest.
inline ClassifierReport fit_and_score(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, std::uint64_t seed,
                                      double train_fraction = 0.1, std::size_t folds = 10,
                                      std::span<const double> grid = default_l2_grid(), bool standardize = true) {
  detail::check_two_classes(y);
  Rng rng = Rng::derived(seed, 0x1a5e);
  std::vector<std::size_t> train_rows, test_rows;
  for (int cls = 0; cls < 2; ++cls) {
    std::vector<std::size_t> idx;
    for (Eigen::Index i = 0; i < y.size(); ++i) {
      if ((y[i] > 0.5) == (cls == 1)) idx.push_back(static_cast<std::size_t>(i));
    }
    rng.shuffle(idx);
    std::size_t take = static_cast<std::size_t>(std::ceil(train_fraction * static_cast<double>(idx.size())));
    take = std::clamp<std::size_t>(take, 1, idx.size() - 1);
    train_rows.insert(train_rows.end(), idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(take));
    test_rows.insert(test_rows.end(), idx.begin() + static_cast<std::ptrdiff_t>(take), idx.end());
  }
  std::sort(train_rows.begin(), train_rows.end());
  std::sort(test_rows.begin(), test_rows.end());

  Eigen::MatrixXd xtr = detail::take_rows(x, train_rows);
  Eigen::MatrixXd xte = detail::take_rows(x, test_rows);
  if (standardize) {
    const Standardizer z = Standardizer::fit(xtr);
    z.apply(xtr);
    z.apply(xte);
  }
  const Eigen::VectorXd ytr = detail::take(y, train_rows);
  ClassifierReport report;
  report.l2 = select_l2(xtr, ytr, grid, folds, seed);
  const LRModel model = train_lr(xtr, ytr, report.l2);
  const Eigen::VectorXd scores = model.decision(xte);
  std::vector<double> s(scores.data(), scores.data() + scores.size());
  std::vector<int> labels;
  for (std::size_t r : test_rows) labels.push_back(y[r] > 0.5 ? 1 : 0);
  report.auc = auc(s, labels);
  report.train_examples = train_rows.size();
  report.test_examples = test_rows.size();
  return report;
}

struct EvalConfig {
  Role2VecConfig embed;
  EdgeOp op = EdgeOp::hadamard;
  double test_fraction = 0.5;
  bool allow_isolation = false;
  double train_fraction = 0.1;  // labeled pairs used for model selection and fitting
  std::size_t folds = 10;
};

struct EvalReport {
  std::uint64_t seed = 0;
  double auc = 0.0;
  double l2 = 0.0;
  std::size_t num_types = 0;
  std::size_t dims = 0;
  std::size_t embedding_bytes = 0;
  double runtime_ms = 0.0;
};

/// Link prediction: split, embed the residual graph (features recomputed
/// there, so held-out edges never leak into types), featurize the held-out
/// pairs from alpha of their types, fit logistic regression, report AUC.
inline EvalReport evaluate_pipeline(const Graph& g, const EvalConfig& cfg, std::uint64_t seed) {
  const auto start = std::chrono::steady_clock::now();
  const EdgeSplit split = split_edges(g, cfg.test_fraction, derive_seed(seed, 0x5b), cfg.allow_isolation);
  const Role2VecResult emb = embed_graph(split.residual, cfg.embed, derive_seed(seed, 0xe3b));

  const std::size_t n = split.positives.size() + split.negatives.size();
  Eigen::MatrixXd x(n, emb.model.dims);
  Eigen::VectorXd y(n);
  std::size_t row = 0;
  auto add = [&](const Edge& e, double label) {
    const auto f = edge_features(node_embedding(emb.model, emb.types, e.first),
                                 node_embedding(emb.model, emb.types, e.second), cfg.op);
    for (std::size_t k = 0; k < f.size(); ++k) x(row, k) = f[k];
    y[row++] = label;
  };
  for (const Edge& e : split.positives) add(e, 1.0);
  for (const Edge& e : split.negatives) add(e, 0.0);

  const ClassifierReport cls = fit_and_score(x, y, derive_seed(seed, 0x1c), cfg.train_fraction, cfg.folds);
  EvalReport report;
  report.seed = seed;
  report.auc = cls.auc;
  report.l2 = cls.l2;
  report.num_types = emb.num_types();
  report.dims = emb.model.dims;
  report.embedding_bytes = emb.bytes();
  report.runtime_ms = detail::elapsed_ms(start);
  return report;
}

struct Summary {
  double mean = 0.0;
  double stddev = 0.0;  // sample standard deviation
};

inline Summary summarize(std::span<const double> values) {
  Summary s;
  if (values.empty()) return s;
  s.mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
  if (values.size() > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - s.mean) * (v - s.mean);
    s.stddev = std::sqrt(ss / static_cast<double>(values.size() - 1));
  }
  return s;
}

}  // namespace role2vec
