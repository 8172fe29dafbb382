#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <limits>
#include <vector>

#include "role2vec/binning.hpp"
#include "role2vec/error.hpp"
#include "role2vec/factorization.hpp"
#include "role2vec/random.hpp"
#include "role2vec/typing.hpp"

namespace role2vec {

struct KMeansResult {
  Eigen::MatrixXd centroids;  // m x r, row j is the mean of type j
  TypeAssignment assignment;
  double objective = 0.0;     // sum of squared distances to assigned centroid
  std::vector<double> objective_trace;
  std::size_t iterations = 0;
};

namespace detail {

inline double sq_dist(const Eigen::MatrixXd& points, Eigen::Index i, const Eigen::MatrixXd& centers,
                      Eigen::Index j) {
  return (points.row(i) - centers.row(j)).squaredNorm();
}

inline std::vector<Eigen::Index> kmeanspp_seeds(const Eigen::MatrixXd& points, std::size_t m, Rng& rng) {
  const Eigen::Index n = points.rows();
  std::vector<Eigen::Index> seeds{static_cast<Eigen::Index>(rng.index(n))};
  std::vector<char> chosen(n, 0);
  chosen[seeds[0]] = 1;
  std::vector<double> d2(n);
  for (Eigen::Index i = 0; i < n; ++i) d2[i] = (points.row(i) - points.row(seeds[0])).squaredNorm();
  while (seeds.size() < m) {
    double total = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) total += chosen[i] ? 0.0 : d2[i];
    Eigen::Index pick = -1;
    if (total > 0.0) {
      double target = rng.uniform() * total;
      for (Eigen::Index i = 0; i < n; ++i) {
        if (chosen[i] || d2[i] <= 0.0) continue;
        pick = i;
        target -= d2[i];
        if (target < 0.0) break;
      }
    } else {
      // Remaining points all coincide with a seed: take any unused index.
      std::vector<Eigen::Index> unused;
      for (Eigen::Index i = 0; i < n; ++i) {
        if (!chosen[i]) unused.push_back(i);
      }
      pick = unused[rng.index(unused.size())];
    }
    chosen[pick] = 1;
    seeds.push_back(pick);
    for (Eigen::Index i = 0; i < n; ++i) {
      d2[i] = std::min(d2[i], (points.row(i) - points.row(pick)).squaredNorm());
    }
  }
  return seeds;
}

}  // namespace detail

/// Lloyd's algorithm from k-means++ seeds. An empty cluster takes the point
/// farthest from its centroid in the currently largest cluster, so every
/// one of the m types ends up nonempty. Types are numbered by first
/// appearance in row order.
inline KMeansResult kmeans(const Eigen::MatrixXd& points, std::size_t m, std::size_t max_iters,
                           std::uint64_t seed) {
  const Eigen::Index n = points.rows();
  if (m < 1) throw ParameterError("number of types m must be >= 1");
  if (m > static_cast<std::size_t>(n)) {
    throw ParameterError("number of types m=" + std::to_string(m) + " exceeds number of points " +
                         std::to_string(n));
  }
  Rng rng(derive_seed(seed, 0x6b6d));
  const Eigen::Index k = static_cast<Eigen::Index>(m);
  Eigen::MatrixXd centers(k, points.cols());
  {
    auto seeds = detail::kmeanspp_seeds(points, m, rng);
    for (Eigen::Index j = 0; j < k; ++j) centers.row(j) = points.row(seeds[j]);
  }

  std::vector<Eigen::Index> label(n, -1);
  std::vector<std::size_t> counts(k, 0);
  auto recompute = [&] {
    centers.setZero();
    std::fill(counts.begin(), counts.end(), 0);
    for (Eigen::Index i = 0; i < n; ++i) {
      centers.row(label[i]) += points.row(i);
      ++counts[label[i]];
    }
    for (Eigen::Index j = 0; j < k; ++j) {
      if (counts[j] > 0) centers.row(j) /= static_cast<double>(counts[j]);
    }
  };
  auto objective = [&] {
    double total = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) total += detail::sq_dist(points, i, centers, label[i]);
    return total;
  };

  KMeansResult result;
  for (std::size_t iter = 0; iter < std::max<std::size_t>(max_iters, 1); ++iter) {
    bool changed = false;
    for (Eigen::Index i = 0; i < n; ++i) {
      Eigen::Index best = 0;
      double best_d = std::numeric_limits<double>::infinity();
      for (Eigen::Index j = 0; j < k; ++j) {
        const double d = detail::sq_dist(points, i, centers, j);
        if (d < best_d) {
          best_d = d;
          best = j;
        }
      }
      // Keep the current label on ties so repaired clusters are stable.
      if (label[i] >= 0 && label[i] != best &&
          detail::sq_dist(points, i, centers, label[i]) <= best_d) {
        best = label[i];
      }
      if (label[i] != best) {
        label[i] = best;
        changed = true;
      }
    }
    recompute();

    for (Eigen::Index empty = 0; empty < k; ++empty) {
      if (counts[empty] > 0) continue;
      const Eigen::Index largest =
          static_cast<Eigen::Index>(std::max_element(counts.begin(), counts.end()) - counts.begin());
      Eigen::Index far = -1;
      double far_d = -1.0;
      for (Eigen::Index i = 0; i < n; ++i) {
        if (label[i] != largest) continue;
        const double d = detail::sq_dist(points, i, centers, largest);
        if (d > far_d) {
          far_d = d;
          far = i;
        }
      }
      label[far] = empty;
      changed = true;
      recompute();
    }

    result.objective = objective();
    result.objective_trace.push_back(result.objective);
    result.iterations = iter + 1;
    if (!changed) break;
  }

  // Renumber clusters by first appearance and permute centroids to match.
  std::vector<Eigen::Index> relabel(k, -1);
  std::vector<TypeId> type_of(n);
  TypeId next = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (relabel[label[i]] < 0) relabel[label[i]] = next++;
    type_of[i] = static_cast<TypeId>(relabel[label[i]]);
  }
  result.centroids.resize(k, points.cols());
  for (Eigen::Index j = 0; j < k; ++j) result.centroids.row(relabel[j]) = centers.row(j);
  result.assignment = TypeAssignment(std::move(type_of));
  return result;
}

struct FactorizedTypingOptions {
  FactorizeOptions factorization;
  std::size_t num_types = 10;
  std::size_t kmeans_iters = 100;
};

/// Types from k-means over the rows of a low-rank factor U of X.
inline TypeAssignment phi_factorized(const FeatureMatrix& x, const FactorizedTypingOptions& opt) {
  if (opt.num_types == 1) return TypeAssignment::constant(x.rows());
  const FactorModel model = factorize(x, opt.factorization);
  return kmeans(model.U, opt.num_types, opt.kmeans_iters, derive_seed(opt.factorization.seed, 1))
      .assignment;
}

}  // namespace role2vec
