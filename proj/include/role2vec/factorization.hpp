#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <vector>

#include "role2vec/error.hpp"
#include "role2vec/features.hpp"
#include "role2vec/random.hpp"

namespace role2vec {

/// X ~ U * V^T with U (Nv x r) and V (K x r).
struct FactorModel {
  Eigen::MatrixXd U;
  Eigen::MatrixXd V;
  std::size_t rank = 0;
  double loss = 0.0;                // ||X - U V^T||_F^2
  std::vector<double> loss_trace;   // initial loss, then one entry per half-sweep
  std::size_t sweeps = 0;
};

inline Eigen::MatrixXd to_eigen(const FeatureMatrix& x) {
  Eigen::MatrixXd m(x.rows(), x.cols());
  for (std::size_t r = 0; r < x.rows(); ++r) {
    for (std::size_t c = 0; c < x.cols(); ++c) m(r, c) = x(r, c);
  }
  return m;
}

struct FactorizeOptions {
  std::size_t rank = 10;
  std::size_t max_sweeps = 50;
  double tolerance = 1e-6;  // relative loss change per sweep
  std::uint64_t seed = 1;
};

/// Unregularized squared-loss factorization by alternating least squares.
/// A 1e-10 ridge keeps rank-deficient normal equations solvable; it is not
/// part of the objective. Rank above min(Nv, K) is clamped.
inline FactorModel factorize(const Eigen::MatrixXd& x, const FactorizeOptions& opt) {
  require(opt.rank >= 1, "factorization rank must be >= 1");
  if (!x.allFinite()) throw ParameterError("feature matrix contains non-finite values");
  const std::size_t rows = static_cast<std::size_t>(x.rows());
  const std::size_t cols = static_cast<std::size_t>(x.cols());
  if (rows == 0 || cols == 0) throw ParameterError("cannot factorize an empty matrix");
  const std::size_t r = std::min({opt.rank, rows, cols});
  if (r < opt.rank) {
    warn("factorization rank " + std::to_string(opt.rank) + " clamped to " + std::to_string(r));
  }
  constexpr double ridge = 1e-10;

  Rng rng(derive_seed(opt.seed, 0xfac7));
  const double scale = std::sqrt(std::max(x.cwiseAbs().mean(), 1e-12) / static_cast<double>(r));
  FactorModel model;
  model.rank = r;
  model.U.resize(rows, r);
  model.V.resize(cols, r);
  for (Eigen::Index i = 0; i < model.U.size(); ++i) model.U.data()[i] = scale * rng.uniform();
  for (Eigen::Index i = 0; i < model.V.size(); ++i) model.V.data()[i] = scale * rng.uniform();

  auto loss = [&] { return (x - model.U * model.V.transpose()).squaredNorm(); };
  const Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(r, r);
  model.loss = loss();
  model.loss_trace.push_back(model.loss);

  for (std::size_t sweep = 0; sweep < opt.max_sweeps; ++sweep) {
    const double before = model.loss;
    {
      Eigen::MatrixXd gram = model.V.transpose() * model.V + ridge * eye;
      model.U = gram.ldlt().solve(model.V.transpose() * x.transpose()).transpose();
      model.loss_trace.push_back(loss());
    }
    {
      Eigen::MatrixXd gram = model.U.transpose() * model.U + ridge * eye;
      model.V = gram.ldlt().solve(model.U.transpose() * x).transpose();
      model.loss = loss();
      model.loss_trace.push_back(model.loss);
    }
    model.sweeps = sweep + 1;
    if (std::abs(before - model.loss) <= opt.tolerance * std::max(before, 1e-300)) break;
  }
  if (!std::isfinite(model.loss)) throw DegenerateError("factorization diverged");
  return model;
}

inline FactorModel factorize(const FeatureMatrix& x, const FactorizeOptions& opt) {
  return factorize(to_eigen(x), opt);
}

}  // namespace role2vec
