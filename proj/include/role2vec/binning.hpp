#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "role2vec/error.hpp"
#include "role2vec/features.hpp"

namespace role2vec {

using BinId = std::uint32_t;

/// Per-column logarithmic bin ids (same shape as the source FeatureMatrix).
struct BinnedMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  double delta = 0.5;
  std::vector<std::string> labels;
  std::vector<BinId> values;  // row-major

  BinId operator()(std::size_t r, std::size_t c) const { return values[r * cols + c]; }
  std::span<const BinId> row(std::size_t r) const { return {values.data() + r * cols, cols}; }
};

/// Geometric binning: sort ascending by value (ties by index), give the
/// first ceil(delta * n) items bin 0, then the first ceil(delta * u) of the
/// u remaining items bin 1, and so on.
inline std::vector<BinId> log_bin(std::span<const double> column, double delta) {
  if (!(delta > 0.0 && delta < 1.0)) {
    throw ParameterError("bin fraction delta must lie in (0, 1), got " + std::to_string(delta));
  }
  const std::size_t n = column.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return column[a] < column[b]; });

  std::vector<BinId> bins(n, 0);
  std::size_t assigned = 0;
  BinId bin = 0;
  while (assigned < n) {
    const std::size_t remaining = n - assigned;
    // The small slack keeps products like 0.1 * 30 from rounding up a bin.
    const double target = std::ceil(delta * static_cast<double>(remaining) - 1e-9);
    const std::size_t take =
        std::clamp<std::size_t>(static_cast<std::size_t>(std::max(target, 1.0)), 1, remaining);
    for (std::size_t k = 0; k < take; ++k) bins[order[assigned + k]] = bin;
    assigned += take;
    ++bin;
  }
  return bins;
}

inline BinnedMatrix log_bin(const FeatureMatrix& x, double delta) {
  BinnedMatrix out;
  out.rows = x.rows();
  out.cols = x.cols();
  out.delta = delta;
  out.labels = x.labels();
  out.values.assign(out.rows * out.cols, 0);
  for (std::size_t c = 0; c < x.cols(); ++c) {
    const auto col = x.column(c);
    const auto bins = log_bin(std::span<const double>(col), delta);
    for (std::size_t r = 0; r < x.rows(); ++r) out.values[r * out.cols + c] = bins[r];
  }
  if (x.cols() == 0) log_bin(std::span<const double>{}, delta);  // validates delta
  return out;
}

/// Bin ids as a real-valued matrix, e.g. as input to a factorization.
inline FeatureMatrix to_feature_matrix(const BinnedMatrix& b) {
  FeatureMatrix x(b.rows, b.labels);
  for (std::size_t r = 0; r < b.rows; ++r) {
    for (std::size_t c = 0; c < b.cols; ++c) x(r, c) = static_cast<double>(b(r, c));
  }
  return x;
}

}  // namespace role2vec
