#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "role2vec/error.hpp"
#include "role2vec/random.hpp"

namespace role2vec {

/// Walker/Vose alias table for O(1) categorical sampling.
///
/// Weights need not be normalized. Equal weights produce probability rows of
/// exactly 1.0, so uniform tables never consult the alias row.
class AliasTable {
 public:
  AliasTable() = default;

  explicit AliasTable(std::span<const double> weights) {
    const std::size_t n = weights.size();
    if (n == 0) throw ParameterError("alias table needs at least one outcome");
    double total = 0.0;
    for (double w : weights) {
      if (!(w >= 0.0)) throw ParameterError("alias table weights must be non-negative");
      total += w;
    }
    if (!(total > 0.0)) throw ParameterError("alias table weights sum to zero");

    prob_.assign(n, 0.0);
    alias_.assign(n, 0);
    std::vector<double> scaled(n);
    std::vector<std::uint32_t> small, large;
    small.reserve(n);
    large.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
      scaled[i] = weights[i] * static_cast<double>(n) / total;
      (scaled[i] < 1.0 ? small : large).push_back(static_cast<std::uint32_t>(i));
    }
    while (!small.empty() && !large.empty()) {
      const std::uint32_t s = small.back();
      small.pop_back();
      const std::uint32_t l = large.back();
      prob_[s] = scaled[s];
      alias_[s] = l;
      scaled[l] = (scaled[l] + scaled[s]) - 1.0;
      if (scaled[l] < 1.0) {
        large.pop_back();
        small.push_back(l);
      }
    }
    for (std::uint32_t l : large) {
      prob_[l] = 1.0;
      alias_[l] = l;
    }
    // Leftovers here are rounding residue; treat them as certain.
    for (std::uint32_t s : small) {
      prob_[s] = 1.0;
      alias_[s] = s;
    }
  }

  std::size_t size() const noexcept { return prob_.size(); }
  std::span<const double> probabilities() const noexcept { return prob_; }
  std::span<const std::uint32_t> aliases() const noexcept { return alias_; }

  std::size_t sample(Rng& rng) const {
    const std::size_t column = rng.index(prob_.size());
    return rng.uniform() < prob_[column] ? column : alias_[column];
  }

  /// The distribution the two rows encode.
  std::vector<double> distribution() const {
    const std::size_t n = size();
    std::vector<double> p(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      p[i] += prob_[i] / static_cast<double>(n);
      p[alias_[i]] += (1.0 - prob_[i]) / static_cast<double>(n);
    }
    return p;
  }

 private:
  std::vector<double> prob_;
  std::vector<std::uint32_t> alias_;
};

}  // namespace role2vec
