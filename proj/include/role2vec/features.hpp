#pragma once

#include <charconv>
#include <cstdint>
#include <fstream>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "role2vec/error.hpp"
#include "role2vec/graph.hpp"

namespace role2vec {

/// Dense row-major Nv x K matrix of non-negative node attributes.
class FeatureMatrix {
 public:
  FeatureMatrix() = default;
  FeatureMatrix(std::size_t rows, std::vector<std::string> labels)
      : rows_(rows), labels_(std::move(labels)), values_(rows_ * labels_.size(), 0.0) {}

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return labels_.size(); }
  const std::vector<std::string>& labels() const noexcept { return labels_; }

  double& operator()(std::size_t r, std::size_t c) { return values_[r * cols() + c]; }
  double operator()(std::size_t r, std::size_t c) const { return values_[r * cols() + c]; }

  std::span<const double> row(std::size_t r) const { return {values_.data() + r * cols(), cols()}; }

  std::vector<double> column(std::size_t c) const {
    std::vector<double> out(rows_);
    for (std::size_t r = 0; r < rows_; ++r) out[r] = (*this)(r, c);
    return out;
  }

  std::size_t column_index(const std::string& label) const {
    for (std::size_t c = 0; c < cols(); ++c) {
      if (labels_[c] == label) return c;
    }
    throw ParameterError("unknown feature column '" + label + "'");
  }

  FeatureMatrix select(std::span<const std::size_t> columns) const {
    std::vector<std::string> labels;
    for (std::size_t c : columns) {
      if (c >= cols()) throw ParameterError("feature column " + std::to_string(c) + " out of range");
      labels.push_back(labels_[c]);
    }
    FeatureMatrix out(rows_, std::move(labels));
    for (std::size_t r = 0; r < rows_; ++r) {
      for (std::size_t k = 0; k < columns.size(); ++k) out(r, k) = (*this)(r, columns[k]);
    }
    return out;
  }

  FeatureMatrix select(const std::vector<std::string>& names) const {
    std::vector<std::size_t> idx;
    for (const auto& n : names) idx.push_back(column_index(n));
    return select(std::span<const std::size_t>(idx));
  }

  /// Column-wise concatenation; row counts must match.
  static FeatureMatrix concat(const FeatureMatrix& a, const FeatureMatrix& b) {
    if (a.rows() != b.rows()) throw MismatchError("cannot concatenate feature matrices of different heights");
    auto labels = a.labels();
    labels.insert(labels.end(), b.labels().begin(), b.labels().end());
    FeatureMatrix out(a.rows(), std::move(labels));
    for (std::size_t r = 0; r < a.rows(); ++r) {
      for (std::size_t c = 0; c < a.cols(); ++c) out(r, c) = a(r, c);
      for (std::size_t c = 0; c < b.cols(); ++c) out(r, a.cols() + c) = b(r, c);
    }
    return out;
  }

  friend bool operator==(const FeatureMatrix&, const FeatureMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::vector<std::string> labels_;
  std::vector<double> values_;
};

inline std::string format_number(double x) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, ptr);
}

/// TSV: header "node_id<TAB>label...", then one row per node keyed by its
/// original id.
inline void write_features_tsv(const FeatureMatrix& x, const Graph& g, std::ostream& out) {
  out << "node_id";
  for (const auto& l : x.labels()) out << '\t' << l;
  out << '\n';
  for (std::size_t r = 0; r < x.rows(); ++r) {
    out << g.original_id(static_cast<NodeId>(r));
    for (std::size_t c = 0; c < x.cols(); ++c) out << '\t' << format_number(x(r, c));
    out << '\n';
  }
}

/// Reads an attribute file: first column is a node id from the edge list's
/// id space, remaining columns numeric. An optional header line is detected
/// when its first token is not an integer. Nodes without a row get zeros.
inline FeatureMatrix ingest_attributes(std::istream& in, const Graph& g) {
  std::string line;
  std::size_t line_no = 0;
  std::vector<std::string> labels;
  std::vector<std::pair<NodeId, std::vector<double>>> rows;
  std::size_t width = 0;
  bool first = true;
  while (std::getline(in, line)) {
    ++line_no;
    auto tokens = detail::tokenize(line);
    if (tokens.empty() || tokens[0][0] == '#' || tokens[0][0] == '%') continue;
    if (first) {
      first = false;
      std::uint64_t probe = 0;
      auto [ptr, ec] = std::from_chars(tokens[0].data(), tokens[0].data() + tokens[0].size(), probe);
      if (ec != std::errc{} || ptr != tokens[0].data() + tokens[0].size()) {
        for (std::size_t k = 1; k < tokens.size(); ++k) labels.emplace_back(tokens[k]);
        width = labels.size();
        continue;
      }
    }
    const std::uint64_t id = detail::parse_id(tokens[0], line_no);
    if (width == 0) {
      width = tokens.size() - 1;
      if (width == 0) throw ParseError("attribute row has no values", line_no);
    }
    if (tokens.size() - 1 != width) {
      throw ParseError("expected " + std::to_string(width) + " attribute values, got " +
                           std::to_string(tokens.size() - 1),
                       line_no);
    }
    auto node = g.find_node(id);
    if (!node) throw ParseError("node id " + std::to_string(id) + " is not in the graph", line_no);
    std::vector<double> values;
    for (std::size_t k = 1; k < tokens.size(); ++k) {
      values.push_back(detail::parse_real(tokens[k], line_no, k + 1));
    }
    rows.emplace_back(*node, std::move(values));
  }
  if (labels.empty()) {
    for (std::size_t k = 0; k < width; ++k) labels.push_back("a" + std::to_string(k + 1));
  }
  FeatureMatrix x(g.num_nodes(), labels);
  std::vector<char> present(g.num_nodes(), 0);
  for (auto& [node, values] : rows) {
    present[node] = 1;
    for (std::size_t k = 0; k < values.size(); ++k) x(node, k) = values[k];
  }
  std::size_t missing = 0;
  for (char p : present) missing += !p;
  if (missing > 0) {
    warn(std::to_string(missing) + " node(s) have no attribute row; using zeros");
  }
  return x;
}

inline FeatureMatrix ingest_attributes(const std::string& path, const Graph& g) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read attribute file '" + path + "'");
  return ingest_attributes(in, g);
}

}  // namespace role2vec
