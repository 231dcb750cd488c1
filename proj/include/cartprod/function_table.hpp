#pragma once

#include <functional>
#include <memory>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "cartprod/graph.hpp"

namespace cartprod {

/// Real-valued function on the vertices of a ProductGraph, stored densely in
/// row-major tuple order. Inner products are taken under the product measure.
class FunctionTable {
 public:
  FunctionTable(std::shared_ptr<const ProductGraph> graph, std::vector<double> values)
      : graph_(std::move(graph)), values_(std::move(values)) {
    if (!graph_) throw std::invalid_argument("FunctionTable needs a product graph");
    graph_->require_dense("FunctionTable");
    if (values_.size() != graph_->vertex_count())
      throw std::invalid_argument("FunctionTable has " + std::to_string(values_.size()) + " values, expected " +
                                  std::to_string(graph_->vertex_count()));
  }

  static FunctionTable zeros(std::shared_ptr<const ProductGraph> graph) {
    graph->require_dense("FunctionTable");
    const std::size_t size = graph->vertex_count();
    return FunctionTable(std::move(graph), std::vector<double>(size, 0.0));
  }

  /// Tabulates fn(tuple) over every product vertex.
  static FunctionTable tabulate(std::shared_ptr<const ProductGraph> graph,
                                const std::function<double(std::span<const Vertex>)>& fn) {
    graph->require_dense("FunctionTable");
    std::vector<double> values(graph->vertex_count());
    std::vector<Vertex> x(graph->k());
    for (std::size_t i = 0; i < values.size(); ++i) {
      graph->tuple_of(i, x);
      values[i] = fn(x);
    }
    return FunctionTable(std::move(graph), std::move(values));
  }

  const ProductGraph& graph() const { return *graph_; }
  const std::shared_ptr<const ProductGraph>& graph_ptr() const { return graph_; }
  std::size_t size() const { return values_.size(); }
  std::span<const double> values() const { return values_; }
  std::span<double> values() { return values_; }
  double operator[](std::size_t i) const { return values_[i]; }
  double& operator[](std::size_t i) { return values_[i]; }
  double at(std::span<const Vertex> x) const { return values_[graph_->index_of(x)]; }

  /// True when every value is exactly -1 or +1.
  bool boolean_pm1() const {
    for (double v : values_)
      if (v != 1.0 && v != -1.0) return false;
    return true;
  }

  FunctionTable with_values(std::vector<double> values) const { return FunctionTable(graph_, std::move(values)); }

 private:
  std::shared_ptr<const ProductGraph> graph_;
  std::vector<double> values_;
};

inline std::shared_ptr<const ProductGraph> make_product(const WeightedGraph& g, std::size_t k,
                                                        std::size_t dense_cap = kDefaultDenseCap) {
  return std::make_shared<const ProductGraph>(g, k, dense_cap);
}

namespace detail {

/// out[.., a, ..] = sum_b m(a, b) in[.., b, ..] along coordinate j.
inline std::vector<double> apply_along(std::span<const double> in, std::size_t n, std::size_t k, std::size_t j,
                                       const Eigen::MatrixXd& m) {
  const std::size_t inner = ipow(n, k - 1 - j);
  const std::size_t outer = in.size() / (inner * n);
  std::vector<double> out(in.size(), 0.0);
  for (std::size_t o = 0; o < outer; ++o) {
    const std::size_t block = o * n * inner;
    for (std::size_t a = 0; a < n; ++a) {
      double* dst = out.data() + block + a * inner;
      for (std::size_t b = 0; b < n; ++b) {
        const double c = m(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b));
        if (c == 0.0) continue;
        const double* src = in.data() + block + b * inner;
        for (std::size_t i = 0; i < inner; ++i) dst[i] += c * src[i];
      }
    }
  }
  return out;
}

/// Applies the same n x n matrix along every coordinate.
inline std::vector<double> apply_all(std::span<const double> in, std::size_t n, std::size_t k,
                                     const Eigen::MatrixXd& m) {
  std::vector<double> cur(in.begin(), in.end());
  for (std::size_t j = 0; j < k; ++j) cur = apply_along(cur, n, k, j, m);
  return cur;
}

/// f^T (A_0 (x) ... (x) A_{k-1}) f where A_j = active at `j`, diag(pi) elsewhere.
inline double tensor_form(std::span<const double> f, std::span<const double> pi, std::size_t k, std::size_t j,
                          const Eigen::MatrixXd& active) {
  const std::size_t n = pi.size();
  Eigen::MatrixXd diag = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) diag(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = pi[i];
  std::vector<double> cur(f.begin(), f.end());
  for (std::size_t l = 0; l < k; ++l) cur = apply_along(cur, n, k, l, l == j ? active : diag);
  double s = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) s += f[i] * cur[i];
  return s;
}

}  // namespace detail
}  // namespace cartprod
