#pragma once

// Weighted graphs with an edge measure mu and a vertex measure pi, and the
// implicit k-fold Cartesian power.
//
// Conventions: mu is a probability distribution on unordered vertex pairs and
// 2 pi(v) = sum_u mu({u,v}). The Laplacian has pi on the diagonal and
// -mu({i,j})/2 off it, so that f.L.f = 1/2 E_mu (f(x)-f(y))^2.

#include <algorithm>
#include <concepts>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "cartprod/common.hpp"

namespace cartprod {

struct Edge {
  Vertex u = 0;
  Vertex v = 0;
  double mass = 0.0;  // mu({u,v}) once normalized
};

struct WeightedEdgeInput {
  Vertex u = 0;
  Vertex v = 0;
  double weight = 0.0;
};

/// Anything with a vertex measure and an edge stream (u, v, mass) over unordered edges.
template <class G>
concept MeasuredGraph = requires(const G& g) {
  { g.vertex_count() } -> std::convertible_to<std::size_t>;
  { g.vertex_masses() } -> std::convertible_to<std::vector<double>>;
  g.for_each_edge([](Vertex, Vertex, double) {});
};

class WeightedGraph {
 public:
  WeightedGraph() = default;

  /// Raw constructor: stores the given measures as-is. No normalization or
  /// validation; use build_graph() for checked construction.
  WeightedGraph(std::size_t n, std::vector<Edge> edges, std::vector<double> pi)
      : n_(n), edges_(std::move(edges)), pi_(std::move(pi)), adjacency_(n) {
    for (auto& e : edges_) {
      if (e.u > e.v) std::swap(e.u, e.v);
    }
    std::sort(edges_.begin(), edges_.end(),
              [](const Edge& a, const Edge& b) { return std::pair(a.u, a.v) < std::pair(b.u, b.v); });
    for (const auto& e : edges_) {
      adjacency_[e.u].emplace_back(e.v, e.mass);
      adjacency_[e.v].emplace_back(e.u, e.mass);
    }
  }

  std::size_t vertex_count() const { return n_; }
  std::span<const Edge> edges() const { return edges_; }
  std::span<const double> pi() const { return pi_; }
  std::vector<double> vertex_masses() const { return pi_; }
  const std::vector<std::vector<std::pair<Vertex, double>>>& adjacency() const { return adjacency_; }

  double edge_mass(Vertex a, Vertex b) const {
    if (a >= n_ || b >= n_) return 0.0;
    for (const auto& [w, m] : adjacency_[a])
      if (w == b) return m;
    return 0.0;
  }

  template <class F>
  void for_each_edge(F&& fn) const {
    for (const auto& e : edges_) fn(e.u, e.v, e.mass);
  }

  Eigen::MatrixXd laplacian() const {
    Eigen::MatrixXd L = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n_), static_cast<Eigen::Index>(n_));
    for (std::size_t i = 0; i < n_; ++i) L(i, i) = pi_[i];
    for (const auto& e : edges_) {
      L(e.u, e.v) -= e.mass / 2.0;
      L(e.v, e.u) -= e.mass / 2.0;
    }
    return L;
  }

  /// 1/2 sum over unordered edges of mu(e) (f(u)-f(v))^2.
  double dirichlet(std::span<const double> f) const {
    double s = 0.0;
    for (const auto& e : edges_) {
      const double d = f[e.u] - f[e.v];
      s += e.mass * d * d;
    }
    return 0.5 * s;
  }

 private:
  std::size_t n_ = 0;
  std::vector<Edge> edges_;
  std::vector<double> pi_;
  std::vector<std::vector<std::pair<Vertex, double>>> adjacency_;
};

namespace detail {

inline std::vector<std::vector<Vertex>> components(std::size_t n, std::span<const Edge> edges) {
  std::vector<Vertex> parent(n);
  std::iota(parent.begin(), parent.end(), Vertex{0});
  auto find = [&](Vertex x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (const auto& e : edges) {
    const Vertex a = find(e.u), b = find(e.v);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
  std::map<Vertex, std::vector<Vertex>> groups;
  for (Vertex v = 0; v < n; ++v) groups[find(v)].push_back(v);
  std::vector<std::vector<Vertex>> out;
  for (auto& [root, members] : groups) out.push_back(std::move(members));
  return out;
}

/// Product measure over m coordinates, row-major (length |pi|^m).
inline std::vector<double> product_weights(std::span<const double> pi, std::size_t m) {
  std::vector<double> w{1.0};
  for (std::size_t j = 0; j < m; ++j) {
    std::vector<double> next;
    next.reserve(w.size() * pi.size());
    for (double a : w)
      for (double p : pi) next.push_back(a * p);
    w = std::move(next);
  }
  return w;
}

}  // namespace detail

/// Checked construction: weights are normalized so that sum mu = 1 and pi is
/// derived from 2 pi(v) = sum_u mu({u,v}).
inline WeightedGraph build_graph(std::size_t n, std::span<const WeightedEdgeInput> input) {
  if (n < 2) throw GraphError("graph needs at least 2 vertices, got " + std::to_string(n));
  std::map<std::pair<Vertex, Vertex>, double> seen;
  double total = 0.0;
  for (const auto& e : input) {
    if (e.u >= n || e.v >= n)
      throw GraphError("edge (" + std::to_string(e.u) + "," + std::to_string(e.v) + ") out of range for n=" +
                       std::to_string(n));
    if (e.u == e.v) throw GraphError("self-loop at vertex " + std::to_string(e.u));
    if (!(e.weight > 0.0) || !std::isfinite(e.weight))
      throw GraphError("edge (" + std::to_string(e.u) + "," + std::to_string(e.v) + ") has nonpositive weight");
    const auto key = std::minmax(e.u, e.v);
    if (!seen.emplace(key, e.weight).second)
      throw GraphError("duplicate edge (" + std::to_string(key.first) + "," + std::to_string(key.second) + ")");
    total += e.weight;
  }
  if (seen.empty()) throw GraphError("graph has no edges");

  std::vector<Edge> edges;
  edges.reserve(seen.size());
  std::vector<double> pi(n, 0.0);
  for (const auto& [key, w] : seen) {
    const double m = w / total;
    edges.push_back({key.first, key.second, m});
    pi[key.first] += m / 2.0;
    pi[key.second] += m / 2.0;
  }

  auto comps = detail::components(n, edges);
  if (comps.size() > 1) {
    std::ostringstream msg;
    msg << "graph is disconnected; components:";
    for (const auto& c : comps) {
      msg << " {";
      for (std::size_t i = 0; i < c.size(); ++i) msg << (i ? "," : "") << c[i];
      msg << "}";
    }
    throw GraphError(msg.str());
  }
  return WeightedGraph(n, std::move(edges), std::move(pi));
}

inline WeightedGraph build_graph(std::size_t n, std::initializer_list<WeightedEdgeInput> input) {
  return build_graph(n, std::span<const WeightedEdgeInput>(input.begin(), input.size()));
}

struct MeasureReport {
  std::vector<double> vertex_residual;  // |2 pi(v) - sum_u mu({u,v})|
  double mass_residual = 0.0;           // |sum mu - 1|
  std::optional<Vertex> worst_vertex;
  bool ok = false;
};

inline MeasureReport validate_measures(const WeightedGraph& g) {
  MeasureReport r;
  const std::size_t n = g.vertex_count();
  std::vector<double> incident(n, 0.0);
  double total = 0.0;
  for (const auto& e : g.edges()) {
    incident[e.u] += e.mass;
    incident[e.v] += e.mass;
    total += e.mass;
  }
  r.vertex_residual.resize(n);
  double worst = -1.0;
  for (Vertex v = 0; v < n; ++v) {
    const double pv = v < g.pi().size() ? g.pi()[v] : 0.0;
    r.vertex_residual[v] = std::abs(2.0 * pv - incident[v]);
    if (r.vertex_residual[v] > worst) {
      worst = r.vertex_residual[v];
      r.worst_vertex = v;
    }
  }
  r.mass_residual = std::abs(total - 1.0);
  r.ok = r.mass_residual < kMeasureTol && (n == 0 || worst < kMeasureTol) && g.pi().size() == n;
  return r;
}

/// Implicit k-fold Cartesian power. Vertices are k-tuples, indexed row-major
/// with coordinate 0 varying slowest.
class ProductGraph {
 public:
  ProductGraph(WeightedGraph base, std::size_t k, std::size_t dense_cap = kDefaultDenseCap)
      : base_(std::move(base)), k_(k), dense_cap_(dense_cap) {
    if (k_ < 1) throw std::invalid_argument("Cartesian power k must be >= 1");
    count_ = detail::ipow(base_.vertex_count(), k_);
  }

  const WeightedGraph& base() const { return base_; }
  std::size_t k() const { return k_; }
  std::size_t n() const { return base_.vertex_count(); }
  std::size_t dense_cap() const { return dense_cap_; }

  /// n^k, saturating at SIZE_MAX.
  std::size_t vertex_count() const { return count_; }
  bool dense_ok() const { return count_ <= dense_cap_; }
  void require_dense(const char* what) const {
    if (!dense_ok())
      throw CapExceeded(std::string(what) + ": " + std::to_string(n()) + "^" + std::to_string(k_) +
                        " product vertices exceed the dense cap of " + std::to_string(dense_cap_));
  }

  /// n^(k-1-j): index distance between tuples differing by one in coordinate j.
  std::size_t stride(std::size_t j) const { return detail::ipow(n(), k_ - 1 - j); }

  std::size_t index_of(std::span<const Vertex> x) const {
    std::size_t idx = 0;
    for (std::size_t j = 0; j < k_; ++j) idx = idx * n() + x[j];
    return idx;
  }

  void tuple_of(std::size_t idx, std::span<Vertex> out) const {
    for (std::size_t j = k_; j-- > 0;) {
      out[j] = idx % n();
      idx /= n();
    }
  }
  std::vector<Vertex> tuple_of(std::size_t idx) const {
    std::vector<Vertex> x(k_);
    tuple_of(idx, x);
    return x;
  }

  double vertex_mass(std::span<const Vertex> x) const {
    double m = 1.0;
    for (std::size_t j = 0; j < k_; ++j) m *= base_.pi()[x[j]];
    return m;
  }

  /// Mass of the unordered product edge {x,y}: (1/k) prod_{i != j} pi(x_i) mu({x_j,y_j})
  /// when x and y differ exactly in coordinate j, else 0.
  double edge_mass(std::span<const Vertex> x, std::span<const Vertex> y) const {
    if (x.size() != k_ || y.size() != k_) throw std::invalid_argument("tuple length does not match k");
    std::size_t diff = k_;
    for (std::size_t i = 0; i < k_; ++i) {
      if (x[i] >= n() || y[i] >= n()) throw std::invalid_argument("tuple entry out of range");
      if (x[i] != y[i]) {
        if (diff != k_) return 0.0;
        diff = i;
      }
    }
    if (diff == k_) return 0.0;
    const double mu = base_.edge_mass(x[diff], y[diff]);
    if (mu == 0.0) return 0.0;
    double m = mu / static_cast<double>(k_);
    for (std::size_t i = 0; i < k_; ++i)
      if (i != diff) m *= base_.pi()[x[i]];
    return m;
  }

  std::vector<double> vertex_masses() const {
    require_dense("vertex_masses");
    return detail::product_weights(base_.pi(), k_);
  }

  /// Visits every unordered product edge once as (index_x, index_y, mass) with index_x < index_y.
  template <class F>
  void for_each_edge(F&& fn) const {
    require_dense("for_each_edge");
    const std::size_t nn = n();
    for (std::size_t j = 0; j < k_; ++j) {
      const auto before = detail::product_weights(base_.pi(), j);
      const auto after = detail::product_weights(base_.pi(), k_ - 1 - j);
      const std::size_t inner = after.size();
      for (std::size_t o = 0; o < before.size(); ++o) {
        for (std::size_t i = 0; i < inner; ++i) {
          const std::size_t base_idx = o * nn * inner + i;
          const double rest = before[o] * after[i];
          for (const auto& e : base_.edges())
            fn(base_idx + e.u * inner, base_idx + e.v * inner, rest * e.mass / static_cast<double>(k_));
        }
      }
    }
  }

 private:
  WeightedGraph base_;
  std::size_t k_ = 1;
  std::size_t dense_cap_ = kDefaultDenseCap;
  std::size_t count_ = 0;
};

inline ProductGraph cartesian_power(const WeightedGraph& g, std::size_t k, std::size_t dense_cap = kDefaultDenseCap) {
  return ProductGraph(g, k, dense_cap);
}

/// Explicit WeightedGraph with the product measures (refuses above the dense cap).
inline WeightedGraph materialize(const ProductGraph& p) {
  p.require_dense("materialize");
  std::vector<Edge> edges;
  p.for_each_edge([&](std::size_t a, std::size_t b, double m) { edges.push_back({a, b, m}); });
  return WeightedGraph(p.vertex_count(), std::move(edges), p.vertex_masses());
}

// Builtin families, all with unit edge weights before normalization.

inline WeightedGraph complete_graph(std::size_t q) {
  std::vector<WeightedEdgeInput> e;
  for (Vertex a = 0; a < q; ++a)
    for (Vertex b = a + 1; b < q; ++b) e.push_back({a, b, 1.0});
  return build_graph(q, e);
}

inline WeightedGraph path_graph(std::size_t n) {
  std::vector<WeightedEdgeInput> e;
  for (Vertex a = 0; a + 1 < n; ++a) e.push_back({a, a + 1, 1.0});
  return build_graph(n, e);
}

inline WeightedGraph cycle_graph(std::size_t n) {
  if (n < 3) throw GraphError("cycle needs at least 3 vertices");
  std::vector<WeightedEdgeInput> e;
  for (Vertex a = 0; a < n; ++a) e.push_back({std::min(a, (a + 1) % n), std::max(a, (a + 1) % n), 1.0});
  return build_graph(n, e);
}

}  // namespace cartprod
