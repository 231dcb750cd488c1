#pragma once

// Generalized eigenbasis L v = lambda Pi v of a base graph, its tensor
// eigenbasis on the product, and Dirichlet forms of product functions.

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "cartprod/function_table.hpp"

namespace cartprod {

struct SpectralBasis {
  Eigen::VectorXd eigenvalues;     // ascending, eigenvalues[0] == 0
  Eigen::MatrixXd eigenfunctions;  // column i is v_i; pi-orthonormal, column 0 is all ones

  std::size_t size() const { return static_cast<std::size_t>(eigenvalues.size()); }
  double lambda1() const { return eigenvalues.size() > 1 ? eigenvalues(1) : 0.0; }
  double eigenvalue(std::size_t i) const { return eigenvalues(static_cast<Eigen::Index>(i)); }
  double value(std::size_t i, Vertex x) const {
    return eigenfunctions(static_cast<Eigen::Index>(x), static_cast<Eigen::Index>(i));
  }
};

/// Solves the generalized problem through the symmetric form Pi^-1/2 L Pi^-1/2.
/// Eigenfunctions are sign-normalized so their first entry with |v| > 1e-12 is positive.
inline SpectralBasis eigendecompose(const WeightedGraph& g) {
  const auto n = static_cast<Eigen::Index>(g.vertex_count());
  const auto pi = g.pi();
  Eigen::VectorXd inv_sqrt(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!(pi[i] > 0.0)) throw SpectralError("vertex " + std::to_string(i) + " has zero measure");
    inv_sqrt(i) = 1.0 / std::sqrt(pi[i]);
  }
  const Eigen::MatrixXd L = g.laplacian();
  const Eigen::MatrixXd S = inv_sqrt.asDiagonal() * L * inv_sqrt.asDiagonal();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(S);
  if (solver.info() != Eigen::Success) {
    throw SpectralError("eigensolver did not converge");
  }

  SpectralBasis basis;
  basis.eigenvalues = solver.eigenvalues();
  basis.eigenfunctions = inv_sqrt.asDiagonal() * solver.eigenvectors();
  // Connected graph: the kernel is spanned by the constant function.
  basis.eigenvalues(0) = 0.0;
  basis.eigenfunctions.col(0).setOnes();
  for (Eigen::Index c = 1; c < n; ++c) {
    auto col = basis.eigenfunctions.col(c);
    for (Eigen::Index r = 0; r < n; ++r) {
      if (std::abs(col(r)) > 1e-12) {
        if (col(r) < 0) col *= -1.0;
        break;
      }
    }
  }

  const Eigen::VectorXd pivec = Eigen::Map<const Eigen::VectorXd>(pi.data(), n);
  double residual = 0.0;
  for (Eigen::Index c = 0; c < n; ++c) {
    const Eigen::VectorXd r =
        L * basis.eigenfunctions.col(c) - basis.eigenvalues(c) * pivec.cwiseProduct(basis.eigenfunctions.col(c));
    residual = std::max(residual, r.cwiseAbs().maxCoeff());
  }
  if (residual > kIdentityTol) {
    std::ostringstream msg;
    msg << "eigendecomposition residual " << residual << " exceeds " << kIdentityTol;
    throw SpectralError(msg.str());
  }
  if (n > 1 && !(basis.eigenvalues(1) > kIdentityTol)) throw SpectralError("lambda_1 is zero; graph is disconnected");
  return basis;
}

/// avg_j lambda_{i_j}
inline double product_eigenvalue(const SpectralBasis& basis, std::span<const std::size_t> idx) {
  if (idx.empty()) throw std::invalid_argument("empty multi-index");
  double s = 0.0;
  for (std::size_t i : idx) {
    if (i >= basis.size()) throw std::invalid_argument("multi-index entry out of range");
    s += basis.eigenvalue(i);
  }
  return s / static_cast<double>(idx.size());
}

/// Coefficients of a product function in the tensor eigenbasis, indexed by
/// multi-index in the same row-major order as vertex tuples.
class FourierCoefficients {
 public:
  FourierCoefficients(std::shared_ptr<const ProductGraph> graph, std::vector<double> coeffs)
      : graph_(std::move(graph)), coeffs_(std::move(coeffs)) {}

  const ProductGraph& graph() const { return *graph_; }
  const std::shared_ptr<const ProductGraph>& graph_ptr() const { return graph_; }
  std::span<const double> values() const { return coeffs_; }
  std::span<double> values() { return coeffs_; }
  std::size_t size() const { return coeffs_.size(); }
  double at(std::span<const std::size_t> idx) const { return coeffs_[graph_->index_of(idx)]; }
  double operator[](std::size_t i) const { return coeffs_[i]; }

 private:
  std::shared_ptr<const ProductGraph> graph_;
  std::vector<double> coeffs_;
};

/// f_hat(i) = <f, v_(i)> under the product measure.
inline FourierCoefficients fourier_transform(const FunctionTable& f, const SpectralBasis& basis) {
  const auto& p = f.graph();
  p.require_dense("fourier_transform");
  const auto pi = p.base().pi();
  const auto n = static_cast<Eigen::Index>(p.n());
  Eigen::MatrixXd analysis = basis.eigenfunctions.transpose();
  for (Eigen::Index x = 0; x < n; ++x) analysis.col(x) *= pi[x];
  return FourierCoefficients(f.graph_ptr(), detail::apply_all(f.values(), p.n(), p.k(), analysis));
}

inline FunctionTable inverse_fourier(const FourierCoefficients& c, const SpectralBasis& basis) {
  const auto& p = c.graph();
  return FunctionTable(c.graph_ptr(), detail::apply_all(c.values(), p.n(), p.k(), basis.eigenfunctions));
}

/// sum_(i) f_hat(i)^2 avg_j lambda_{i_j}
inline double spectral_dirichlet(const FourierCoefficients& c, const SpectralBasis& basis) {
  const auto& p = c.graph();
  std::vector<std::size_t> idx(p.k());
  double s = 0.0;
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (c[i] == 0.0) continue;
    p.tuple_of(i, idx);
    s += c[i] * c[i] * product_eigenvalue(basis, idx);
  }
  return s;
}

namespace detail {

/// 1/2 E_{x_-j ~ pi} E_{e ~ mu} (f(x with e.u at j) - f(x with e.v at j))^2
inline double direction_energy(const FunctionTable& f, std::size_t j) {
  const auto& p = f.graph();
  const auto before = product_weights(p.base().pi(), j);
  const auto after = product_weights(p.base().pi(), p.k() - 1 - j);
  const std::size_t inner = after.size();
  const std::size_t nn = p.n();
  const auto vals = f.values();
  double total = 0.0;
  for (std::size_t o = 0; o < before.size(); ++o) {
    for (std::size_t i = 0; i < inner; ++i) {
      const std::size_t base_idx = o * nn * inner + i;
      double s = 0.0;
      for (const auto& e : p.base().edges()) {
        const double d = vals[base_idx + e.u * inner] - vals[base_idx + e.v * inner];
        s += e.mass * d * d;
      }
      total += before[o] * after[i] * s;
    }
  }
  return 0.5 * total;
}

}  // namespace detail

/// <f, L_j f>: the influence of coordinate j.
inline double directional_form(const FunctionTable& f, std::size_t j) {
  if (j >= f.graph().k()) throw std::invalid_argument("coordinate out of range");
  return detail::direction_energy(f, j);
}

/// <f, L f> on the product = avg_j <f, L_j f> = 1/2 E_{mu_prod} (f(x)-f(y))^2.
inline double dirichlet_form(const FunctionTable& f) {
  double s = 0.0;
  f.graph().for_each_edge([&](std::size_t a, std::size_t b, double m) {
    const double d = f[a] - f[b];
    s += m * d * d;
  });
  return 0.5 * s;
}

}  // namespace cartprod
