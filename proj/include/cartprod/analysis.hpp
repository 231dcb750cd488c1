#pragma once

// Variance, directional variance, entropy and the coordinate-ordered
// orthogonal decomposition f = f_0 + f_1 + ... + f_k of product functions.

#include <cmath>
#include <numeric>

#include "cartprod/spectral.hpp"

namespace cartprod {

inline double expectation(const FunctionTable& f) {
  const auto w = f.graph().vertex_masses();
  double s = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) s += w[i] * f[i];
  return s;
}

inline double inner(const FunctionTable& f, const FunctionTable& g) {
  const auto w = f.graph().vertex_masses();
  double s = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) s += w[i] * f[i] * g[i];
  return s;
}

inline double norm2_sq(const FunctionTable& f) { return inner(f, f); }

inline double norm1(const FunctionTable& f) {
  const auto w = f.graph().vertex_masses();
  double s = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) s += w[i] * std::abs(f[i]);
  return s;
}

inline double variance(const FunctionTable& f) {
  const double m = expectation(f);
  return std::max(0.0, norm2_sq(f) - m * m);
}

/// var_j(f) = E_{x_-j}[ E_{x_j} f^2 - (E_{x_j} f)^2 ], by sweeping fibers of coordinate j.
inline double variance_along(const FunctionTable& f, std::size_t j) {
  const auto& p = f.graph();
  if (j >= p.k()) throw std::invalid_argument("coordinate out of range");
  const auto pi = p.base().pi();
  const auto before = detail::product_weights(pi, j);
  const auto after = detail::product_weights(pi, p.k() - 1 - j);
  const std::size_t inner_n = after.size();
  const std::size_t n = p.n();
  double total = 0.0;
  for (std::size_t o = 0; o < before.size(); ++o) {
    for (std::size_t i = 0; i < inner_n; ++i) {
      const std::size_t base_idx = o * n * inner_n + i;
      double m1 = 0.0, m2 = 0.0;
      for (std::size_t a = 0; a < n; ++a) {
        const double v = f[base_idx + a * inner_n];
        m1 += pi[a] * v;
        m2 += pi[a] * v * v;
      }
      total += before[o] * after[i] * std::max(0.0, m2 - m1 * m1);
    }
  }
  return total;
}

/// var_j(f) as the quadratic form of K_j = Pi (x) .. (Pi - pi pi^T) .. (x) Pi.
inline double variance_along_form(const FunctionTable& f, std::size_t j) {
  const auto& p = f.graph();
  if (j >= p.k()) throw std::invalid_argument("coordinate out of range");
  const auto pi = p.base().pi();
  const auto n = static_cast<Eigen::Index>(p.n());
  const Eigen::VectorXd pv = Eigen::Map<const Eigen::VectorXd>(pi.data(), n);
  const Eigen::MatrixXd center = Eigen::MatrixXd(pv.asDiagonal()) - pv * pv.transpose();
  return detail::tensor_form(f.values(), pi, p.k(), j, center);
}

/// <f, L_j f> as the quadratic form of Pi (x) .. L_G .. (x) Pi.
inline double directional_form_operator(const FunctionTable& f, std::size_t j) {
  const auto& p = f.graph();
  return detail::tensor_form(f.values(), p.base().pi(), p.k(), j, p.base().laplacian());
}

/// Ent(f^2) = E[f^2 log f^2] - |f|^2 log |f|^2, natural log, 0 log 0 = 0.
inline double entropy_sq(const FunctionTable& f) {
  const auto w = f.graph().vertex_masses();
  double norm = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) norm += w[i] * f[i] * f[i];
  if (norm <= 0.0) return 0.0;
  // sum w (g log g - g + 1) with g = f^2/norm: termwise nonnegative, same value.
  double s = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double g = f[i] * f[i] / norm;
    const double d = g - 1.0;
    const double term = g > 0.0 ? (1.0 + d) * std::log1p(d) - d : 1.0;
    s += w[i] * term;
  }
  return std::max(0.0, norm * s);
}

struct Decomposition {
  FunctionTable constant;               // f_0 = E f
  std::vector<FunctionTable> components;  // components[j]: multi-indices with i_j != 0, i_l = 0 for l > j
};

inline Decomposition decompose(const FourierCoefficients& c, const SpectralBasis& basis) {
  const auto& p = c.graph();
  const std::size_t k = p.k();
  std::vector<std::vector<double>> masked(k, std::vector<double>(c.size(), 0.0));
  std::vector<double> constant(c.size(), 0.0);
  std::vector<std::size_t> idx(k);
  for (std::size_t i = 0; i < c.size(); ++i) {
    p.tuple_of(i, idx);
    // the last nonzero entry of the multi-index selects the component
    std::size_t last = k;
    for (std::size_t j = k; j-- > 0;) {
      if (idx[j] != 0) {
        last = j;
        break;
      }
    }
    if (last == k)
      constant[i] = c[i];
    else
      masked[last][i] = c[i];
  }
  Decomposition d{inverse_fourier(FourierCoefficients(c.graph_ptr(), std::move(constant)), basis), {}};
  d.components.reserve(k);
  for (auto& m : masked) d.components.push_back(inverse_fourier(FourierCoefficients(c.graph_ptr(), std::move(m)), basis));
  return d;
}

inline Decomposition decompose(const FunctionTable& f, const SpectralBasis& basis) {
  return decompose(fourier_transform(f, basis), basis);
}

struct NormBoundsReport {
  std::vector<double> var_j;
  std::vector<double> l2_sq;   // |f_j|_2^2
  std::vector<double> l1;      // |f_j|_1
  std::vector<double> l2_slack;  // var_j - |f_j|_2^2
  std::vector<double> l1_slack;  // var_j - |f_j|_1
  bool ok = true;
};

/// |f_j|_2^2 <= var_j(f) and |f_j|_1 <= var_j(f) for Boolean f.
inline NormBoundsReport check_l2_l1_bounds(const FunctionTable& f, const Decomposition& dec) {
  if (!f.boolean_pm1()) throw NotBoolean("l1/l2 bounds need a {-1,+1}-valued function");
  NormBoundsReport r;
  for (std::size_t j = 0; j < f.graph().k(); ++j) {
    const double v = variance_along(f, j);
    const double l2 = norm2_sq(dec.components[j]);
    const double l1 = norm1(dec.components[j]);
    r.var_j.push_back(v);
    r.l2_sq.push_back(l2);
    r.l1.push_back(l1);
    r.l2_slack.push_back(v - l2);
    r.l1_slack.push_back(v - l1);
    if (l2 > v + kIdentityTol || l1 > v + kIdentityTol) r.ok = false;
  }
  return r;
}

struct EfronStein {
  double lhs = 0.0;  // sum_j E var_{x_j} f
  double rhs = 0.0;  // var f
  bool ok = false;
};

inline EfronStein efron_stein_check(const FunctionTable& f) {
  EfronStein r;
  for (std::size_t j = 0; j < f.graph().k(); ++j) r.lhs += variance_along(f, j);
  r.rhs = variance(f);
  r.ok = r.lhs >= r.rhs - kIdentityTol;
  return r;
}

}  // namespace cartprod
