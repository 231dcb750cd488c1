#pragma once

// Influence machinery on Cartesian powers: the t-parameterized log-Sobolev
// lemma and its per-coordinate corollary, the KKL influence report and
// constructive junta extraction.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <random>

#include "cartprod/analysis.hpp"

namespace cartprod {

struct LemmaCheck {
  double lhs = 0.0;
  double rhs = 0.0;
  bool holds = false;
};

inline const double kMaxLemmaT = std::exp(-2.0);

namespace detail {

inline void require_t(double t) {
  if (!(t > 0.0) || t > kMaxLemmaT * (1.0 + 1e-15))
    throw std::invalid_argument("t must lie in (0, 1/e^2], got " + std::to_string(t));
}

/// (alpha/2k)(sqrt(t) log t * a + log t * b - b log b)
inline double lemma_rhs(double alpha, std::size_t k, double t, double a, double b) {
  const double lt = std::log(t);
  return alpha / (2.0 * static_cast<double>(k)) * (std::sqrt(t) * lt * a + lt * b - xlogx(b));
}

}  // namespace detail

/// <h, L h> >= (alpha/2k)(sqrt(t) log t |h|_1 + log t |h|_2^2 - |h|_2^2 log |h|_2^2).
inline LemmaCheck main_lemma_check(const FunctionTable& h, double t, double alpha) {
  detail::require_t(t);
  LemmaCheck c;
  c.lhs = dirichlet_form(h);
  c.rhs = detail::lemma_rhs(alpha, h.graph().k(), t, norm1(h), norm2_sq(h));
  c.holds = c.lhs >= c.rhs - kIdentityTol;
  return c;
}

struct CorollaryReport {
  double t = 0.0;
  double alpha = 0.0;
  std::vector<LemmaCheck> per_coordinate;
  bool holds = true;
};

/// For each j: <f_j, L f_j> >= (alpha/2k)(sqrt(t) log t var_j(f) + log t |f_j|^2 - |f_j|^2 log |f_j|^2).
inline CorollaryReport corollary_check(const FunctionTable& f, const Decomposition& dec, double t, double alpha) {
  if (!f.boolean_pm1()) throw NotBoolean("corollary_check needs a {-1,+1}-valued function");
  detail::require_t(t);
  CorollaryReport r;
  r.t = t;
  r.alpha = alpha;
  const std::size_t k = f.graph().k();
  for (std::size_t j = 0; j < k; ++j) {
    LemmaCheck c;
    const auto& fj = dec.components[j];
    c.lhs = dirichlet_form(fj);
    c.rhs = detail::lemma_rhs(alpha, k, t, variance_along(f, j), norm2_sq(fj));
    c.holds = c.lhs >= c.rhs - kIdentityTol;
    r.holds = r.holds && c.holds;
    r.per_coordinate.push_back(c);
  }
  return r;
}

inline CorollaryReport corollary_check(const FunctionTable& f, const SpectralBasis& basis, double t, double alpha) {
  return corollary_check(f, decompose(f, basis), t, alpha);
}

struct KklReport {
  std::vector<double> influences;  // <f, L_j f>
  double max_influence = 0.0;
  std::size_t argmax = 0;
  double total_influence = 0.0;    // <f, L f> = avg_j <f, L_j f>
  double variance = 0.0;
  double alpha = 0.0;
  double bound_expr = 0.0;         // alpha var(f) log k / k
  double ratio = 0.0;              // max_influence / bound_expr
  double max_coordinate_variance = 0.0;  // V = max_j var_j(f)
  double proof_t = 0.0;                  // (var(f)/(e k V))^2
  bool max_ge_total = false;
  bool subadditivity_ok = false;         // V <= var(f) <= k V
};

inline KklReport kkl_report(const FunctionTable& f, double alpha) {
  if (!f.boolean_pm1()) throw NotBoolean("kkl_report needs a {-1,+1}-valued function");
  const std::size_t k = f.graph().k();
  if (k < 2) throw std::invalid_argument("kkl_report needs k >= 2");
  KklReport r;
  r.variance = variance(f);
  if (r.variance <= kMeasureTol) throw std::invalid_argument("kkl_report: f is constant");
  r.alpha = alpha;
  for (std::size_t j = 0; j < k; ++j) {
    r.influences.push_back(directional_form(f, j));
    r.max_coordinate_variance = std::max(r.max_coordinate_variance, variance_along(f, j));
  }
  const auto it = std::max_element(r.influences.begin(), r.influences.end());
  r.max_influence = *it;
  r.argmax = static_cast<std::size_t>(it - r.influences.begin());
  r.total_influence = dirichlet_form(f);
  const double kd = static_cast<double>(k);
  r.bound_expr = alpha * r.variance * std::log(kd) / kd;
  r.ratio = r.max_influence / r.bound_expr;
  const double v = r.max_coordinate_variance;
  r.proof_t = std::pow(r.variance / (std::numbers::e * kd * v), 2.0);
  r.max_ge_total = r.max_influence >= r.total_influence - kIdentityTol;
  r.subadditivity_ok = v <= r.variance + kIdentityTol && r.variance <= kd * v + kIdentityTol;
  return r;
}

struct FriedgutResult {
  std::vector<std::size_t> junta;        // J, ascending
  std::vector<std::size_t> order;        // coordinates by non-increasing var_j
  std::vector<double> coordinate_variances;
  FunctionTable g;                       // Fourier truncation to multi-indices supported on J
  FunctionTable g_tilde;                 // sign(g), sign(0) = +1
  double epsilon = 0.0;
  double epsilon_rounding = 0.0;         // epsilon / 4
  double total_influence = 0.0;          // I = <f, L f>
  double log_threshold = 0.0;            // F(epsilon/4)
  double threshold = 0.0;                // V = exp(F)
  double truncation_distance = 0.0;      // |f - g|^2
  double distance = 0.0;                 // |f - g_tilde|^2
  double log_bound = 0.0;                // 50 k I / (epsilon alpha)
  double bound = 0.0;                    // exp(log_bound), may be +inf
  // proof quantities
  double excluded_energy = 0.0;          // sum_{j not in J} <f_j, L f_j>
  double variance_sum = 0.0;             // sum_j var_j(f)
  double variance_sum_bound = 0.0;       // k I / (2 Phi)
  bool depends_only_on_junta = false;
  bool within_epsilon = false;
  bool within_bound = false;
  bool rounding_ok = false;              // |f - g_tilde|^2 <= 4 |f - g|^2
  bool proof_bounds_ok = false;
  bool ok() const { return depends_only_on_junta && within_epsilon && within_bound && rounding_ok && proof_bounds_ok; }
};

/// True when f(x) never changes as a coordinate outside `coords` is varied.
inline bool depends_only_on(const FunctionTable& f, std::span<const std::size_t> coords) {
  const auto& p = f.graph();
  for (std::size_t j = 0; j < p.k(); ++j) {
    if (std::find(coords.begin(), coords.end(), j) != coords.end()) continue;
    const std::size_t inner = p.stride(j);
    const std::size_t n = p.n();
    for (std::size_t idx = 0; idx < f.size(); ++idx) {
      const std::size_t xj = (idx / inner) % n;
      if (xj == 0) continue;
      if (f[idx] != f[idx - xj * inner]) return false;
    }
  }
  return true;
}

struct PermutationTest {
  std::size_t trials = 0;
  std::size_t mismatches = 0;
  bool ok() const { return mismatches == 0; }
};

/// Resamples one coordinate outside `coords` at a random point and compares
/// values; seeded and reproducible.
inline PermutationTest permutation_test(const FunctionTable& f, std::span<const std::size_t> coords,
                                        std::size_t trials, std::uint64_t seed) {
  const auto& p = f.graph();
  std::vector<std::size_t> outside;
  for (std::size_t j = 0; j < p.k(); ++j)
    if (std::find(coords.begin(), coords.end(), j) == coords.end()) outside.push_back(j);
  PermutationTest r;
  if (outside.empty()) return r;
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> vertex(0, f.size() - 1), value(0, p.n() - 1),
      coord(0, outside.size() - 1);
  for (std::size_t s = 0; s < trials; ++s) {
    const std::size_t i = vertex(rng);
    const std::size_t j = outside[coord(rng)];
    const std::size_t stride = p.stride(j);
    const std::size_t xj = (i / stride) % p.n();
    const std::size_t moved = i - xj * stride + value(rng) * stride;
    ++r.trials;
    if (f[i] != f[moved]) ++r.mismatches;
  }
  return r;
}

/// Junta extraction: J = {j : var_j(f) >= V} with V = exp(F(epsilon/4)),
/// g = projection of f onto multi-indices vanishing outside J, g_tilde = sign(g).
inline FriedgutResult friedgut_extract(const FunctionTable& f, const SpectralBasis& basis, double epsilon,
                                       double alpha, double phi) {
  if (!f.boolean_pm1()) throw NotBoolean("friedgut_extract needs a {-1,+1}-valued function");
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw std::invalid_argument("epsilon must lie in (0, 1)");
  if (!(alpha > 0.0) || !(phi > 0.0)) throw std::invalid_argument("alpha and phi must be positive");
  const auto& p = f.graph();
  const std::size_t k = p.k();
  const double kd = static_cast<double>(k);

  FriedgutResult r{.junta = {}, .order = {}, .coordinate_variances = {}, .g = f, .g_tilde = f};
  r.epsilon = epsilon;
  r.epsilon_rounding = epsilon / 4.0;
  r.total_influence = dirichlet_form(f);
  for (std::size_t j = 0; j < k; ++j) r.coordinate_variances.push_back(variance_along(f, j));
  r.order.resize(k);
  std::iota(r.order.begin(), r.order.end(), std::size_t{0});
  std::stable_sort(r.order.begin(), r.order.end(),
                   [&](std::size_t a, std::size_t b) { return r.coordinate_variances[a] > r.coordinate_variances[b]; });
  for (double v : r.coordinate_variances) r.variance_sum += v;

  const double mean = expectation(f);
  if (variance(f) <= kMeasureTol) {
    const double majority = mean >= 0.0 ? 1.0 : -1.0;
    r.g = f.with_values(std::vector<double>(f.size(), mean));
    r.g_tilde = f.with_values(std::vector<double>(f.size(), majority));
    r.threshold = std::numeric_limits<double>::infinity();
    r.log_threshold = std::numeric_limits<double>::infinity();
    r.truncation_distance = 0.0;
    r.distance = 0.0;
    r.depends_only_on_junta = true;
    r.within_epsilon = r.within_bound = r.rounding_ok = r.proof_bounds_ok = true;
    return r;
  }
  if (!(r.total_influence > 0.0)) throw std::logic_error("non-constant f with zero total influence on a connected graph");

  const double I = r.total_influence;
  const double eps4 = r.epsilon_rounding;
  r.log_threshold = 2.0 * (1.0 + 1.0 / std::numbers::e) * std::log(2.0 * phi * eps4 / (std::numbers::e * kd * I)) -
                    2.0 * kd * I / (alpha * eps4);
  r.threshold = std::exp(r.log_threshold);
  for (std::size_t j = 0; j < k; ++j) {
    const double v = r.coordinate_variances[j];
    if (v >= kVarianceFloor && v >= r.threshold) r.junta.push_back(j);
  }

  const auto coeffs = fourier_transform(f, basis);
  std::vector<double> kept(coeffs.size(), 0.0);
  std::vector<std::size_t> idx(k);
  std::vector<char> in_junta(k, 0);
  for (auto j : r.junta) in_junta[j] = 1;
  const auto dec = decompose(coeffs, basis);
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    p.tuple_of(i, idx);
    bool keep = true;
    for (std::size_t j = 0; j < k && keep; ++j) keep = in_junta[j] || idx[j] == 0;
    if (keep) kept[i] = coeffs[i];
  }
  r.g = inverse_fourier(FourierCoefficients(f.graph_ptr(), std::move(kept)), basis);
  std::vector<double> signs(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) signs[i] = r.g[i] >= 0.0 ? 1.0 : -1.0;
  r.g_tilde = f.with_values(std::move(signs));

  const auto w = p.vertex_masses();
  for (std::size_t i = 0; i < f.size(); ++i) {
    r.truncation_distance += w[i] * (f[i] - r.g[i]) * (f[i] - r.g[i]);
    r.distance += w[i] * (f[i] - r.g_tilde[i]) * (f[i] - r.g_tilde[i]);
  }
  r.log_bound = 50.0 * kd * I / (epsilon * alpha);
  r.bound = std::exp(r.log_bound);
  for (std::size_t j = 0; j < k; ++j)
    if (!in_junta[j]) r.excluded_energy += dirichlet_form(dec.components[j]);
  r.variance_sum_bound = kd * I / (2.0 * phi);

  r.depends_only_on_junta = depends_only_on(r.g_tilde, r.junta);
  r.within_epsilon = r.distance <= epsilon + kIdentityTol;
  r.within_bound = std::log(static_cast<double>(std::max<std::size_t>(r.junta.size(), 1))) <= r.log_bound;
  r.rounding_ok = r.distance <= 4.0 * r.truncation_distance + kIdentityTol;
  r.proof_bounds_ok =
      r.excluded_energy <= I + kIdentityTol && r.variance_sum <= r.variance_sum_bound + kIdentityTol;
  return r;
}

}  // namespace cartprod
