#pragma once

// Conductance (exhaustive set form and functional form), a numerical estimate
// of the log-Sobolev constant, and the scaling of all three under Cartesian
// powers.

#include <algorithm>
#include <array>
#include <bit>
#include <cstdint>
#include <optional>
#include <random>

#include "cartprod/analysis.hpp"

namespace cartprod {

inline constexpr std::size_t kMaxBruteForceVertices = 25;

struct ConductanceResult {
  double phi = 0.0;
  std::vector<Vertex> witness;  // contains vertex 0; lexicographically smallest minimizer
};

/// 1/4 mu(S, S^c) / (pi(S) pi(S^c)).
template <MeasuredGraph G>
double set_conductance(const G& g, std::span<const Vertex> set) {
  const std::size_t n = g.vertex_count();
  std::vector<char> in(n, 0);
  for (Vertex v : set) in.at(v) = 1;
  const auto pi = g.vertex_masses();
  double vol = 0.0, vol_c = 0.0, cut = 0.0;
  for (std::size_t v = 0; v < n; ++v) (in[v] ? vol : vol_c) += pi[v];
  g.for_each_edge([&](Vertex a, Vertex b, double m) {
    if (in[a] != in[b]) cut += m;
  });
  if (vol <= 0.0 || vol_c <= 0.0) throw std::invalid_argument("conductance needs a nonempty proper subset");
  return 0.25 * cut / (vol * vol_c);
}

namespace detail {

struct CutCandidate {
  double value = std::numeric_limits<double>::infinity();
  std::uint64_t mask = 0;
};

inline std::vector<Vertex> mask_to_set(std::uint64_t mask) {
  std::vector<Vertex> s;
  for (Vertex v = 0; mask != 0; ++v, mask >>= 1)
    if (mask & 1u) s.push_back(v);
  return s;
}

/// Strict "better" order: smaller value (beyond a relative 1e-12), then lexicographically smaller set.
inline bool better_cut(const CutCandidate& a, const CutCandidate& b) {
  if (std::isinf(a.value) || std::isinf(b.value)) return a.value < b.value;
  const double scale = std::max(1.0, std::abs(b.value));
  if (a.value < b.value - 1e-12 * scale) return true;
  if (a.value > b.value + 1e-12 * scale) return false;
  const auto sa = mask_to_set(a.mask), sb = mask_to_set(b.mask);
  return std::lexicographical_compare(sa.begin(), sa.end(), sb.begin(), sb.end());
}

struct Adjacency {
  std::vector<std::vector<std::pair<Vertex, double>>> nbr;
  std::vector<double> pi;
};

/// Gray-code sweep over the low `low_bits` free vertices with the high free bits fixed to `prefix`.
/// Free bit b corresponds to vertex b + 1; vertex 0 is always in S.
inline CutCandidate sweep_chunk(const Adjacency& adj, std::size_t n, std::size_t low_bits, std::uint64_t prefix) {
  std::vector<char> in(n, 0);
  in[0] = 1;
  for (std::size_t b = low_bits; b + 1 < n; ++b)
    if ((prefix >> (b - low_bits)) & 1u) in[b + 1] = 1;
  double vol = 0.0, cut = 0.0;
  std::uint64_t mask = 0;
  for (std::size_t v = 0; v < n; ++v) {
    if (!in[v]) continue;
    vol += adj.pi[v];
    mask |= std::uint64_t{1} << v;
    for (const auto& [u, m] : adj.nbr[v])
      if (!in[u]) cut += m;
  }
  const std::uint64_t full = (n == 64) ? ~std::uint64_t{0} : ((std::uint64_t{1} << n) - 1);
  CutCandidate best;
  const std::uint64_t steps = std::uint64_t{1} << low_bits;
  for (std::uint64_t s = 0; s < steps; ++s) {
    if (s != 0) {
      const auto v = static_cast<Vertex>(std::countr_zero(s)) + 1;
      double delta = 0.0;
      for (const auto& [u, m] : adj.nbr[v]) delta += in[u] ? -m : m;
      // delta: change in cut mass when v joins S; leaving is the negation
      if (in[v]) {
        in[v] = 0;
        cut -= delta;
        vol -= adj.pi[v];
        mask &= ~(std::uint64_t{1} << v);
      } else {
        in[v] = 1;
        cut += delta;
        vol += adj.pi[v];
        mask |= std::uint64_t{1} << v;
      }
    }
    if (mask == full) continue;
    const double vol_c = 1.0 - vol;
    if (vol_c <= 0.0) continue;
    const CutCandidate c{0.25 * cut / (vol * vol_c), mask};
    if (better_cut(c, best)) best = c;
  }
  return best;
}

}  // namespace detail

/// Exact conductance by enumerating all 2^(n-1) cuts (n <= 25).
template <MeasuredGraph G>
ConductanceResult conductance_bruteforce(const G& g, std::size_t max_vertices = kMaxBruteForceVertices) {
  const std::size_t n = g.vertex_count();
  if (n > max_vertices || n > 63)
    throw CapExceeded("conductance_bruteforce: " + std::to_string(n) + " vertices exceed the limit of " +
                      std::to_string(max_vertices) + "; use conductance_functional for an upper bound");
  if (n < 2) throw std::invalid_argument("conductance needs at least 2 vertices");

  detail::Adjacency adj;
  adj.nbr.resize(n);
  adj.pi = g.vertex_masses();
  double total = 0.0;
  for (double p : adj.pi) total += p;
  for (double& p : adj.pi) p /= total;
  g.for_each_edge([&](Vertex a, Vertex b, double m) {
    adj.nbr[a].emplace_back(b, m);
    adj.nbr[b].emplace_back(a, m);
  });

  const std::size_t free_bits = n - 1;
  const std::size_t high_bits = std::min<std::size_t>(free_bits, 4);
  const std::size_t low_bits = free_bits - high_bits;
  const std::size_t chunks = std::size_t{1} << high_bits;
  std::vector<detail::CutCandidate> results(chunks);
  const unsigned workers = detail::worker_count(chunks);
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (std::size_t c = w; c < chunks; c += workers) results[c] = detail::sweep_chunk(adj, n, low_bits, c);
    });
  }
  for (auto& t : pool) t.join();

  detail::CutCandidate best;
  for (const auto& r : results)
    if (detail::better_cut(r, best)) best = r;
  ConductanceResult out;
  out.witness = detail::mask_to_set(best.mask);
  out.phi = set_conductance(g, out.witness);
  return out;
}

/// <f, L f> / (2 var f) for a non-constant {-1,+1} function.
inline double conductance_functional(const FunctionTable& f) {
  if (!f.boolean_pm1()) throw NotBoolean("conductance_functional needs a {-1,+1}-valued function");
  const double var = variance(f);
  if (var <= kMeasureTol) throw std::invalid_argument("conductance_functional: constant function has zero variance");
  return dirichlet_form(f) / (2.0 * var);
}

struct LogSobolevOptions {
  std::size_t restarts = 24;
  std::size_t max_iters = 3000;
  double tol = 1e-12;
  std::uint64_t seed = 1;
  std::size_t samples = 256;  // random functions for the non-certified sample minimum
};

struct LogSobolevEstimate {
  double alpha_hat = 0.0;          // best ratio found: an upper bound on alpha, certified by `witness`
  std::vector<double> witness;     // |witness|_2 = 1
  double sample_min_ratio = 0.0;   // min ratio over random functions (non-certified)
  std::size_t restarts_run = 0;
  std::size_t converged = 0;
  bool spectral_limit = false;     // alpha_hat = lambda1, the limit of the ratio along 1 + delta v_1
};

namespace detail {

struct RatioEval {
  double ratio = std::numeric_limits<double>::infinity();
  Eigen::VectorXd grad;
  bool valid = false;
};

// Smallest normalized entropy accepted; below it rounding in sum pi f^2 dominates.
inline constexpr double kMinEntropy = 1e-10;

/// 2 <f,Lf> / Ent(f^2) at f = exp(u), with its gradient in u.
inline RatioEval log_sobolev_ratio(const WeightedGraph& g, const Eigen::MatrixXd& L, const Eigen::VectorXd& pi,
                                   const Eigen::VectorXd& u, bool with_grad) {
  RatioEval r;
  const Eigen::VectorXd f0 = (u.array() - u.maxCoeff()).exp().matrix();
  const double norm = pi.dot(f0.cwiseProduct(f0));
  if (!(norm > 0.0)) return r;
  const Eigen::VectorXd f = f0 / std::sqrt(norm);
  double ent = 0.0;
  for (Eigen::Index i = 0; i < f.size(); ++i) {
    const double gsq = f(i) * f(i);
    const double d = gsq - 1.0;
    ent += pi(i) * (gsq > 0.0 ? (1.0 + d) * std::log1p(d) - d : 1.0);
  }
  if (!(ent > kMinEntropy) || !std::isfinite(ent)) return r;
  const double dir = g.dirichlet(std::span<const double>(f.data(), static_cast<std::size_t>(f.size())));
  r.ratio = 2.0 * dir / ent;
  r.valid = std::isfinite(r.ratio);
  if (with_grad && r.valid) {
    const Eigen::VectorXd dD = 2.0 * (L * f);
    Eigen::VectorXd dE(f.size());
    for (Eigen::Index i = 0; i < f.size(); ++i) {
      const double gsq = f(i) * f(i);
      dE(i) = gsq > 0.0 ? 2.0 * pi(i) * f(i) * std::log(gsq) : 0.0;
    }
    const Eigen::VectorXd df = 2.0 * (dD * ent - dir * dE) / (ent * ent);
    r.grad = df.cwiseProduct(f);
  }
  return r;
}

struct DescentResult {
  double ratio = std::numeric_limits<double>::infinity();
  Eigen::VectorXd u;
  bool converged = false;
};

inline DescentResult descend(const WeightedGraph& g, const Eigen::MatrixXd& L, const Eigen::VectorXd& pi,
                             Eigen::VectorXd u, const LogSobolevOptions& opts) {
  DescentResult out;
  RatioEval cur = log_sobolev_ratio(g, L, pi, u, true);
  if (!cur.valid) return out;
  double step = 1.0 / std::max(1.0, cur.grad.norm());
  Eigen::VectorXd prev_u, prev_grad;
  for (std::size_t it = 0; it < opts.max_iters; ++it) {
    if (prev_u.size() == u.size()) {
      const Eigen::VectorXd s = u - prev_u, y = cur.grad - prev_grad;
      const double sy = s.dot(y);
      if (sy > 0.0) step = s.squaredNorm() / sy;
    }
    const double gg = cur.grad.squaredNorm();
    if (gg == 0.0) {
      out.converged = true;
      break;
    }
    bool accepted = false;
    for (int bt = 0; bt < 60; ++bt) {
      Eigen::VectorXd cand = u - step * cur.grad;
      RatioEval next = log_sobolev_ratio(g, L, pi, cand, true);
      if (next.valid && next.ratio <= cur.ratio - 1e-4 * step * gg) {
        prev_u = u;
        prev_grad = cur.grad;
        u = std::move(cand);
        const double change = (cur.ratio - next.ratio) / std::max(1e-300, cur.ratio);
        cur = std::move(next);
        accepted = true;
        if (change < opts.tol) out.converged = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) {
      out.converged = true;  // no descent direction left at working precision
      break;
    }
    if (out.converged) break;
  }
  out.ratio = cur.ratio;
  out.u = std::move(u);
  return out;
}

}  // namespace detail

/// Best found value of inf_f 2<f,Lf>/Ent(f^2): multi-start descent from
/// near-constant eigen-directions 1 + delta v_i and from random log-normal functions.
inline LogSobolevEstimate log_sobolev_estimate(const WeightedGraph& g, const LogSobolevOptions& opts = {}) {
  const auto n = static_cast<Eigen::Index>(g.vertex_count());
  const Eigen::MatrixXd L = g.laplacian();
  const Eigen::VectorXd pi = Eigen::Map<const Eigen::VectorXd>(g.pi().data(), n);
  const SpectralBasis basis = eigendecompose(g);

  std::vector<Eigen::VectorXd> starts;
  const Eigen::Index eig_dirs = std::min<Eigen::Index>(n - 1, 3);
  for (Eigen::Index i = 1; i <= eig_dirs; ++i)
    for (double delta : {1e-2, -1e-2, 0.5, -0.5}) starts.emplace_back(delta * basis.eigenfunctions.col(i));
  for (std::size_t r = 0; r < opts.restarts; ++r) {
    std::mt19937_64 rng(opts.seed * 0x9E3779B97F4A7C15ull + r);
    const double sigma = std::array{0.5, 1.0, 2.0, 4.0}[r % 4];
    std::normal_distribution<double> gauss(0.0, sigma);
    Eigen::VectorXd u(n);
    for (Eigen::Index i = 0; i < n; ++i) u(i) = gauss(rng);
    starts.push_back(std::move(u));
  }

  std::vector<detail::DescentResult> results(starts.size());
  const unsigned workers = detail::worker_count(starts.size());
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (std::size_t s = w; s < starts.size(); s += workers) results[s] = detail::descend(g, L, pi, starts[s], opts);
    });
  }
  for (auto& t : pool) t.join();

  LogSobolevEstimate est;
  est.restarts_run = results.size();
  std::optional<std::size_t> best;
  for (std::size_t s = 0; s < results.size(); ++s) {
    if (results[s].converged) ++est.converged;
    if (std::isfinite(results[s].ratio) && (!best || results[s].ratio < results[*best].ratio)) best = s;
  }
  if (!best) throw std::runtime_error("log_sobolev_estimate: every restart degenerated (Ent(f^2) -> 0)");

  Eigen::VectorXd u = results[*best].u;
  est.alpha_hat = detail::log_sobolev_ratio(g, L, pi, u, false).ratio;
  if (basis.lambda1() < est.alpha_hat) {
    est.alpha_hat = basis.lambda1();
    est.spectral_limit = true;
    u = (Eigen::VectorXd::Ones(n) + 1e-4 * basis.eigenfunctions.col(1)).array().log().matrix();
  }
  Eigen::VectorXd f = (u.array() - u.maxCoeff()).exp().matrix();
  f /= std::sqrt(pi.dot(f.cwiseProduct(f)));
  est.witness.assign(f.data(), f.data() + f.size());

  std::mt19937_64 rng(opts.seed ^ 0xA5A5A5A5ull);
  std::normal_distribution<double> gauss(0.0, 1.0);
  est.sample_min_ratio = std::numeric_limits<double>::infinity();
  for (std::size_t s = 0; s < opts.samples; ++s) {
    Eigen::VectorXd v(n);
    for (Eigen::Index i = 0; i < n; ++i) v(i) = gauss(rng);
    const auto r = detail::log_sobolev_ratio(g, L, pi, v, false);
    if (r.valid) est.sample_min_ratio = std::min(est.sample_min_ratio, r.ratio);
  }
  return est;
}

/// 2 <f,Lf> / Ent(f^2) for an arbitrary function on the base graph.
inline double log_sobolev_ratio(const WeightedGraph& g, std::span<const double> f) {
  double norm = 0.0;
  const auto pi = g.pi();
  for (std::size_t i = 0; i < f.size(); ++i) norm += pi[i] * f[i] * f[i];
  // Ent(f^2)/|f|^2 = sum pi (g log g - g + 1) with g = f^2/|f|^2, accurate near constants
  double ent = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double d = f[i] * f[i] / norm - 1.0;
    ent += pi[i] * (d > -1.0 ? (1.0 + d) * std::log1p(d) - d : 1.0);
  }
  return 2.0 * g.dirichlet(f) / (norm * ent);
}

/// Log-Sobolev constant of the complete graph K_q in this normalization:
/// 2(q-2)/((q-1) ln(q-1)), with the q = 2 limit equal to 2.
inline double complete_graph_log_sobolev(std::size_t q) {
  if (q < 2) throw std::invalid_argument("complete graph needs q >= 2");
  if (q == 2) return 2.0;
  const double qd = static_cast<double>(q);
  return 2.0 * (qd - 2.0) / ((qd - 1.0) * std::log(qd - 1.0));
}

struct ChainReport {
  double alpha_hat = 0.0;
  double lambda1 = 0.0;
  double phi = 0.0;
  bool alpha_le_lambda1 = false;
  bool lambda1_le_2phi = false;
  bool ok = false;
};

inline constexpr double kChainAlphaRelTol = 1e-6;

inline ChainReport chain_check(const WeightedGraph& g, const LogSobolevOptions& opts = {}) {
  ChainReport r;
  r.alpha_hat = log_sobolev_estimate(g, opts).alpha_hat;
  r.lambda1 = eigendecompose(g).lambda1();
  r.phi = conductance_bruteforce(g).phi;
  r.alpha_le_lambda1 = r.alpha_hat <= r.lambda1 * (1.0 + kChainAlphaRelTol);
  r.lambda1_le_2phi = r.lambda1 <= 2.0 * r.phi + kIdentityTol;
  r.ok = r.alpha_le_lambda1 && r.lambda1_le_2phi;
  return r;
}

struct ScalingRow {
  std::optional<double> phi;
  double lambda1 = 0.0;
  std::optional<double> lambda1_direct;  // from an explicit eigendecomposition of the product
  std::optional<double> alpha_hat;
};

struct ScalingReport {
  std::size_t k = 1;
  ScalingRow base;
  ScalingRow product;
  std::optional<double> phi_ratio;
  double lambda1_ratio = 0.0;
  std::optional<double> alpha_ratio;
  bool phi_ok = true;
  bool lambda_ok = true;
  bool alpha_ok = true;
  bool partial = false;
  bool ok() const { return phi_ok && lambda_ok && alpha_ok; }
};

inline constexpr double kAlphaRatioRelTol = 0.05;
inline constexpr std::size_t kMaxDirectEigenVertices = 2048;
inline constexpr std::size_t kMaxLogSobolevVertices = 200;

inline ScalingReport product_scaling_report(const WeightedGraph& g, std::size_t k, const LogSobolevOptions& opts = {},
                                            std::size_t dense_cap = kDefaultDenseCap) {
  ScalingReport r;
  r.k = k;
  const double kd = static_cast<double>(k);
  const auto basis = eigendecompose(g);
  r.base.lambda1 = basis.lambda1();
  r.base.lambda1_direct = basis.lambda1();
  if (g.vertex_count() <= kMaxBruteForceVertices) r.base.phi = conductance_bruteforce(g).phi;
  if (g.vertex_count() <= kMaxLogSobolevVertices) r.base.alpha_hat = log_sobolev_estimate(g, opts).alpha_hat;

  const ProductGraph p(g, k, dense_cap);
  // the minimum nonzero averaged eigenvalue is (lambda_1 + 0 + ... + 0)/k
  std::vector<std::size_t> idx(k, 0);
  idx[0] = 1;
  r.product.lambda1 = product_eigenvalue(basis, idx);
  r.lambda1_ratio = r.product.lambda1 / r.base.lambda1;

  const std::size_t count = p.vertex_count();
  std::optional<WeightedGraph> explicit_product;
  if (p.dense_ok() && count <= kMaxDirectEigenVertices) explicit_product = materialize(p);
  if (explicit_product) {
    r.product.lambda1_direct = eigendecompose(*explicit_product).lambda1();
    r.lambda_ok = std::abs(*r.product.lambda1_direct - r.base.lambda1 / kd) <= kIdentityTol;
  } else {
    r.partial = true;
  }
  if (explicit_product && count <= kMaxBruteForceVertices && r.base.phi) {
    r.product.phi = conductance_bruteforce(*explicit_product).phi;
    r.phi_ratio = *r.product.phi / *r.base.phi;
    r.phi_ok = std::abs(*r.product.phi - *r.base.phi / kd) <= kIdentityTol;
  } else {
    r.partial = true;
  }
  if (explicit_product && count <= kMaxLogSobolevVertices && r.base.alpha_hat) {
    r.product.alpha_hat = log_sobolev_estimate(*explicit_product, opts).alpha_hat;
    r.alpha_ratio = *r.product.alpha_hat / *r.base.alpha_hat;
    r.alpha_ok = std::abs(*r.alpha_ratio * kd - 1.0) <= kAlphaRatioRelTol;
  } else {
    r.partial = true;
  }
  return r;
}

}  // namespace cartprod
