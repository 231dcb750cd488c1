#pragma once

// Sparsest-cut relaxations on Cartesian powers: the basic SDP optimum, the
// scaled direct-sum lift of vector solutions, triangle-inequality checks, and
// liftings of Sherali-Adams local distributions and Lasserre set vectors,
// each paired with a verifier.

#include <algorithm>
#include <cmath>
#include <iterator>
#include <map>
#include <numeric>
#include <random>

#include "cartprod/spectral.hpp"

namespace cartprod {

/// One vector per vertex (row x is v_x), with cached objective E_mu |v_x - v_y|^2
/// and spread E_{pi x pi} |v_x - v_y|^2.
struct SdpSolution {
  Eigen::MatrixXd vectors;
  double objective = 0.0;
  double spread = 0.0;

  std::size_t size() const { return static_cast<std::size_t>(vectors.rows()); }
  std::size_t dimension() const { return static_cast<std::size_t>(vectors.cols()); }
  bool feasible() const { return std::abs(spread - 1.0) <= kIdentityTol; }
};

template <MeasuredGraph G>
double sdp_objective(const G& g, const Eigen::MatrixXd& v) {
  double s = 0.0;
  g.for_each_edge([&](Vertex a, Vertex b, double m) {
    s += m * (v.row(static_cast<Eigen::Index>(a)) - v.row(static_cast<Eigen::Index>(b))).squaredNorm();
  });
  return s;
}

/// E_{x,y ~ pi x pi} |v_x - v_y|^2 = 2 E|v|^2 - 2 |E v|^2.
template <MeasuredGraph G>
double sdp_spread(const G& g, const Eigen::MatrixXd& v) {
  const auto pi = g.vertex_masses();
  Eigen::RowVectorXd mean = Eigen::RowVectorXd::Zero(v.cols());
  double sq = 0.0;
  for (Eigen::Index x = 0; x < v.rows(); ++x) {
    mean += pi[x] * v.row(x);
    sq += pi[x] * v.row(x).squaredNorm();
  }
  return std::max(0.0, 2.0 * sq - 2.0 * mean.squaredNorm());
}

template <MeasuredGraph G>
SdpSolution make_sdp_solution(const G& g, Eigen::MatrixXd vectors) {
  if (static_cast<std::size_t>(vectors.rows()) != g.vertex_count())
    throw std::invalid_argument("SDP solution has " + std::to_string(vectors.rows()) + " vectors for " +
                                std::to_string(g.vertex_count()) + " vertices");
  SdpSolution s;
  s.objective = sdp_objective(g, vectors);
  s.spread = sdp_spread(g, vectors);
  s.vectors = std::move(vectors);
  return s;
}

/// Rescales so that the spread is exactly 1.
template <MeasuredGraph G>
SdpSolution normalize_spread(const G& g, const SdpSolution& s) {
  if (!(s.spread > 0.0)) throw std::invalid_argument("cannot normalize a solution with zero spread");
  return make_sdp_solution(g, s.vectors / std::sqrt(s.spread));
}

struct BasicSdp {
  double opt = 0.0;  // = lambda_1
  SdpSolution solution;
  bool verified = false;
};

/// The basic relaxation min E_mu |v_x - v_y|^2 s.t. spread 1 is solved by the
/// one-dimensional embedding v_1 / sqrt(2).
inline BasicSdp basic_sdp_opt(const WeightedGraph& g) {
  const auto basis = eigendecompose(g);
  BasicSdp r;
  r.opt = basis.lambda1();
  r.solution = make_sdp_solution(g, Eigen::MatrixXd(basis.eigenfunctions.col(1) / std::sqrt(2.0)));
  r.verified = std::abs(r.solution.objective - r.opt) <= kIdentityTol && r.solution.feasible();
  return r;
}

/// v_x = (1/sqrt k) (v_{x_1} (+) ... (+) v_{x_k}) for every product vertex.
inline Eigen::MatrixXd direct_sum(const Eigen::MatrixXd& base, const ProductGraph& p) {
  p.require_dense("direct_sum");
  if (static_cast<std::size_t>(base.rows()) != p.n()) throw std::invalid_argument("base vectors do not match the base graph");
  const auto d = base.cols();
  const auto k = static_cast<Eigen::Index>(p.k());
  const double scale = 1.0 / std::sqrt(static_cast<double>(p.k()));
  Eigen::MatrixXd out(static_cast<Eigen::Index>(p.vertex_count()), d * k);
  std::vector<Vertex> x(p.k());
  for (std::size_t i = 0; i < p.vertex_count(); ++i) {
    p.tuple_of(i, x);
    for (Eigen::Index j = 0; j < k; ++j)
      out.block(static_cast<Eigen::Index>(i), j * d, 1, d) = scale * base.row(static_cast<Eigen::Index>(x[j]));
  }
  return out;
}

struct LiftCheck {
  double inner_product_error = 0.0;  // max |<v_x,v_y> - avg_j <v_xj, v_yj>|
  double spread_error = 0.0;         // |spread - 1|
  double objective_error = 0.0;      // |objective - base objective / k|
  std::size_t pairs_checked = 0;
  bool exhaustive = true;
  bool ok = false;
};

struct VectorLift {
  SdpSolution solution;
  LiftCheck check;
};

inline constexpr std::size_t kMaxExhaustivePairs = std::size_t{1} << 22;

inline VectorLift lift_vectors(const SdpSolution& base, const ProductGraph& p, std::uint64_t seed = 1) {
  if (!base.feasible()) throw std::invalid_argument("lift_vectors: base solution is infeasible (spread != 1)");
  VectorLift r;
  r.solution = make_sdp_solution(p, direct_sum(base.vectors, p));
  const auto& V = r.solution.vectors;
  const Eigen::MatrixXd G = base.vectors * base.vectors.transpose();
  const std::size_t N = p.vertex_count();
  std::vector<Vertex> x(p.k()), y(p.k());
  auto check_pair = [&](std::size_t a, std::size_t b) {
    p.tuple_of(a, x);
    p.tuple_of(b, y);
    double avg = 0.0;
    for (std::size_t j = 0; j < p.k(); ++j) avg += G(static_cast<Eigen::Index>(x[j]), static_cast<Eigen::Index>(y[j]));
    avg /= static_cast<double>(p.k());
    const double ip = V.row(static_cast<Eigen::Index>(a)).dot(V.row(static_cast<Eigen::Index>(b)));
    r.check.inner_product_error = std::max(r.check.inner_product_error, std::abs(ip - avg));
    ++r.check.pairs_checked;
  };
  if (N * N <= kMaxExhaustivePairs) {
    for (std::size_t a = 0; a < N; ++a)
      for (std::size_t b = a; b < N; ++b) check_pair(a, b);
  } else {
    r.check.exhaustive = false;
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> pick(0, N - 1);
    for (std::size_t s = 0; s < kMaxExhaustivePairs; ++s) check_pair(pick(rng), pick(rng));
  }
  r.check.spread_error = std::abs(r.solution.spread - 1.0);
  r.check.objective_error = std::abs(r.solution.objective - base.objective / static_cast<double>(p.k()));
  r.check.ok = r.check.inner_product_error <= kIdentityTol && r.check.spread_error <= kIdentityTol &&
               r.check.objective_error <= kIdentityTol;
  return r;
}

struct TriangleViolation {
  Vertex x = 0, y = 0, z = 0;
  double excess = 0.0;  // |v_x - v_z|^2 - |v_x - v_y|^2 - |v_y - v_z|^2
};

struct TriangleReport {
  std::vector<TriangleViolation> violations;  // first kMaxReportedViolations
  std::size_t violation_count = 0;
  std::size_t checked = 0;
  bool exhaustive = true;
};

inline constexpr std::size_t kMaxReportedViolations = 100;
inline constexpr std::size_t kDefaultTriangleBudget = std::size_t{1} << 24;

/// |v_x - v_y|^2 + |v_y - v_z|^2 >= |v_x - v_z|^2 over ordered triples; sampled
/// (seeded, labeled non-exhaustive) when n^3 exceeds the budget.
inline TriangleReport check_triangle(const SdpSolution& sol, std::size_t budget = kDefaultTriangleBudget,
                                     std::uint64_t seed = 1) {
  TriangleReport r;
  const std::size_t n = sol.size();
  const auto& V = sol.vectors;
  auto dist = [&](std::size_t a, std::size_t b) {
    return (V.row(static_cast<Eigen::Index>(a)) - V.row(static_cast<Eigen::Index>(b))).squaredNorm();
  };
  auto visit = [&](std::size_t x, std::size_t y, std::size_t z, double dxy, double dyz, double dxz) {
    ++r.checked;
    const double excess = dxz - dxy - dyz;
    if (excess > kIdentityTol) {
      if (r.violations.size() < kMaxReportedViolations) r.violations.push_back({x, y, z, excess});
      ++r.violation_count;
    }
  };
  if (n != 0 && n <= 4096 && n * n * n <= budget) {
    Eigen::MatrixXd D(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b) D(a, b) = dist(a, b);
    for (std::size_t x = 0; x < n; ++x)
      for (std::size_t y = 0; y < n; ++y)
        for (std::size_t z = 0; z < n; ++z) visit(x, y, z, D(x, y), D(y, z), D(x, z));
  } else if (n != 0) {
    r.exhaustive = false;
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
    for (std::size_t s = 0; s < budget; ++s) {
      const std::size_t x = pick(rng), y = pick(rng), z = pick(rng);
      visit(x, y, z, dist(x, y), dist(y, z), dist(x, z));
    }
  }
  return r;
}

// ---------------------------------------------------------------------------
// Local distributions (Sherali-Adams) and Lasserre set vectors.

using VertexSet = std::vector<Vertex>;  // sorted, no duplicates

/// Level-t local distributions: for each vertex set T (|T| <= t) a probability
/// table over {-1,+1}^T. Bit i of an assignment index set means z_{T[i]} = -1.
struct LocalDistributions {
  std::size_t level = 0;
  std::map<VertexSet, std::vector<double>> tables;
};

/// Lasserre level-t vectors, one per vertex set of size <= t (including the empty set).
struct LasserreSolution {
  std::size_t level = 0;
  std::map<VertexSet, Eigen::VectorXd> vectors;
};

/// All sorted subsets of {0..n-1} with lo <= size <= hi, by size then lexicographically.
inline std::vector<VertexSet> subsets_up_to(std::size_t n, std::size_t lo, std::size_t hi) {
  std::vector<VertexSet> out;
  for (std::size_t size = lo; size <= hi && size <= n; ++size) {
    VertexSet s(size);
    std::iota(s.begin(), s.end(), Vertex{0});
    while (true) {
      out.push_back(s);
      std::size_t i = size;
      while (i > 0 && s[i - 1] == n - size + i - 1) --i;
      if (i == 0) break;
      ++s[i - 1];
      for (std::size_t l = i; l < size; ++l) s[l] = s[l - 1] + 1;
    }
  }
  return out;
}

/// {y : #{x in T : x_j = y} is odd}.
inline VertexSet parity_projection(std::span<const std::vector<Vertex>> tuples, std::size_t j) {
  std::map<Vertex, std::size_t> count;
  for (const auto& x : tuples) {
    if (j >= x.size()) throw std::invalid_argument("coordinate out of range");
    ++count[x[j]];
  }
  VertexSet out;
  for (const auto& [y, c] : count)
    if (c % 2 == 1) out.push_back(y);
  return out;
}

inline VertexSet parity_projection(const ProductGraph& p, const VertexSet& product_set, std::size_t j) {
  std::vector<std::vector<Vertex>> tuples;
  for (Vertex i : product_set) tuples.push_back(p.tuple_of(i));
  return parity_projection(tuples, j);
}

namespace detail {

inline VertexSet symmetric_difference(const VertexSet& a, const VertexSet& b) {
  VertexSet out;
  std::set_symmetric_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

/// Marginal of a table over T onto the sub-set U (U subset of T).
inline std::vector<double> marginal(const VertexSet& t, const std::vector<double>& table, const VertexSet& u) {
  std::vector<std::size_t> pos;
  for (Vertex v : u) pos.push_back(static_cast<std::size_t>(std::lower_bound(t.begin(), t.end(), v) - t.begin()));
  std::vector<double> out(std::size_t{1} << u.size(), 0.0);
  for (std::size_t a = 0; a < table.size(); ++a) {
    std::size_t b = 0;
    for (std::size_t i = 0; i < pos.size(); ++i)
      if ((a >> pos[i]) & 1u) b |= std::size_t{1} << i;
    out[b] += table[a];
  }
  return out;
}

inline const std::vector<double>& table_for(const LocalDistributions& ld, const VertexSet& t) {
  auto it = ld.tables.find(t);
  if (it == ld.tables.end()) {
    std::string s;
    for (Vertex v : t) s += (s.empty() ? "" : ",") + std::to_string(v);
    throw std::invalid_argument("missing local distribution for {" + s + "}");
  }
  return it->second;
}

}  // namespace detail

struct SaConsistency {
  double table_sum_error = 0.0;  // max |sum of table - 1|
  double negative_mass = 0.0;    // most negative entry (as a positive number)
  double marginal_error = 0.0;   // max disagreement of marginals on intersections
  double vector_error = 0.0;     // max |<v_x,v_y> - E z_x z_y|
  std::size_t pairs_checked = 0;
  bool ok = false;
};

/// Table normalization, marginal consistency on every intersecting pair, and
/// <v_x, v_y> = E_{D_{x,y}} z_x z_y (x = y uses D_{x}, requiring unit vectors).
inline SaConsistency verify_sherali_adams(const LocalDistributions& ld, const Eigen::MatrixXd& vectors) {
  SaConsistency r;
  for (const auto& [t, table] : ld.tables) {
    if (table.size() != (std::size_t{1} << t.size())) throw std::invalid_argument("table size does not match its set");
    double sum = 0.0;
    for (double p : table) {
      sum += p;
      r.negative_mass = std::max(r.negative_mass, -p);
    }
    r.table_sum_error = std::max(r.table_sum_error, std::abs(sum - 1.0));
  }
  for (auto a = ld.tables.begin(); a != ld.tables.end(); ++a) {
    for (auto b = std::next(a); b != ld.tables.end(); ++b) {
      VertexSet common;
      std::set_intersection(a->first.begin(), a->first.end(), b->first.begin(), b->first.end(),
                            std::back_inserter(common));
      if (common.empty()) continue;
      const auto ma = detail::marginal(a->first, a->second, common);
      const auto mb = detail::marginal(b->first, b->second, common);
      for (std::size_t i = 0; i < ma.size(); ++i) r.marginal_error = std::max(r.marginal_error, std::abs(ma[i] - mb[i]));
      ++r.pairs_checked;
    }
  }
  const auto n = vectors.rows();
  for (Eigen::Index x = 0; x < n; ++x) {
    for (Eigen::Index y = x; y < n; ++y) {
      double corr = 1.0;
      if (x != y) {
        const VertexSet key{static_cast<Vertex>(x), static_cast<Vertex>(y)};
        const auto& table = detail::table_for(ld, key);
        corr = 0.0;
        for (std::size_t a = 0; a < table.size(); ++a) {
          const int zx = (a & 1u) ? -1 : 1, zy = (a & 2u) ? -1 : 1;
          corr += table[a] * zx * zy;
        }
      } else {
        const auto& table = detail::table_for(ld, VertexSet{static_cast<Vertex>(x)});
        corr = table[0] + table[1];
      }
      r.vector_error = std::max(r.vector_error, std::abs(vectors.row(x).dot(vectors.row(y)) - corr));
    }
  }
  r.ok = r.table_sum_error <= kIdentityTol && r.negative_mass <= kIdentityTol && r.marginal_error <= kIdentityTol &&
         r.vector_error <= kIdentityTol;
  return r;
}

/// Vectors realizing the pairwise correlations E_{D_{x,y}} z_x z_y (unit
/// diagonal), by factoring the correlation matrix; negative eigenvalues are
/// clipped, which the vector-consistency check then exposes.
inline Eigen::MatrixXd vectors_from_correlations(const LocalDistributions& ld, std::size_t n) {
  Eigen::MatrixXd gram = Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (Vertex x = 0; x < n; ++x) {
    for (Vertex y = x + 1; y < n; ++y) {
      const auto& table = detail::table_for(ld, VertexSet{x, y});
      double corr = 0.0;
      for (std::size_t a = 0; a < table.size(); ++a) corr += ((a == 0 || a == 3) ? 1.0 : -1.0) * table[a];
      gram(x, y) = gram(y, x) = corr;
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gram);
  const Eigen::VectorXd root = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return es.eigenvectors() * root.asDiagonal();
}

struct SaLift {
  LocalDistributions dists;
  Eigen::MatrixXd vectors;
  SaConsistency check;
};

inline constexpr std::size_t kMaxLiftedSets = std::size_t{1} << 16;

/// D_T on the product: pick j uniformly, sample the base distribution on the
/// coordinate-j projection of T (duplicates collapsed), give x the value of x_j.
inline SaLift lift_sherali_adams(const LocalDistributions& base, const Eigen::MatrixXd& base_vectors,
                                 const ProductGraph& p) {
  for (Eigen::Index x = 0; x < base_vectors.rows(); ++x) {
    if (std::abs(base_vectors.row(x).squaredNorm() - 1.0) > kIdentityTol)
      throw std::invalid_argument(
          "lift_sherali_adams: base vector " + std::to_string(x) +
          " is not unit-norm; a product pair agreeing in coordinate j needs <v,v> = 1 = E[z z]");
  }
  const auto base_check = verify_sherali_adams(base, base_vectors);
  if (!base_check.ok) throw std::invalid_argument("lift_sherali_adams: base local distributions are inconsistent");
  p.require_dense("lift_sherali_adams");
  const auto sets = subsets_up_to(p.vertex_count(), 1, base.level);
  if (sets.size() > kMaxLiftedSets) throw CapExceeded("lift_sherali_adams: too many product sets to enumerate");

  SaLift out;
  out.dists.level = base.level;
  const double share = 1.0 / static_cast<double>(p.k());
  for (const auto& t : sets) {
    std::vector<std::vector<Vertex>> tuples;
    for (Vertex i : t) tuples.push_back(p.tuple_of(i));
    std::vector<double> table(std::size_t{1} << t.size(), 0.0);
    for (std::size_t j = 0; j < p.k(); ++j) {
      VertexSet proj;
      for (const auto& x : tuples) proj.push_back(x[j]);
      std::sort(proj.begin(), proj.end());
      proj.erase(std::unique(proj.begin(), proj.end()), proj.end());
      std::vector<std::size_t> pos;
      for (const auto& x : tuples)
        pos.push_back(static_cast<std::size_t>(std::lower_bound(proj.begin(), proj.end(), x[j]) - proj.begin()));
      const auto& bt = detail::table_for(base, proj);
      for (std::size_t b = 0; b < bt.size(); ++b) {
        std::size_t a = 0;
        for (std::size_t i = 0; i < pos.size(); ++i)
          if ((b >> pos[i]) & 1u) a |= std::size_t{1} << i;
        table[a] += share * bt[b];
      }
    }
    out.dists.tables.emplace(t, std::move(table));
  }
  out.vectors = direct_sum(base_vectors, p);
  out.check = verify_sherali_adams(out.dists, out.vectors);
  return out;
}

struct DeltaConsistency {
  double max_error = 0.0;  // max spread of <v_S1, v_S2> within a class of equal S1 delta S2
  std::size_t pairs = 0;
  std::size_t classes = 0;
  bool ok = false;
};

/// <v_S1, v_S2> depends only on S1 delta S2: checked over every ordered pair,
/// hence every quadruple (S1, S2, T1, T2) with S1 delta S2 = T1 delta T2.
inline DeltaConsistency verify_lasserre(const LasserreSolution& sol) {
  std::map<VertexSet, std::pair<double, double>> range;
  DeltaConsistency r;
  for (const auto& [s1, v1] : sol.vectors) {
    for (const auto& [s2, v2] : sol.vectors) {
      if (v1.size() != v2.size()) throw std::invalid_argument("Lasserre vectors have mixed dimensions");
      const double ip = v1.dot(v2);
      auto [it, fresh] = range.try_emplace(detail::symmetric_difference(s1, s2), ip, ip);
      if (!fresh) {
        it->second.first = std::min(it->second.first, ip);
        it->second.second = std::max(it->second.second, ip);
      }
      ++r.pairs;
    }
  }
  for (const auto& [key, mm] : range) r.max_error = std::max(r.max_error, mm.second - mm.first);
  r.classes = range.size();
  r.ok = r.max_error <= kIdentityTol;
  return r;
}

/// v_T = (1/sqrt k) (v_{T_1} (+) ... (+) v_{T_k}) with T_j the parity projection.
inline LasserreSolution lift_lasserre(const LasserreSolution& base, const ProductGraph& p, std::size_t level) {
  if (level != base.level)
    throw std::invalid_argument("lift_lasserre: requested level " + std::to_string(level) +
                                " does not match the base solution level " + std::to_string(base.level));
  p.require_dense("lift_lasserre");
  const auto sets = subsets_up_to(p.vertex_count(), 0, level);
  if (sets.size() > kMaxLiftedSets) throw CapExceeded("lift_lasserre: too many product sets to enumerate");
  if (base.vectors.empty()) throw std::invalid_argument("lift_lasserre: empty base solution");
  const auto d = base.vectors.begin()->second.size();
  const auto k = static_cast<Eigen::Index>(p.k());
  const double scale = 1.0 / std::sqrt(static_cast<double>(p.k()));
  LasserreSolution out;
  out.level = level;
  for (const auto& t : sets) {
    Eigen::VectorXd v(d * k);
    for (Eigen::Index j = 0; j < k; ++j) {
      const auto proj = parity_projection(p, t, static_cast<std::size_t>(j));
      auto it = base.vectors.find(proj);
      if (it == base.vectors.end()) throw std::invalid_argument("lift_lasserre: base solution lacks a set vector");
      v.segment(j * d, d) = scale * it->second;
    }
    out.vectors.emplace(t, std::move(v));
  }
  return out;
}

/// E_mu |v_{x} - v_{y}|^2 using singleton-set vectors.
template <MeasuredGraph G>
double lasserre_edge_objective(const G& g, const LasserreSolution& sol) {
  double s = 0.0;
  g.for_each_edge([&](Vertex a, Vertex b, double m) {
    const auto& va = sol.vectors.at(VertexSet{a});
    const auto& vb = sol.vectors.at(VertexSet{b});
    s += m * (va - vb).squaredNorm();
  });
  return s;
}

// ---------------------------------------------------------------------------
// Feasible base solutions from a distribution over cuts z in {-1,+1}^V.

struct CutDistribution {
  std::vector<std::vector<int>> assignments;
  std::vector<double> probs;
};

/// Row x = (sqrt(p_c) z_x(c))_c, so <v_x, v_y> = E z_x z_y.
inline Eigen::MatrixXd vectors_from_cuts(const CutDistribution& cd, std::size_t n) {
  Eigen::MatrixXd v(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(cd.probs.size()));
  for (std::size_t c = 0; c < cd.probs.size(); ++c)
    for (std::size_t x = 0; x < n; ++x) v(x, c) = std::sqrt(cd.probs[c]) * cd.assignments[c][x];
  return v;
}

inline LocalDistributions local_distributions_from_cuts(const CutDistribution& cd, std::size_t n, std::size_t level) {
  LocalDistributions ld;
  ld.level = level;
  for (const auto& t : subsets_up_to(n, 1, level)) {
    std::vector<double> table(std::size_t{1} << t.size(), 0.0);
    for (std::size_t c = 0; c < cd.probs.size(); ++c) {
      std::size_t a = 0;
      for (std::size_t i = 0; i < t.size(); ++i)
        if (cd.assignments[c][t[i]] < 0) a |= std::size_t{1} << i;
      table[a] += cd.probs[c];
    }
    ld.tables.emplace(t, std::move(table));
  }
  return ld;
}

/// v_S = (sqrt(p_c) prod_{x in S} z_x(c))_c, so <v_S1, v_S2> = E chi_{S1 delta S2}.
inline LasserreSolution lasserre_from_cuts(const CutDistribution& cd, std::size_t n, std::size_t level) {
  LasserreSolution sol;
  sol.level = level;
  for (const auto& s : subsets_up_to(n, 0, level)) {
    Eigen::VectorXd v(static_cast<Eigen::Index>(cd.probs.size()));
    for (std::size_t c = 0; c < cd.probs.size(); ++c) {
      int chi = 1;
      for (Vertex x : s) chi *= cd.assignments[c][x];
      v(static_cast<Eigen::Index>(c)) = std::sqrt(cd.probs[c]) * chi;
    }
    sol.vectors.emplace(s, std::move(v));
  }
  return sol;
}

}  // namespace cartprod
