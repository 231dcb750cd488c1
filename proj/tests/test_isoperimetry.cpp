#include <gtest/gtest.h>

#include <numbers>
#include <random>

#include "cartprod/cartprod.hpp"

using namespace cartprod;

namespace {

WeightedGraph random_graph(std::size_t n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> w(0.2, 2.0);
  std::vector<WeightedEdgeInput> e;
  for (Vertex v = 1; v < n; ++v) e.push_back({v - 1, v, w(rng)});
  std::bernoulli_distribution extra(0.3);
  for (Vertex a = 0; a < n; ++a)
    for (Vertex b = a + 2; b < n; ++b)
      if (extra(rng)) e.push_back({a, b, w(rng)});
  return build_graph(n, e);
}

// Plain subset loop with set_conductance; no Gray code, no threads.
ConductanceResult naive_conductance(const WeightedGraph& g) {
  const std::size_t n = g.vertex_count();
  ConductanceResult best{std::numeric_limits<double>::infinity(), {}};
  for (std::uint64_t mask = 1; mask + 1 < (std::uint64_t{1} << n); ++mask) {
    std::vector<Vertex> s;
    for (Vertex v = 0; v < n; ++v)
      if ((mask >> v) & 1u) s.push_back(v);
    const double phi = set_conductance(g, s);
    if (phi < best.phi) best = {phi, s};
  }
  return best;
}

}  // namespace

TEST(Conductance, KnownValues) {
  EXPECT_NEAR(conductance_bruteforce(complete_graph(2)).phi, 1.0, 1e-12);
  EXPECT_NEAR(conductance_bruteforce(complete_graph(3)).phi, 0.75, 1e-12);
  EXPECT_NEAR(conductance_bruteforce(path_graph(3)).phi, 2.0 / 3.0, 1e-12);
  EXPECT_NEAR(conductance_bruteforce(cycle_graph(5)).phi, 5.0 / 12.0, 1e-12);
}

TEST(Conductance, WitnessIsLexicographicallySmallest) {
  const auto r = conductance_bruteforce(path_graph(3));
  EXPECT_EQ(r.witness, (std::vector<Vertex>{0}));
  const auto sq = conductance_bruteforce(ProductGraph(complete_graph(2), 2));
  EXPECT_NEAR(sq.phi, 0.5, 1e-12);
  EXPECT_EQ(sq.witness, (std::vector<Vertex>{0, 1}));
}

TEST(Conductance, MatchesNaiveEnumeration) {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 15; ++trial) {
    const auto g = random_graph(3 + trial % 9, rng);
    const auto fast = conductance_bruteforce(g);
    const auto slow = naive_conductance(g);
    EXPECT_NEAR(fast.phi, slow.phi, 1e-12);
    EXPECT_NEAR(set_conductance(g, fast.witness), fast.phi, 1e-15);
    EXPECT_EQ(fast.witness.front(), 0u);
  }
}

TEST(Conductance, FunctionalFormOfWitness) {
  const auto p = make_product(cycle_graph(5), 2);
  const auto r = conductance_bruteforce(*p);
  std::vector<double> v(p->vertex_count(), -1.0);
  for (Vertex x : r.witness) v[x] = 1.0;
  EXPECT_NEAR(conductance_functional(FunctionTable(p, v)), r.phi, 1e-12);
  EXPECT_NEAR(r.phi, 5.0 / 24.0, 1e-12);
}

TEST(Conductance, Limits) {
  EXPECT_THROW(conductance_bruteforce(path_graph(26)), CapExceeded);
  EXPECT_THROW(set_conductance(path_graph(3), std::vector<Vertex>{}), std::invalid_argument);
  const auto p = make_product(complete_graph(2), 2);
  EXPECT_THROW(conductance_functional(FunctionTable(p, {1, 1, 1, 1})), std::invalid_argument);
}

TEST(LogSobolev, ClosedFormForCompleteGraphs) {
  EXPECT_DOUBLE_EQ(complete_graph_log_sobolev(2), 2.0);
  EXPECT_NEAR(complete_graph_log_sobolev(3), 1.0 / std::numbers::ln2, 1e-15);
  for (std::size_t q = 4; q < 8; ++q) EXPECT_LT(complete_graph_log_sobolev(q), eigendecompose(complete_graph(q)).lambda1());
}

TEST(LogSobolev, EstimatesMatchCertifiedValues) {
  for (std::size_t q : {2u, 3u, 4u}) {
    const auto est = log_sobolev_estimate(complete_graph(q));
    EXPECT_NEAR(est.alpha_hat, complete_graph_log_sobolev(q), 1e-3 * complete_graph_log_sobolev(q)) << "q=" << q;
    const double w = log_sobolev_ratio(complete_graph(q), est.witness);
    EXPECT_GE(w, est.alpha_hat - 1e-9);
    EXPECT_LE(w, est.alpha_hat * (1.0 + 1e-3));
  }
}

// The true constant lower-bounds the ratio of every function.
TEST(LogSobolev, RatioNeverBelowTrueConstant) {
  std::mt19937_64 rng(3);
  const auto g = complete_graph(3);
  std::lognormal_distribution<double> d(0.0, 1.5);
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<double> f(3);
    for (auto& x : f) x = d(rng);
    EXPECT_GE(log_sobolev_ratio(g, f), complete_graph_log_sobolev(3) - 1e-9);
  }
}

TEST(LogSobolev, ChainOnTestGraphs) {
  for (const auto& g : {complete_graph(2), complete_graph(3), path_graph(3), cycle_graph(5), path_graph(5)}) {
    const auto r = chain_check(g);
    EXPECT_TRUE(r.ok) << r.alpha_hat << " " << r.lambda1 << " " << r.phi;
  }
}

TEST(Scaling, K2Square) {
  const auto r = product_scaling_report(complete_graph(2), 2);
  EXPECT_TRUE(r.ok());
  EXPECT_FALSE(r.partial);
  EXPECT_NEAR(*r.phi_ratio, 0.5, 1e-12);
  EXPECT_NEAR(r.lambda1_ratio, 0.5, 1e-12);
  EXPECT_NEAR(*r.alpha_ratio, 0.5, 0.025);
}

TEST(Scaling, FirstPowerIsIdentity) {
  const auto r = product_scaling_report(path_graph(3), 1);
  EXPECT_TRUE(r.ok());
  EXPECT_NEAR(*r.phi_ratio, 1.0, 1e-12);
  EXPECT_NEAR(r.lambda1_ratio, 1.0, 1e-12);
}

TEST(Scaling, LargePowersArePartial) {
  const auto r = product_scaling_report(complete_graph(3), 4);
  EXPECT_TRUE(r.partial);
  EXPECT_FALSE(r.product.phi.has_value());
  EXPECT_NEAR(r.lambda1_ratio, 0.25, 1e-12);
}
