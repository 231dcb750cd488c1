#include <gtest/gtest.h>

#include <numeric>

#include "cartprod/cartprod.hpp"

using namespace cartprod;

namespace {

std::size_t euler_phi(std::size_t n) {
  std::size_t r = 0;
  for (std::size_t i = 1; i <= n; ++i)
    if (std::gcd(i, n) == 1) ++r;
  return r;
}

// Burnside: binary necklaces of length R, minus the two monochromatic ones.
std::size_t burnside_count(std::size_t bits) {
  std::size_t total = 0;
  for (std::size_t d = 1; d <= bits; ++d)
    if (bits % d == 0) total += euler_phi(d) * (std::size_t{1} << (bits / d));
  return total / bits - 2;
}

// Exact quantities for the consecutive-ones function from the class measure.
struct ExactRuns {
  double p_short = 0.0;   // pi(classes with longest run < m)
  double boundary = 0.0;  // mu(edges between short and long classes)
};

ExactRuns exact_runs(const NecklaceGraph& nk, std::size_t m) {
  ExactRuns r;
  for (std::size_t c = 0; c < nk.representatives.size(); ++c)
    if (nk.longest_run[c] < m) r.p_short += nk.graph.pi()[c];
  for (const auto& e : nk.graph.edges())
    if ((nk.longest_run[e.u] < m) != (nk.longest_run[e.v] < m)) r.boundary += e.mass;
  return r;
}

}  // namespace

TEST(Necklace, ClassCountsMatchBurnside) {
  EXPECT_EQ(burnside_count(3), 2u);
  EXPECT_EQ(burnside_count(4), 4u);
  EXPECT_EQ(burnside_count(5), 6u);
  for (std::size_t bits = 3; bits <= 12; ++bits) {
    const auto nk = build_necklace(bits);
    EXPECT_EQ(nk.graph.vertex_count(), burnside_count(bits)) << "R=" << bits;
    EXPECT_TRUE(validate_measures(nk.graph).ok);
  }
}

TEST(Necklace, SmallStructure) {
  const auto nk = build_necklace(3);
  EXPECT_EQ(nk.representatives, (std::vector<std::uint32_t>{0b001, 0b011}));
  EXPECT_EQ(nk.longest_run, (std::vector<std::size_t>{1, 2}));
  ASSERT_EQ(nk.graph.edges().size(), 1u);
  EXPECT_NEAR(nk.graph.pi()[0], 0.5, 1e-15);
}

// pi of a class is proportional to (orbit size) x (hypercube degree inside the
// punctured cube): the hypercube's own consistent measure pushed forward.
TEST(Necklace, MeasureIsPushforward) {
  const std::size_t bits = 6;
  const auto nk = build_necklace(bits);
  const std::uint32_t full = (1u << bits) - 1u;
  std::vector<double> weight(nk.representatives.size(), 0.0);
  double total = 0.0;
  for (std::uint32_t s = 1; s < full; ++s) {
    std::uint32_t best = s;
    for (std::size_t r = 1; r < bits; ++r) best = std::min(best, ((s << r) | (s >> (bits - r))) & full);
    const auto c = static_cast<std::size_t>(
        std::lower_bound(nk.representatives.begin(), nk.representatives.end(), best) - nk.representatives.begin());
    double deg = 0.0;
    for (std::size_t i = 0; i < bits; ++i) {
      const std::uint32_t t = s ^ (1u << i);
      if (t != 0 && t != full) deg += 1.0;
    }
    weight[c] += deg;
    total += deg;
  }
  for (std::size_t c = 0; c < weight.size(); ++c) EXPECT_NEAR(nk.graph.pi()[c], weight[c] / total, 1e-14);
}

TEST(Necklace, Limits) {
  EXPECT_THROW(build_necklace(2), std::invalid_argument);
  EXPECT_THROW(build_necklace(21), CapExceeded);
}

TEST(Runs, CyclicRunLength) {
  EXPECT_EQ(detail::longest_cyclic_run(0b1001, 4), 2u);
  EXPECT_EQ(detail::longest_cyclic_run(0b0110, 4), 2u);
  EXPECT_EQ(detail::longest_cyclic_run(0b1011, 4), 3u);
  EXPECT_EQ(detail::longest_cyclic_run(0b0101, 4), 1u);
  EXPECT_EQ(consecutive_ones_run_length(16, 4), 6u);
  EXPECT_EQ(consecutive_ones_run_length(16, 8), 7u);
  EXPECT_EQ(consecutive_ones_run_length(5, 3), 4u);
}

TEST(Cube, QaryCube) {
  const auto c = build_qary_cube(3, 4);
  EXPECT_EQ(c.vertex_count(), 81u);
  EXPECT_THROW(build_qary_cube(1, 2), std::invalid_argument);
}

TEST(MonteCarlo, ProbabilityMatchesExact) {
  const auto nk = build_necklace(10);
  for (std::size_t k : {3u, 5u}) {
    const auto f = consecutive_ones_function(nk, k);
    const auto exact = std::pow(exact_runs(nk, consecutive_ones_run_length(10, k)).p_short, static_cast<double>(k));
    const auto est = probability_monte_carlo(f, nk.graph, k, -1, 40000, 17);
    EXPECT_NEAR(est.estimate, exact, 4.0 * est.std_error + 1e-12) << "k=" << k;
    EXPECT_EQ(est.samples, 40000u);
  }
}

// <f, L_j f> = 2 p_short^{k-1} mu(short/long boundary) for the run function.
TEST(MonteCarlo, InfluenceMatchesExact) {
  const auto nk = build_necklace(8);
  const std::size_t k = 3;
  const auto f = consecutive_ones_function(nk, k);
  const auto ex = exact_runs(nk, consecutive_ones_run_length(8, k));
  const double exact = 2.0 * ex.p_short * ex.p_short * ex.boundary;
  const auto est = influence_monte_carlo(f, nk.graph, k, 1, 60000, 3);
  EXPECT_NEAR(est.estimate, exact, 4.0 * est.std_error + 1e-12);

  // cross-check the closed form against the dense Dirichlet form
  const auto p = make_product(nk.graph, k);
  const auto table = FunctionTable::tabulate(p, [&](std::span<const Vertex> x) { return double(f(x)); });
  EXPECT_NEAR(directional_form(table, 1), exact, 1e-12);
}

TEST(MonteCarlo, DeterministicPerSeed) {
  const auto nk = build_necklace(8);
  const auto f = consecutive_ones_function(nk, 4);
  const auto a = probability_monte_carlo(f, nk.graph, 4, -1, 5000, 99);
  const auto b = probability_monte_carlo(f, nk.graph, 4, -1, 5000, 99);
  const auto c = probability_monte_carlo(f, nk.graph, 4, -1, 5000, 100);
  EXPECT_EQ(a.estimate, b.estimate);
  EXPECT_EQ(a.std_error, b.std_error);
  EXPECT_NE(a.estimate, c.estimate);
  EXPECT_THROW(probability_monte_carlo(f, nk.graph, 4, -1, 0, 1), std::invalid_argument);
  EXPECT_THROW(influence_monte_carlo(f, nk.graph, 4, 4, 10, 1), std::invalid_argument);
}
