#include <gtest/gtest.h>

#include <random>

#include "cartprod/cartprod.hpp"

using namespace cartprod;

namespace {

WeightedGraph random_connected_graph(std::size_t n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> w(0.1, 3.0);
  std::bernoulli_distribution extra(0.4);
  std::vector<WeightedEdgeInput> e;
  for (Vertex v = 1; v < n; ++v) e.push_back({std::uniform_int_distribution<Vertex>(0, v - 1)(rng), v, w(rng)});
  for (Vertex a = 0; a < n; ++a)
    for (Vertex b = a + 1; b < n; ++b) {
      bool present = false;
      for (const auto& x : e) present = present || (std::min(x.u, x.v) == a && std::max(x.u, x.v) == b);
      if (!present && extra(rng)) e.push_back({a, b, w(rng)});
    }
  return build_graph(n, e);
}

}  // namespace

TEST(BuildGraph, PathMeasures) {
  const auto g = path_graph(3);
  ASSERT_EQ(g.edges().size(), 2u);
  EXPECT_DOUBLE_EQ(g.edges()[0].mass, 0.5);
  EXPECT_DOUBLE_EQ(g.pi()[0], 0.25);
  EXPECT_DOUBLE_EQ(g.pi()[1], 0.5);
  EXPECT_DOUBLE_EQ(g.pi()[2], 0.25);
  EXPECT_TRUE(validate_measures(g).ok);
}

TEST(BuildGraph, NormalizesArbitraryWeights) {
  const auto g = build_graph(3, {{0, 1, 3.0}, {2, 1, 1.0}});
  EXPECT_DOUBLE_EQ(g.edge_mass(0, 1), 0.75);
  EXPECT_DOUBLE_EQ(g.edge_mass(1, 2), 0.25);
  EXPECT_DOUBLE_EQ(g.pi()[0], 0.375);
  EXPECT_TRUE(validate_measures(g).ok);
}

TEST(BuildGraph, RejectsBadInput) {
  EXPECT_THROW(build_graph(1, {{0, 0, 1.0}}), GraphError);
  EXPECT_THROW(build_graph(3, {{0, 0, 1.0}, {1, 2, 1.0}}), GraphError);
  EXPECT_THROW(build_graph(3, {{0, 3, 1.0}}), GraphError);
  EXPECT_THROW(build_graph(2, {{0, 1, 0.0}}), GraphError);
  EXPECT_THROW(build_graph(2, {{0, 1, -1.0}}), GraphError);
  EXPECT_THROW(build_graph(2, {{0, 1, 1.0}, {1, 0, 2.0}}), GraphError);
  EXPECT_THROW(build_graph(3, std::span<const WeightedEdgeInput>{}), GraphError);
}

TEST(BuildGraph, DisconnectedNamesComponents) {
  try {
    build_graph(4, {{0, 1, 1.0}, {2, 3, 1.0}});
    FAIL() << "expected GraphError";
  } catch (const GraphError& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("disconnected"), std::string::npos) << msg;
    EXPECT_NE(msg.find("{2,3}"), std::string::npos) << msg;
  }
}

TEST(Builtins, CompleteAndCycle) {
  const auto k3 = complete_graph(3);
  EXPECT_EQ(k3.edges().size(), 3u);
  for (double p : k3.pi()) EXPECT_NEAR(p, 1.0 / 3.0, 1e-15);
  const auto c5 = cycle_graph(5);
  EXPECT_EQ(c5.edges().size(), 5u);
  for (double p : c5.pi()) EXPECT_NEAR(p, 0.2, 1e-15);
  EXPECT_THROW(cycle_graph(2), GraphError);
}

TEST(Product, IndexRoundTrip) {
  const ProductGraph p(complete_graph(3), 3);
  EXPECT_EQ(p.vertex_count(), 27u);
  EXPECT_EQ(p.stride(0), 9u);
  EXPECT_EQ(p.stride(2), 1u);
  for (std::size_t i = 0; i < p.vertex_count(); ++i) EXPECT_EQ(p.index_of(p.tuple_of(i)), i);
  const std::vector<Vertex> x{2, 0, 1};
  EXPECT_EQ(p.index_of(x), 19u);
}

TEST(Product, HypercubeMasses) {
  const ProductGraph p(complete_graph(2), 2);
  for (double m : p.vertex_masses()) EXPECT_DOUBLE_EQ(m, 0.25);
  std::size_t count = 0;
  p.for_each_edge([&](std::size_t a, std::size_t b, double m) {
    EXPECT_LT(a, b);
    EXPECT_DOUBLE_EQ(m, 0.25);
    ++count;
  });
  EXPECT_EQ(count, 4u);
  const std::vector<Vertex> x{0, 0}, y{0, 1}, z{1, 1};
  EXPECT_DOUBLE_EQ(p.edge_mass(x, y), 0.25);
  EXPECT_DOUBLE_EQ(p.edge_mass(x, z), 0.0);
  EXPECT_DOUBLE_EQ(p.edge_mass(x, x), 0.0);
}

// The streamed edges agree with pairwise edge_mass and with the consistency
// condition 2 pi(x) = sum_y mu(x,y), on random weighted bases.
TEST(Product, MeasuresConsistentProperty) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 2 + trial % 4;
    const std::size_t k = 1 + trial % 3;
    const auto g = random_connected_graph(n, rng);
    const ProductGraph p(g, k);
    const auto m = materialize(p);
    const auto report = validate_measures(m);
    EXPECT_TRUE(report.ok) << "mass residual " << report.mass_residual;
    m.for_each_edge([&](Vertex a, Vertex b, double mass) {
      EXPECT_NEAR(mass, p.edge_mass(p.tuple_of(a), p.tuple_of(b)), 1e-15);
    });
    double total = 0.0;
    for (std::size_t a = 0; a < p.vertex_count(); ++a)
      for (std::size_t b = a + 1; b < p.vertex_count(); ++b) total += p.edge_mass(p.tuple_of(a), p.tuple_of(b));
    EXPECT_NEAR(total, 1.0, 1e-12);
  }
}

TEST(Product, FirstPowerIsTheBase) {
  std::mt19937_64 rng(3);
  const auto g = random_connected_graph(5, rng);
  const auto m = materialize(ProductGraph(g, 1));
  ASSERT_EQ(m.edges().size(), g.edges().size());
  for (std::size_t i = 0; i < g.edges().size(); ++i) {
    EXPECT_EQ(m.edges()[i].u, g.edges()[i].u);
    EXPECT_EQ(m.edges()[i].v, g.edges()[i].v);
    EXPECT_EQ(m.edges()[i].mass, g.edges()[i].mass);
  }
  for (std::size_t v = 0; v < 5; ++v) EXPECT_EQ(m.pi()[v], g.pi()[v]);
}

TEST(Product, DenseCapEnforced) {
  const ProductGraph p(complete_graph(2), 30, std::size_t{1} << 20);
  EXPECT_FALSE(p.dense_ok());
  EXPECT_THROW(p.vertex_masses(), CapExceeded);
  EXPECT_THROW(materialize(p), CapExceeded);
  EXPECT_THROW(make_product(complete_graph(2), 21, 1000)->require_dense("test"), CapExceeded);
  const ProductGraph huge(complete_graph(100), 10);
  EXPECT_EQ(huge.vertex_count(), std::numeric_limits<std::size_t>::max());
}

TEST(Product, RejectsZeroPower) { EXPECT_THROW(ProductGraph(complete_graph(2), 0), std::invalid_argument); }
