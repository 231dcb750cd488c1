#include <gtest/gtest.h>

#include "cartprod/cartprod.hpp"

using namespace cartprod;

TEST(GraphJson, RoundTrip) {
  const auto g = graph_from_json(Json::parse(R"({"n": 3, "edges": [[0, 1, 2.0], [1, 2, 6]]})"));
  EXPECT_DOUBLE_EQ(g.edge_mass(0, 1), 0.25);
  const auto back = graph_from_json(graph_to_json(g));
  for (std::size_t v = 0; v < 3; ++v) EXPECT_DOUBLE_EQ(back.pi()[v], g.pi()[v]);
}

TEST(GraphJson, SchemaErrors) {
  EXPECT_THROW(graph_from_json(Json::parse(R"({"edges": []})")), SchemaError);
  EXPECT_THROW(graph_from_json(Json::parse(R"({"n": 2, "edges": [[0, 1]]})")), SchemaError);
  EXPECT_THROW(graph_from_json(Json::parse(R"({"n": 2, "edges": [[0, "a", 1]]})")), SchemaError);
  EXPECT_THROW(graph_from_json(Json::parse(R"({"n": -2, "edges": []})")), SchemaError);
  EXPECT_THROW(graph_from_json(Json::parse(R"([1, 2])")), SchemaError);
  EXPECT_THROW(graph_from_json(Json::parse(R"({"n": 3, "edges": [[0, 1, 1]]})")), GraphError);
}

TEST(FunctionJson, RoundTripAndSize) {
  const auto g = complete_graph(2);
  const auto f = function_from_json(Json::parse(R"({"k": 2, "values": [1, -1, -1, 1]})"), g, kDefaultDenseCap);
  EXPECT_EQ(f.graph().k(), 2u);
  EXPECT_EQ(f[1], -1.0);
  const auto back = function_from_json(function_to_json(f), g, kDefaultDenseCap);
  EXPECT_EQ(std::vector<double>(back.values().begin(), back.values().end()),
            std::vector<double>(f.values().begin(), f.values().end()));
  EXPECT_THROW(function_from_json(Json::parse(R"({"k": 2, "values": [1, -1, 1]})"), g, kDefaultDenseCap), SchemaError);
  EXPECT_THROW(function_from_json(Json::parse(R"({"k": 0, "values": []})"), g, kDefaultDenseCap), SchemaError);
  EXPECT_THROW(function_from_json(Json::parse(R"({"k": 30, "values": []})"), g, 1024), CapExceeded);
}

TEST(SolutionJson, RoundTrip) {
  Eigen::MatrixXd v(2, 2);
  v << 1, 0, 0.5, -0.25;
  const auto back = vectors_from_json(vectors_to_json(v));
  EXPECT_EQ(back, v);
  EXPECT_THROW(vectors_from_json(Json::parse(R"({"d": 2, "vectors": [[1, 2, 3]]})")), SchemaError);
}

TEST(LasserreJson, RoundTrip) {
  const CutDistribution cd{{{1, -1}, {-1, 1}}, {0.5, 0.5}};
  const auto sol = lasserre_from_cuts(cd, 2, 2);
  const auto back = lasserre_from_json(lasserre_to_json(sol));
  EXPECT_EQ(back.level, 2u);
  ASSERT_EQ(back.vectors.size(), sol.vectors.size());
  for (const auto& [s, v] : sol.vectors) EXPECT_EQ(back.vectors.at(s), v);
  EXPECT_THROW(lasserre_from_json(Json::parse(R"({"t": 1, "sets": [{"S": [0, 1], "vec": [1]}]})")), SchemaError);
  EXPECT_THROW(lasserre_from_json(Json::parse(R"({"t": 2, "sets": [{"S": [0, 0], "vec": [1]}]})")), SchemaError);
}

TEST(LocalDistributionsJson, RoundTripAndKeys) {
  const CutDistribution cd{{{1, -1}, {-1, 1}}, {0.5, 0.5}};
  const auto ld = local_distributions_from_cuts(cd, 2, 2);
  const auto j = local_distributions_to_json(ld);
  EXPECT_EQ(j["dists"][1]["probs"]["+-"].get<double>(), 0.5);
  EXPECT_EQ(j["dists"][1]["probs"]["++"].get<double>(), 0.0);
  const auto back = local_distributions_from_json(j);
  EXPECT_EQ(back.tables, ld.tables);
  EXPECT_THROW(local_distributions_from_json(Json::parse(R"({"t": 2, "dists": [{"T": [0], "probs": {"+x": 1}}]})")),
               SchemaError);
  EXPECT_THROW(local_distributions_from_json(Json::parse(R"({"t": 1, "dists": [{"T": [0, 1], "probs": {}}]})")),
               SchemaError);
}
