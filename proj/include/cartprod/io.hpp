#pragma once

// JSON readers and writers for graphs, function tables, SDP solutions,
// Lasserre set vectors and local distributions. Malformed input raises
// SchemaError naming the offending field.

#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "cartprod/function_table.hpp"
#include "cartprod/sdp.hpp"

namespace cartprod {

using Json = nlohmann::json;

namespace detail {

inline const Json& field(const Json& j, const char* key, const char* what) {
  if (!j.is_object()) throw SchemaError(std::string(what) + ": expected a JSON object");
  auto it = j.find(key);
  if (it == j.end()) throw SchemaError(std::string(what) + ": missing field \"" + key + "\"");
  return *it;
}

inline std::size_t as_index(const Json& j, const std::string& what) {
  if (!j.is_number_integer() || j.get<long long>() < 0)
    throw SchemaError(what + ": expected a non-negative integer");
  return j.get<std::size_t>();
}

inline double as_real(const Json& j, const std::string& what) {
  if (!j.is_number()) throw SchemaError(what + ": expected a number");
  return j.get<double>();
}

inline Eigen::VectorXd as_vector(const Json& j, const std::string& what) {
  if (!j.is_array()) throw SchemaError(what + ": expected an array of numbers");
  Eigen::VectorXd v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Eigen::Index>(i)) = as_real(j[i], what);
  return v;
}

inline VertexSet as_set(const Json& j, const std::string& what) {
  if (!j.is_array()) throw SchemaError(what + ": expected an array of vertex indices");
  VertexSet s;
  for (const auto& e : j) s.push_back(as_index(e, what));
  std::sort(s.begin(), s.end());
  if (std::adjacent_find(s.begin(), s.end()) != s.end()) throw SchemaError(what + ": repeated vertex");
  return s;
}

inline Json vector_json(const Eigen::VectorXd& v) {
  Json a = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

}  // namespace detail

inline Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw SchemaError(path + ": " + e.what());
  }
}

inline void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
  if (!out) throw std::runtime_error("write failed for " + path);
}

/// {"n": int, "edges": [[u, v, w], ...]}
inline WeightedGraph graph_from_json(const Json& j) {
  const std::size_t n = detail::as_index(detail::field(j, "n", "graph"), "graph.n");
  const auto& edges = detail::field(j, "edges", "graph");
  if (!edges.is_array()) throw SchemaError("graph.edges: expected an array");
  std::vector<WeightedEdgeInput> in;
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const auto& e = edges[i];
    const std::string what = "graph.edges[" + std::to_string(i) + "]";
    if (!e.is_array() || e.size() != 3) throw SchemaError(what + ": expected [u, v, w]");
    in.push_back({detail::as_index(e[0], what), detail::as_index(e[1], what), detail::as_real(e[2], what)});
  }
  return build_graph(n, in);
}

inline Json graph_to_json(const WeightedGraph& g) {
  Json edges = Json::array();
  for (const auto& e : g.edges()) edges.push_back({e.u, e.v, e.mass});
  return {{"n", g.vertex_count()}, {"edges", edges}};
}

/// {"k": int, "values": [...]} over a graph supplied separately.
inline FunctionTable function_from_json(const Json& j, const WeightedGraph& g, std::size_t dense_cap) {
  const std::size_t k = detail::as_index(detail::field(j, "k", "function"), "function.k");
  if (k < 1) throw SchemaError("function.k: must be >= 1");
  const auto p = make_product(g, k, dense_cap);
  p->require_dense("function file");
  const auto& values = detail::field(j, "values", "function");
  if (!values.is_array()) throw SchemaError("function.values: expected an array");
  if (values.size() != p->vertex_count())
    throw SchemaError("function.values: expected " + std::to_string(p->vertex_count()) + " entries (n^k), got " +
                      std::to_string(values.size()));
  std::vector<double> v(values.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = detail::as_real(values[i], "function.values");
  return FunctionTable(p, std::move(v));
}

inline Json function_to_json(const FunctionTable& f) {
  return {{"k", f.graph().k()}, {"values", std::vector<double>(f.values().begin(), f.values().end())}};
}

/// {"d": int, "vectors": [[...], ...]}; one vector per vertex.
inline Eigen::MatrixXd vectors_from_json(const Json& j) {
  const std::size_t d = detail::as_index(detail::field(j, "d", "solution"), "solution.d");
  const auto& vs = detail::field(j, "vectors", "solution");
  if (!vs.is_array()) throw SchemaError("solution.vectors: expected an array");
  Eigen::MatrixXd m(static_cast<Eigen::Index>(vs.size()), static_cast<Eigen::Index>(d));
  for (std::size_t x = 0; x < vs.size(); ++x) {
    const auto v = detail::as_vector(vs[x], "solution.vectors");
    if (static_cast<std::size_t>(v.size()) != d)
      throw SchemaError("solution.vectors[" + std::to_string(x) + "]: expected dimension " + std::to_string(d));
    m.row(static_cast<Eigen::Index>(x)) = v.transpose();
  }
  return m;
}

inline Json vectors_to_json(const Eigen::MatrixXd& m) {
  Json vs = Json::array();
  for (Eigen::Index x = 0; x < m.rows(); ++x) vs.push_back(detail::vector_json(m.row(x).transpose()));
  return {{"d", m.cols()}, {"vectors", vs}};
}

/// {"t": int, "sets": [{"S": [...], "vec": [...]}, ...]}
inline LasserreSolution lasserre_from_json(const Json& j) {
  LasserreSolution sol;
  sol.level = detail::as_index(detail::field(j, "t", "lasserre"), "lasserre.t");
  const auto& sets = detail::field(j, "sets", "lasserre");
  if (!sets.is_array()) throw SchemaError("lasserre.sets: expected an array");
  for (const auto& e : sets) {
    auto s = detail::as_set(detail::field(e, "S", "lasserre.sets[]"), "lasserre.sets[].S");
    if (s.size() > sol.level) throw SchemaError("lasserre.sets[].S: larger than level t");
    auto v = detail::as_vector(detail::field(e, "vec", "lasserre.sets[]"), "lasserre.sets[].vec");
    if (!sol.vectors.emplace(std::move(s), std::move(v)).second) throw SchemaError("lasserre.sets: duplicate set");
  }
  return sol;
}

inline Json lasserre_to_json(const LasserreSolution& sol) {
  Json sets = Json::array();
  for (const auto& [s, v] : sol.vectors) sets.push_back({{"S", s}, {"vec", detail::vector_json(v)}});
  return {{"t", sol.level}, {"sets", sets}};
}

/// {"t": int, "dists": [{"T": [...], "probs": {"+-": p, ...}}, ...]}; character i
/// of a key is the sign of z at the i-th smallest vertex of T.
inline LocalDistributions local_distributions_from_json(const Json& j) {
  LocalDistributions ld;
  ld.level = detail::as_index(detail::field(j, "t", "sa"), "sa.t");
  const auto& dists = detail::field(j, "dists", "sa");
  if (!dists.is_array()) throw SchemaError("sa.dists: expected an array");
  for (const auto& e : dists) {
    auto t = detail::as_set(detail::field(e, "T", "sa.dists[]"), "sa.dists[].T");
    if (t.empty() || t.size() > ld.level) throw SchemaError("sa.dists[].T: size must lie in [1, t]");
    const auto& probs = detail::field(e, "probs", "sa.dists[]");
    if (!probs.is_object()) throw SchemaError("sa.dists[].probs: expected an object");
    std::vector<double> table(std::size_t{1} << t.size(), 0.0);
    for (const auto& [key, val] : probs.items()) {
      if (key.size() != t.size() || key.find_first_not_of("+-") != std::string::npos)
        throw SchemaError("sa.dists[].probs: bad assignment key \"" + key + "\"");
      std::size_t a = 0;
      for (std::size_t i = 0; i < key.size(); ++i)
        if (key[i] == '-') a |= std::size_t{1} << i;
      table[a] = detail::as_real(val, "sa.dists[].probs");
    }
    if (!ld.tables.emplace(std::move(t), std::move(table)).second) throw SchemaError("sa.dists: duplicate set");
  }
  return ld;
}

inline Json local_distributions_to_json(const LocalDistributions& ld) {
  Json dists = Json::array();
  for (const auto& [t, table] : ld.tables) {
    Json probs = Json::object();
    for (std::size_t a = 0; a < table.size(); ++a) {
      std::string key(t.size(), '+');
      for (std::size_t i = 0; i < t.size(); ++i)
        if ((a >> i) & 1u) key[i] = '-';
      probs[key] = table[a];
    }
    dists.push_back({{"T", t}, {"probs", probs}});
  }
  return {{"t", ld.level}, {"dists", dists}};
}

}  // namespace cartprod
