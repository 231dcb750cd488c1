#pragma once

// The analyze commands: each takes a RunConfig, runs the library checks and
// returns a JSON report with sorted keys plus an overall pass flag.

#include <filesystem>
#include <optional>
#include <random>
#include <string>

#include "cartprod/io.hpp"
#include "cartprod/isoperimetry.hpp"
#include "cartprod/kkl.hpp"
#include "cartprod/sdp.hpp"
#include "cartprod/tightness.hpp"

namespace cartprod {

inline constexpr const char* kVersion = "cartprod 0.3.1";

struct RunConfig {
  std::string command;
  std::string graph_path;
  std::string builtin;  // k2 | kq:q | cycle:n | path:n | necklace:R
  std::size_t k = 2;
  double epsilon = 0.1;
  std::optional<double> t_level;
  std::size_t samples = 200;
  std::uint64_t seed = 1;
  std::string out;
  std::size_t max_dense = kDefaultDenseCap;
  std::string family;  // kkl / friedgut generators when no function file is given
  double noise = 0.01;
  std::string function_path;
  std::string solution_path;
  std::string lasserre_path;
  std::string sa_path;
};

struct CommandResult {
  Json report;
  bool passed = false;
};

/// Raised for bad option values; maps to exit code 1 like IO errors.
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct LoadedGraph {
  WeightedGraph graph;
  std::string name;
  std::optional<std::size_t> complete_q;  // set for K_q builtins
};

namespace detail {

inline std::size_t parse_param(const std::string& text, const std::string& prefix) {
  const std::string tail = text.substr(prefix.size());
  std::size_t pos = 0;
  unsigned long long v = 0;
  try {
    v = std::stoull(tail, &pos);
  } catch (const std::exception&) {
    throw UsageError("bad builtin parameter in \"" + text + "\"");
  }
  if (pos != tail.size()) throw UsageError("bad builtin parameter in \"" + text + "\"");
  return static_cast<std::size_t>(v);
}

inline Json config_json(const RunConfig& c) {
  Json j = {{"command", c.command},
            {"graph", c.graph_path},
            {"builtin", c.builtin},
            {"k", c.k},
            {"epsilon", c.epsilon},
            {"samples", c.samples},
            {"seed", c.seed},
            {"max_dense", c.max_dense},
            {"family", c.family},
            {"noise", c.noise},
            {"function", c.function_path},
            {"solution", c.solution_path},
            {"lasserre", c.lasserre_path},
            {"sa", c.sa_path}};
  j["t_level"] = c.t_level ? Json(*c.t_level) : Json(nullptr);
  return j;
}

inline Json tolerances_json() {
  return {{"measure", kMeasureTol},
          {"identity", kIdentityTol},
          {"variance_floor", kVarianceFloor},
          {"chain_alpha_rel", kChainAlphaRelTol},
          {"alpha_ratio_rel", kAlphaRatioRelTol},
          {"log_sobolev_min_entropy", kMinEntropy}};
}

inline Json opt_json(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

inline CommandResult finish(const RunConfig& c, Json body, const Json& checks) {
  bool passed = true;
  for (const auto& [name, v] : checks.items()) passed = passed && v.get<bool>();
  body["checks"] = checks;
  body["config"] = config_json(c);
  body["tolerances"] = tolerances_json();
  body["version"] = kVersion;
  body["status"] = passed ? "pass" : "fail";
  return {std::move(body), passed};
}

inline CommandResult error_report(const RunConfig& c, const std::string& message) {
  Json body = {{"error", message}};
  auto r = finish(c, std::move(body), Json::object());
  r.report["status"] = "error";
  r.passed = false;
  return r;
}

struct AlphaValue {
  double value = 0.0;
  std::string source;
};

inline AlphaValue base_alpha(const LoadedGraph& lg, std::uint64_t seed) {
  if (lg.complete_q) return {complete_graph_log_sobolev(*lg.complete_q), "closed form for K_q"};
  if (lg.graph.vertex_count() > kMaxLogSobolevVertices)
    throw CapExceeded("log-Sobolev estimate limited to " + std::to_string(kMaxLogSobolevVertices) + " vertices");
  LogSobolevOptions opts;
  opts.seed = seed;
  return {log_sobolev_estimate(lg.graph, opts).alpha_hat, "numerical estimate (upper bound)"};
}

inline std::vector<double> random_pm1(std::size_t size, std::mt19937_64& rng) {
  std::bernoulli_distribution coin(0.5);
  std::vector<double> v(size);
  for (auto& x : v) x = coin(rng) ? 1.0 : -1.0;
  return v;
}

/// f(x) = +1 iff x_0 = 0, optionally flipped independently with probability `noise`.
inline FunctionTable dictator(std::shared_ptr<const ProductGraph> p, double noise, std::uint64_t seed) {
  auto f = FunctionTable::tabulate(p, [](std::span<const Vertex> x) { return x[0] == 0 ? 1.0 : -1.0; });
  if (noise > 0.0) {
    std::mt19937_64 rng(seed);
    std::bernoulli_distribution flip(noise);
    for (std::size_t i = 0; i < f.size(); ++i)
      if (flip(rng)) f[i] = -f[i];
  }
  return f;
}

inline FunctionTable family_function(const std::string& family, std::shared_ptr<const ProductGraph> p, double noise,
                                     std::uint64_t seed) {
  if (family == "dictator") return dictator(std::move(p), 0.0, seed);
  if (family == "noisy-dictator") return dictator(std::move(p), noise, seed);
  if (family == "constant") return FunctionTable(p, std::vector<double>(p->vertex_count(), 1.0));
  if (family == "random") {
    std::mt19937_64 rng(seed);
    const std::size_t size = p->vertex_count();
    return FunctionTable(std::move(p), random_pm1(size, rng));
  }
  throw UsageError("unknown function family \"" + family + "\" (dictator|noisy-dictator|constant|random)");
}

inline std::vector<double> lemma_t_values(const RunConfig& c) {
  if (c.t_level) return {*c.t_level};
  return {kMaxLemmaT, 0.05, 0.01};
}

inline Json kkl_json(const KklReport& r) {
  return {{"influences", r.influences},
          {"max_influence", r.max_influence},
          {"argmax", r.argmax},
          {"total_influence", r.total_influence},
          {"variance", r.variance},
          {"alpha", r.alpha},
          {"bound_expr", r.bound_expr},
          {"ratio", r.ratio},
          {"max_coordinate_variance", r.max_coordinate_variance},
          {"proof_t", r.proof_t},
          {"max_ge_total", r.max_ge_total},
          {"subadditivity_ok", r.subadditivity_ok}};
}

inline Json corollary_json(const CorollaryReport& r) {
  Json rows = Json::array();
  for (const auto& c : r.per_coordinate) rows.push_back({{"lhs", c.lhs}, {"rhs", c.rhs}, {"holds", c.holds}});
  return {{"t", r.t}, {"per_coordinate", rows}, {"holds", r.holds}};
}

}  // namespace detail

inline LoadedGraph load_graph(const RunConfig& c) {
  if (!c.graph_path.empty() && !c.builtin.empty()) throw UsageError("give either --graph or --builtin, not both");
  if (!c.graph_path.empty()) return {graph_from_json(read_json_file(c.graph_path)), c.graph_path, std::nullopt};
  const std::string& b = c.builtin.empty() ? std::string("k2") : c.builtin;
  if (b == "k2") return {complete_graph(2), "k2", std::size_t{2}};
  if (b.starts_with("kq:")) {
    const auto q = detail::parse_param(b, "kq:");
    if (q < 2) throw UsageError("kq:q needs q >= 2");
    return {complete_graph(q), b, q};
  }
  if (b.starts_with("cycle:")) {
    const auto n = detail::parse_param(b, "cycle:");
    if (n < 3) throw UsageError("cycle:n needs n >= 3");
    return {cycle_graph(n), b, std::nullopt};
  }
  if (b.starts_with("path:")) {
    const auto n = detail::parse_param(b, "path:");
    if (n < 2) throw UsageError("path:n needs n >= 2");
    return {path_graph(n), b, std::nullopt};
  }
  if (b.starts_with("necklace:")) {
    const auto r = detail::parse_param(b, "necklace:");
    if (r < 3) throw UsageError("necklace:R needs R >= 3");
    return {build_necklace(r).graph, b, std::nullopt};
  }
  throw UsageError("unknown builtin \"" + b + "\" (k2|kq:q|cycle:n|path:n|necklace:R)");
}

inline CommandResult cmd_isoperimetry(const RunConfig& c) {
  if (c.k < 1) throw UsageError("--k must be >= 1");
  const auto lg = load_graph(c);
  LogSobolevOptions opts;
  opts.seed = c.seed;
  const auto r = product_scaling_report(lg.graph, c.k, opts, c.max_dense);
  auto row = [](const ScalingRow& s) {
    return Json{{"phi", detail::opt_json(s.phi)},
                {"lambda1", s.lambda1},
                {"lambda1_direct", detail::opt_json(s.lambda1_direct)},
                {"alpha_hat", detail::opt_json(s.alpha_hat)}};
  };
  Json body = {{"graph", lg.name},
               {"base", row(r.base)},
               {"product", row(r.product)},
               {"ratios",
                {{"phi", detail::opt_json(r.phi_ratio)},
                 {"lambda1", r.lambda1_ratio},
                 {"alpha", detail::opt_json(r.alpha_ratio)},
                 {"expected", 1.0 / static_cast<double>(c.k)}}},
               {"partial", r.partial}};
  Json checks = {{"phi_scaling", r.phi_ok}, {"lambda1_scaling", r.lambda_ok}, {"alpha_scaling", r.alpha_ok}};
  if (r.base.phi && r.base.alpha_hat) {
    const bool a = *r.base.alpha_hat <= r.base.lambda1 * (1.0 + kChainAlphaRelTol);
    const bool b = r.base.lambda1 <= 2.0 * *r.base.phi + kIdentityTol;
    body["chain"] = {{"alpha_le_lambda1", a}, {"lambda1_le_2phi", b}};
    checks["chain"] = a && b;
  }
  return detail::finish(c, std::move(body), checks);
}

inline CommandResult cmd_kkl(const RunConfig& c) {
  const auto lg = load_graph(c);
  const auto basis = eigendecompose(lg.graph);
  const auto alpha = detail::base_alpha(lg, c.seed);
  const auto ts = detail::lemma_t_values(c);
  Json body = {{"graph", lg.name}, {"alpha", alpha.value}, {"alpha_source", alpha.source}};

  std::vector<FunctionTable> fs;
  if (!c.function_path.empty()) {
    fs.push_back(function_from_json(read_json_file(c.function_path), lg.graph, c.max_dense));
  } else {
    const auto p = make_product(lg.graph, c.k, c.max_dense);
    const std::string family = c.family.empty() ? "random" : c.family;
    body["family"] = family;
    const std::size_t count = family == "random" ? c.samples : 1;
    std::mt19937_64 seeds(c.seed);
    for (std::size_t i = 0; i < count; ++i) fs.push_back(detail::family_function(family, p, c.noise, seeds()));
  }
  if (fs.front().graph().k() < 2) return detail::error_report(c, "kkl needs k >= 2");

  std::size_t analyzed = 0, constant = 0, max_ge_total_fail = 0, corollary_fail = 0, subadditivity_fail = 0;
  double min_ratio = std::numeric_limits<double>::infinity(), max_ratio = 0.0;
  Json detail_json;
  for (const auto& f : fs) {
    if (!f.boolean_pm1()) return detail::error_report(c, "function is not {-1,+1}-valued");
    if (variance(f) <= kMeasureTol) {
      ++constant;
      continue;
    }
    const auto r = kkl_report(f, alpha.value);
    const auto dec = decompose(f, basis);
    Json cors = Json::array();
    for (double t : ts) {
      const auto cr = corollary_check(f, dec, t, alpha.value);
      if (!cr.holds) ++corollary_fail;
      cors.push_back(detail::corollary_json(cr));
    }
    ++analyzed;
    if (!r.max_ge_total) ++max_ge_total_fail;
    if (!r.subadditivity_ok) ++subadditivity_fail;
    min_ratio = std::min(min_ratio, r.ratio);
    max_ratio = std::max(max_ratio, r.ratio);
    if (fs.size() == 1) detail_json = {{"kkl", detail::kkl_json(r)}, {"corollary", cors}};
  }
  if (analyzed == 0) return detail::error_report(c, "function is constant; influences and ratios are undefined");

  body["functions"] = fs.size();
  body["analyzed"] = analyzed;
  body["constant_skipped"] = constant;
  body["ratio_min"] = min_ratio;
  body["ratio_max"] = max_ratio;
  body["t_values"] = ts;
  body["violations"] = {{"max_ge_total", max_ge_total_fail},
                        {"corollary", corollary_fail},
                        {"subadditivity", subadditivity_fail}};
  if (!detail_json.is_null()) body["detail"] = detail_json;
  Json checks = {{"max_ge_total", max_ge_total_fail == 0},
                 {"corollary", corollary_fail == 0},
                 {"subadditivity", subadditivity_fail == 0}};
  return detail::finish(c, std::move(body), checks);
}

inline CommandResult cmd_friedgut(const RunConfig& c) {
  const auto lg = load_graph(c);
  if (lg.graph.vertex_count() > kMaxBruteForceVertices)
    return detail::error_report(c, "conductance of the base graph needs <= 25 vertices");
  const auto basis = eigendecompose(lg.graph);
  const auto alpha = detail::base_alpha(lg, c.seed);
  const double phi = conductance_bruteforce(lg.graph).phi;
  std::optional<FunctionTable> f;
  if (!c.function_path.empty()) {
    f = function_from_json(read_json_file(c.function_path), lg.graph, c.max_dense);
  } else {
    f = detail::family_function(c.family.empty() ? "noisy-dictator" : c.family, make_product(lg.graph, c.k, c.max_dense),
                                c.noise, c.seed);
  }
  if (!f->boolean_pm1()) return detail::error_report(c, "function is not {-1,+1}-valued");
  const auto r = friedgut_extract(*f, basis, c.epsilon, alpha.value, phi);
  const auto perm = permutation_test(r.g_tilde, r.junta, 10000, c.seed);
  const double k = static_cast<double>(f->graph().k());
  Json body = {{"graph", lg.name},
               {"k", f->graph().k()},
               {"alpha", alpha.value},
               {"alpha_source", alpha.source},
               {"phi", phi},
               {"junta", r.junta},
               {"order", r.order},
               {"coordinate_variances", r.coordinate_variances},
               {"total_influence", r.total_influence},
               {"log_threshold", r.log_threshold},
               {"threshold", r.threshold},
               {"truncation_distance", r.truncation_distance},
               {"distance", r.distance},
               {"log_bound", r.log_bound},
               {"excluded_energy", r.excluded_energy},
               {"variance_sum", r.variance_sum},
               {"variance_sum_bound", r.variance_sum_bound},
               {"permutation_test", {{"trials", perm.trials}, {"mismatches", perm.mismatches}}},
               {"kI_over_eps_alpha", k * r.total_influence / (c.epsilon * alpha.value)}};
  Json checks = {{"depends_only_on_junta", r.depends_only_on_junta},
                 {"within_epsilon", r.within_epsilon},
                 {"within_bound", r.within_bound},
                 {"rounding", r.rounding_ok},
                 {"proof_bounds", r.proof_bounds_ok},
                 {"permutation_test", perm.ok()}};
  return detail::finish(c, std::move(body), checks);
}

namespace detail {

/// The minimum-conductance cut and its negation, each with probability 1/2.
inline CutDistribution optimal_cut_distribution(const WeightedGraph& g) {
  const auto cut = conductance_bruteforce(g);
  std::vector<int> z(g.vertex_count(), -1);
  for (Vertex v : cut.witness) z[v] = 1;
  std::vector<int> neg(z);
  for (auto& s : neg) s = -s;
  return {{z, neg}, {0.5, 0.5}};
}

inline Json triangle_json(const TriangleReport& t) {
  return {{"checked", t.checked}, {"violations", t.violation_count}, {"exhaustive", t.exhaustive}};
}

}  // namespace detail

inline CommandResult cmd_sdp_lift(const RunConfig& c) {
  const auto lg = load_graph(c);
  const auto& g = lg.graph;
  if (c.k < 1) throw UsageError("--k must be >= 1");
  const std::size_t level = c.t_level ? static_cast<std::size_t>(*c.t_level) : 2;
  if (c.t_level && (*c.t_level < 1.0 || *c.t_level != std::floor(*c.t_level)))
    throw UsageError("sdp-lift --t-level must be a positive integer");
  const ProductGraph p(g, c.k, c.max_dense);
  Json body = {{"graph", lg.name}, {"level", level}};
  Json checks = Json::object();

  const auto basic = basic_sdp_opt(g);
  const auto basic_lift = lift_vectors(basic.solution, p, c.seed);
  body["basic"] = {{"opt", basic.opt},
                   {"verified", basic.verified},
                   {"lifted_objective", basic_lift.solution.objective},
                   {"lifted_spread", basic_lift.solution.spread},
                   {"expected_objective", basic.opt / static_cast<double>(c.k)},
                   {"inner_product_error", basic_lift.check.inner_product_error},
                   {"exhaustive", basic_lift.check.exhaustive}};
  checks["basic_opt"] = basic.verified;
  checks["basic_lift"] = basic_lift.check.ok;

  const bool small = g.vertex_count() <= kMaxBruteForceVertices;
  std::optional<CutDistribution> cuts;
  if (small) cuts = detail::optimal_cut_distribution(g);

  std::optional<SdpSolution> tri_base;
  if (!c.solution_path.empty()) {
    tri_base = make_sdp_solution(g, vectors_from_json(read_json_file(c.solution_path)));
    if (!tri_base->feasible()) return detail::error_report(c, "SDP solution is infeasible: spread != 1");
  } else if (cuts) {
    tri_base = normalize_spread(g, make_sdp_solution(g, vectors_from_cuts(*cuts, g.vertex_count())));
  }
  if (tri_base) {
    const auto base_tri = check_triangle(*tri_base, kDefaultTriangleBudget, c.seed);
    const auto lifted = lift_vectors(*tri_base, p, c.seed);
    const auto lifted_tri = check_triangle(lifted.solution, kDefaultTriangleBudget, c.seed);
    body["triangle"] = {{"base", detail::triangle_json(base_tri)},
                        {"lifted", detail::triangle_json(lifted_tri)},
                        {"base_objective", tri_base->objective},
                        {"lifted_objective", lifted.solution.objective}};
    checks["triangle_lift_identities"] = lifted.check.ok;
    checks["triangle_preserved"] = base_tri.violation_count > 0 || lifted_tri.violation_count == 0;
  }

  try {
    std::optional<LocalDistributions> ld;
    Eigen::MatrixXd sa_vectors;
    if (!c.sa_path.empty()) {
      ld = local_distributions_from_json(read_json_file(c.sa_path));
      sa_vectors = !c.solution_path.empty() ? vectors_from_json(read_json_file(c.solution_path))
                                            : vectors_from_correlations(*ld, g.vertex_count());
    } else if (cuts) {
      ld = local_distributions_from_cuts(*cuts, g.vertex_count(), level);
      sa_vectors = vectors_from_cuts(*cuts, g.vertex_count());
    }
    if (ld) {
      const auto lifted = lift_sherali_adams(*ld, sa_vectors, p);
      body["sherali_adams"] = {{"level", ld->level},
                               {"tables", lifted.dists.tables.size()},
                               {"pairs_checked", lifted.check.pairs_checked},
                               {"table_sum_error", lifted.check.table_sum_error},
                               {"negative_mass", lifted.check.negative_mass},
                               {"marginal_error", lifted.check.marginal_error},
                               {"vector_error", lifted.check.vector_error}};
      checks["sherali_adams"] = lifted.check.ok;
    }
  } catch (const CapExceeded& e) {
    body["sherali_adams"] = {{"skipped", e.what()}};
    body["partial"] = true;
  }

  try {
    std::optional<LasserreSolution> ls;
    if (!c.lasserre_path.empty()) {
      ls = lasserre_from_json(read_json_file(c.lasserre_path));
    } else if (cuts) {
      ls = lasserre_from_cuts(*cuts, g.vertex_count(), level);
    }
    if (ls) {
      const auto base_check = verify_lasserre(*ls);
      const auto lifted = lift_lasserre(*ls, p, ls->level);
      const auto lifted_check = verify_lasserre(lifted);
      const double base_obj = lasserre_edge_objective(g, *ls);
      const double lifted_obj = lasserre_edge_objective(p, lifted);
      body["lasserre"] = {{"level", ls->level},
                          {"sets", lifted.vectors.size()},
                          {"base_max_error", base_check.max_error},
                          {"lifted_max_error", lifted_check.max_error},
                          {"lifted_pairs", lifted_check.pairs},
                          {"lifted_classes", lifted_check.classes},
                          {"base_objective", base_obj},
                          {"lifted_objective", lifted_obj}};
      checks["lasserre_consistency"] = !base_check.ok || lifted_check.ok;
      checks["lasserre_objective"] =
          std::abs(lifted_obj - base_obj / static_cast<double>(c.k)) <= kIdentityTol;
    }
  } catch (const CapExceeded& e) {
    body["lasserre"] = {{"skipped", e.what()}};
    body["partial"] = true;
  }
  if (!body.contains("partial")) body["partial"] = false;
  return detail::finish(c, std::move(body), checks);
}

/// Writes sample input files for every command into the directory `c.out`.
inline CommandResult cmd_examples(const RunConfig& c) {
  namespace fs = std::filesystem;
  const fs::path dir = c.out.empty() ? fs::path("analyze_examples") : fs::path(c.out);
  fs::create_directories(dir);
  const auto k2 = complete_graph(2);
  const auto k3 = complete_graph(3);
  const auto cube8 = make_product(k2, 8);
  const auto cuts = detail::optimal_cut_distribution(k2);
  const auto basic = basic_sdp_opt(k3);
  std::vector<std::pair<std::string, Json>> files = {
      {"graph_k3.json", graph_to_json(k3)},
      {"graph_p3.json", graph_to_json(path_graph(3))},
      {"dictator_k2_8.json", function_to_json(detail::dictator(cube8, 0.0, c.seed))},
      {"noisy_dictator_k2_8.json", function_to_json(detail::dictator(cube8, 0.01, c.seed))},
      {"sdp_k3_basic.json", vectors_to_json(basic.solution.vectors)},
      {"lasserre_k2_t2.json", lasserre_to_json(lasserre_from_cuts(cuts, 2, 2))},
      {"sa_k2_t2.json", local_distributions_to_json(local_distributions_from_cuts(cuts, 2, 2))},
  };
  Json written = Json::array();
  for (const auto& [name, j] : files) {
    write_text_file((dir / name).string(), j.dump(2) + "\n");
    written.push_back(name);
  }
  return detail::finish(c, {{"directory", dir.string()}, {"files", written}}, Json::object());
}

inline CommandResult run_command(const RunConfig& c) {
  if (c.command == "isoperimetry") return cmd_isoperimetry(c);
  if (c.command == "kkl") return cmd_kkl(c);
  if (c.command == "friedgut") return cmd_friedgut(c);
  if (c.command == "sdp-lift") return cmd_sdp_lift(c);
  if (c.command == "examples") return cmd_examples(c);
  throw UsageError("unknown command \"" + c.command + "\"");
}

}  // namespace cartprod
