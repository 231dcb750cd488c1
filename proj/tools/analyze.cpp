#include <iostream>

#include <CLI11.hpp>

#include "cartprod/commands.hpp"

namespace {

void add_common(CLI::App* sub, cartprod::RunConfig& c) {
  sub->add_option("--graph", c.graph_path, "graph JSON file {\"n\", \"edges\"}");
  sub->add_option("--builtin", c.builtin, "k2 | kq:q | cycle:n | path:n | necklace:R");
  sub->add_option("--k", c.k, "number of Cartesian factors");
  sub->add_option("--seed", c.seed, "random seed");
  sub->add_option("--out", c.out, "report path (default stdout)");
  sub->add_option("--max-dense", c.max_dense, "largest product vertex count materialized densely");
}

}  // namespace

int main(int argc, char** argv) {
  cartprod::RunConfig c;
  CLI::App app{"Influence, isoperimetry and SDP-lifting checks on Cartesian powers of graphs"};
  app.require_subcommand(1);

  auto* iso = app.add_subcommand("isoperimetry", "conductance, spectral gap and log-Sobolev scaling");
  add_common(iso, c);

  auto* kkl = app.add_subcommand("kkl", "influence report and per-coordinate lemma checks");
  add_common(kkl, c);
  kkl->add_option("--function", c.function_path, "function JSON file {\"k\", \"values\"}");
  kkl->add_option("--family", c.family, "random | dictator | noisy-dictator | constant");
  kkl->add_option("--samples", c.samples, "number of random functions");
  kkl->add_option("--t-level", c.t_level, "lemma parameter t in (0, 1/e^2]");
  kkl->add_option("--noise", c.noise, "flip probability for noisy-dictator");

  auto* fr = app.add_subcommand("friedgut", "junta extraction");
  add_common(fr, c);
  fr->add_option("--function", c.function_path, "function JSON file {\"k\", \"values\"}");
  fr->add_option("--family", c.family, "noisy-dictator | dictator | constant | random");
  fr->add_option("--epsilon", c.epsilon, "target squared distance");
  fr->add_option("--noise", c.noise, "flip probability for noisy-dictator");

  auto* sdp = app.add_subcommand("sdp-lift", "lift SDP, Sherali-Adams and Lasserre solutions to the power");
  add_common(sdp, c);
  sdp->add_option("--solution", c.solution_path, "SDP vectors {\"d\", \"vectors\"}");
  sdp->add_option("--lasserre", c.lasserre_path, "Lasserre set vectors {\"t\", \"sets\"}");
  sdp->add_option("--sa", c.sa_path, "local distributions {\"t\", \"dists\"}");
  sdp->add_option("--t-level", c.t_level, "hierarchy level for generated solutions");
  sdp->add_option("--samples", c.samples, "unused; accepted for uniformity");

  auto* ex = app.add_subcommand("examples", "write sample input files into --out (a directory)");
  ex->add_option("--out", c.out, "output directory");
  ex->add_option("--seed", c.seed, "random seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }
  c.command = app.get_subcommands().front()->get_name();

  cartprod::CommandResult result;
  try {
    result = cartprod::run_command(c);
  } catch (const cartprod::UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 1;
  } catch (const cartprod::SchemaError& e) {
    std::cerr << "schema error: " << e.what() << "\n";
    return 1;
  } catch (const cartprod::GraphError& e) {
    std::cerr << "graph error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }

  const std::string text = result.report.dump(2) + "\n";
  if (c.out.empty() || c.command == "examples") {
    std::cout << text;
  } else {
    try {
      cartprod::write_text_file(c.out, text);
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << "\n";
      return 1;
    }
  }
  return result.passed ? 0 : 2;
}
