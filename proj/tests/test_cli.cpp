#include <gtest/gtest.h>

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>

#include "cartprod/io.hpp"

namespace {

struct RunResult {
  int code = -1;
  std::string out;
};

RunResult run(const std::string& args) {
  const std::string cmd = std::string(ANALYZE_EXE) + " " + args + " 2>/dev/null";
  RunResult r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return r;
  std::array<char, 4096> buf{};
  std::size_t got = 0;
  while ((got = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), got);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::filesystem::path scratch(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("analyze_cli_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace

TEST(Cli, IsoperimetryK2) {
  const auto r = run("isoperimetry --builtin k2 --k 2");
  ASSERT_EQ(r.code, 0) << r.out;
  const auto j = cartprod::Json::parse(r.out);
  EXPECT_NEAR(j["ratios"]["phi"].get<double>(), 0.5, 1e-12);
  EXPECT_NEAR(j["ratios"]["lambda1"].get<double>(), 0.5, 1e-12);
  EXPECT_NEAR(j["ratios"]["alpha"].get<double>(), 0.5, 0.025);
  EXPECT_EQ(j["status"], "pass");
  EXPECT_TRUE(j.contains("tolerances"));
  EXPECT_TRUE(j.contains("version"));
  EXPECT_EQ(j["config"]["k"], 2);
}

TEST(Cli, IsoperimetryKqAndFirstPower) {
  const auto a = cartprod::Json::parse(run("isoperimetry --builtin kq:3 --k 2").out);
  EXPECT_NEAR(a["ratios"]["phi"].get<double>(), 0.5, 1e-12);
  const auto b = cartprod::Json::parse(run("isoperimetry --builtin cycle:5 --k 1").out);
  EXPECT_NEAR(b["ratios"]["phi"].get<double>(), 1.0, 1e-12);
  EXPECT_NEAR(b["ratios"]["lambda1"].get<double>(), 1.0, 1e-12);
}

TEST(Cli, IsoperimetryPartialWhenCapped) {
  const auto r = run("isoperimetry --builtin kq:3 --k 8 --max-dense 1000");
  ASSERT_EQ(r.code, 0) << r.out;
  EXPECT_TRUE(cartprod::Json::parse(r.out)["partial"].get<bool>());
}

TEST(Cli, KklDictatorAndSweep) {
  const auto d = cartprod::Json::parse(run("kkl --builtin k2 --k 4 --family dictator").out);
  EXPECT_NEAR(d["detail"]["kkl"]["max_influence"].get<double>(), 2.0, 1e-12);
  const auto r = run("kkl --builtin kq:3 --k 2 --samples 30 --seed 5");
  ASSERT_EQ(r.code, 0) << r.out;
  const auto s = cartprod::Json::parse(r.out);
  EXPECT_EQ(s["violations"]["corollary"], 0);
  EXPECT_EQ(s["functions"], 30);
}

TEST(Cli, KklConstantIsReportedError) {
  const auto r = run("kkl --builtin k2 --k 3 --family constant");
  EXPECT_EQ(r.code, 2);
  EXPECT_EQ(cartprod::Json::parse(r.out)["status"], "error");
}

TEST(Cli, FriedgutFamilies) {
  const auto d = run("friedgut --builtin k2 --k 8 --family dictator --epsilon 0.1");
  ASSERT_EQ(d.code, 0) << d.out;
  EXPECT_EQ(cartprod::Json::parse(d.out)["junta"], cartprod::Json::array({0}));
  const auto n = cartprod::Json::parse(run("friedgut --builtin k2 --k 8 --epsilon 0.2").out);
  EXPECT_LE(n["distance"].get<double>(), 0.2);
  const auto c = cartprod::Json::parse(run("friedgut --builtin k2 --k 3 --family constant").out);
  EXPECT_TRUE(c["junta"].empty());
}

TEST(Cli, SdpLiftDefaults) {
  const auto r = run("sdp-lift --builtin k2 --k 2");
  ASSERT_EQ(r.code, 0) << r.out;
  const auto j = cartprod::Json::parse(r.out);
  EXPECT_NEAR(j["basic"]["lifted_objective"].get<double>(), 1.0, 1e-12);
  EXPECT_EQ(j["triangle"]["lifted"]["violations"], 0);
  EXPECT_EQ(j["status"], "pass");
}

TEST(Cli, ExamplesFeedOtherCommands) {
  const auto dir = scratch("examples");
  ASSERT_EQ(run("examples --out " + dir.string()).code, 0);
  const auto fd = run("friedgut --builtin k2 --function " + (dir / "dictator_k2_8.json").string());
  ASSERT_EQ(fd.code, 0) << fd.out;
  EXPECT_EQ(cartprod::Json::parse(fd.out)["junta"], cartprod::Json::array({0}));
  const auto iso = run("isoperimetry --graph " + (dir / "graph_k3.json").string() + " --k 2");
  EXPECT_EQ(iso.code, 0) << iso.out;
  const auto sdp = run("sdp-lift --graph " + (dir / "graph_k3.json").string() + " --k 2 --solution " +
                       (dir / "sdp_k3_basic.json").string());
  EXPECT_EQ(sdp.code, 0) << sdp.out;
  const auto files = run("sdp-lift --builtin k2 --k 2 --lasserre " + (dir / "lasserre_k2_t2.json").string() +
                         " --sa " + (dir / "sa_k2_t2.json").string());
  EXPECT_EQ(files.code, 0) << files.out;
}

TEST(Cli, MalformedInputIsUsageError) {
  const auto dir = scratch("bad");
  cartprod::write_text_file((dir / "bad.json").string(), "{\"n\": 2, \"edges\": [[0, 1]]}");
  EXPECT_EQ(run("isoperimetry --graph " + (dir / "bad.json").string()).code, 1);
  cartprod::write_text_file((dir / "sol.json").string(), "{\"d\": 1, \"vectors\": [[1, 2]]}");
  EXPECT_EQ(run("sdp-lift --builtin k2 --solution " + (dir / "sol.json").string()).code, 1);
  EXPECT_EQ(run("isoperimetry --graph /nonexistent/graph.json").code, 1);
  EXPECT_EQ(run("isoperimetry --builtin nosuch").code, 1);
  EXPECT_EQ(run("frobnicate").code, 1);
  EXPECT_EQ(run("isoperimetry --k notanumber").code, 1);
}

TEST(Cli, WritesReportFile) {
  const auto dir = scratch("out");
  const auto path = dir / "report.json";
  ASSERT_EQ(run("isoperimetry --builtin path:3 --k 2 --out " + path.string()).code, 0);
  EXPECT_TRUE(std::filesystem::exists(path));
}

TEST(Cli, Deterministic) {
  for (const std::string args : {"kkl --builtin kq:3 --k 2 --samples 10 --seed 9", "friedgut --builtin k2 --k 6 --seed 3",
                                 "isoperimetry --builtin cycle:5 --k 2 --seed 4"}) {
    EXPECT_EQ(run(args).out, run(args).out) << args;
  }
}
