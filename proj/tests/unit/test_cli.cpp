#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "hgconc/cli.hpp"

using namespace hgconc;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = cli::dispatch(args, out, err);
  return {code, out.str(), err.str()};
}

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("hgconc_test_" + name)).string();
}

std::string write_file(const std::string& name, const std::string& text) {
  const auto path = temp_path(name);
  std::ofstream(path, std::ios::binary) << text;
  return path;
}

}  // namespace

TEST(Cli, GenCompleteHeader) {
  const auto r = run({"gen", "--family", "complete", "--r", "3", "--N", "10"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out.substr(0, r.out.find('\n')), "3 45 120");
}

TEST(Cli, GenWritesFileAndRecord) {
  const auto path = temp_path("gen.hgr");
  const auto r = run({"gen", "--family", "disjoint", "--m", "2", "--k", "2", "--out", path});
  EXPECT_EQ(r.code, 0);
  const auto rec = Json::parse(r.out);
  EXPECT_EQ(rec["cmd"], "gen");
  std::ifstream f(path);
  std::stringstream ss;
  ss << f.rdbuf();
  EXPECT_EQ(ss.str(), "2 4 2\n0 1\n2 3\n");
}

TEST(Cli, OracleExample) {
  const auto path = write_file("pair.hgr", "2 4 2\n0 1\n2 3\n");
  const auto r = run({"oracle", "--in", path, "--p", "0.5", "--dist"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rec = Json::parse(r.out);
  EXPECT_DOUBLE_EQ(rec["result"]["expectation"].get<double>(), 0.5);
  EXPECT_DOUBLE_EQ(rec["result"]["variance"].get<double>(), 0.375);
  const auto d = rec["result"]["distribution"].get<std::vector<double>>();
  ASSERT_EQ(d.size(), 3u);
  EXPECT_DOUBLE_EQ(d[0], 0.5625);
  EXPECT_DOUBLE_EQ(d[1], 0.375);
  EXPECT_DOUBLE_EQ(d[2], 0.0625);
}

TEST(Cli, NiceFields) {
  const auto path = temp_path("k3_10.hgr");
  ASSERT_EQ(run({"gen", "--family", "complete", "--r", "3", "--N", "10", "--out", path}).code, 0);
  const auto r = run({"nice", "--in", path, "--p", "0.001", "--lambda", "3", "--n0", "10"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto res = Json::parse(r.out)["result"];
  EXPECT_TRUE(res["p1"].get<bool>());
  EXPECT_FALSE(res["p2"]["holds"].get<bool>());
  EXPECT_EQ(res["p4"], "assumed");
  EXPECT_EQ(res["summary"]["m"], 120);
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(run({}).code, 1);
  EXPECT_EQ(run({"bogus"}).code, 1);
  EXPECT_EQ(run({"--help"}).code, 0);
  EXPECT_EQ(run({"--version"}).out, std::string(kVersion) + "\n");
  EXPECT_EQ(run({"oracle", "--in", "/nonexistent.hgr", "--p", "0.5"}).code, 1);
  const auto bad = write_file("bad.hgr", "2 4 1\n1 0\n");
  EXPECT_EQ(run({"stats", "--in", bad}).code, 1);
  // Monte Carlo commands need an explicit seed.
  const auto ok = write_file("ok.hgr", "2 4 2\n0 1\n2 3\n");
  EXPECT_EQ(run({"simulate", "--in", ok, "--p", "0.5", "--thresholds", "1"}).code, 1);
  EXPECT_EQ(run({"oracle", "--in", ok, "--p", "1.5"}).code, 1);
  // Infeasible and over-budget runs exit 2.
  EXPECT_EQ(run({"gen", "--family", "random", "--n", "3", "--m", "5", "--k", "2", "--seed", "1"}).code, 2);
  EXPECT_EQ(run({"gen", "--family", "complete", "--r", "3", "--N", "50", "--budget", "10"}).code, 2);
  EXPECT_EQ(run({"mcdiarmid", "--t", "1", "--a", "1,1"}).code, 0);
}

TEST(Cli, ReplayIsByteIdentical) {
  const auto path = temp_path("k3_8.hgr");
  ASSERT_EQ(run({"gen", "--family", "complete", "--r", "3", "--N", "8", "--out", path}).code, 0);
  const std::vector<std::string> sim{"simulate", "--in", path, "--p", "0.4", "--thresholds", "1,2",
                                     "--seed", "42", "--trials", "2000"};
  const auto a = run(sim);
  const auto b = run(sim);
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_EQ(a.out, b.out);
  auto sim8 = sim;
  sim8.insert(sim8.end(), {"--workers", "8"});
  auto ja = Json::parse(a.out), jb = Json::parse(run(sim8).out);
  EXPECT_EQ(ja["result"], jb["result"]);
}

TEST(Cli, ConfigFileSuppliesDefaults) {
  const auto hgr = write_file("cfg.hgr", "2 4 2\n0 1\n2 3\n");
  const auto cfg = write_file("cfg.ini", "seed=7\ntrials=500\n");
  const auto r = run({"--config", cfg, "simulate", "--in", hgr, "--p", "0.5", "--thresholds", "1"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto params = Json::parse(r.out)["params"];
  EXPECT_EQ(params["seed"], 7);
  EXPECT_EQ(params["trials"], 500);
}
