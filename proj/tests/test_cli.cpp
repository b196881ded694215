#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <sstream>

#include "twdet/cli.hpp"

using twdet::cli::Json;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
  Json json() const { return Json::parse(out); }
};

Outcome run(std::vector<std::string> args) {
  args.insert(args.begin(), "twdet");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  int code = twdet::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string sample(const std::string& name) { return std::string(TWDET_SAMPLES_DIR) + "/" + name; }

std::string temp_prefix(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("twdet_cli_" + name)).string();
}

} // namespace

TEST(Cli, DeterminantOfIdentity) {
  auto r = run({"det", "--matrix", sample("id3.mtx")});
  ASSERT_EQ(r.code, 0) << r.err;
  auto j = r.json();
  EXPECT_EQ(j["command"], "det");
  EXPECT_EQ(j["result"], "1");
  EXPECT_EQ(j["route"], "value-classes");
  EXPECT_EQ(j["input_digest"].get<std::string>().size(), 16u);
}

TEST(Cli, OutputIsByteIdentical) {
  for (auto cmd : {"det", "charpoly", "rank", "inverse", "oracle-det"}) {
    auto a = run({cmd, "--matrix", sample("tridiag.mtx")});
    auto b = run({cmd, "--matrix", sample("tridiag.mtx")});
    EXPECT_EQ(a.code, 0) << cmd << a.err;
    EXPECT_EQ(a.out, b.out) << cmd;
  }
}

TEST(Cli, RationalMatrixAgreesWithOracle) {
  auto det = run({"det", "--matrix", sample("tridiag.mtx")}).json();
  auto ref = run({"oracle-det", "--matrix", sample("tridiag.mtx")}).json();
  EXPECT_EQ(det["result"], ref["result"]);
}

TEST(Cli, NilpotentRank) { EXPECT_EQ(run({"rank", "--matrix", sample("nilpotent.mtx")}).json()["result"], "1"); }

TEST(Cli, BrokenDecompositionExitsThree) {
  auto r = run({"validate-td", "--gr", sample("path4.gr"), "--td", sample("broken.td")});
  EXPECT_EQ(r.code, 3);
  EXPECT_EQ(r.json()["clause"], "b");
  auto ok = run({"validate-td", "--gr", sample("path4.gr"), "--td", sample("path4.td")});
  EXPECT_EQ(ok.code, 0);
  EXPECT_EQ(ok.json()["width"], 1);
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(run({}).code, 1);
  EXPECT_EQ(run({"det"}).code, 1);
  EXPECT_EQ(run({"det", "--matrix", sample("missing.mtx")}).code, 1);
  EXPECT_EQ(run({"det", "--matrix", sample("duplicate.mtx")}).code, 2);
  EXPECT_EQ(run({"euler-tours", "--digraph", sample("not_eulerian.dgw")}).code, 4);
  EXPECT_EQ(run({"inverse", "--matrix", sample("nilpotent.mtx")}).code, 4);
  EXPECT_EQ(run({"det", "--matrix", sample("id3.mtx"), "--td", sample("path4.td")}).code, 2);
}

TEST(Cli, GeneratedOrderInstanceHasZeroDeterminant) {
  std::string prefix = temp_prefix("ord");
  auto g = run({"gen-ord", "--n", "9", "--seed", "5", "--out", prefix});
  ASSERT_EQ(g.code, 0) << g.err;
  EXPECT_TRUE(g.json()["result"]["s_precedes_t"].get<bool>());
  auto d = run({"det", "--digraph", prefix + ".dgw", "--td", prefix + ".td"});
  ASSERT_EQ(d.code, 0) << d.err;
  EXPECT_EQ(d.json()["result"], "0");
  auto t = run({"gen-ord", "--n", "9", "--seed", "5", "--t-first", "--out", prefix});
  EXPECT_FALSE(t.json()["result"]["s_precedes_t"].get<bool>());
  EXPECT_NE(run({"det", "--digraph", prefix + ".dgw"}).json()["result"], "0");
}

TEST(Cli, SeedsAreDeterministic) {
  EXPECT_EQ(run({"gen-powering", "--n", "6", "--seed", "9"}).out, run({"gen-powering", "--n", "6", "--seed", "9"}).out);
  EXPECT_EQ(run({"gen-imm", "--n", "3", "--m", "2", "--seed", "9"}).out,
            run({"gen-imm", "--n", "3", "--m", "2", "--seed", "9"}).out);
}

TEST(Cli, Counting) {
  auto e = run({"euler-tours", "--digraph", sample("bitriangle.dgw")}).json();
  EXPECT_EQ(e["result"], "3");
  EXPECT_TRUE(e["root_independent"].get<bool>());
  EXPECT_EQ(run({"arborescences", "--digraph", sample("bitriangle.dgw"), "--root", "2"}).json()["result"], "3");
}

TEST(Cli, PowerFallsBackUnderTinyBudget) {
  setenv("TWDET_DP_BUDGET", "1", 1);
  auto r = run({"power", "--matrix", sample("id3.mtx"), "--m", "2"});
  unsetenv("TWDET_DP_BUDGET");
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.json()["route"], "oracle-fallback");
  setenv("TWDET_DP_BUDGET", "nope", 1);
  EXPECT_EQ(run({"det", "--matrix", sample("id3.mtx")}).code, 1);
  unsetenv("TWDET_DP_BUDGET");
}

TEST(Cli, TimingOnlyOnRequest) {
  EXPECT_FALSE(run({"det", "--matrix", sample("id3.mtx")}).json().contains("timing_ms"));
  EXPECT_TRUE(run({"--timing", "det", "--matrix", sample("id3.mtx")}).json().contains("timing_ms"));
}

TEST(Cli, FsleAndHistogram) {
  EXPECT_TRUE(run({"fsle", "--matrix", sample("nilpotent.mtx"), "--rhs", "5,0"}).json()["result"].get<bool>());
  EXPECT_FALSE(run({"fsle", "--matrix", sample("nilpotent.mtx"), "--rhs", "0,1"}).json()["result"].get<bool>());
  auto h = run({"histogram", "--digraph", sample("bitriangle.dgw")}).json();
  EXPECT_EQ(h["signed_sum"], "2");
}
