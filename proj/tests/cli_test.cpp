#include <gtest/gtest.h>
#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

namespace {

struct Result {
  int status;
  std::string out;
};

Result run(const std::string& args, const std::string& env = "") {
  const std::string cmd = env + " " + QMLAB_CLI + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return {-1, {}};
  std::string out;
  std::array<char, 512> buf{};
  while (std::fgets(buf.data(), buf.size(), pipe)) out += buf.data();
  const int raw = pclose(pipe);
  return {WIFEXITED(raw) ? WEXITSTATUS(raw) : -1, out};
}

std::string first_line(const Result& r) { return r.out.substr(0, r.out.find('\n')); }

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = std::filesystem::temp_directory_path() /
           ("qmlab_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    std::filesystem::create_directories(dir_);
  }
  void TearDown() override { std::filesystem::remove_all(dir_); }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }
  std::filesystem::path dir_;
};

nlohmann::json load(const std::string& p) {
  std::ifstream in(p);
  return nlohmann::json::parse(in);
}

TEST_F(Cli, Eval) {
  EXPECT_EQ(first_line(run("eval hom:brooks:ab \"a b a b\"")), "2");
  EXPECT_EQ(first_line(run("eval brooks:ab e")), "0");
  EXPECT_EQ(first_line(run("eval hom:brooks:ab \"b a\"")), "1");
  EXPECT_EQ(first_line(run("eval brooks:ab \"a b a^-1 b^-1\"")), "1");
}

TEST_F(Cli, Cocycle) {
  EXPECT_EQ(first_line(run("cocycle hom:brooks:ab a \"a b\" e")), "-1");
  EXPECT_EQ(first_line(run("cocycle hom:brooks:ab e a^2 a^5")), "0");
  EXPECT_EQ(first_line(run("cocycle hom:brooks:ab \"a b\" \"a b\" b")), "0");
  EXPECT_EQ(run("cocycle brooks:ab a b e").status, 2);
}

TEST_F(Cli, Check) {
  EXPECT_EQ(run("check all hom:brooks:ab --samples 200 --seed 7 --out " + path("ok.json")).status, 0);
  const auto report = load(path("ok.json"));
  EXPECT_EQ(report["total_failures"], 0);
  EXPECT_EQ(run("check all corrupt:hom:brooks:ab --samples 100 --out " + path("bad.json")).status, 1);
  EXPECT_GT(load(path("bad.json"))["total_failures"].get<int>(), 0);
  EXPECT_EQ(run("check all hom:brooks:ab --samples 0 --out " + path("empty.json")).status, 0);
  EXPECT_EQ(run("check bogus hom:brooks:ab --out " + path("x.json")).status, 64);
}

TEST_F(Cli, ExperimentRefusesZeroClass) {
  EXPECT_EQ(run("experiment twist-prob --qm zero --trials 10 --out " + path("z.json")).status, 2);
  EXPECT_EQ(run("experiment twist-prob --qm brooks:ab --trials 10 --out " + path("z.json")).status, 2);
}

TEST_F(Cli, PipelineAtTimeZero) {
  const auto r = run("experiment subgroup-pipeline --n 0 --m 0 --trials 20 --out " + path("p.json"));
  ASSERT_EQ(r.status, 0);
  const auto report = load(path("p.json"));
  EXPECT_EQ(report["cells"][0]["estimates"]["joint"]["successes"], 0);
  EXPECT_TRUE(std::filesystem::exists(path("p.csv")));
}

TEST_F(Cli, GridProducesOneCellPerPair) {
  ASSERT_EQ(run("experiment twist-prob --n 0,10 --m 5,10 --trials 20 --out " + path("g.json")).status, 0);
  EXPECT_EQ(load(path("g.json"))["cells"].size(), 4u);
  std::ifstream csv(path("g.csv"));
  std::string line;
  int rows = 0;
  while (std::getline(csv, line)) ++rows;
  EXPECT_EQ(rows, 5);
}

TEST_F(Cli, ThreadCountDoesNotChangeReport) {
  const std::string common = "experiment twist-prob --n 30 --m 30 --trials 300 --seed 11 --record-trials";
  ASSERT_EQ(run(common + " --threads 1 --out " + path("t1.json")).status, 0);
  ASSERT_EQ(run(common + " --threads 4 --out " + path("t4.json")).status, 0);
  auto a = load(path("t1.json")), b = load(path("t4.json"));
  a.erase("run");
  b.erase("run");
  a["params"].erase("threads");
  b["params"].erase("threads");
  EXPECT_EQ(a.dump(), b.dump());
}

TEST_F(Cli, SeedFromEnvironment) {
  const std::string args = "experiment twist-prob --n 20 --m 20 --trials 100 --out ";
  ASSERT_EQ(run(args + path("env.json"), "QMLAB_SEED=5").status, 0);
  ASSERT_EQ(run(args + path("flag.json") + " --seed 5").status, 0);
  EXPECT_EQ(load(path("env.json"))["cells"], load(path("flag.json"))["cells"]);
}

TEST_F(Cli, Subgroup) {
  EXPECT_EQ(first_line(run("subgroup a b")), "rank 2");
  EXPECT_EQ(first_line(run("subgroup a^2 a^3")), "rank 1");
  EXPECT_EQ(first_line(run("subgroup")), "rank 0");
  ASSERT_EQ(run("subgroup \"a b a^-1\" --export " + path("g.txt")).status, 0);
  std::ifstream in(path("g.txt"));
  std::stringstream ss;
  ss << in.rdbuf();
  EXPECT_EQ(ss.str(), "0 a 1\n1 b 1\n");
}

TEST_F(Cli, UsageErrors) {
  EXPECT_EQ(run("").status, 64);
  EXPECT_EQ(run("frobnicate").status, 64);
  EXPECT_EQ(run("eval hom:brooks:ab \"a x\"").status, 64);
  EXPECT_EQ(run("eval nonsense:ab a").status, 64);
  EXPECT_EQ(run("experiment twist-prob --eps 1/0").status, 64);
  EXPECT_EQ(run("--help").status, 0);
}

}  // namespace
