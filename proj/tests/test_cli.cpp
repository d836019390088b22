#include <gtest/gtest.h>

#include <sys/wait.h>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

struct Run {
  int code = -1;
  std::string output;  // stdout and stderr interleaved
};

Run run_cli(const std::string& args) {
  const std::string cmd = std::string(UAMCTS_CLI_PATH) + " " + args + " 2>&1";
  Run r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return r;
  char buf[4096];
  while (std::fgets(buf, sizeof(buf), pipe)) r.output += buf;
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    dir_ = fs::temp_directory_path() / ("uamcts_cli_" + std::string(info->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& rel) const { return (dir_ / rel).string(); }

  fs::path dir_;
};

}  // namespace

TEST_F(Cli, HelpExitsZero) {
  const auto r = run_cli("--help");
  EXPECT_EQ(r.code, 0);
  for (const char* sub : {"gen-data", "fit", "plan", "bench", "sweep"}) EXPECT_NE(r.output.find(sub), std::string::npos);
}

TEST_F(Cli, UnknownFlagExitsTwo) {
  EXPECT_EQ(run_cli("bench --no-such-flag 1").code, 2);
}

TEST_F(Cli, GenDataRejectsZeroRows) {
  const auto r = run_cli("gen-data --n 0 --out " + path("d"));
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.output.find("n must be >= 1"), std::string::npos);
}

TEST_F(Cli, GenDataIsDeterministic) {
  ASSERT_EQ(run_cli("gen-data --seed 4 --n 12 --out " + path("a")).code, 0);
  ASSERT_EQ(run_cli("gen-data --seed 4 --n 12 --out " + path("b")).code, 0);
  ASSERT_EQ(run_cli("gen-data --seed 5 --n 12 --out " + path("c")).code, 0);
  const auto a = slurp(path("a/dataset.csv"));
  EXPECT_EQ(a.rfind("level,alpha,duration,next_level\n", 0), 0u);
  EXPECT_EQ(a, slurp(path("b/dataset.csv")));
  EXPECT_NE(a, slurp(path("c/dataset.csv")));
}

TEST_F(Cli, FitReportsErrors) {
  ASSERT_EQ(run_cli("gen-data --n 20 --out " + path("train")).code, 0);
  ASSERT_EQ(run_cli("gen-data --seed 9 --n 10 --out " + path("test")).code, 0);
  const auto r = run_cli("fit --fit-hyper --data " + path("train/dataset.csv") + " --test " + path("test/dataset.csv") +
                         " --out " + path("m"));
  ASSERT_EQ(r.code, 0) << r.output;
  EXPECT_NE(r.output.find("train MSE"), std::string::npos);
  EXPECT_NE(r.output.find("test MSE"), std::string::npos);
  EXPECT_TRUE(fs::exists(path("m/model.json")));
}

TEST_F(Cli, FitNamesMalformedCell) {
  std::ofstream(path("bad.csv")) << "level,alpha,duration,next_level\n1,0.5,0.1,2\n3,oops,0.2,4\n";
  const auto r = run_cli("fit --data " + path("bad.csv") + " --out " + path("m"));
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.output.find("row 3"), std::string::npos) << r.output;
  EXPECT_NE(r.output.find("column 2"), std::string::npos) << r.output;
}

TEST_F(Cli, PlanWithFittedModel) {
  ASSERT_EQ(run_cli("gen-data --n 20 --out " + path("d")).code, 0);
  ASSERT_EQ(run_cli("fit --fit-hyper --data " + path("d/dataset.csv") + " --out " + path("m")).code, 0);
  const auto r = run_cli("plan --model " + path("m/model.json") + " --x-ref 50 --iteration-budget 300 --out " +
                         path("p"));
  EXPECT_TRUE(r.code == 0 || r.code == 1) << r.output;
  EXPECT_TRUE(fs::exists(path("p/trace.jsonl")));
}

TEST_F(Cli, PlanWithPerfectModelSucceeds) {
  const auto r = run_cli("plan --perfect-model --obs-noise-sd 0 --x-ref 60 --out " + path("p"));
  EXPECT_EQ(r.code, 0) << r.output;
  EXPECT_FALSE(slurp(path("p/trace.jsonl")).empty());
}

TEST_F(Cli, ExternalMethodRejected) {
  const auto r = run_cli("plan --perfect-model --x-ref 60 --method UA-MCTS-0 --out " + path("p"));
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.output.find("not implemented"), std::string::npos) << r.output;
}

TEST_F(Cli, UnreachableGoalRejected) {
  const auto r = run_cli("plan --perfect-model --x-ref 1 --out " + path("p"));
  EXPECT_EQ(r.code, 2);
}

TEST_F(Cli, ConfigFileUnknownKeyRejected) {
  std::ofstream(path("cfg.json")) << R"({"trials": 1, "trails": 2})";
  EXPECT_EQ(run_cli("bench --config " + path("cfg.json") + " --out " + path("b")).code, 2);
}

TEST_F(Cli, SmallBenchRunsQuickly) {
  const auto start = std::chrono::steady_clock::now();
  const auto r = run_cli("bench --trials 1 --out " + path("b"));
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  ASSERT_EQ(r.code, 0) << r.output;
  EXPECT_LT(secs, 30.0);
  for (const char* f : {"report.json", "summary.csv", "summary.txt", "config.json", "scatter_5_UA-MCTS-1.csv"})
    EXPECT_TRUE(fs::exists(path(std::string("b/") + f))) << f;
}

TEST_F(Cli, EchoedConfigReproducesRun) {
  ASSERT_EQ(run_cli("bench --trials 2 --dataset-sizes 8,4 --iteration-budget 200 --seed 3 --out " + path("a")).code, 0);
  ASSERT_EQ(run_cli("bench --config " + path("a/config.json") + " --out " + path("b")).code, 0);
  EXPECT_EQ(slurp(path("a/config.json")), slurp(path("b/config.json")));
  EXPECT_EQ(slurp(path("a/summary.csv")), slurp(path("b/summary.csv")));
  EXPECT_EQ(slurp(path("a/report.json")), slurp(path("b/report.json")));
}

TEST_F(Cli, FlagsOverrideConfigFile) {
  std::ofstream(path("cfg.json")) << R"({"trials": 3, "dataset_sizes": [4], "iteration_budget": 50})";
  ASSERT_EQ(run_cli("bench --config " + path("cfg.json") + " --trials 1 --out " + path("b")).code, 0);
  const auto echoed = slurp(path("b/config.json"));
  EXPECT_NE(echoed.find("\"trials\": 1"), std::string::npos);
  EXPECT_NE(echoed.find("\"iteration_budget\": 50"), std::string::npos);
}

TEST_F(Cli, SweepEchoesValues) {
  const auto r = run_cli("sweep --param h --values 0,10 --trials 1 --dataset-sizes 4 --methods UA-MCTS-1 "
                         "--iteration-budget 50 --out " + path("s"));
  ASSERT_EQ(r.code, 0) << r.output;
  EXPECT_NE(r.output.find("sweep h values: 0 10"), std::string::npos) << r.output;
  EXPECT_EQ(slurp(path("s/sweep.csv")).rfind("h,dataset_size,method", 0), 0u);
}
