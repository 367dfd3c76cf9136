#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "flexauc/io.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// One directory per test: ctest runs the tests as parallel processes.
fs::path work_dir() {
  const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
  auto d = fs::temp_directory_path() / "flexauc_cli_test" / info->name();
  fs::create_directories(d);
  return d;
}

int run(const std::string& args) {
  const std::string cmd = std::string(FLEXAUC_CLI_PATH) + " " + args + " > " +
                          (work_dir() / "stdout.txt").string() + " 2> " + (work_dir() / "stderr.txt").string();
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string path(const std::string& name) { return (work_dir() / name).string(); }

void write_small_config() {
  std::ofstream(path("gen.json")) << R"({"wsps": 6, "users_min": 30, "users_max": 50})";
}

}  // namespace

TEST(Cli, GenScenarioIsDeterministic) {
  write_small_config();
  ASSERT_EQ(run("gen-scenario --config " + path("gen.json") + " --seed 5 --out " + path("a.json")), 0);
  ASSERT_EQ(run("gen-scenario --config " + path("gen.json") + " --seed 5 --out " + path("b.json")), 0);
  EXPECT_EQ(slurp(path("a.json")), slurp(path("b.json")));
  const auto s = flexauc::read_scenario(path("a.json"));
  EXPECT_EQ(s.wsps.size(), 6u);
  EXPECT_EQ(s.seed, 5u);
}

TEST(Cli, RunAuction) {
  write_small_config();
  ASSERT_EQ(run("gen-scenario --config " + path("gen.json") + " --seed 6 --out " + path("s.json")), 0);
  for (const std::string m : {"vcg", "uniform", "partial-uniform", "onebid"}) {
    ASSERT_EQ(run("run-auction --scenario " + path("s.json") + " --channels 4 --mechanism " + m + " --out " +
                  path("o.json")),
              0)
        << m;
    const auto j = flexauc::read_json_file(path("o.json"));
    EXPECT_EQ(j["mechanism"], m);
    EXPECT_LE(j["revenue"].get<double>(), j["indicator"].get<double>() * (1 + 1e-12));
  }
  // Uniform pricing needs C < N.
  EXPECT_NE(run("run-auction --scenario " + path("s.json") + " --channels 6 --mechanism uniform"), 0);
  EXPECT_NE(run("run-auction --scenario " + path("s.json") + " --channels 3 --mechanism english"), 0);
}

TEST(Cli, OptimizeChannels) {
  write_small_config();
  ASSERT_EQ(run("gen-scenario --config " + path("gen.json") + " --seed 7 --out " + path("s7.json")), 0);
  ASSERT_EQ(run("optimize-channels --scenario " + path("s7.json") + " --guard-band-mhz 1 --out " + path("c.json")), 0);
  const auto j = flexauc::read_json_file(path("c.json"));
  EXPECT_EQ(j["c_max"], 49);
  EXPECT_GE(j["best_channels"].get<int>(), 1);
  EXPECT_EQ(j["sweep"].size(), 49u);
  ASSERT_EQ(run("optimize-channels --scenario " + path("s7.json") + " --guard-band-mhz 1 --noise 0.1 --out " +
                path("n.json")),
            0);
  EXPECT_EQ(run("optimize-channels --scenario " + path("s7.json") + " --noise 1.5"), 2);
}

TEST(Cli, Experiment) {
  std::ofstream(path("exp.json")) << R"({"generation": {"users_min": 20, "users_max": 30}, "perturbations": 5})";
  const auto out = path("exp_out");
  ASSERT_EQ(run("experiment --name truthfulness --config " + path("exp.json") + " --trials 2 --seed 3 --out-dir " + out),
            0);
  EXPECT_TRUE(fs::exists(fs::path(out) / "truthfulness.csv"));
  EXPECT_TRUE(fs::exists(fs::path(out) / "truthfulness.summary.json"));
  const auto first = slurp(fs::path(out) / "truthfulness.csv");
  setenv("FLEXAUC_WORKERS", "3", 1);
  ASSERT_EQ(run("experiment --name truthfulness --config " + path("exp.json") + " --trials 2 --seed 3 --out-dir " + out),
            0);
  unsetenv("FLEXAUC_WORKERS");
  EXPECT_EQ(first, slurp(fs::path(out) / "truthfulness.csv"));
  EXPECT_NE(run("experiment --name fig-10 --trials 1"), 0);
}

TEST(Cli, VerifyReportsPassAndFail) {
  // VCG alone passes every check.
  EXPECT_EQ(run("verify --instances 200 --scenarios 5 --perturbations 20 --mechanisms vcg"), 0);
  const auto report = slurp(path("stdout.txt"));
  EXPECT_NE(report.find("PASS welfare-vs-brute-force"), std::string::npos);
  EXPECT_NE(report.find("PASS truthfulness-vcg"), std::string::npos);

  // Uniform pricing admits profitable deviations; verify exits nonzero and
  // writes a replayable counterexample.
  EXPECT_EQ(run("verify --instances 50 --scenarios 30 --perturbations 100 --mechanisms uniform "
                "--counterexample-out " + path("cx.json")),
            1);
  EXPECT_NE(slurp(path("stdout.txt")).find("FAIL truthfulness-uniform"), std::string::npos);
  const auto cx = flexauc::read_json_file(path("cx.json"));
  ASSERT_TRUE(cx.is_array());
  EXPECT_GT(cx[0]["counterexample"]["deviant_utility"].get<double>(),
            cx[0]["counterexample"]["truthful_utility"].get<double>());
}
