#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "rpp/instance.hpp"
#include "rpp_cli/cli.hpp"

namespace rpp::cli {
namespace {

namespace fs = std::filesystem;

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "rppmtd");
  std::vector<const char*> argv;
  for (const std::string& a : args) argv.push_back(a.c_str());
  std::ostringstream out;
  std::ostringstream err;
  const int code = run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::path(::testing::TempDir()) / ("rpp_cli_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

TEST(ListParsing, IntegerRangesAndLists) {
  EXPECT_EQ(parse_int_list("1..5"), (std::vector<int>{1, 2, 3, 4, 5}));
  EXPECT_EQ(parse_int_list("3"), std::vector<int>{3});
  EXPECT_EQ(parse_int_list("1,2,7"), (std::vector<int>{1, 2, 7}));
  EXPECT_EQ(parse_int_list("1..2,9"), (std::vector<int>{1, 2, 9}));
  EXPECT_THROW(parse_int_list("5..1"), std::invalid_argument);
  EXPECT_THROW(parse_int_list("x"), std::invalid_argument);
  EXPECT_THROW(parse_int_list(""), std::invalid_argument);
}

TEST(ListParsing, Doubles) {
  EXPECT_EQ(parse_double_list("0.5,1.0,1.5,2.0"), (std::vector<double>{0.5, 1.0, 1.5, 2.0}));
  EXPECT_THROW(parse_double_list("0.5,,"), std::invalid_argument);
}

TEST(ListParsing, FleetGrid) {
  const FleetGrid g = parse_grid("K=1,2,3;M=1,2,3");
  EXPECT_EQ(g.trucks, (std::vector<int>{1, 2, 3}));
  EXPECT_EQ(g.drones, (std::vector<int>{1, 2, 3}));
  const FleetGrid only_k = parse_grid("K=2");
  EXPECT_EQ(only_k.trucks, std::vector<int>{2});
  EXPECT_EQ(only_k.drones, std::vector<int>{1});
  EXPECT_THROW(parse_grid("Q=1"), std::invalid_argument);
  EXPECT_THROW(parse_grid("K"), std::invalid_argument);
}

TEST(Glob, MatchesFileNamesSorted) {
  const fs::path dir = scratch("glob");
  for (const char* name : {"b_1.rpp", "a_2.rpp", "a_1.rpp", "a_1.txt"}) std::ofstream(dir / name) << "x";
  const auto hits = expand_glob((dir / "a_*.rpp").string());
  ASSERT_EQ(hits.size(), 2u);
  EXPECT_EQ(fs::path(hits[0]).filename(), "a_1.rpp");
  EXPECT_EQ(fs::path(hits[1]).filename(), "a_2.rpp");
  EXPECT_TRUE(expand_glob((dir / "zzz*").string()).empty());
  EXPECT_EQ(expand_glob((dir / "b_1.rpp").string()).size(), 1u);
}

TEST(Generate, WritesNamedFilesDeterministically) {
  const fs::path a = scratch("gen_a");
  const fs::path b = scratch("gen_b");
  for (const fs::path& dir : {a, b}) {
    const Result r = run_cli({"generate", "--nodes", "50", "--edges", "100", "--required", "15", "--count", "5",
                              "--seed", "3", "--out", dir.string()});
    ASSERT_EQ(r.code, 0) << r.err;
  }
  for (int i = 1; i <= 5; ++i) {
    const std::string name = "N50E100R15_s3_" + std::to_string(i) + ".rpp";
    ASSERT_TRUE(fs::exists(a / name)) << name;
    EXPECT_EQ(slurp(a / name), slurp(b / name));
    const Instance inst = load_instance(a / name);
    EXPECT_EQ(inst.num_required(), 15);
    EXPECT_EQ(inst.name, "N50E100R15_s3_" + std::to_string(i));
  }
  EXPECT_NE(slurp(a / "N50E100R15_s3_1.rpp"), slurp(a / "N50E100R15_s3_2.rpp"));
}

TEST(Generate, CountZeroWritesNothing) {
  const fs::path dir = scratch("gen_zero");
  const Result r = run_cli({"generate", "--count", "0", "--out", dir.string()});
  EXPECT_EQ(r.code, 0);
  EXPECT_TRUE(fs::is_empty(dir));
}

TEST(Generate, InvalidConfigIsAnError) {
  const fs::path dir = scratch("gen_bad");
  const Result r = run_cli({"generate", "--nodes", "10", "--edges", "5", "--out", dir.string()});
  EXPECT_NE(r.code, 0);
  EXPECT_NE(r.err.find("error"), std::string::npos);
}

class SolveCommand : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = scratch(::testing::UnitTest::GetInstance()->current_test_info()->name());
    ASSERT_EQ(run_cli({"generate", "--nodes", "20", "--edges", "40", "--required", "6", "--count", "1", "--out",
                       dir_.string()})
                  .code,
              0);
    instance_ = (dir_ / "N20E40R6_s1_1.rpp").string();
  }

  std::vector<std::string> small(std::vector<std::string> extra) const {
    std::vector<std::string> args{"solve",        "--instance", instance_, "-K", "2", "-M", "1",
                                  "--pop-min",    "8",          "--pop-max", "16", "--generations", "3"};
    args.insert(args.end(), extra.begin(), extra.end());
    return args;
  }

  fs::path dir_;
  std::string instance_;
};

TEST_F(SolveCommand, WritesPlanTraceAndSummary) {
  const Result r = run_cli(small({"--delta", "5", "--seed", "4", "--out-dir", (dir_ / "out").string()}));
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out.rfind("makespan_min=", 0), 0u);
  const fs::path stem = dir_ / "out" / "N20E40R6_s1_1_K2M1_s4";
  const std::string summary = slurp(stem.string() + ".summary.csv");
  EXPECT_NE(summary.find("instance,trucks,drones,tau_h,delta,seed,makespan_min,feasible,violation_min\n"),
            std::string::npos);
  EXPECT_NE(summary.find("# delta=5\n"), std::string::npos);
  EXPECT_NE(summary.find("N20E40R6_s1_1,2,1,1,5,4,"), std::string::npos);
  const std::string trace = slurp(stem.string() + ".trace.csv");
  EXPECT_NE(trace.find("# pop_min=8\n"), std::string::npos);
  EXPECT_NE(trace.find("generation,best_cost_min"), std::string::npos);
  const std::string plan = slurp(stem.string() + ".plan.json");
  EXPECT_NE(plan.find("\"rppmtd-plan/1\""), std::string::npos);
}

TEST_F(SolveCommand, OmittedDeltaIsUnbounded) {
  const Result r = run_cli(small({"--out-dir", dir_.string()}));
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(slurp(dir_ / "N20E40R6_s1_1_K2M1_s1.summary.csv").find("# delta=unbounded\n"), std::string::npos);
}

TEST_F(SolveCommand, SameSeedGivesIdenticalOutputs) {
  const fs::path a = dir_ / "a";
  const fs::path b = dir_ / "b";
  ASSERT_EQ(run_cli(small({"--no-timing", "--out-dir", a.string()})).code, 0);
  ASSERT_EQ(run_cli(small({"--no-timing", "--out-dir", b.string()})).code, 0);
  for (const char* ext : {".plan.json", ".trace.csv", ".summary.csv"}) {
    const std::string name = std::string("N20E40R6_s1_1_K2M1_s1") + ext;
    EXPECT_EQ(slurp(a / name), slurp(b / name)) << name;
    EXPECT_FALSE(slurp(a / name).empty());
  }
}

TEST_F(SolveCommand, TauAndBetaConflict) {
  const Result r = run_cli(small({"--tau", "1", "--beta", "2"}));
  EXPECT_NE(r.code, 0);
  EXPECT_NE((r.err + r.out).find("excludes"), std::string::npos);
}

TEST_F(SolveCommand, BetaSetsTheEndurance) {
  const Result r = run_cli(small({"--beta", "2", "--out-dir", dir_.string()}));
  ASSERT_EQ(r.code, 0) << r.err;
  const std::string summary = slurp(dir_ / "N20E40R6_s1_1_K2M1_s1.summary.csv");
  EXPECT_NE(summary.find("# beta=2\n"), std::string::npos);
  const double tau = tau_from_beta(load_instance(instance_), 2.0);
  const auto at = summary.find("# tau_h=");
  ASSERT_NE(at, std::string::npos);
  EXPECT_DOUBLE_EQ(std::stod(summary.substr(at + 8)), tau);
}

TEST_F(SolveCommand, MissingInstanceFails) {
  const Result r = run_cli({"solve", "--instance", (dir_ / "missing.rpp").string()});
  EXPECT_NE(r.code, 0);
}

TEST_F(SolveCommand, MalformedInstanceExitsWithTwo) {
  const fs::path bad = dir_ / "bad.rpp";
  std::ofstream(bad) << "RPPMTD 1\nN x\n";
  const Result r = run_cli({"solve", "--instance", bad.string()});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("line 2"), std::string::npos) << r.err;
}

TEST_F(SolveCommand, TracePlotDataKeepsFeasibleRows) {
  ASSERT_EQ(run_cli(small({"--out-dir", dir_.string()})).code, 0);
  const fs::path out = dir_ / "plot.csv";
  const Result r = run_cli({"trace-plot-data", "--trace", (dir_ / "N20E40R6_s1_1_K2M1_s1.trace.csv").string(),
                            "--out", out.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  std::istringstream in(slurp(out));
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "generation,best_makespan_min");
  double prev = INFINITY;
  int rows = 0;
  while (std::getline(in, line)) {
    const double v = std::stod(line.substr(line.find(',') + 1));
    EXPECT_LE(v, prev);
    prev = v;
    ++rows;
  }
  EXPECT_GE(rows, 1);
  EXPECT_LE(rows, 4);
}

TEST_F(SolveCommand, TracePlotDataRejectsEmptyTrace) {
  const fs::path empty = dir_ / "empty.csv";
  std::ofstream(empty) << "# seed=1\n";
  EXPECT_NE(run_cli({"trace-plot-data", "--trace", empty.string()}).code, 0);
}

TEST_F(SolveCommand, BenchmarkRowsAndClassMeans) {
  const fs::path out = dir_ / "bench.csv";
  const Result r = run_cli({"benchmark", "--instances", (dir_ / "*.rpp").string(), "--grid", "K=1,2;M=1",
                            "--tau-list", "0.5", "--seeds", "1..2", "--pop-min", "6", "--pop-max", "12",
                            "--generations", "2", "--no-timing", "--out", out.string(), "--jobs", "2"});
  ASSERT_EQ(r.code, 0) << r.err;
  std::istringstream in(slurp(out));
  std::string line;
  std::vector<std::string> rows;
  bool header = false;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (!header) {
      EXPECT_EQ(line, "instance,trucks,drones,tau_h,delta,seed,makespan_min,feasible,violation_min,runtime_min");
      header = true;
      continue;
    }
    rows.push_back(line);
  }
  ASSERT_EQ(rows.size(), 6u);
  EXPECT_EQ(rows[0].rfind("N20E40R6_s1_1,1,1,0.5,unbounded,1,", 0), 0u);
  EXPECT_EQ(rows[3].rfind("N20E40R6_s1_1,2,1,0.5,unbounded,2,", 0), 0u);
  EXPECT_EQ(rows[4].rfind("N20E40R6,1,1,0.5,unbounded,mean,", 0), 0u);
  auto field = [](const std::string& row, int k) {
    std::istringstream ss(row);
    std::string f;
    for (int i = 0; i <= k; ++i) std::getline(ss, f, ',');
    return std::stod(f);
  };
  EXPECT_DOUBLE_EQ(field(rows[4], 6), (field(rows[0], 6) + field(rows[1], 6)) / 2.0);
  EXPECT_DOUBLE_EQ(field(rows[5], 6), (field(rows[2], 6) + field(rows[3], 6)) / 2.0);
}

TEST(Benchmark, EmptyGlobIsAnError) {
  const fs::path dir = scratch("bench_empty");
  const Result r = run_cli({"benchmark", "--instances", (dir / "*.rpp").string()});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("no instance files"), std::string::npos);
}

TEST(Oracle, HiddenCommandSolvesTinyInstances) {
  const fs::path dir = scratch("oracle");
  ASSERT_EQ(run_cli({"generate", "--nodes", "8", "--edges", "12", "--required", "3", "--count", "1", "--out",
                     dir.string()})
                .code,
            0);
  const Result r = run_cli({"oracle", "--instance", (dir / "N8E12R3_s1_1.rpp").string(), "-K", "1", "-M", "1"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out.rfind("makespan_min=", 0), 0u);
  EXPECT_NE(r.out.find("feasible=yes"), std::string::npos);
}

TEST(Cli, ConfigFileSuppliesDefaultsAndFlagsWin) {
  const fs::path dir = scratch("config");
  ASSERT_EQ(run_cli({"generate", "--nodes", "15", "--edges", "30", "--required", "4", "--count", "1", "--out",
                     dir.string()})
                .code,
            0);
  const fs::path cfg = dir / "run.toml";
  std::ofstream(cfg) << "[solve]\npop-min = 6\npop-max = 12\ngenerations = 2\nseed = 9\n";
  const Result r = run_cli({"--config", cfg.string(), "solve", "--instance", (dir / "N15E30R4_s1_1.rpp").string(),
                            "--seed", "5", "--out-dir", dir.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  const std::string summary = slurp(dir / "N15E30R4_s1_1_K1M1_s5.summary.csv");
  EXPECT_NE(summary.find("# pop_min=6\n"), std::string::npos);
  EXPECT_NE(summary.find("# generations=2\n"), std::string::npos);
  EXPECT_NE(summary.find("# seed=5\n"), std::string::npos);
}

TEST(Cli, NoSubcommandIsAnError) { EXPECT_NE(run_cli({}).code, 0); }

}  // namespace
}  // namespace rpp::cli
