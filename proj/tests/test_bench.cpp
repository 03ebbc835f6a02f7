#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "fixtures.hpp"
#include "pdpt/bench.hpp"
#include "pdpt/error.hpp"
#include "pdpt/instance_io.hpp"

using namespace pdpt;
using namespace pdpt::test;
namespace fs = std::filesystem;

namespace {

struct CliRun {
  int status = -1;
  std::string out;
};

CliRun cli(const std::string& args) {
  CliRun run;
  const std::string cmd = std::string(PDPT_CLI_PATH) + " " + args + " 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return run;
  char buf[4096];
  while (std::size_t n = fread(buf, 1, sizeof buf, pipe)) run.out.append(buf, n);
  const int raw = pclose(pipe);
  run.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  return run;
}

fs::path scratch(const std::string& name) {
  auto dir = fs::temp_directory_path() / ("pdpt_test_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  return dir / name;
}

std::string write_file(const std::string& name, const std::string& text) {
  auto p = scratch(name);
  std::ofstream(p) << text;
  return p.string();
}

// depot (0,0); pickup (3,4); delivery (6,8)
const char* kOneRequest =
    "2 20 1\n"
    "0 0 0 0 0 100 0 0 0\n"
    "1 3 4 10 0 100 0 0 2\n"
    "2 6 8 -10 0 100 0 1 0\n";

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

std::string field(const std::string& row, int index) {
  std::stringstream ss(row);
  std::string f;
  for (int i = 0; i <= index; ++i) std::getline(ss, f, ',');
  return f;
}

}  // namespace

TEST(Methods, NamesRoundTrip) {
  ASSERT_EQ(all_methods().size(), 13u);
  for (Method m : all_methods()) EXPECT_EQ(parse_method(to_string(m)), m);
  EXPECT_FALSE(parse_method("tabu").has_value());
  EXPECT_EQ(to_string(Method::ga_taboo_cons), "ga-taboo-cons");
}

TEST(Params, ParseAndDigest) {
  auto p = parse_params("starts=4,alpha=0.2");
  EXPECT_EQ(p.at("starts"), "4");
  EXPECT_EQ(params_digest(p), "alpha=0.2;starts=4");
  EXPECT_EQ(params_digest({}), "-");
  EXPECT_TRUE(parse_params("").empty());
  for (const char* bad : {"starts", "bogus=1", "=3"}) {
    try {
      parse_params(bad);
      ADD_FAILURE() << bad;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::config_error) << bad;
    }
  }
}

TEST(Params, BadValueIsConfigError) {
  BenchInput in{"one", parse_lilim_file(write_file("one.txt", kOneRequest))};
  try {
    solve_one(in.name, in.raw, {}, Method::multistart, 0, parse_params("starts=abc"));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::config_error);
  }
}

TEST(Monotone, Helper) {
  EXPECT_TRUE(non_increasing(std::vector<double>{3, 3, 2}));
  EXPECT_FALSE(non_increasing(std::vector<double>{3, 2, 2.5}));
  EXPECT_TRUE(non_increasing(std::vector<double>{}));
}

TEST(Bench, SingleCell) {
  BenchConfig cfg;
  cfg.instances.push_back({"one", parse_lilim_file(write_file("one.txt", kOneRequest))});
  cfg.methods = {Method::greedy};
  cfg.seeds = {0};
  cfg.augmentation.transfer_count = 0;
  cfg.augmentation.depot_mode = DepotMode::shared;
  auto records = run_bench(cfg);
  std::ostringstream out;
  write_csv(out, records);
  auto rows = lines(out.str());
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0], "instance,size,vehicles,method,cost,time_s,seed,params");
  EXPECT_EQ(field(rows[1], 0), "one");
  EXPECT_EQ(field(rows[1], 1), "2");
  EXPECT_EQ(field(rows[1], 4), "20.000000");
  EXPECT_EQ(field(rows[1], 7), "-");
}

TEST(Bench, SortedAndDeterministic) {
  BenchConfig cfg;
  cfg.instances.push_back({"b", random_raw(12, 1)});
  cfg.instances.push_back({"a", random_raw(10, 2)});
  cfg.methods = {Method::vnd, Method::cw, Method::greedy, Method::alns};
  cfg.seeds = {3, 1, 2};
  cfg.params = parse_params("alns_iterations=50");
  cfg.workers = 3;
  auto first = run_bench(cfg);
  ASSERT_EQ(first.size(), 24u);
  for (std::size_t i = 1; i < first.size(); ++i) {
    const auto& p = first[i - 1];
    const auto& q = first[i];
    EXPECT_TRUE(std::tie(p.instance, p.method, p.seed) < std::tie(q.instance, q.method, q.seed));
  }
  cfg.workers = 1;
  auto second = run_bench(cfg);
  for (std::size_t i = 0; i < first.size(); ++i) {
    EXPECT_EQ(first[i].status, second[i].status);
    if (first[i].status == "ok") EXPECT_EQ(first[i].cost, second[i].cost);
    EXPECT_TRUE(first[i].monotone);
  }
}

TEST(Bench, FailedRunsRecorded) {
  RawPdptwFile raw = parse_lilim_file(write_file("one.txt", kOneRequest));
  raw.capacity = 5;
  auto out = solve_one("heavy", raw, {}, Method::greedy, 0, {});
  EXPECT_EQ(out.record.status, "NO_FEASIBLE_INSERTION");
  EXPECT_TRUE(std::isnan(out.record.cost));
  EXPECT_FALSE(out.solution.has_value());
  std::ostringstream csv, plot;
  write_csv_row(csv, out.record);
  EXPECT_NE(csv.str().find(",nan,"), std::string::npos);
  EXPECT_NE(csv.str().find("status=NO_FEASIBLE_INSERTION"), std::string::npos);
  write_plot_data(plot, std::span(&out.record, 1));
  EXPECT_TRUE(plot.str().empty());
}

TEST(Bench, PlotAndSummary) {
  std::vector<RunRecord> recs(3);
  for (int i = 0; i < 3; ++i) {
    recs[i].instance = "x";
    recs[i].size = 100;
    recs[i].method = "greedy";
    recs[i].cost = 10.0 + 2 * i;
    recs[i].time_s = 1.0;
    recs[i].seed = static_cast<std::uint64_t>(i);
  }
  std::ostringstream plot, summary;
  write_plot_data(plot, recs);
  EXPECT_EQ(lines(plot.str())[1], "100 12.000000 1.000000 greedy");
  write_summary(summary, recs);
  EXPECT_EQ(lines(summary.str())[1], "x,greedy,3,0,12.000000,2.000000,1.000000,0.000000");
}

TEST(Cli, SolveLc204) {
  auto run = cli("solve --instance " + data_path("lc204_synthetic.txt") +
                 " --method greedy --transfers 3 --seed 7");
  ASSERT_EQ(run.status, 0) << run.out;
  auto rows = lines(run.out);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(field(rows[1], 0), "lc204_synthetic");
  EXPECT_EQ(field(rows[1], 1), "100");
  EXPECT_EQ(field(rows[1], 6), "7");
}

TEST(Cli, UnknownMethod) {
  auto run = cli("solve --instance " + data_path("lc204_synthetic.txt") + " --method tabu");
  EXPECT_EQ(run.status, 2);
  EXPECT_NE(run.out.find("unknown method"), std::string::npos);
  EXPECT_NE(run.out.find("--method"), std::string::npos);
}

TEST(Cli, HandFileCost) {
  const auto path = write_file("one.txt", kOneRequest);
  const auto sol = scratch("one.sol").string();
  auto run = cli("solve --instance " + path + " --method greedy --transfers 0 --depots shared --out " + sol);
  ASSERT_EQ(run.status, 0) << run.out;
  EXPECT_EQ(field(lines(run.out)[1], 4), "20.000000");
  std::ifstream in(sol);
  std::string first;
  std::getline(in, first);
  EXPECT_EQ(first, "cost 20");
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(cli("solve --instance /nonexistent.txt --method greedy").status, 2);
  EXPECT_EQ(cli("solve --method greedy").status, 2);
  EXPECT_EQ(cli("solve --instance " + data_path("lc204_synthetic.txt") + " --method greedy --params x=1").status, 2);
  const auto broken = write_file("broken.txt", "1 50 1\n0 0 0 0 0 100 0 0\n");
  EXPECT_EQ(cli("solve --instance " + broken + " --method greedy").status, 2);
  std::string heavy = kOneRequest;
  heavy.replace(0, 6, "2 5 1\n");
  const auto path = write_file("heavy.txt", heavy);
  auto run = cli("solve --instance " + path + " --method greedy");
  EXPECT_EQ(run.status, 3) << run.out;
}

TEST(Cli, DataDirFallback) {
  const std::string cmd = "PDPT_DATA_DIR=" + std::string(PDPT_TEST_DATA_DIR) + " " + PDPT_CLI_PATH +
                          " solve --instance lc204_synthetic.txt --method cw --seed 1 > /dev/null 2>&1";
  EXPECT_EQ(WEXITSTATUS(std::system(cmd.c_str())), 0);
}

TEST(Cli, BenchWritesFiles) {
  const auto out = scratch("bench.csv").string();
  auto run = cli("bench --instance " + data_path("lc204_synthetic.txt") + " --method greedy,cw --seeds 0..2 --out " + out);
  ASSERT_EQ(run.status, 0) << run.out;
  std::ifstream csv(out), plot(out + ".plot"), summary(out + ".summary.csv");
  std::stringstream a, b, c;
  a << csv.rdbuf();
  b << plot.rdbuf();
  c << summary.rdbuf();
  EXPECT_EQ(lines(a.str()).size(), 7u);
  EXPECT_EQ(lines(b.str()).size(), 6u);
  EXPECT_EQ(lines(c.str()).size(), 3u);
  EXPECT_NE(run.out.find("cost_mean"), std::string::npos);
}
