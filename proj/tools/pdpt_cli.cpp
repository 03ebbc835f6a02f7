// pdpt: solve one PDP-T instance or run a benchmark matrix.
//
//   pdpt solve --instance lc204.txt --method greedy --transfers 3 --seed 7
//   pdpt bench --instance lc204.txt --seeds 0..9 --out results.csv

#include <charconv>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "pdpt/bench.hpp"
#include "pdpt/error.hpp"
#include "pdpt/instance_io.hpp"
#include "pdpt/model.hpp"
#include "pdpt/solution_io.hpp"

namespace fs = std::filesystem;
using namespace pdpt;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitInfeasible = 3;
constexpr int kExitAudit = 4;

struct Options {
  std::vector<std::string> instances;
  std::vector<std::string> methods;
  std::string transfers = "random";
  std::string vehicles = "random";
  std::string depots = "scattered";
  std::uint64_t seed = 0;
  std::string seeds = "0..9";
  std::string out;
  std::string plot;
  std::string summary;
  int workers = 1;
  std::string params;
};

std::string resolve_path(const std::string& path) {
  if (fs::exists(path)) return path;
  if (const char* root = std::getenv("PDPT_DATA_DIR")) {
    fs::path p = fs::path(root) / path;
    if (fs::exists(p)) return p.string();
  }
  return path;
}

std::uint64_t parse_u64(const std::string& s) {
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size())
    throw Error(ErrorCode::config_error, "expected an unsigned integer, got '" + s + "'");
  return v;
}

AugmentationConfig augmentation(const Options& o) {
  AugmentationConfig cfg;
  if (o.transfers != "random") cfg.transfer_count = static_cast<int>(parse_u64(o.transfers));
  if (o.vehicles == "file") {
    cfg.fleet = AugmentationConfig::Fleet::file;
  } else if (o.vehicles == "random") {
    cfg.fleet = AugmentationConfig::Fleet::random;
  } else {
    cfg.fleet = AugmentationConfig::Fleet::fixed;
    cfg.vehicle_count = static_cast<int>(parse_u64(o.vehicles));
  }
  if (o.depots == "shared")
    cfg.depot_mode = DepotMode::shared;
  else if (o.depots == "scattered")
    cfg.depot_mode = DepotMode::scattered;
  else
    throw Error(ErrorCode::config_error, "--depots takes shared or scattered");
  return cfg;
}

std::vector<std::uint64_t> parse_seeds(const std::string& text) {
  const auto dots = text.find("..");
  if (dots == std::string::npos) return {parse_u64(text)};
  const auto a = parse_u64(text.substr(0, dots));
  const auto b = parse_u64(text.substr(dots + 2));
  if (b < a) throw Error(ErrorCode::config_error, "empty seed range " + text);
  std::vector<std::uint64_t> out;
  for (auto s = a; s <= b; ++s) out.push_back(s);
  return out;
}

std::vector<Method> parse_methods(const std::vector<std::string>& names) {
  std::vector<Method> out;
  for (const auto& list : names) {
    std::stringstream ss(list);
    for (std::string name; std::getline(ss, name, ',');) {
      auto m = parse_method(name);
      if (!m) throw Error(ErrorCode::config_error, "unknown method '" + name + "'");
      out.push_back(*m);
    }
  }
  if (names.empty()) out.assign(all_methods().begin(), all_methods().end());
  return out;
}

std::string method_list() {
  std::string s;
  for (Method m : all_methods()) s += (s.empty() ? "" : ", ") + std::string(to_string(m));
  return s;
}

int run_solve(const Options& o) {
  if (o.instances.size() != 1) throw Error(ErrorCode::config_error, "solve takes exactly one --instance");
  if (o.methods.size() != 1) throw Error(ErrorCode::config_error, "solve takes exactly one --method");
  const auto method = parse_methods(o.methods).front();
  const auto params = parse_params(o.params);
  const auto cfg = augmentation(o);
  const std::string path = resolve_path(o.instances.front());
  const auto raw = parse_lilim_file(path);
  const auto name = fs::path(path).stem().string();

  auto outcome = solve_one(name, raw, cfg, method, o.seed, params);
  write_csv(std::cout, std::span(&outcome.record, 1));
  if (outcome.record.status == "AUDIT_FAILURE") {
    std::cerr << "pdpt: solution failed the feasibility audit\n";
    return kExitAudit;
  }
  if (outcome.record.status != "ok") {
    std::cerr << "pdpt: " << outcome.record.status << '\n';
    if (outcome.record.status == "CONFIG_ERROR") return kExitConfig;
    return kExitInfeasible;
  }
  if (!o.out.empty()) {
    AugmentationConfig seeded = cfg;
    seeded.seed = o.seed;
    const auto instance = build_instance(raw, seeded);
    std::ofstream file(o.out);
    if (!file) throw Error(ErrorCode::input_error, "cannot write " + o.out);
    const auto schedule = propagate_schedule(instance, *outcome.solution);
    write_solution(file, *outcome.solution, outcome.record.cost, &schedule);
  }
  return 0;
}

int run_bench_cmd(const Options& o) {
  if (o.instances.empty()) throw Error(ErrorCode::config_error, "bench needs at least one --instance");
  BenchConfig cfg;
  for (const auto& p : o.instances) {
    const std::string path = resolve_path(p);
    cfg.instances.push_back({fs::path(path).stem().string(), parse_lilim_file(path)});
  }
  cfg.methods = parse_methods(o.methods);
  cfg.seeds = parse_seeds(o.seeds);
  cfg.augmentation = augmentation(o);
  cfg.params = parse_params(o.params);
  cfg.workers = o.workers;
  const auto records = run_bench(cfg);

  const std::string out = o.out.empty() ? "bench.csv" : o.out;
  std::ofstream csv(out);
  if (!csv) throw Error(ErrorCode::input_error, "cannot write " + out);
  write_csv(csv, records);
  const std::string plot = o.plot.empty() ? out + ".plot" : o.plot;
  std::ofstream plot_file(plot);
  write_plot_data(plot_file, records);
  const std::string summary = o.summary.empty() ? out + ".summary.csv" : o.summary;
  std::ofstream summary_file(summary);
  write_summary(summary_file, records);
  write_summary(std::cout, records);

  for (const auto& r : records)
    if (r.status == "AUDIT_FAILURE") return kExitAudit;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Pickup and delivery with transfers: heuristics and benchmarks"};
  app.require_subcommand(1);
  Options o;

  auto common = [&o](CLI::App* cmd) {
    cmd->add_option("--transfers", o.transfers, "transfer point count, or 'random'");
    cmd->add_option("--vehicles", o.vehicles, "fleet size: N, 'file' or 'random'");
    cmd->add_option("--depots", o.depots, "'shared' (file depot) or 'scattered'");
    cmd->add_option("--out", o.out, "output file");
    cmd->add_option("--params", o.params, "KEY=VAL,... method parameters");
  };

  auto* solve = app.add_subcommand("solve", "solve one instance with one method");
  solve->add_option("--instance", o.instances, "Li & Lim instance file")->required();
  solve->add_option("--method", o.methods, "one of: " + method_list())->required();
  solve->add_option("--seed", o.seed, "random seed");
  common(solve);

  auto* bench = app.add_subcommand("bench", "run instances x methods x seeds");
  bench->add_option("--instance", o.instances, "instance file (repeatable)")->required();
  bench->add_option("--method", o.methods, "method ids, comma separated (default: all)");
  bench->add_option("--seeds", o.seeds, "seed range A..B");
  bench->add_option("--workers", o.workers, "concurrent runs");
  bench->add_option("--plot", o.plot, "plot data file (default: <out>.plot)");
  bench->add_option("--summary", o.summary, "summary file (default: <out>.summary.csv)");
  common(bench);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    return solve->parsed() ? run_solve(o) : run_bench_cmd(o);
  } catch (const Error& e) {
    std::cerr << "pdpt: " << to_string(e.code()) << ": " << e.what() << '\n';
    switch (e.code()) {
      case ErrorCode::parse_error:
      case ErrorCode::structure_error:
      case ErrorCode::config_error:
      case ErrorCode::input_error:
        if (e.code() == ErrorCode::config_error && solve->parsed()) std::cerr << app.help();
        return kExitConfig;
      default:
        return kExitInfeasible;
    }
  }
}
