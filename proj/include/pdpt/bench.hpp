#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pdpt/instance.hpp"
#include "pdpt/instance_io.hpp"
#include "pdpt/solution.hpp"

namespace pdpt {

enum class Method {
  greedy,
  cw,
  multistart,
  grasp_greedy,
  grasp_multistart,
  vnd,
  alns,
  sa,
  mix,
  ga_sa_rand,
  ga_sa_cons,
  ga_taboo_rand,
  ga_taboo_cons,
};

std::span<const Method> all_methods();
std::string_view to_string(Method m);
std::optional<Method> parse_method(std::string_view name);

// "key=value,key=value"; throws Error(config_error) on malformed input or
// unknown keys. Recognised keys: starts, alpha, grasp_iterations,
// alns_iterations, sa_iterations, mix_rounds, mix_batch, population,
// generations, workers.
using ParamMap = std::map<std::string, std::string>;
ParamMap parse_params(std::string_view text);
// Sorted "key=value" pairs joined by ';' (CSV safe). Empty map gives "-".
std::string params_digest(const ParamMap& params);

struct MethodOutput {
  Solution solution;
  // Cost sequences that must never increase (one per improvement stage).
  std::vector<std::vector<double>> traces;
};

// Runs one method end to end. Local-search methods start from the output of
// the greedy method (greedy construction plus one transshipment pass).
MethodOutput run_method(const Instance& instance, Method method, std::uint64_t seed,
                        const ParamMap& params = {});

bool non_increasing(std::span<const double> trace, double tolerance = 1e-9);

struct RunRecord {
  std::string instance;
  int size = 0;
  int vehicles = 0;
  std::string method;
  double cost = 0.0;  // NaN when the run failed
  double time_s = 0.0;
  std::uint64_t seed = 0;
  std::string params;
  std::string status = "ok";
  bool monotone = true;
};

struct SolveOutcome {
  RunRecord record;
  std::optional<Solution> solution;  // set when status == "ok"
};

// Augments the raw file with `seed`, runs the method, audits feasibility.
// Failures are reported through record.status (an ErrorCode name or
// AUDIT_FAILURE), never thrown, except for config errors in `params`.
SolveOutcome solve_one(const std::string& name, const RawPdptwFile& raw, AugmentationConfig cfg, Method method,
                       std::uint64_t seed, const ParamMap& params);

struct BenchInput {
  std::string name;
  RawPdptwFile raw;
};

struct BenchConfig {
  std::vector<BenchInput> instances;
  std::vector<Method> methods;
  std::vector<std::uint64_t> seeds;
  AugmentationConfig augmentation;  // seed field is replaced by each run's seed
  ParamMap params;
  int workers = 1;
};

// Cross product of instances, methods and seeds; rows sorted by
// (instance, method, seed) whatever order the workers finish in.
std::vector<RunRecord> run_bench(const BenchConfig& config);

inline constexpr std::string_view kCsvHeader = "instance,size,vehicles,method,cost,time_s,seed,params";

void write_csv(std::ostream& out, std::span<const RunRecord> records);
void write_csv_row(std::ostream& out, const RunRecord& record);
// Whitespace separated "size cost time method", failed runs skipped.
void write_plot_data(std::ostream& out, std::span<const RunRecord> records);
// Mean and sample standard deviation of cost and time per (instance, method).
void write_summary(std::ostream& out, std::span<const RunRecord> records);

}  // namespace pdpt
