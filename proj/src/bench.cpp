#include "pdpt/bench.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <mutex>
#include <sstream>
#include <thread>
#include <tuple>

#include "pdpt/constructive.hpp"
#include "pdpt/error.hpp"
#include "pdpt/genetic.hpp"
#include "pdpt/grasp.hpp"
#include "pdpt/local_search.hpp"
#include "pdpt/model.hpp"

namespace pdpt {

namespace {

constexpr std::array kMethods{Method::greedy,        Method::cw,         Method::multistart, Method::grasp_greedy,
                              Method::grasp_multistart, Method::vnd,     Method::alns,       Method::sa,
                              Method::mix,           Method::ga_sa_rand, Method::ga_sa_cons, Method::ga_taboo_rand,
                              Method::ga_taboo_cons};

constexpr std::array<std::string_view, 10> kParamKeys{"alns_iterations", "alpha",    "generations", "grasp_iterations",
                                                      "mix_batch",       "mix_rounds", "population", "sa_iterations",
                                                      "starts",          "workers"};

int int_param(const ParamMap& p, const char* key, int fallback) {
  auto it = p.find(key);
  if (it == p.end()) return fallback;
  try {
    std::size_t used = 0;
    const int v = std::stoi(it->second, &used);
    if (used != it->second.size()) throw std::invalid_argument(key);
    return v;
  } catch (const std::logic_error&) {
    throw Error(ErrorCode::config_error, std::string("parameter ") + key + " needs an integer");
  }
}

double real_param(const ParamMap& p, const char* key, double fallback) {
  auto it = p.find(key);
  if (it == p.end()) return fallback;
  try {
    std::size_t used = 0;
    const double v = std::stod(it->second, &used);
    if (used != it->second.size()) throw std::invalid_argument(key);
    return v;
  } catch (const std::logic_error&) {
    throw Error(ErrorCode::config_error, std::string("parameter ") + key + " needs a number");
  }
}

MethodOutput greedy_with_transship(const Instance& instance) {
  MethodOutput out;
  Solution s = greedy_construct(instance);
  const double before = solution_cost(instance, s);
  out.solution = transship_improve(instance, std::move(s));
  out.traces.push_back({before, solution_cost(instance, out.solution)});
  return out;
}

MethodOutput run_ga_method(const Instance& instance, GaMethod kind, GaInit init, std::uint64_t seed,
                           const ParamMap& params) {
  GaParams ga;
  ga.method = kind;
  ga.init = init;
  ga.seed = seed;
  ga.population_size = int_param(params, "population", ga.population_size);
  ga.generation_cap = int_param(params, "generations", ga.generation_cap);
  ga.workers = int_param(params, "workers", 1);
  ga.grasp_alpha = real_param(params, "alpha", ga.grasp_alpha);
  auto result = run_ga(instance, ga);
  MethodOutput out;
  out.solution = std::move(result.solution);
  std::vector<double> best;
  for (const auto& g : result.trace) best.push_back(g.best);
  out.traces.push_back(std::move(best));
  return out;
}

}  // namespace

std::span<const Method> all_methods() { return kMethods; }

std::string_view to_string(Method m) {
  switch (m) {
    case Method::greedy: return "greedy";
    case Method::cw: return "cw";
    case Method::multistart: return "multistart";
    case Method::grasp_greedy: return "grasp-greedy";
    case Method::grasp_multistart: return "grasp-multistart";
    case Method::vnd: return "vnd";
    case Method::alns: return "alns";
    case Method::sa: return "sa";
    case Method::mix: return "mix";
    case Method::ga_sa_rand: return "ga-sa-rand";
    case Method::ga_sa_cons: return "ga-sa-cons";
    case Method::ga_taboo_rand: return "ga-taboo-rand";
    case Method::ga_taboo_cons: return "ga-taboo-cons";
  }
  return "?";
}

std::optional<Method> parse_method(std::string_view name) {
  for (Method m : kMethods)
    if (to_string(m) == name) return m;
  return std::nullopt;
}

ParamMap parse_params(std::string_view text) {
  ParamMap out;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t comma = text.find(',', pos);
    if (comma == std::string_view::npos) comma = text.size();
    const std::string_view item = text.substr(pos, comma - pos);
    pos = comma + 1;
    if (item.empty()) continue;
    const std::size_t eq = item.find('=');
    if (eq == std::string_view::npos || eq == 0 || eq + 1 == item.size())
      throw Error(ErrorCode::config_error, "malformed parameter '" + std::string(item) + "'");
    std::string key(item.substr(0, eq));
    if (std::find(kParamKeys.begin(), kParamKeys.end(), key) == kParamKeys.end())
      throw Error(ErrorCode::config_error, "unknown parameter '" + key + "'");
    out[key] = std::string(item.substr(eq + 1));
  }
  return out;
}

std::string params_digest(const ParamMap& params) {
  if (params.empty()) return "-";
  std::string out;
  for (const auto& [k, v] : params) {
    if (!out.empty()) out += ';';
    out += k + '=' + v;
  }
  return out;
}

bool non_increasing(std::span<const double> trace, double tolerance) {
  for (std::size_t i = 1; i < trace.size(); ++i)
    if (trace[i] > trace[i - 1] + tolerance) return false;
  return true;
}

MethodOutput run_method(const Instance& instance, Method method, std::uint64_t seed, const ParamMap& params) {
  switch (method) {
    case Method::greedy: return greedy_with_transship(instance);
    case Method::cw: {
      MethodOutput out;
      Solution s = clarke_wright(instance);
      const double before = solution_cost(instance, s);
      out.solution = transship_improve(instance, std::move(s));
      out.traces.push_back({before, solution_cost(instance, out.solution)});
      return out;
    }
    case Method::multistart: {
      MultistartParams mp;
      mp.starts = int_param(params, "starts", mp.starts);
      mp.seed = seed;
      return MethodOutput{multistart(instance, mp), {}};
    }
    case Method::grasp_greedy:
    case Method::grasp_multistart: {
      GraspParams gp;
      gp.alpha = real_param(params, "alpha", gp.alpha);
      gp.iterations = int_param(params, "grasp_iterations", gp.iterations);
      gp.seed = seed;
      Improver improver;
      if (method == Method::grasp_greedy)
        improver = [](const Instance& in, Solution s) { return transship_improve(in, std::move(s)); };
      else
        improver = [](const Instance& in, Solution s) { return transship_until_stable(in, std::move(s)); };
      auto result = grasp_run(instance, gp, improver);
      return MethodOutput{std::move(result.best), {std::move(result.trace)}};
    }
    case Method::vnd: {
      auto start = greedy_with_transship(instance);
      auto result = vnd(instance, std::move(start.solution));
      start.traces.push_back(std::move(result.trace));
      return MethodOutput{std::move(result.solution), std::move(start.traces)};
    }
    case Method::alns: {
      auto start = greedy_with_transship(instance);
      AlnsParams ap;
      ap.iterations = int_param(params, "alns_iterations", ap.iterations);
      ap.seed = seed;
      auto result = alns(instance, std::move(start.solution), ap);
      start.traces.push_back(std::move(result.trace));
      return MethodOutput{std::move(result.solution), std::move(start.traces)};
    }
    case Method::sa: {
      auto start = greedy_with_transship(instance);
      SaSchedule schedule;
      schedule.iterations = int_param(params, "sa_iterations", schedule.iterations);
      schedule.seed = seed;
      auto result = simulated_annealing(instance, std::move(start.solution), schedule);
      start.traces.push_back(std::move(result.best_trace));
      return MethodOutput{std::move(result.solution), std::move(start.traces)};
    }
    case Method::mix: {
      auto start = greedy_with_transship(instance);
      MixParams mp;
      mp.rounds = int_param(params, "mix_rounds", mp.rounds);
      mp.batch_iterations = int_param(params, "mix_batch", mp.batch_iterations);
      mp.alns.seed = seed;
      auto result = mix_vnd_alns(instance, std::move(start.solution), mp);
      start.traces.push_back(std::move(result.trace));
      return MethodOutput{std::move(result.solution), std::move(start.traces)};
    }
    case Method::ga_sa_rand: return run_ga_method(instance, GaMethod::sa_hybrid, GaInit::random, seed, params);
    case Method::ga_sa_cons: return run_ga_method(instance, GaMethod::sa_hybrid, GaInit::constructive, seed, params);
    case Method::ga_taboo_rand: return run_ga_method(instance, GaMethod::taboo_hybrid, GaInit::random, seed, params);
    case Method::ga_taboo_cons:
      return run_ga_method(instance, GaMethod::taboo_hybrid, GaInit::constructive, seed, params);
  }
  throw Error(ErrorCode::config_error, "unknown method");
}

SolveOutcome solve_one(const std::string& name, const RawPdptwFile& raw, AugmentationConfig cfg, Method method,
                       std::uint64_t seed, const ParamMap& params) {
  SolveOutcome out;
  auto& rec = out.record;
  rec.instance = name;
  rec.method = std::string(to_string(method));
  rec.seed = seed;
  rec.params = params_digest(params);
  rec.cost = std::numeric_limits<double>::quiet_NaN();
  cfg.seed = seed;
  Instance instance;
  try {
    instance = build_instance(raw, cfg);
  } catch (const Error& e) {
    rec.status = std::string(to_string(e.code()));
    return out;
  }
  rec.size = static_cast<int>(instance.customer_count());
  rec.vehicles = static_cast<int>(instance.vehicle_count());

  const auto t0 = std::chrono::steady_clock::now();
  try {
    MethodOutput result = run_method(instance, method, seed, params);
    rec.time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    for (const auto& trace : result.traces) rec.monotone = rec.monotone && non_increasing(trace);
    if (!check_feasibility(instance, result.solution).feasible) {
      rec.status = "AUDIT_FAILURE";
      return out;
    }
    rec.cost = solution_cost(instance, result.solution);
    out.solution = std::move(result.solution);
  } catch (const Error& e) {
    rec.time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (e.code() == ErrorCode::config_error) throw;
    rec.status = std::string(to_string(e.code()));
  }
  return out;
}

std::vector<RunRecord> run_bench(const BenchConfig& config) {
  struct Cell {
    std::size_t instance;
    Method method;
    std::uint64_t seed;
  };
  std::vector<Cell> cells;
  for (std::size_t i = 0; i < config.instances.size(); ++i)
    for (Method m : config.methods)
      for (std::uint64_t s : config.seeds) cells.push_back({i, m, s});
  // Validate parameters once so that a typo fails fast.
  (void)int_param(config.params, "workers", 1);

  std::vector<RunRecord> records(cells.size());
  std::atomic<std::size_t> next{0};
  std::mutex error_mutex;
  std::exception_ptr error;
  auto worker = [&] {
    for (std::size_t c = next++; c < cells.size(); c = next++) {
      try {
        const auto& cell = cells[c];
        const auto& in = config.instances[cell.instance];
        records[c] = solve_one(in.name, in.raw, config.augmentation, cell.method, cell.seed, config.params).record;
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
      }
    }
  };
  const int w = std::max(1, config.workers);
  if (w == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < w; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (error) std::rethrow_exception(error);
  std::sort(records.begin(), records.end(), [](const RunRecord& a, const RunRecord& b) {
    return std::tie(a.instance, a.method, a.seed) < std::tie(b.instance, b.method, b.seed);
  });
  return records;
}

namespace {

std::string fmt(double v) {
  if (std::isnan(v)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

}  // namespace

void write_csv_row(std::ostream& out, const RunRecord& r) {
  std::string params = r.params;
  if (r.status != "ok") params += ";status=" + r.status;
  out << r.instance << ',' << r.size << ',' << r.vehicles << ',' << r.method << ',' << fmt(r.cost) << ','
      << fmt(r.time_s) << ',' << r.seed << ',' << params << '\n';
}

void write_csv(std::ostream& out, std::span<const RunRecord> records) {
  out << kCsvHeader << '\n';
  for (const auto& r : records) write_csv_row(out, r);
}

void write_plot_data(std::ostream& out, std::span<const RunRecord> records) {
  for (const auto& r : records)
    if (r.status == "ok") out << r.size << ' ' << fmt(r.cost) << ' ' << fmt(r.time_s) << ' ' << r.method << '\n';
}

void write_summary(std::ostream& out, std::span<const RunRecord> records) {
  std::map<std::pair<std::string, std::string>, std::vector<const RunRecord*>> groups;
  for (const auto& r : records) groups[{r.instance, r.method}].push_back(&r);
  out << "instance,method,runs,failed,cost_mean,cost_std,time_mean,time_std\n";
  for (const auto& [key, rows] : groups) {
    std::vector<double> cost, time;
    for (const auto* r : rows)
      if (r->status == "ok") {
        cost.push_back(r->cost);
        time.push_back(r->time_s);
      }
    auto mean_std = [](const std::vector<double>& v) {
      if (v.empty()) return std::pair{std::numeric_limits<double>::quiet_NaN(), std::numeric_limits<double>::quiet_NaN()};
      double m = 0.0;
      for (double x : v) m += x;
      m /= static_cast<double>(v.size());
      double s = 0.0;
      for (double x : v) s += (x - m) * (x - m);
      return std::pair{m, v.size() > 1 ? std::sqrt(s / static_cast<double>(v.size() - 1)) : 0.0};
    };
    const auto [cm, cs] = mean_std(cost);
    const auto [tm, ts] = mean_std(time);
    out << key.first << ',' << key.second << ',' << rows.size() << ',' << rows.size() - cost.size() << ','
        << fmt(cm) << ',' << fmt(cs) << ',' << fmt(tm) << ',' << fmt(ts) << '\n';
  }
}

}  // namespace pdpt
