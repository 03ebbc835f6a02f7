#include <algorithm>
#include <cfloat>
#include <cmath>
#include <cstdio>
#include <set>
#include <thread>

#include "pdpt/error.hpp"
#include "pdpt/genetic.hpp"
#include "pdpt/grasp.hpp"

namespace pdpt {

namespace {

int resolve_workers(int workers, std::size_t jobs) {
  if (workers <= 0) workers = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  return static_cast<int>(std::min<std::size_t>(static_cast<std::size_t>(workers), std::max<std::size_t>(jobs, 1)));
}

// Runs body(i) for i in [0, n) on up to `workers` threads. Each index is
// handled exactly once, so results do not depend on scheduling.
template <class Body>
void parallel_for(std::size_t n, int workers, Body body) {
  const int w = resolve_workers(workers, n);
  if (w <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::vector<std::thread> pool;
  for (int t = 0; t < w; ++t)
    pool.emplace_back([&, t] {
      for (std::size_t i = static_cast<std::size_t>(t); i < n; i += static_cast<std::size_t>(w)) body(i);
    });
  for (auto& th : pool) th.join();
}

struct FiniteStats {
  int count = 0;
  double mean = 0.0;
  double variance = 0.0;  // population variance
  double best = kInfiniteFitness;
};

FiniteStats finite_stats(std::span<const double> f) {
  FiniteStats s;
  double sum = 0.0;
  for (double v : f)
    if (std::isfinite(v)) {
      ++s.count;
      sum += v;
      s.best = std::min(s.best, v);
    }
  if (s.count == 0) return s;
  s.mean = sum / s.count;
  double sq = 0.0;
  for (double v : f)
    if (std::isfinite(v)) sq += (v - s.mean) * (v - s.mean);
  s.variance = sq / s.count;
  return s;
}

}  // namespace

std::vector<double> evaluate(const Instance& instance, std::span<const Chromosome> members, int workers) {
  std::vector<double> out(members.size(), kInfiniteFitness);
  parallel_for(members.size(), workers, [&](std::size_t i) { out[i] = fitness(instance, members[i]); });
  return out;
}

Population init_random(const Instance& instance, int size, std::uint64_t seed, int workers, double p_edge) {
  if (size < 0) throw Error(ErrorCode::config_error, "population size must be >= 0");
  const int n = static_cast<int>(instance.node_count());
  const int m = static_cast<int>(instance.vehicle_count());
  Population pop;
  if (size == 0) return pop;
  if (m == 0) throw Error(ErrorCode::input_error, "instance has no vehicles");

  std::vector<NodeId> shared;
  for (const auto& r : instance.requests()) {
    shared.push_back(r.pickup);
    shared.push_back(r.delivery);
  }
  for (NodeId t : instance.transfer_points()) shared.push_back(t);
  std::sort(shared.begin(), shared.end());
  shared.erase(std::unique(shared.begin(), shared.end()), shared.end());
  // Slice layout for noise arcs: sources = shared + start depot, targets = shared + end depot.
  const std::uint64_t width = shared.size() + 1;
  const std::uint64_t per_slice = width * width;
  const std::uint64_t total = per_slice * static_cast<std::uint64_t>(m);
  const double p = p_edge >= 0.0 ? p_edge : 0.5 / static_cast<double>(total);

  const Chromosome shape(n, m);
  pop.members.resize(static_cast<std::size_t>(size));
  for (int member = 0; member < size; ++member) {
    Rng rng(derive_seed(seed, {static_cast<std::uint64_t>(member)}));
    struct Arc {
      VehicleId k;
      NodeId i, j;
    };
    std::vector<Arc> arcs;
    std::vector<std::vector<RequestId>> carried(static_cast<std::size_t>(m));
    std::uniform_int_distribution<VehicleId> pick_vehicle(0, m - 1);
    for (const auto& r : instance.requests()) carried[static_cast<std::size_t>(pick_vehicle(rng))].push_back(r.id);
    for (VehicleId k = 0; k < m; ++k) {
      auto tokens = carried[static_cast<std::size_t>(k)];
      tokens.insert(tokens.end(), tokens.begin(), tokens.end());
      std::shuffle(tokens.begin(), tokens.end(), rng);
      std::vector<bool> picked(instance.request_count(), false);
      NodeId prev = instance.vehicle(k).start_depot;
      for (RequestId r : tokens) {
        const auto& req = instance.request(r);
        const NodeId next = picked[static_cast<std::size_t>(r)] ? req.delivery : req.pickup;
        picked[static_cast<std::size_t>(r)] = true;
        arcs.push_back({k, prev, next});
        prev = next;
      }
      arcs.push_back({k, prev, instance.vehicle(k).end_depot});
    }
    if (p > 0.0) {
      const double log_q = std::log1p(-std::min(p, 1.0 - 1e-16));
      std::uint64_t u = 0;
      while (true) {
        const double skip = std::floor(std::log(1.0 - uniform01(rng)) / log_q);
        if (!(skip < static_cast<double>(total - u))) break;
        u += static_cast<std::uint64_t>(skip);
        const auto k = static_cast<VehicleId>(u / per_slice);
        const std::uint64_t v = u % per_slice;
        const std::uint64_t a = v / width, b = v % width;
        const NodeId i = a < shared.size() ? shared[a] : instance.vehicle(k).start_depot;
        const NodeId j = b < shared.size() ? shared[b] : instance.vehicle(k).end_depot;
        if (i != j) arcs.push_back({k, i, j});
        if (++u >= total) break;
      }
    }
    // Out-degree repair: the shortest arc out of each node survives.
    std::stable_sort(arcs.begin(), arcs.end(), [&](const Arc& x, const Arc& y) {
      if (x.k != y.k) return x.k < y.k;
      if (x.i != y.i) return x.i < y.i;
      const double dx = instance.dist(x.i, x.j), dy = instance.dist(y.i, y.j);
      if (dx != dy) return dx < dy;
      return x.j < y.j;
    });
    std::vector<Chromosome::Entry> entries;
    for (std::size_t a = 0; a < arcs.size(); ++a) {
      if (a > 0 && arcs[a].k == arcs[a - 1].k && arcs[a].i == arcs[a - 1].i) continue;
      entries.emplace_back(shape.slot(arcs[a].i, arcs[a].j, arcs[a].k),
                           std::max(logistic_transform(instance.dist(arcs[a].i, arcs[a].j)), DBL_MIN));
    }
    pop.members[static_cast<std::size_t>(member)] = Chromosome::from_entries(n, m, std::move(entries));
  }
  pop.fitnesses = evaluate(instance, pop.members, workers);
  return pop;
}

Population init_constructive(const Instance& instance, int size, std::uint64_t seed, double alpha, int workers) {
  if (size < 0) throw Error(ErrorCode::config_error, "population size must be >= 0");
  constexpr int kRedraws = 10;
  Population pop;
  std::set<std::vector<Chromosome::Entry>> seen;
  for (int member = 0; member < size; ++member) {
    Chromosome chosen;
    for (int attempt = 0; attempt <= kRedraws; ++attempt) {
      Rng rng(derive_seed(seed, {static_cast<std::uint64_t>(member), static_cast<std::uint64_t>(attempt)}));
      chosen = encode(instance, grasp_construct(instance, alpha, rng));
      if (!seen.contains(chosen.entries())) break;
    }
    seen.insert(chosen.entries());
    pop.members.push_back(std::move(chosen));
  }
  pop.fitnesses = evaluate(instance, pop.members, workers);
  return pop;
}

GaResult run_ga(const Instance& instance, const GaParams& params) {
  if (params.population_size < 1) throw Error(ErrorCode::config_error, "population size must be >= 1");
  if (params.generation_cap < 0) throw Error(ErrorCode::config_error, "generation cap must be >= 0");
  if (!(params.fixed_mutation >= 0.0 && params.fixed_mutation <= 1.0))
    throw Error(ErrorCode::config_error, "mutation probability must lie in [0, 1]");
  if (!(params.cooling > 0.0 && params.cooling < 1.0))
    throw Error(ErrorCode::config_error, "cooling factor must lie in (0, 1)");
  if (!(params.minkowski_p >= 1.0)) throw Error(ErrorCode::config_error, "Minkowski order must be >= 1");

  const std::uint64_t init_seed = derive_seed(params.seed, {0x1417});
  Population pop = params.init == GaInit::random
                       ? init_random(instance, params.population_size, init_seed, params.workers)
                       : init_constructive(instance, params.population_size, init_seed, params.grasp_alpha,
                                           params.workers);
  const std::size_t size = pop.members.size();

  const FiniteStats initial = finite_stats(pop.fitnesses);
  double t0 = params.t0;
  if (t0 <= 0.0) {
    t0 = initial.count >= 2 ? std::sqrt(initial.variance * initial.count / (initial.count - 1)) : 0.0;
    if (!(t0 > 0.0)) t0 = 1.0;
  }
  const AdaptiveMutation adaptive{params.alpha_base, t0, initial.variance > 0.0 ? initial.variance : 1.0};
  const double delta =
      params.taboo_delta > 0.0 ? params.taboo_delta : 1e-3 * (initial.count > 0 ? initial.best : 1.0);
  const bool annealing = params.method == GaMethod::sa_hybrid;
  TabooList taboo;
  taboo.tenure = params.taboo_tenure;

  GaResult result;
  double temperature = annealing ? t0 : 0.0;
  Chromosome best_member;
  double best = kInfiniteFitness;
  auto absorb_best = [&]() {
    for (std::size_t i = 0; i < size; ++i)
      if (pop.fitnesses[i] < best) {
        best = pop.fitnesses[i];
        best_member = pop.members[i];
      }
  };
  absorb_best();
  std::vector<double> history;
  auto record = [&](int generation, double rate) {
    const FiniteStats s = finite_stats(pop.fitnesses);
    result.trace.push_back({generation, best, s.mean, s.variance, s.count, temperature, rate});
    history.push_back(s.best);
  };
  record(0, 0.0);

  for (int g = 1; g <= params.generation_cap; ++g) {
    if (std::isfinite(best) && stop_criterion(history, 1e-6 * best * best)) break;
    Rng rng(derive_seed(params.seed, {static_cast<std::uint64_t>(g)}));
    const FiniteStats s = finite_stats(pop.fitnesses);
    std::vector<std::size_t> parents;
    if (s.count > 0) {
      parents = sus_select(pop.fitnesses, size, rng);  // paired as consecutive picks
    } else {
      std::uniform_int_distribution<std::size_t> any(0, size - 1);
      for (std::size_t i = 0; i < size; ++i) parents.push_back(any(rng));
    }
    const double rate =
        annealing ? adaptive_mutation_rate(s.count > 0 ? s.variance : 0.0, temperature, adaptive)
                  : params.fixed_mutation;

    std::vector<Chromosome> children(size);
    parallel_for((size + 1) / 2, params.workers, [&](std::size_t pair) {
      const std::size_t a = 2 * pair;
      const std::size_t b = a + 1 < size ? a + 1 : 0;
      Rng child_rng(derive_seed(params.seed, {static_cast<std::uint64_t>(g), static_cast<std::uint64_t>(pair), 1}));
      const auto& pa = pop.members[parents[a]];
      const auto& pb = pop.members[parents[b]];
      children[a] = shift_mutation(uniform_crossover(pa, pb, child_rng), rate, child_rng);
      if (a + 1 < size) children[a + 1] = shift_mutation(uniform_crossover(pb, pa, child_rng), rate, child_rng);
    });
    const auto child_fitness = evaluate(instance, children, params.workers);

    if (annealing) {
      for (std::size_t i = 0; i < size; ++i)
        if (boltzmann_replace(pop.fitnesses[i], child_fitness[i], temperature, rng)) {
          pop.members[i] = std::move(children[i]);
          pop.fitnesses[i] = child_fitness[i];
        }
      temperature *= params.cooling;
    } else {
      for (std::size_t i = 0; i < size; ++i)
        taboo_replace(pop, children[i], child_fitness[i], taboo, delta, params.minkowski_p);
    }
    absorb_best();
    record(g, rate);
  }

  if (!std::isfinite(best))
    throw Error(ErrorCode::ga_no_feasible,
                "no feasible member after " + std::to_string(result.trace.size() - 1) + " generations");
  result.solution = *decode(instance, best_member);
  result.cost = best;
  return result;
}

void write_generation_csv(std::ostream& out, std::span<const GenerationStats> trace) {
  out << "generation,best,mean_finite,variance_finite,feasible_count,temperature,mutation_rate\n";
  char buf[256];
  for (const auto& g : trace) {
    std::snprintf(buf, sizeof buf, "%d,%.10g,%.10g,%.10g,%d,%.10g,%.10g\n", g.generation, g.best, g.mean_finite,
                  g.variance_finite, g.feasible_count, g.temperature, g.mutation_rate);
    out << buf;
  }
}

}  // namespace pdpt
