#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "fixtures.hpp"
#include "pdpt/constructive.hpp"
#include "pdpt/error.hpp"
#include "pdpt/genetic.hpp"
#include "pdpt/grasp.hpp"
#include "pdpt/instance_io.hpp"
#include "pdpt/model.hpp"
#include "pdpt/oracle.hpp"

using namespace pdpt;
using namespace pdpt::test;

namespace {

Instance lc204(std::uint64_t seed) {
  static const RawPdptwFile raw = parse_lilim_file(data_path("lc204_synthetic.txt"));
  AugmentationConfig cfg;
  cfg.seed = seed;
  return build_instance(raw, cfg);
}

Chromosome random_tensor(int nodes, int vehicles, int count, Rng& rng) {
  std::vector<Chromosome::Entry> e;
  const auto slots = static_cast<std::uint64_t>(nodes) * nodes * vehicles;
  for (int i = 0; i < count; ++i)
    e.push_back({std::uniform_int_distribution<std::uint64_t>(0, slots - 1)(rng), 0.01 + uniform01(rng)});
  return Chromosome::from_entries(nodes, vehicles, std::move(e));
}

std::vector<double> values_of(const Chromosome& c) {
  std::vector<double> v;
  for (const auto& [s, x] : c.entries()) v.push_back(x);
  std::sort(v.begin(), v.end());
  return v;
}

}  // namespace

TEST(Logistic, PointValues) {
  EXPECT_EQ(logistic_transform(0.0), 0.0);
  EXPECT_NEAR(logistic_transform(1.0), 0.196611933241482, 1e-9);
  EXPECT_LT(logistic_transform(50.0), 1e-20);
  EXPECT_GT(logistic_transform(1e-9), 0.0);
  for (double x = 0.1; x < 20; x += 0.1) EXPECT_LT(logistic_transform(x + 0.1), logistic_transform(x));
  EXPECT_THROW(logistic_transform(-1.0), Error);
}

TEST(Encode, EmptyRoutesOnlyDepotArcs) {
  MicroSpec spec;
  spec.requests = {{{1, 1}, {2, 2}}};
  spec.depots = {{{0, 0}, {0, 5}}, {{9, 9}, {9, 0}}};
  auto inst = make_instance(spec);
  auto c = encode(inst, Solution::empty(inst));
  ASSERT_EQ(c.nonzero_count(), 2u);
  for (const auto& v : inst.vehicles()) EXPECT_GT(c.at(v.start_depot, v.end_depot, v.id), 0.0);
  EXPECT_EQ(c.at(inst.vehicle(0).start_depot, inst.vehicle(0).end_depot, 1), 0.0);
}

TEST(Encode, StoresTransformedArcLengths) {
  auto inst = relay_instance();
  auto sol = transship_improve(inst, greedy_construct(inst));
  auto c = encode(inst, sol);
  // A: start(2) -> p(0) is length 1
  EXPECT_DOUBLE_EQ(c.at(2, 0, 0), logistic_transform(1.0));
  for (const auto& [s, v] : c.entries()) EXPECT_GT(v, 0.0);
}

TEST(Decode, RoundTripWithTransfers) {
  auto inst = relay_instance();
  auto sol = transship_improve(inst, greedy_construct(inst));
  ASSERT_TRUE(sol.assignment[0].is_transferred());
  auto back = decode(inst, encode(inst, sol));
  ASSERT_TRUE(back.has_value());
  EXPECT_EQ(*back, sol);
  EXPECT_DOUBLE_EQ(fitness(inst, encode(inst, sol)), 22.0);
}

TEST(Decode, BranchingSliceIsRejected) {
  auto inst = relay_instance();
  auto c = encode(inst, greedy_construct(inst));
  c.set(2, 1, 0, 0.5);  // second arc out of vehicle 0's start
  c.set(2, 3, 0, 0.5);
  EXPECT_FALSE(decode(inst, c).has_value());
  EXPECT_EQ(fitness(inst, c), kInfiniteFitness);
}

TEST(Fitness, MissingRequestIsInfinite) {
  MicroSpec spec;
  spec.requests = {{{1, 0}, {2, 0}}, {{3, 0}, {4, 0}}};
  spec.depots = {{{0, 0}, {0, 0}}};
  auto inst = make_instance(spec);
  Solution s = Solution::empty(inst);
  s.routes[0].stops = {depart(4), pick(0, 0), drop(1, 0), arrive(5)};
  s.assignment[0] = Assignment::direct(0);
  EXPECT_EQ(fitness(inst, encode(inst, s)), kInfiniteFitness);
  auto full = greedy_construct(inst);
  EXPECT_DOUBLE_EQ(fitness(inst, encode(inst, full)), solution_cost(inst, full));
}

TEST(Fitness, AgreesWithCostOnConstructions) {
  auto inst = lc204(0);
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    Rng rng(seed);
    auto sol = grasp_construct(inst, 0.5, rng);
    EXPECT_NEAR(fitness(inst, encode(inst, sol)), solution_cost(inst, sol), 1e-9);
  }
}

namespace {

bool revisits_a_node(const Solution& s) {
  for (const auto& r : s.routes)
    for (std::size_t i = 0; i < r.stops.size(); ++i)
      for (std::size_t j = i + 2; j < r.stops.size(); ++j)
        if (r.stops[i].node == r.stops[j].node && r.stops[j - 1].node != r.stops[j].node) return true;
  return false;
}

}  // namespace

TEST(Decode, TransferRoutesRoundTripUnlessNodeRevisited) {
  // One arc slot per (i, j, k) cannot hold a route that leaves the same
  // transfer node twice; such chromosomes decode as branching.
  int exact = 0, revisits = 0;
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    auto inst = lc204(seed % 10);
    Rng rng(seed);
    auto sol = transship_improve(inst, grasp_construct(inst, 0.3, rng));
    auto back = decode(inst, encode(inst, sol));
    if (revisits_a_node(sol)) {
      ++revisits;
      EXPECT_FALSE(back.has_value());
    } else {
      ++exact;
      ASSERT_TRUE(back.has_value()) << seed;
      EXPECT_NEAR(solution_cost(inst, *back), solution_cost(inst, sol), 1e-9);
      EXPECT_TRUE(check_feasibility(inst, *back).feasible);
    }
  }
  EXPECT_GT(exact, 0);
  EXPECT_GT(revisits, 0);
}

TEST(InitRandom, EmptyAndDeterministic) {
  auto inst = micro_instance(7);
  EXPECT_TRUE(init_random(inst, 0, 1).members.empty());
  auto a = init_random(inst, 16, 5);
  auto b = init_random(inst, 16, 5);
  EXPECT_EQ(a.members, b.members);
  EXPECT_EQ(a.fitnesses, b.fitnesses);
  EXPECT_NE(init_random(inst, 16, 6).members, a.members);
}

TEST(InitRandom, MicroFeasibleRate) {
  // Measured once: 301 of 1000 single-member populations decode feasibly.
  auto inst = micro_instance(7);
  int feasible = 0;
  for (std::uint64_t s = 0; s < 1000; ++s) feasible += std::isfinite(init_random(inst, 1, s, 1).fitnesses[0]);
  const double rate = feasible / 1000.0;
  EXPECT_GT(rate, 0.0);
  EXPECT_LT(rate, 1.0);
  EXPECT_NEAR(rate, 0.301, 0.05);
}

TEST(InitRandom, Lc204FeasibleFraction) {
  // Measured once: 227 of 256.
  auto pop = init_random(lc204(0), 256, 0, 1);
  const auto n = std::count_if(pop.fitnesses.begin(), pop.fitnesses.end(), [](double f) { return std::isfinite(f); });
  EXPECT_NEAR(n / 256.0, 227.0 / 256.0, 0.05);
  for (const auto& m : pop.members)
    for (const auto& [s, v] : m.entries()) EXPECT_GE(v, 0.0);
}

TEST(InitConstructive, AllFeasibleAndBeatsRandom) {
  auto inst = lc204(1);
  auto pop = init_constructive(inst, 256, 3);
  ASSERT_EQ(pop.members.size(), 256u);
  for (double f : pop.fitnesses) EXPECT_TRUE(std::isfinite(f));
  int wins = 0;
  for (std::uint64_t t = 0; t < 50; ++t) {
    auto cons = init_constructive(inst, 16, t);
    auto rand = init_random(inst, 16, t);
    if (*std::min_element(cons.fitnesses.begin(), cons.fitnesses.end()) <=
        *std::min_element(rand.fitnesses.begin(), rand.fitnesses.end()))
      ++wins;
  }
  EXPECT_GE(wins, 45);
}

TEST(Sus, EqualWeightsEachOnce) {
  Rng rng(1);
  const std::vector<double> f{5, 5, 5, 5};
  for (int t = 0; t < 100; ++t) {
    auto picks = sus_select(f, 4, rng);
    std::sort(picks.begin(), picks.end());
    EXPECT_EQ(picks, (std::vector<std::size_t>{0, 1, 2, 3}));
  }
}

TEST(Sus, ExpectedCopies) {
  Rng rng(2);
  // weights 1/f = [2, 1, 1]
  const std::vector<double> f{0.5, 1.0, 1.0};
  std::vector<double> mean(3, 0.0);
  for (int t = 0; t < 10000; ++t)
    for (auto i : sus_select(f, 4, rng)) mean[i] += 1e-4;
  EXPECT_NEAR(mean[0], 2.0, 0.05);
  EXPECT_NEAR(mean[1], 1.0, 0.05);
  EXPECT_NEAR(mean[2], 1.0, 0.05);
}

TEST(Sus, InfiniteNeverPicked) {
  Rng rng(3);
  const std::vector<double> f{kInfiniteFitness, 3.0, kInfiniteFitness, 7.0};
  for (int t = 0; t < 1000; ++t)
    for (auto i : sus_select(f, 8, rng)) EXPECT_TRUE(i == 1 || i == 3);
  const std::vector<double> none{kInfiniteFitness, kInfiniteFitness};
  try {
    sus_select(none, 2, rng);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::selection_error);
  }
}

TEST(Crossover, IdempotentAndSlotwise) {
  Rng rng(4);
  auto a = random_tensor(20, 3, 200, rng);
  auto b = random_tensor(20, 3, 200, rng);
  EXPECT_EQ(uniform_crossover(a, a, rng), a);
  auto child = uniform_crossover(a, b, rng);
  for (const auto& [s, v] : child.entries()) EXPECT_TRUE(v == a.at(s) || v == b.at(s));
  EXPECT_THROW(uniform_crossover(a, Chromosome(21, 3), rng), Error);
}

TEST(Crossover, FairCoin) {
  Rng rng(5);
  // Disjoint supports make the source of every slot visible.
  std::vector<Chromosome::Entry> ea, eb;
  for (std::uint64_t s = 0; s < 10000; ++s) {
    ea.push_back({2 * s, 1.0});
    eb.push_back({2 * s + 1, 2.0});
  }
  auto a = Chromosome::from_entries(200, 1, ea);
  auto b = Chromosome::from_entries(200, 1, eb);
  auto child = uniform_crossover(a, b, rng);
  int from_a = 0;
  for (const auto& [s, v] : child.entries()) from_a += v == 1.0;
  EXPECT_NEAR(from_a / 10000.0, 0.5, 0.02);
}

TEST(Mutation, ShiftProperties) {
  Rng rng(6);
  auto c = random_tensor(15, 2, 60, rng);
  EXPECT_EQ(shift_mutation(c, 0.0, rng), c);
  for (int t = 0; t < 200; ++t) {
    auto m = shift_mutation(c, 1.0, rng);
    std::vector<double> vc = values_of(c), vm = values_of(m);
    // a swap with an empty slot moves the value, so the multiset holds
    EXPECT_EQ(vc, vm);
    int changed = 0;
    std::vector<Chromosome::Slot> slots;
    for (const auto& [s, v] : c.entries()) slots.push_back(s);
    for (const auto& [s, v] : m.entries()) slots.push_back(s);
    std::sort(slots.begin(), slots.end());
    slots.erase(std::unique(slots.begin(), slots.end()), slots.end());
    for (auto s : slots) changed += c.at(s) != m.at(s);
    EXPECT_LE(changed, 2);
  }
}

TEST(Mutation, AdaptiveRate) {
  AdaptiveMutation cfg{0.05, 10.0, 4.0};
  EXPECT_DOUBLE_EQ(adaptive_mutation_rate(4.0, 0.0, cfg), 0.025);
  double prev = 1.0;
  for (double var = 0; var < 1e6; var = var * 2 + 1) {
    const double r = adaptive_mutation_rate(var, 5.0, cfg);
    EXPECT_LE(r, prev);
    prev = r;
  }
  EXPECT_EQ(adaptive_mutation_rate(1e12, 0.0, cfg), 0.001);
  prev = 0.0;
  for (double temp = 0; temp < 1e4; temp = temp * 2 + 1) {
    const double r = adaptive_mutation_rate(1.0, temp, cfg);
    EXPECT_GE(r, prev);
    prev = r;
  }
  Rng rng(7);
  for (int t = 0; t < 10000; ++t) {
    const double r = adaptive_mutation_rate(std::exp(30 * uniform01(rng) - 10), 1e4 * uniform01(rng), cfg);
    EXPECT_GE(r, 0.001);
    EXPECT_LE(r, 0.5);
  }
  EXPECT_THROW(adaptive_mutation_rate(-1.0, 0.0, cfg), Error);
}

TEST(Boltzmann, AcceptanceRule) {
  EXPECT_EQ(boltzmann_probability(10.0, 9.0, 1.0), 1.0);
  EXPECT_EQ(boltzmann_probability(10.0, kInfiniteFitness, 1.0), 0.0);
  Rng rng(8);
  EXPECT_TRUE(boltzmann_replace(10.0, 9.0, 1.0, rng));
  EXPECT_FALSE(boltzmann_replace(10.0, kInfiniteFitness, 1e9, rng));
  EXPECT_THROW(boltzmann_replace(1.0, 2.0, 0.0, rng), Error);
  int acc = 0;
  for (int i = 0; i < 100000; ++i) acc += boltzmann_replace(100.0, 104.0, 4.0, rng);
  EXPECT_NEAR(acc / 1e5, std::exp(-1.0), 0.01);
}

TEST(Minkowski, Distances) {
  Rng rng(9);
  auto a = random_tensor(10, 2, 30, rng);
  EXPECT_EQ(minkowski_distance(a, a, 2.0), 0.0);
  auto b = a;
  b.set(3, 4, 1, b.at(3, 4, 1) + 3.0);
  EXPECT_NEAR(minkowski_distance(a, b, 2.0), 3.0, 1e-12);
  EXPECT_NEAR(minkowski_distance(a, b, 1.0), 3.0, 1e-12);
  EXPECT_THROW(minkowski_distance(a, b, 0.5), Error);
  auto c = random_tensor(10, 2, 30, rng);
  EXPECT_DOUBLE_EQ(minkowski_distance(a, c, 2.0), minkowski_distance(c, a, 2.0));
  EXPECT_LE(minkowski_distance(a, c, 3.0), minkowski_distance(a, b, 3.0) + minkowski_distance(b, c, 3.0) + 1e-12);
}

TEST(Taboo, Replacement) {
  Rng rng(10);
  Population pop;
  for (int i = 0; i < 4; ++i) {
    pop.members.push_back(random_tensor(8, 1, 10, rng));
    pop.fitnesses.push_back(10.0 + i);
  }
  TabooList taboo;
  taboo.tenure = 3;
  EXPECT_FALSE(taboo_replace(pop, pop.members[1], 1.0, taboo, 1e-3, 2.0));
  EXPECT_FALSE(taboo_replace(pop, random_tensor(8, 1, 10, rng), kInfiniteFitness, taboo, 1e-3, 2.0));

  auto far = random_tensor(8, 1, 10, rng);
  ASSERT_TRUE(taboo_replace(pop, far, 5.0, taboo, 1e-3, 2.0));
  EXPECT_EQ(pop.members[3], far);
  EXPECT_EQ(pop.fitnesses[3], 5.0);
  EXPECT_EQ(pop.members.size(), 4u);
  ASSERT_EQ(taboo.entries.size(), 1u);

  // gone from the population after a later eviction, still taboo
  for (int i = 0; i < 10; ++i) taboo_replace(pop, random_tensor(8, 1, 10, rng), 1.0 - 0.01 * i, taboo, 1e-3, 2.0);
  EXPECT_LE(taboo.entries.size(), 3u);
}

TEST(StopCriterion, Examples) {
  EXPECT_TRUE(stop_criterion(std::vector<double>{10, 10, 10, 10}, 1e-9));
  EXPECT_FALSE(stop_criterion(std::vector<double>{10, 10, 10}, 1e-9));
  EXPECT_FALSE(stop_criterion(std::vector<double>{10, 9, 8, 7}, 0.5));
  EXPECT_TRUE(stop_criterion(std::vector<double>{10, 9, 8, 7}, 1.26));
  EXPECT_TRUE(stop_criterion(std::vector<double>{1, kInfiniteFitness, 5, 5, 5, 5}, 1e-9));
}

TEST(Ga, ZeroGenerationsReturnsInitialBest) {
  auto inst = lc204(2);
  GaParams p;
  p.population_size = 32;
  p.generation_cap = 0;
  p.seed = 3;
  auto res = run_ga(inst, p);
  auto pop = init_constructive(inst, 32, derive_seed(3, {0x1417}), p.grasp_alpha);
  EXPECT_DOUBLE_EQ(res.cost, *std::min_element(pop.fitnesses.begin(), pop.fitnesses.end()));
  ASSERT_EQ(res.trace.size(), 1u);
}

TEST(Ga, MicroReachesOracle) {
  for (auto method : {GaMethod::sa_hybrid, GaMethod::taboo_hybrid}) {
    int hits = 0;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      auto inst = micro_instance(100 + seed);
      const double opt = solve_exact(inst).cost;
      GaParams p;
      p.method = method;
      p.population_size = 64;
      p.seed = seed;
      auto res = run_ga(inst, p);
      EXPECT_GE(res.cost, opt - 1e-9);
      EXPECT_TRUE(check_feasibility(inst, res.solution).feasible);
      hits += std::abs(res.cost - opt) <= 1e-6;
    }
    EXPECT_GE(hits, 8);
  }
}

TEST(Ga, TraceMonotoneAndCsv) {
  auto inst = lc204(3);
  for (auto init : {GaInit::random, GaInit::constructive}) {
    GaParams p;
    p.init = init;
    p.population_size = 32;
    p.generation_cap = 20;
    p.method = init == GaInit::random ? GaMethod::sa_hybrid : GaMethod::taboo_hybrid;
    auto res = run_ga(inst, p);
    for (std::size_t i = 1; i < res.trace.size(); ++i) EXPECT_LE(res.trace[i].best, res.trace[i - 1].best);
    EXPECT_DOUBLE_EQ(res.cost, res.trace.back().best);
    EXPECT_NEAR(solution_cost(inst, res.solution), res.cost, 1e-9);
    std::ostringstream out;
    write_generation_csv(out, res.trace);
    EXPECT_EQ(out.str().substr(0, out.str().find('\n')),
              "generation,best,mean_finite,variance_finite,feasible_count,temperature,mutation_rate");
  }
}

TEST(Ga, NoFeasibleMember) {
  MicroSpec spec;
  spec.requests = {{{1, 0}, {2, 0}}};
  spec.quantities = {5};
  spec.depots = {{{0, 0}, {0, 0}}};
  spec.capacities = {4};
  auto inst = make_instance(spec);
  GaParams p;
  p.init = GaInit::random;
  p.population_size = 8;
  p.generation_cap = 3;
  try {
    run_ga(inst, p);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ga_no_feasible);
  }
}
