#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <ostream>
#include <span>
#include <utility>
#include <vector>

#include "pdpt/instance.hpp"
#include "pdpt/random.hpp"
#include "pdpt/solution.hpp"

namespace pdpt {

inline constexpr double kInfiniteFitness = std::numeric_limits<double>::infinity();

// f(x) = e^-x / (1 + e^-x)^2 for x > 0, f(0) = 0. Throws domain_error on x < 0.
double logistic_transform(double x);

// Sparse (node, node, vehicle) tensor. Entry (i, j, k) is non-zero exactly
// when route k goes from i straight to j; absent slots read as 0.
class Chromosome {
 public:
  using Slot = std::uint64_t;
  using Entry = std::pair<Slot, double>;

  Chromosome() = default;
  Chromosome(int nodes, int vehicles) : nodes_(nodes), vehicles_(vehicles) {}

  // Sorts, drops zeros and keeps the first value of repeated slots.
  static Chromosome from_entries(int nodes, int vehicles, std::vector<Entry> entries);

  int nodes() const noexcept { return nodes_; }
  int vehicles() const noexcept { return vehicles_; }
  std::uint64_t slot_count() const noexcept {
    return static_cast<std::uint64_t>(nodes_) * static_cast<std::uint64_t>(nodes_) *
           static_cast<std::uint64_t>(vehicles_);
  }

  Slot slot(NodeId i, NodeId j, VehicleId k) const;
  void unpack(Slot s, NodeId& i, NodeId& j, VehicleId& k) const;

  double at(NodeId i, NodeId j, VehicleId k) const { return at(slot(i, j, k)); }
  double at(Slot s) const;
  // Writing 0 erases the slot. Negative values throw domain_error.
  void set(NodeId i, NodeId j, VehicleId k, double value) { set(slot(i, j, k), value); }
  void set(Slot s, double value);

  // Sorted by slot, values strictly positive.
  const std::vector<Entry>& entries() const noexcept { return entries_; }
  std::size_t nonzero_count() const noexcept { return entries_.size(); }
  bool same_shape(const Chromosome& other) const noexcept {
    return nodes_ == other.nodes_ && vehicles_ == other.vehicles_;
  }

  bool operator==(const Chromosome&) const = default;

 private:
  int nodes_ = 0;
  int vehicles_ = 0;
  std::vector<Entry> entries_;
};

Chromosome encode(const Instance& instance, const Solution& solution);

// Rebuilds routes by walking each slice from the vehicle's start depot.
// nullopt when a slice branches, loops, dead-ends, or a node cannot be
// interpreted; otherwise the solution may still be infeasible.
std::optional<Solution> decode(const Instance& instance, const Chromosome& chromosome);

// Cost of the decoded solution, or infinity when it is missing or infeasible.
double fitness(const Instance& instance, const Chromosome& chromosome);

// Arc slots route k may use: start depot or customer or transfer point out,
// end depot or customer or transfer point in, no self loops.
std::vector<Chromosome::Slot> admissible_slots(const Instance& instance, VehicleId k);

struct Population {
  std::vector<Chromosome> members;
  std::vector<double> fitnesses;
};

// Evaluates fitness for every member, spread over `workers` threads.
std::vector<double> evaluate(const Instance& instance, std::span<const Chromosome> members,
                             int workers = 0);

// Random multigraphs: each request gets a random vehicle, every slice gets a
// random precedence-respecting path through its requests, then extra arcs
// appear independently with probability p_edge (default 0.5 / admissible
// slots) and each node keeps only its shortest outgoing arc per slice.
Population init_random(const Instance& instance, int size, std::uint64_t seed, int workers = 0,
                       double p_edge = -1.0);

// GRASP constructions with distinct seeds; duplicates are redrawn up to 10 times.
Population init_constructive(const Instance& instance, int size, std::uint64_t seed,
                             double alpha = 0.3, int workers = 0);

// Stochastic universal sampling on weights 1/fitness (0 for infinite fitness).
std::vector<std::size_t> sus_select(std::span<const double> fitnesses, std::size_t count, Rng& rng);

Chromosome uniform_crossover(const Chromosome& a, const Chromosome& b, Rng& rng);

// With the given probability swaps the value of one present arc (i, j, k)
// with slot (i, j', k) for a random j' != i.
Chromosome shift_mutation(const Chromosome& chromosome, double probability, Rng& rng);

struct AdaptiveMutation {
  double alpha_base = 0.05;
  double t0 = 1.0;
  double sigma_ref = 1.0;
};

// clamp(alpha_base * (1 + temperature / t0) * sigma_ref / (sigma_ref + variance), 0.001, 0.5)
double adaptive_mutation_rate(double fitness_variance, double temperature, const AdaptiveMutation& cfg);

double boltzmann_probability(double incumbent, double candidate, double temperature);
bool boltzmann_replace(double incumbent, double candidate, double temperature, Rng& rng);

double minkowski_distance(const Chromosome& a, const Chromosome& b, double p);

struct TabooList {
  std::vector<Chromosome> entries;  // oldest first
  std::size_t tenure = 64;
};

// Returns whether the candidate went in. Rejected when infinite, or within
// delta of any taboo entry or current member; otherwise it replaces the
// worst member when strictly better than it and joins the taboo list.
bool taboo_replace(Population& population, const Chromosome& candidate, double candidate_fitness,
                   TabooList& taboo, double delta, double p);

// Population variance of the last four finite values below epsilon.
bool stop_criterion(std::span<const double> best_history, double epsilon);

enum class GaMethod { sa_hybrid, taboo_hybrid };
enum class GaInit { random, constructive };

struct GaParams {
  GaMethod method = GaMethod::sa_hybrid;
  GaInit init = GaInit::constructive;
  int population_size = 256;
  int generation_cap = 500;
  double fixed_mutation = 0.05;
  double alpha_base = 0.05;
  double t0 = 0.0;          // <= 0: sample std of the initial finite fitnesses
  double cooling = 0.9;
  double minkowski_p = 2.0;
  double taboo_delta = 0.0; // <= 0: 1e-3 * initial best fitness
  std::size_t taboo_tenure = 64;
  double grasp_alpha = 0.3;
  std::uint64_t seed = 0;
  int workers = 0;          // 0: hardware concurrency
};

struct GenerationStats {
  int generation = 0;
  double best = kInfiniteFitness;  // best ever so far
  double mean_finite = 0.0;
  double variance_finite = 0.0;
  int feasible_count = 0;
  double temperature = 0.0;
  double mutation_rate = 0.0;
};

struct GaResult {
  Solution solution;
  double cost = kInfiniteFitness;
  std::vector<GenerationStats> trace;
};

// Throws Error(ga_no_feasible) when no member is ever feasible.
GaResult run_ga(const Instance& instance, const GaParams& params);

void write_generation_csv(std::ostream& out, std::span<const GenerationStats> trace);

}  // namespace pdpt
