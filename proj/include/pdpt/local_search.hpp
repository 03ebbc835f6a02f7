#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "pdpt/instance.hpp"
#include "pdpt/random.hpp"
#include "pdpt/solution.hpp"

namespace pdpt {

enum class MoveKind { swr, rnr, adr };

std::string_view to_string(MoveKind kind);

// Neighborhood moves only relocate directly served requests; requests that
// ride two vehicles through a transfer point stay where they are.
//
// Positions follow LegInsertion: they index the target route after the moved
// request(s) were taken out of it.
//   RNR: `request` leaves `from_route`, enters `to_route` at (pickup_pos, delivery_pos).
//   ADR: from_route == to_route; positions index the route without `request`.
//   SWR: `request` (in from_route) goes to to_route at (pickup_pos, delivery_pos)
//        and `other` (in to_route) goes to from_route at
//        (other_pickup_pos, other_delivery_pos).
struct Move {
  MoveKind kind = MoveKind::rnr;
  RequestId request = -1;
  RequestId other = -1;
  VehicleId from_route = -1;
  VehicleId to_route = -1;
  int pickup_pos = 0;
  int delivery_pos = 0;
  int other_pickup_pos = 0;
  int other_delivery_pos = 0;
  double delta = 0.0;
};

// Everything needed to put a solution back exactly as it was.
struct MoveUndo {
  std::vector<std::pair<VehicleId, Route>> routes;
  std::vector<std::pair<RequestId, Assignment>> assignments;
};

MoveUndo apply_move(const Instance& instance, Solution& solution, const Move& move);
void revert_move(Solution& solution, const MoveUndo& undo);

// Visitors return false to stop the enumeration early. Order is
// deterministic: source route, then position in it, then target.
using MoveVisitor = std::function<bool(const Move&)>;

void for_each_swr(const Instance& instance, const Solution& solution, const MoveVisitor& visit);
void for_each_rnr(const Instance& instance, const Solution& solution, const MoveVisitor& visit);
void for_each_adr(const Instance& instance, const Solution& solution, const MoveVisitor& visit);

std::vector<Move> neighborhood_swr(const Instance& instance, const Solution& solution);
std::vector<Move> neighborhood_rnr(const Instance& instance, const Solution& solution);
std::vector<Move> neighborhood_adr(const Instance& instance, const Solution& solution);

struct SearchResult {
  Solution solution;
  std::vector<double> trace;  // incumbent cost after each accepted step
};

enum class Improvement { best, first };

// Neighborhoods are tried in the order ADR, RNR, SWR; any improvement
// restarts from ADR. Stops at a common local optimum.
SearchResult vnd(const Instance& instance, Solution solution,
                 Improvement strategy = Improvement::first);

struct AlnsParams {
  std::vector<double> removal_weights{1.0, 1.0, 1.0};    // random, worst, related
  std::vector<double> insertion_weights{1.0, 1.0, 1.0};  // greedy, regret-2, transfer-aware
  int iterations = 2000;
  int min_remove = 1;
  int max_remove = 0;  // 0: ceil(0.1 * |requests|)
  double reaction = 0.1;
  std::uint64_t seed = 0;
};

inline constexpr double kScoreBest = 3.0;
inline constexpr double kScoreImprove = 1.0;
inline constexpr double kScoreOther = 0.0;
inline constexpr double kMinWeight = 1e-6;

// Roulette-wheel draw: index i with probability w_i / sum(w).
std::size_t select_weighted(std::span<const double> weights, Rng& rng);

// w <- (1 - reaction) * w + reaction * score, floored at kMinWeight.
double update_weight(double weight, double score, double reaction);

struct AlnsResult {
  Solution solution;
  std::vector<double> trace;  // incumbent cost after every iteration
  std::vector<double> removal_weights;
  std::vector<double> insertion_weights;
};

AlnsResult alns(const Instance& instance, Solution solution, const AlnsParams& params);

struct SaSchedule {
  double initial_temperature = 0.0;  // <= 0: 0.05 * cost of the start solution
  double cooling = 0.995;
  int iterations = 2000;
  std::uint64_t seed = 0;
};

// Metropolis rule min(1, exp((current - candidate) / temperature)).
double acceptance_probability(double current, double candidate, double temperature);
bool metropolis_accept(double current, double candidate, double temperature, Rng& rng);

// Draws one feasible move: kind uniform over the non-empty neighborhoods,
// then uniform within the kind (rejection sampling over position tuples).
// Returns false when no move could be drawn.
bool sample_move(const Instance& instance, const Solution& solution, Rng& rng, Move& out);

struct SaResult {
  Solution solution;               // best ever seen
  std::vector<double> best_trace;  // best-ever cost per iteration
  std::vector<double> temperatures;
};

SaResult simulated_annealing(const Instance& instance, Solution solution, const SaSchedule& schedule);

struct MixParams {
  int rounds = 20;            // VND + ALNS batch repetitions; 0 runs VND only
  int batch_iterations = 100; // ALNS iterations per batch
  AlnsParams alns;
};

SearchResult mix_vnd_alns(const Instance& instance, Solution solution, const MixParams& params);

}  // namespace pdpt
