#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "pdpt/insertion.hpp"
#include "pdpt/instance.hpp"
#include "pdpt/random.hpp"
#include "pdpt/solution.hpp"

namespace pdpt {

struct InsertionCandidate {
  RequestId request = -1;
  VehicleId vehicle = -1;
  int pickup_pos = 0;
  int delivery_pos = 0;
  double delta_cost = 0.0;
};

// Global cheapest insertion: every round inserts the feasible (request,
// vehicle, positions) candidate with the smallest cost increase. Ties go to
// the lexicographically smallest (request, vehicle, pickup, delivery).
// Throws Error(no_feasible_insertion) naming the first request that fits
// nowhere.
Solution greedy_construct(const Instance& instance);

// Chooses the next insertion from the per-(request, vehicle) best candidates.
// Receives candidates in (request, vehicle) order; returns an index into it.
using CandidatePicker = std::function<std::size_t(const std::vector<InsertionCandidate>&)>;

// Insertion loop shared by greedy and GRASP construction.
Solution construct_by_insertion(const Instance& instance, const CandidatePicker& pick);

// Index of the greedy winner under the tie-break above.
std::size_t greedy_pick(const std::vector<InsertionCandidate>& candidates);

struct Saving {
  NodeId i = -1;  // end of the route merged first
  NodeId j = -1;  // start of the route merged second
  double value = 0.0;
};

// s_ij = c_i0 + c_0j - c_ij
double clarke_wright_saving(double c_i0, double c_0j, double c_ij);

// Savings between every (delivery i, pickup j) pair of distinct requests
// against `hub`, sorted non-increasing with (i, j) as tie-break.
std::vector<Saving> compute_savings(const Instance& instance, NodeId hub);

// Depot node used as "0": the shared depot when all vehicles start and end at
// one location, otherwise the depot node nearest the customer centroid.
NodeId savings_hub(const Instance& instance);

// Sequential savings: one round trip per request, repeatedly extend the
// current route with the first feasible saving, then hand the merged routes
// to vehicles. Throws Error(insufficient_fleet) when routes outnumber
// vehicles, Error(no_feasible_insertion) when a request exceeds every capacity.
Solution clarke_wright(const Instance& instance);

// One destroy/repair pass: each request is pulled out and put back at the
// cheapest of direct reinsertion and the two split orders over every
// transfer point. Never increases cost.
Solution transship_improve(const Instance& instance, Solution solution);

// Repeats transship_improve until a pass gains less than kCostEps (at most
// `max_passes` passes).
Solution transship_until_stable(const Instance& instance, Solution solution, int max_passes = 50);

// Requests inserted one after another, in the given order, at their cheapest
// direct position.
Solution sequential_insertion(const Instance& instance, const std::vector<RequestId>& order);

struct MultistartParams {
  int starts = 16;
  std::uint64_t seed = 0;
};

// Best over `starts` shuffled sequential insertions, each followed by
// transship_until_stable. Start s draws from its own derived stream.
Solution multistart(const Instance& instance, const MultistartParams& params);

}  // namespace pdpt
