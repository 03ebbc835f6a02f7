#pragma once

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "pdpt/instance.hpp"
#include "pdpt/solution.hpp"

namespace pdpt {

// Absolute tolerance for cost ties and improvement tests.
inline constexpr double kCostEps = 1e-6;

// Two stops that travel together in one route: the first adds `quantity`
// to the load, the second removes it.
struct Leg {
  Stop first;
  Stop second;
  int quantity = 0;
};

Leg direct_leg(const Instance& instance, RequestId r);
Leg inbound_leg(const Instance& instance, RequestId r, NodeId transfer);   // pickup -> drop
Leg outbound_leg(const Instance& instance, RequestId r, NodeId transfer);  // pick -> delivery

// `first_pos` / `second_pos` index the unmodified route: the first stop goes
// right before stops[first_pos], the second right before stops[second_pos];
// 1 <= first_pos <= second_pos <= stops.size() - 1.
struct LegInsertion {
  VehicleId route = -1;
  int first_pos = 0;
  int second_pos = 0;
  double delta = 0.0;
};

// Greedy ordering: smaller delta, then smaller (route, first_pos, second_pos);
// deltas within kCostEps count as equal.
bool better_insertion(const LegInsertion& a, const LegInsertion& b);

// Departing load after each stop.
std::vector<int> route_loads(const Instance& instance, const Route& route);

double leg_insertion_delta(const Instance& instance, const Route& route, const Leg& leg,
                           int first_pos, int second_pos);

// Cheapest capacity-feasible position pair in O(|route|).
std::optional<LegInsertion> best_leg_insertion(const Instance& instance, const Route& route,
                                               std::span<const int> loads, const Leg& leg);

// Every capacity-feasible position pair, in (first_pos, second_pos) order.
void for_each_leg_insertion(const Instance& instance, const Route& route,
                            std::span<const int> loads, const Leg& leg,
                            const std::function<void(const LegInsertion&)>& visit);

void insert_leg(Route& route, const Leg& leg, int first_pos, int second_pos);

// Removes every stop of `r` and clears its assignment.
void remove_request(Solution& solution, RequestId r);

// Cost of `route` with all stops of `r` removed, minus its current cost.
double removal_delta(const Instance& instance, const Route& route, RequestId r);

Route without_request(const Route& route, RequestId r);

// A request placed either directly or split across two vehicles at a
// transfer point.
struct Placement {
  RequestId request = -1;
  double delta = 0.0;
  NodeId transfer = -1;   // -1: direct
  LegInsertion first;     // direct leg, or pickup -> drop
  LegInsertion second;    // pick -> delivery (transfers only)
};

std::optional<Placement> best_direct_placement(const Instance& instance, const Solution& solution,
                                               RequestId r);

enum class SplitOrder { inbound_first, outbound_first };

// Inserts one leg at its cheapest position, then the other leg at its
// cheapest position on a different vehicle that keeps transfers acyclic.
std::optional<Placement> best_split_placement(const Instance& instance, const Solution& solution,
                                              RequestId r, NodeId transfer, SplitOrder order);

// Cheapest of the direct placement and both split orders at every transfer
// point (the latter only when `allow_transfers`).
std::optional<Placement> best_placement(const Instance& instance, const Solution& solution,
                                        RequestId r, bool allow_transfers);

void apply_placement(const Instance& instance, Solution& solution, const Placement& p);

}  // namespace pdpt
