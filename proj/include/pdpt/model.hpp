#pragma once

#include "pdpt/instance.hpp"
#include "pdpt/solution.hpp"

namespace pdpt {

// Earliest-start schedule: D = 0 at each start depot, D_j = D_i + t_ij along
// each route, transfer pickups wait for the matching drop. Throws
// Error(cyclic_transfer) when routes wait on each other in a loop.
Schedule propagate_schedule(const Instance& instance, const Solution& solution);

// Checks the routing model constraints plus transfer synchronization.
// Never throws for structurally odd input; every problem is reported.
FeasibilityReport check_feasibility(const Instance& instance, const Solution& solution);

double route_cost(const Instance& instance, const Route& route);

// Sum of traversed arc lengths over all routes.
double solution_cost(const Instance& instance, const Solution& solution);

// True when the "drop before pick" relation between transfer stops, combined
// with route order, has no cycle.
bool transfer_dependencies_acyclic(const Solution& solution);

}  // namespace pdpt
