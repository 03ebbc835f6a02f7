#pragma once

#include "pdpt/instance.hpp"
#include "pdpt/solution.hpp"

namespace pdpt {

struct OracleLimits {
  int max_requests = 3;
  int max_vehicles = 2;
  int max_transfers = 1;
  int max_route_stops = 8;  // depots included
};

struct OracleResult {
  Solution solution;
  double cost = 0.0;
};

// Exhaustive search over every assignment (direct or via one transfer point)
// and every stop order per route. Ties go to the lexicographically smallest
// written solution. Throws Error(too_large) outside `limits`, Error(no_feasible)
// when nothing is feasible.
OracleResult solve_exact(const Instance& instance, const OracleLimits& limits = {});

}  // namespace pdpt
