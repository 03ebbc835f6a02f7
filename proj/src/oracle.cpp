#include "pdpt/oracle.hpp"

#include <algorithm>
#include <limits>
#include <optional>
#include <sstream>
#include <string>

#include "pdpt/error.hpp"
#include "pdpt/insertion.hpp"
#include "pdpt/model.hpp"
#include "pdpt/solution_io.hpp"

namespace pdpt {

namespace {

struct Sequence {
  std::vector<Stop> stops;  // interior only
  double cost = 0.0;
};

std::string routes_text(const Solution& s) {
  std::ostringstream out;
  write_solution(out, s, 0.0);
  return out.str();
}

// All orders of the route's legs that keep each leg's first stop before its
// second and never exceed capacity.
std::vector<Sequence> route_sequences(const Instance& instance, VehicleId k, const std::vector<Leg>& legs) {
  const auto& v = instance.vehicle(k);
  std::vector<Sequence> out;
  std::vector<int> state(legs.size(), 0);  // 0 untouched, 1 first stop placed, 2 done
  std::vector<Stop> current;
  auto recurse = [&](auto&& self, int load, NodeId at, double cost) -> void {
    if (current.size() == 2 * legs.size()) {
      out.push_back({current, cost + instance.dist(at, v.end_depot)});
      return;
    }
    for (std::size_t l = 0; l < legs.size(); ++l) {
      if (state[l] == 2) continue;
      const Stop& next = state[l] == 0 ? legs[l].first : legs[l].second;
      const int new_load = state[l] == 0 ? load + legs[l].quantity : load - legs[l].quantity;
      if (new_load > v.capacity) continue;
      ++state[l];
      current.push_back(next);
      self(self, new_load, next.node, cost + instance.dist(at, next.node));
      current.pop_back();
      --state[l];
    }
  };
  recurse(recurse, 0, v.start_depot, 0.0);
  std::sort(out.begin(), out.end(), [](const Sequence& a, const Sequence& b) { return a.cost < b.cost; });
  return out;
}

}  // namespace

OracleResult solve_exact(const Instance& instance, const OracleLimits& limits) {
  const int requests = static_cast<int>(instance.request_count());
  const int vehicles = static_cast<int>(instance.vehicle_count());
  const int transfers = static_cast<int>(instance.transfer_points().size());
  if (requests > limits.max_requests || vehicles > limits.max_vehicles || transfers > limits.max_transfers)
    throw Error(ErrorCode::too_large, "instance exceeds oracle limits");

  // Options per request: direct on each vehicle, or every (k1, t, k2) split.
  std::vector<Assignment> options;
  for (VehicleId k = 0; k < vehicles; ++k) options.push_back(Assignment::direct(k));
  for (VehicleId a = 0; a < vehicles; ++a)
    for (NodeId t : instance.transfer_points())
      for (VehicleId b = 0; b < vehicles; ++b)
        if (a != b) options.push_back(Assignment::transferred(a, t, b));

  std::optional<OracleResult> best;
  std::string best_text;
  std::vector<std::size_t> pick(static_cast<std::size_t>(requests), 0);

  auto consider = [&](const std::vector<Assignment>& assignment) {
    std::vector<std::vector<Leg>> legs(static_cast<std::size_t>(vehicles));
    for (RequestId r = 0; r < requests; ++r) {
      const auto& a = assignment[static_cast<std::size_t>(r)];
      if (a.is_direct()) {
        legs[static_cast<std::size_t>(a.first)].push_back(direct_leg(instance, r));
      } else {
        legs[static_cast<std::size_t>(a.first)].push_back(inbound_leg(instance, r, a.transfer));
        legs[static_cast<std::size_t>(a.second)].push_back(outbound_leg(instance, r, a.transfer));
      }
    }
    std::vector<std::vector<Sequence>> per_route;
    std::vector<double> min_rest(static_cast<std::size_t>(vehicles) + 1, 0.0);
    for (VehicleId k = 0; k < vehicles; ++k) {
      if (2 + 2 * static_cast<int>(legs[static_cast<std::size_t>(k)].size()) > limits.max_route_stops) return;
      per_route.push_back(route_sequences(instance, k, legs[static_cast<std::size_t>(k)]));
      if (per_route.back().empty()) return;
    }
    for (int k = vehicles - 1; k >= 0; --k)
      min_rest[static_cast<std::size_t>(k)] = min_rest[static_cast<std::size_t>(k) + 1] + per_route[static_cast<std::size_t>(k)].front().cost;

    Solution trial;
    trial.assignment = assignment;
    trial.routes.resize(static_cast<std::size_t>(vehicles));
    auto recurse = [&](auto&& self, int k, double cost) -> void {
      if (best && cost + min_rest[static_cast<std::size_t>(k)] > best->cost + kCostEps) return;
      if (k == vehicles) {
        if (!check_feasibility(instance, trial).feasible) return;
        const double exact = solution_cost(instance, trial);
        if (best && exact > best->cost + kCostEps) return;
        std::string text = routes_text(trial);
        if (!best || exact < best->cost - kCostEps || text < best_text) {
          best = OracleResult{trial, exact};
          best_text = std::move(text);
        }
        return;
      }
      const auto& v = instance.vehicle(k);
      for (const auto& seq : per_route[static_cast<std::size_t>(k)]) {
        if (best && cost + seq.cost + min_rest[static_cast<std::size_t>(k) + 1] > best->cost + kCostEps) break;
        auto& route = trial.routes[static_cast<std::size_t>(k)];
        route.vehicle = k;
        route.stops.clear();
        route.stops.push_back(Stop{v.start_depot, StopAction::depart_depot, -1});
        route.stops.insert(route.stops.end(), seq.stops.begin(), seq.stops.end());
        route.stops.push_back(Stop{v.end_depot, StopAction::arrive_depot, -1});
        self(self, k + 1, cost + seq.cost);
      }
    };
    recurse(recurse, 0, 0.0);
  };

  if (vehicles > 0) {
    std::vector<Assignment> assignment(static_cast<std::size_t>(requests));
    while (true) {
      for (int r = 0; r < requests; ++r) assignment[static_cast<std::size_t>(r)] = options[pick[static_cast<std::size_t>(r)]];
      consider(assignment);
      int r = 0;
      while (r < requests && ++pick[static_cast<std::size_t>(r)] == options.size()) pick[static_cast<std::size_t>(r++)] = 0;
      if (r == requests) break;
    }
  }
  if (!best) throw Error(ErrorCode::no_feasible, "no feasible solution exists");
  return *best;
}

}  // namespace pdpt
