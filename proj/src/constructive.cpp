#include "pdpt/constructive.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <tuple>
#include <limits>
#include <numeric>
#include <optional>
#include <string>

#include "pdpt/error.hpp"
#include "pdpt/model.hpp"

namespace pdpt {

namespace {

void require_some_vehicle_fits(const Instance& instance) {
  const int cap = instance.max_capacity();
  for (const auto& req : instance.requests()) {
    if (req.quantity > cap)
      throw Error(ErrorCode::no_feasible_insertion,
                  "request " + std::to_string(req.id) + " (quantity " +
                      std::to_string(req.quantity) + ") exceeds every vehicle capacity");
  }
}

}  // namespace

std::size_t greedy_pick(const std::vector<InsertionCandidate>& candidates) {
  std::size_t best = 0;
  for (std::size_t c = 1; c < candidates.size(); ++c) {
    if (candidates[c].delta_cost < candidates[best].delta_cost - kCostEps) best = c;
  }
  return best;
}

Solution construct_by_insertion(const Instance& instance, const CandidatePicker& pick) {
  require_some_vehicle_fits(instance);
  const std::size_t R = instance.request_count();
  const std::size_t M = instance.vehicle_count();
  Solution sol = Solution::empty(instance);

  std::vector<Leg> legs;
  legs.reserve(R);
  for (std::size_t r = 0; r < R; ++r) legs.push_back(direct_leg(instance, static_cast<RequestId>(r)));

  // cache[r * M + k]: cheapest insertion of request r into route k.
  std::vector<std::optional<LegInsertion>> cache(R * M);
  std::vector<bool> pending(R, true);
  auto refresh_route = [&](std::size_t k) {
    const auto& route = sol.routes[k];
    const auto loads = route_loads(instance, route);
    for (std::size_t r = 0; r < R; ++r) {
      if (pending[r]) cache[r * M + k] = best_leg_insertion(instance, route, loads, legs[r]);
    }
  };
  for (std::size_t k = 0; k < M; ++k) refresh_route(k);

  std::vector<InsertionCandidate> candidates;
  for (std::size_t placed = 0; placed < R; ++placed) {
    candidates.clear();
    for (std::size_t r = 0; r < R; ++r) {
      if (!pending[r]) continue;
      for (std::size_t k = 0; k < M; ++k) {
        if (const auto& c = cache[r * M + k])
          candidates.push_back({static_cast<RequestId>(r), static_cast<VehicleId>(k), c->first_pos,
                                c->second_pos, c->delta});
      }
    }
    if (candidates.empty()) {
      const auto r = std::find(pending.begin(), pending.end(), true) - pending.begin();
      throw Error(ErrorCode::no_feasible_insertion,
                  "request " + std::to_string(r) + " fits no vehicle");
    }
    const auto& chosen = candidates[pick(candidates)];
    const auto k = static_cast<std::size_t>(chosen.vehicle);
    insert_leg(sol.routes[k], legs[static_cast<std::size_t>(chosen.request)], chosen.pickup_pos,
               chosen.delivery_pos);
    sol.assignment[static_cast<std::size_t>(chosen.request)] = Assignment::direct(chosen.vehicle);
    pending[static_cast<std::size_t>(chosen.request)] = false;
    refresh_route(k);
  }
  return sol;
}

Solution greedy_construct(const Instance& instance) {
  return construct_by_insertion(instance, greedy_pick);
}

double clarke_wright_saving(double c_i0, double c_0j, double c_ij) { return c_i0 + c_0j - c_ij; }

NodeId savings_hub(const Instance& instance) {
  const auto& vehicles = instance.vehicles();
  if (vehicles.empty()) return -1;
  const auto& first = instance.node(vehicles.front().start_depot);
  const bool shared = std::all_of(vehicles.begin(), vehicles.end(), [&](const Vehicle& v) {
    return instance.dist(v.start_depot, first.id) == 0.0 && instance.dist(v.end_depot, first.id) == 0.0;
  });
  if (shared) return first.id;

  double cx = 0.0, cy = 0.0;
  for (const auto& req : instance.requests()) {
    cx += instance.node(req.pickup).x + instance.node(req.delivery).x;
    cy += instance.node(req.pickup).y + instance.node(req.delivery).y;
  }
  const double n = std::max<double>(1.0, 2.0 * static_cast<double>(instance.request_count()));
  cx /= n;
  cy /= n;
  NodeId best = -1;
  double best_d = std::numeric_limits<double>::infinity();
  for (const auto& v : vehicles) {
    for (NodeId id : {v.start_depot, v.end_depot}) {
      const auto& node = instance.node(id);
      const double d = std::hypot(node.x - cx, node.y - cy);
      if (d < best_d || (d == best_d && id < best)) {
        best_d = d;
        best = id;
      }
    }
  }
  return best;
}

std::vector<Saving> compute_savings(const Instance& instance, NodeId hub) {
  std::vector<Saving> savings;
  const auto& reqs = instance.requests();
  savings.reserve(reqs.size() * reqs.size());
  for (const auto& a : reqs) {
    for (const auto& b : reqs) {
      if (a.id == b.id) continue;
      const NodeId i = a.delivery;
      const NodeId j = b.pickup;
      savings.push_back(
          {i, j, clarke_wright_saving(instance.dist(i, hub), instance.dist(hub, j), instance.dist(i, j))});
    }
  }
  std::sort(savings.begin(), savings.end(), [](const Saving& x, const Saving& y) {
    if (x.value != y.value) return x.value > y.value;
    return std::tie(x.i, x.j) < std::tie(y.i, y.j);
  });
  return savings;
}

Solution clarke_wright(const Instance& instance) {
  require_some_vehicle_fits(instance);
  const std::size_t R = instance.request_count();
  const std::size_t M = instance.vehicle_count();
  const NodeId hub = savings_hub(instance);
  const auto savings = compute_savings(instance, hub);
  assert(std::is_sorted(savings.begin(), savings.end(),
                        [](const Saving& x, const Saving& y) { return x.value > y.value; }));

  // Each route is a sequence of request round trips (p_r, d_r); its load is
  // back to zero between requests, so merging never breaks capacity.
  struct CwRoute {
    std::vector<RequestId> requests;
    bool alive = true;
  };
  std::vector<CwRoute> routes(R);
  std::vector<int> route_starting_at(instance.node_count(), -1);
  std::vector<int> route_ending_at(instance.node_count(), -1);
  for (std::size_t r = 0; r < R; ++r) {
    const auto& req = instance.request(static_cast<RequestId>(r));
    routes[r].requests = {static_cast<RequestId>(r)};
    route_starting_at[static_cast<std::size_t>(req.pickup)] = static_cast<int>(r);
    route_ending_at[static_cast<std::size_t>(req.delivery)] = static_cast<int>(r);
  }
  auto start_node = [&](const CwRoute& r) { return instance.request(r.requests.front()).pickup; };
  auto end_node = [&](const CwRoute& r) { return instance.request(r.requests.back()).delivery; };

  for (std::size_t cur = 0; cur < R; ++cur) {
    if (!routes[cur].alive) continue;
    for (;;) {
      const NodeId head = start_node(routes[cur]);
      const NodeId tail = end_node(routes[cur]);
      int partner = -1;
      bool partner_first = false;
      for (const auto& s : savings) {
        if (s.value <= 0.0) break;
        if (s.j == head) {
          const int other = route_ending_at[static_cast<std::size_t>(s.i)];
          if (other >= 0 && other != static_cast<int>(cur)) {
            partner = other;
            partner_first = true;
            break;
          }
        }
        if (s.i == tail) {
          const int other = route_starting_at[static_cast<std::size_t>(s.j)];
          if (other >= 0 && other != static_cast<int>(cur)) {
            partner = other;
            partner_first = false;
            break;
          }
        }
      }
      if (partner < 0) break;
      auto& mine = routes[cur];
      auto& theirs = routes[static_cast<std::size_t>(partner)];
      route_starting_at[static_cast<std::size_t>(start_node(mine))] = -1;
      route_ending_at[static_cast<std::size_t>(end_node(mine))] = -1;
      route_starting_at[static_cast<std::size_t>(start_node(theirs))] = -1;
      route_ending_at[static_cast<std::size_t>(end_node(theirs))] = -1;
      if (partner_first) {
        theirs.requests.insert(theirs.requests.end(), mine.requests.begin(), mine.requests.end());
        mine.requests = std::move(theirs.requests);
      } else {
        mine.requests.insert(mine.requests.end(), theirs.requests.begin(), theirs.requests.end());
      }
      theirs.requests.clear();
      theirs.alive = false;
      route_starting_at[static_cast<std::size_t>(start_node(mine))] = static_cast<int>(cur);
      route_ending_at[static_cast<std::size_t>(end_node(mine))] = static_cast<int>(cur);
    }
  }

  // Hand routes to vehicles, longest first, each to the free vehicle whose
  // depots add the least.
  struct Merged {
    std::vector<RequestId> requests;
    double length = 0.0;
    int max_load = 0;
  };
  std::vector<Merged> merged;
  for (auto& r : routes) {
    if (!r.alive) continue;
    Merged m;
    m.requests = std::move(r.requests);
    for (std::size_t s = 0; s < m.requests.size(); ++s) {
      const auto& req = instance.request(m.requests[s]);
      m.length += instance.dist(req.pickup, req.delivery);
      if (s > 0) m.length += instance.dist(instance.request(m.requests[s - 1]).delivery, req.pickup);
      m.max_load = std::max(m.max_load, req.quantity);
    }
    merged.push_back(std::move(m));
  }
  if (merged.size() > M)
    throw Error(ErrorCode::insufficient_fleet, std::to_string(merged.size()) + " routes for " +
                                                   std::to_string(M) + " vehicles");
  std::stable_sort(merged.begin(), merged.end(),
                   [](const Merged& a, const Merged& b) { return a.length > b.length; });

  Solution sol = Solution::empty(instance);
  std::vector<bool> used(M, false);
  for (const auto& m : merged) {
    const NodeId first = instance.request(m.requests.front()).pickup;
    const NodeId last = instance.request(m.requests.back()).delivery;
    int chosen = -1;
    double chosen_cost = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < M; ++k) {
      const auto& v = instance.vehicle(static_cast<VehicleId>(k));
      if (used[k] || v.capacity < m.max_load) continue;
      const double c = instance.dist(v.start_depot, first) + instance.dist(last, v.end_depot);
      if (c < chosen_cost - kCostEps) {
        chosen = static_cast<int>(k);
        chosen_cost = c;
      }
    }
    if (chosen < 0)
      throw Error(ErrorCode::insufficient_fleet, "no free vehicle can carry a merged route");
    used[static_cast<std::size_t>(chosen)] = true;
    auto& stops = sol.routes[static_cast<std::size_t>(chosen)].stops;
    const Stop tail_stop = stops.back();
    stops.pop_back();
    for (RequestId r : m.requests) {
      const auto& req = instance.request(r);
      stops.push_back(Stop{req.pickup, StopAction::pickup, r});
      stops.push_back(Stop{req.delivery, StopAction::delivery, r});
      sol.assignment[static_cast<std::size_t>(r)] = Assignment::direct(chosen);
    }
    stops.push_back(tail_stop);
  }
  return sol;
}

Solution transship_improve(const Instance& instance, Solution solution) {
  [[maybe_unused]] const double input_cost = solution_cost(instance, solution);
  double current = solution_cost(instance, solution);
  for (std::size_t r = 0; r < instance.request_count(); ++r) {
    if (!solution.assignment[r].assigned()) continue;
    Solution trial = solution;
    remove_request(trial, static_cast<RequestId>(r));
    const double reduced = solution_cost(instance, trial);
    auto placement = best_placement(instance, trial, static_cast<RequestId>(r), true);
    if (!placement || reduced + placement->delta >= current - kCostEps) continue;
    apply_placement(instance, trial, *placement);
    solution = std::move(trial);
    current = solution_cost(instance, solution);
  }
  assert(current <= input_cost + 1e-9);
  return solution;
}

Solution transship_until_stable(const Instance& instance, Solution solution, int max_passes) {
  double cost = solution_cost(instance, solution);
  for (int pass = 0; pass < max_passes; ++pass) {
    Solution next = transship_improve(instance, solution);
    const double next_cost = solution_cost(instance, next);
    const bool stalled = cost - next_cost < kCostEps;
    solution = std::move(next);
    cost = next_cost;
    if (stalled) break;
  }
  return solution;
}

Solution sequential_insertion(const Instance& instance, const std::vector<RequestId>& order) {
  require_some_vehicle_fits(instance);
  Solution sol = Solution::empty(instance);
  for (RequestId r : order) {
    auto p = best_direct_placement(instance, sol, r);
    if (!p)
      throw Error(ErrorCode::no_feasible_insertion, "request " + std::to_string(r) + " fits no vehicle");
    apply_placement(instance, sol, *p);
  }
  return sol;
}

Solution multistart(const Instance& instance, const MultistartParams& params) {
  if (params.starts < 1) throw Error(ErrorCode::input_error, "multistart needs starts >= 1");
  std::optional<Solution> best;
  double best_cost = 0.0;
  std::optional<Error> last_error;
  std::vector<RequestId> order(instance.request_count());
  for (int s = 0; s < params.starts; ++s) {
    Rng rng(derive_seed(params.seed, {static_cast<std::uint64_t>(s)}));
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);
    try {
      Solution cand = transship_until_stable(instance, sequential_insertion(instance, order));
      const double c = solution_cost(instance, cand);
      if (!best || c < best_cost - kCostEps) {
        best = std::move(cand);
        best_cost = c;
      }
    } catch (const Error& e) {
      last_error = e;
    }
  }
  if (!best) throw *last_error;
  return *best;
}

}  // namespace pdpt
