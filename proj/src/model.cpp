#include "pdpt/model.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <utility>

#include "pdpt/error.hpp"

namespace pdpt {

namespace {

constexpr double kTimeTol = 1e-9;

struct StopRef {
  int route = -1;
  int index = -1;
};

// Transfer stops keyed by (request, node).
using TransferIndex = std::map<std::pair<RequestId, NodeId>, StopRef>;

TransferIndex index_drops(const Solution& solution) {
  TransferIndex drops;
  for (std::size_t k = 0; k < solution.routes.size(); ++k) {
    const auto& stops = solution.routes[k].stops;
    for (std::size_t s = 0; s < stops.size(); ++s) {
      if (stops[s].action == StopAction::transfer_drop)
        drops.try_emplace({stops[s].request, stops[s].node},
                          StopRef{static_cast<int>(k), static_cast<int>(s)});
    }
  }
  return drops;
}

int load_change(const Instance& instance, const Stop& stop) {
  if (stop.request < 0 || static_cast<std::size_t>(stop.request) >= instance.request_count())
    return 0;
  const int q = instance.request(stop.request).quantity;
  switch (stop.action) {
    case StopAction::pickup:
    case StopAction::transfer_pick: return q;
    case StopAction::delivery:
    case StopAction::transfer_drop: return -q;
    default: return 0;
  }
}

bool valid_node(const Instance& instance, NodeId id) {
  return id >= 0 && static_cast<std::size_t>(id) < instance.node_count();
}

double leg(const Instance& instance, NodeId a, NodeId b) {
  return valid_node(instance, a) && valid_node(instance, b) ? instance.dist(a, b) : 0.0;
}

}  // namespace

std::string_view to_string(StopAction action) {
  switch (action) {
    case StopAction::depart_depot: return "depart_depot";
    case StopAction::arrive_depot: return "arrive_depot";
    case StopAction::pickup: return "pickup";
    case StopAction::delivery: return "delivery";
    case StopAction::transfer_drop: return "transfer_drop";
    case StopAction::transfer_pick: return "transfer_pick";
  }
  return "?";
}

std::string_view to_string(Constraint c) {
  switch (c) {
    case Constraint::assign: return "ASSIGN(2)";
    case Constraint::visit: return "VISIT(3)";
    case Constraint::depot_start: return "DEPOT_START(4)";
    case Constraint::depot_end: return "DEPOT_END(5)";
    case Constraint::clock_zero: return "CLOCK_ZERO(6)";
    case Constraint::precedence: return "PRECEDENCE(7)";
    case Constraint::time_prop: return "TIME_PROP(8)";
    case Constraint::load_zero: return "LOAD_ZERO(9)";
    case Constraint::capacity: return "CAPACITY(10)";
    case Constraint::nonneg_time: return "NONNEG_TIME(11)";
    case Constraint::nonneg_load: return "NONNEG_LOAD(12)";
    case Constraint::transfer_sync: return "TRANSFER_SYNC";
  }
  return "?";
}

bool FeasibilityReport::has(Constraint c) const {
  return std::any_of(violations.begin(), violations.end(),
                     [c](const Violation& v) { return v.constraint == c; });
}

Solution Solution::empty(const Instance& instance) {
  Solution s;
  s.routes.reserve(instance.vehicle_count());
  for (const auto& v : instance.vehicles()) {
    s.routes.push_back(Route{v.id,
                             {Stop{v.start_depot, StopAction::depart_depot, -1},
                              Stop{v.end_depot, StopAction::arrive_depot, -1}}});
  }
  s.assignment.assign(instance.request_count(), Assignment{});
  return s;
}

bool transfer_dependencies_acyclic(const Solution& solution) {
  // Vertices are transfer stops; edges follow route order between consecutive
  // transfer stops of one route, and go from each drop to the matching pick.
  std::vector<StopRef> vertices;
  std::map<std::pair<int, int>, int> vertex_of;
  for (std::size_t k = 0; k < solution.routes.size(); ++k) {
    const auto& stops = solution.routes[k].stops;
    for (std::size_t s = 0; s < stops.size(); ++s) {
      if (stops[s].action == StopAction::transfer_drop ||
          stops[s].action == StopAction::transfer_pick) {
        vertex_of[{static_cast<int>(k), static_cast<int>(s)}] = static_cast<int>(vertices.size());
        vertices.push_back({static_cast<int>(k), static_cast<int>(s)});
      }
    }
  }
  if (vertices.empty()) return true;

  std::vector<std::vector<int>> out(vertices.size());
  std::vector<int> indegree(vertices.size(), 0);
  auto add_edge = [&](int a, int b) {
    out[static_cast<std::size_t>(a)].push_back(b);
    ++indegree[static_cast<std::size_t>(b)];
  };
  for (std::size_t v = 0; v + 1 < vertices.size(); ++v) {
    if (vertices[v].route == vertices[v + 1].route) add_edge(static_cast<int>(v), static_cast<int>(v + 1));
  }
  const TransferIndex drops = index_drops(solution);
  for (std::size_t v = 0; v < vertices.size(); ++v) {
    const auto& stop = solution.routes[static_cast<std::size_t>(vertices[v].route)]
                           .stops[static_cast<std::size_t>(vertices[v].index)];
    if (stop.action != StopAction::transfer_pick) continue;
    auto it = drops.find({stop.request, stop.node});
    if (it == drops.end()) continue;
    add_edge(vertex_of.at({it->second.route, it->second.index}), static_cast<int>(v));
  }

  std::vector<int> ready;
  for (std::size_t v = 0; v < vertices.size(); ++v)
    if (indegree[v] == 0) ready.push_back(static_cast<int>(v));
  std::size_t seen = 0;
  while (!ready.empty()) {
    const int v = ready.back();
    ready.pop_back();
    ++seen;
    for (int w : out[static_cast<std::size_t>(v)])
      if (--indegree[static_cast<std::size_t>(w)] == 0) ready.push_back(w);
  }
  return seen == vertices.size();
}

Schedule propagate_schedule(const Instance& instance, const Solution& solution) {
  if (!transfer_dependencies_acyclic(solution))
    throw Error(ErrorCode::cyclic_transfer, "routes wait on each other's transfers in a cycle");

  Schedule sched;
  sched.departure.resize(solution.routes.size());
  sched.load.resize(solution.routes.size());
  for (std::size_t k = 0; k < solution.routes.size(); ++k) {
    const auto& stops = solution.routes[k].stops;
    auto& dep = sched.departure[k];
    auto& load = sched.load[k];
    dep.assign(stops.size(), 0.0);
    load.assign(stops.size(), 0);
    int y = 0;
    for (std::size_t s = 0; s < stops.size(); ++s) {
      if (s > 0) dep[s] = dep[s - 1] + leg(instance, stops[s - 1].node, stops[s].node);
      y += load_change(instance, stops[s]);
      load[s] = y;
    }
  }

  // Acyclic, so lifting pick times converges within (#picks + 1) sweeps.
  const TransferIndex drops = index_drops(solution);
  bool changed = !drops.empty();
  while (changed) {
    changed = false;
    for (std::size_t k = 0; k < solution.routes.size(); ++k) {
      const auto& stops = solution.routes[k].stops;
      auto& dep = sched.departure[k];
      for (std::size_t s = 1; s < stops.size(); ++s) {
        double t = dep[s - 1] + leg(instance, stops[s - 1].node, stops[s].node);
        if (stops[s].action == StopAction::transfer_pick) {
          auto it = drops.find({stops[s].request, stops[s].node});
          if (it != drops.end())
            t = std::max(t, sched.departure[static_cast<std::size_t>(it->second.route)]
                                           [static_cast<std::size_t>(it->second.index)]);
        }
        if (t > dep[s]) {
          dep[s] = t;
          changed = true;
        }
      }
    }
  }
  return sched;
}

double route_cost(const Instance& instance, const Route& route) {
  double total = 0.0;
  for (std::size_t s = 1; s < route.stops.size(); ++s)
    total += leg(instance, route.stops[s - 1].node, route.stops[s].node);
  return total;
}

double solution_cost(const Instance& instance, const Solution& solution) {
  double total = 0.0;
  for (const auto& route : solution.routes) total += route_cost(instance, route);
  return total;
}

FeasibilityReport check_feasibility(const Instance& instance, const Solution& solution) {
  FeasibilityReport report;
  auto flag = [&report](Constraint c, std::string detail) {
    report.violations.push_back({c, std::move(detail)});
  };
  const auto R = instance.request_count();
  const auto M = instance.vehicle_count();
  const auto rname = [](std::size_t r) { return "request " + std::to_string(r); };
  const auto kname = [](std::size_t k) { return "route " + std::to_string(k); };

  // Depot endpoints and stop/node consistency.
  if (solution.routes.size() != M)
    flag(Constraint::depot_start, "expected " + std::to_string(M) + " routes, got " +
                                      std::to_string(solution.routes.size()));
  for (std::size_t k = 0; k < solution.routes.size(); ++k) {
    const auto& route = solution.routes[k];
    const auto& stops = route.stops;
    if (route.vehicle != static_cast<VehicleId>(k) || k >= M) {
      flag(Constraint::depot_start, kname(k) + " is not bound to vehicle " + std::to_string(k));
      continue;
    }
    const auto& veh = instance.vehicle(static_cast<VehicleId>(k));
    if (stops.empty() || stops.front().action != StopAction::depart_depot ||
        stops.front().node != veh.start_depot)
      flag(Constraint::depot_start, kname(k) + " does not leave from its start depot");
    if (stops.size() < 2 || stops.back().action != StopAction::arrive_depot ||
        stops.back().node != veh.end_depot)
      flag(Constraint::depot_end, kname(k) + " does not end at its end depot");
    for (std::size_t s = 0; s < stops.size(); ++s) {
      const auto& stop = stops[s];
      const std::string where = kname(k) + " stop " + std::to_string(s);
      const bool endpoint = s == 0 || s + 1 == stops.size();
      if (stop.action == StopAction::depart_depot || stop.action == StopAction::arrive_depot) {
        if (!endpoint) flag(Constraint::visit, where + ": depot action inside route");
        continue;
      }
      if (!valid_node(instance, stop.node)) {
        flag(Constraint::visit, where + ": unknown node");
        continue;
      }
      if (stop.request < 0 || static_cast<std::size_t>(stop.request) >= R) {
        flag(Constraint::visit, where + ": unknown request");
        continue;
      }
      const auto& req = instance.request(stop.request);
      const bool ok = (stop.action == StopAction::pickup && stop.node == req.pickup) ||
                      (stop.action == StopAction::delivery && stop.node == req.delivery) ||
                      ((stop.action == StopAction::transfer_drop ||
                        stop.action == StopAction::transfer_pick) &&
                       instance.is_transfer_point(stop.node));
      if (!ok) flag(Constraint::visit, where + ": action does not match node");
    }
  }

  // Per-request accounting.
  struct Seen {
    std::vector<std::pair<int, int>> pickups, deliveries, drops, picks;  // (route, index)
  };
  std::vector<Seen> seen(R);
  std::vector<std::vector<NodeId>> drop_nodes(R), pick_nodes(R);
  for (std::size_t k = 0; k < solution.routes.size(); ++k) {
    const auto& stops = solution.routes[k].stops;
    for (std::size_t s = 0; s < stops.size(); ++s) {
      const auto& stop = stops[s];
      if (stop.request < 0 || static_cast<std::size_t>(stop.request) >= R) continue;
      auto& entry = seen[static_cast<std::size_t>(stop.request)];
      const std::pair<int, int> at{static_cast<int>(k), static_cast<int>(s)};
      switch (stop.action) {
        case StopAction::pickup: entry.pickups.push_back(at); break;
        case StopAction::delivery: entry.deliveries.push_back(at); break;
        case StopAction::transfer_drop:
          entry.drops.push_back(at);
          drop_nodes[static_cast<std::size_t>(stop.request)].push_back(stop.node);
          break;
        case StopAction::transfer_pick:
          entry.picks.push_back(at);
          pick_nodes[static_cast<std::size_t>(stop.request)].push_back(stop.node);
          break;
        default: break;
      }
    }
  }

  std::vector<bool> served(R, false);
  for (std::size_t r = 0; r < R; ++r) {
    const auto& a = r < solution.assignment.size() ? solution.assignment[r] : Assignment{};
    const auto& e = seen[r];
    const auto count_in = [](const std::vector<std::pair<int, int>>& v, int route) {
      return std::count_if(v.begin(), v.end(), [route](auto p) { return p.first == route; });
    };
    const bool valid_vehicle = a.first >= 0 && static_cast<std::size_t>(a.first) < M;
    const bool valid_second =
        !a.is_transferred() ||
        (a.second >= 0 && static_cast<std::size_t>(a.second) < M && a.second != a.first &&
         instance.is_transfer_point(a.transfer));
    if (!valid_vehicle || !valid_second) {
      flag(Constraint::assign, rname(r) + " has no valid vehicle assignment");
    }

    // The vehicle(s) assigned to the request visit its pickup and
    // delivery exactly once; nobody else visits them for this request.
    const int pickup_vehicle = valid_vehicle ? a.first : -1;
    const int delivery_vehicle = valid_vehicle ? (a.is_transferred() ? a.second : a.first) : -1;
    for (std::size_t k = 0; k < solution.routes.size(); ++k) {
      const int kk = static_cast<int>(k);
      const auto p = count_in(e.pickups, kk);
      const auto d = count_in(e.deliveries, kk);
      if (p != (kk == pickup_vehicle ? 1 : 0))
        flag(Constraint::visit, rname(r) + ": " + kname(k) + " visits its pickup " +
                                    std::to_string(p) + " time(s)");
      if (d != (kk == delivery_vehicle ? 1 : 0))
        flag(Constraint::visit, rname(r) + ": " + kname(k) + " visits its delivery " +
                                    std::to_string(d) + " time(s)");
    }
    const bool expects_transfer = valid_vehicle && a.is_transferred();
    const std::size_t want_legs = expects_transfer ? 1 : 0;
    if (e.drops.size() != want_legs || e.picks.size() != want_legs) {
      flag(Constraint::visit, rname(r) + ": transfer stops do not match its assignment");
    } else if (expects_transfer) {
      if (e.drops[0].first != a.first || drop_nodes[r][0] != a.transfer)
        flag(Constraint::visit, rname(r) + ": transfer drop not on its first vehicle/transfer");
      if (e.picks[0].first != a.second || pick_nodes[r][0] != a.transfer)
        flag(Constraint::visit, rname(r) + ": transfer pick not on its second vehicle/transfer");
    }

    // Served end-to-end exactly once.
    bool end_to_end = e.pickups.size() == 1 && e.deliveries.size() == 1;
    if (end_to_end) {
      if (e.drops.empty() && e.picks.empty()) {
        end_to_end = e.pickups[0].first == e.deliveries[0].first;
      } else if (e.drops.size() == 1 && e.picks.size() == 1) {
        end_to_end = e.pickups[0].first == e.drops[0].first &&
                     e.picks[0].first == e.deliveries[0].first &&
                     drop_nodes[r][0] == pick_nodes[r][0];
      } else {
        end_to_end = false;
      }
    }
    if (!end_to_end) flag(Constraint::assign, rname(r) + " is not served exactly once end-to-end");
    served[r] = end_to_end;

    // Precedence on route order.
    if (end_to_end) {
      if (e.drops.empty()) {
        if (e.pickups[0].second > e.deliveries[0].second)
          flag(Constraint::precedence, rname(r) + ": delivery precedes pickup");
      } else {
        if (e.pickups[0].second > e.drops[0].second)
          flag(Constraint::precedence, rname(r) + ": transfer drop precedes pickup");
        if (e.picks[0].second > e.deliveries[0].second)
          flag(Constraint::precedence, rname(r) + ": delivery precedes transfer pick");
      }
    }
  }

  // Schedule and transfer synchronization.
  std::optional<Schedule> sched;
  try {
    sched = propagate_schedule(instance, solution);
  } catch (const Error&) {
    flag(Constraint::time_prop, "no schedule exists: cyclic transfer dependency");
    flag(Constraint::transfer_sync, "transfer drops and picks wait on each other in a cycle");
  }
  if (sched) {
    for (std::size_t k = 0; k < solution.routes.size(); ++k) {
      const auto& stops = solution.routes[k].stops;
      const auto& dep = sched->departure[k];
      if (!dep.empty() && dep[0] != 0.0) flag(Constraint::clock_zero, kname(k) + ": D(k+) != 0");
      for (std::size_t s = 0; s < stops.size(); ++s) {
        if (dep[s] < 0.0) flag(Constraint::nonneg_time, kname(k) + " stop " + std::to_string(s));
        if (s > 0 &&
            dep[s] + kTimeTol < dep[s - 1] + leg(instance, stops[s - 1].node, stops[s].node))
          flag(Constraint::time_prop, kname(k) + " stop " + std::to_string(s));
      }
    }
    for (std::size_t r = 0; r < R; ++r) {
      const auto& e = seen[r];
      if (served[r] && e.drops.size() == 1) {
        const double t_drop = sched->departure[static_cast<std::size_t>(e.drops[0].first)]
                                              [static_cast<std::size_t>(e.drops[0].second)];
        const double t_pick = sched->departure[static_cast<std::size_t>(e.picks[0].first)]
                                              [static_cast<std::size_t>(e.picks[0].second)];
        if (t_pick + kTimeTol < t_drop)
          flag(Constraint::transfer_sync, rname(r) + ": picked before it was dropped");
      }
      if (served[r]) {
        const double t_p = sched->departure[static_cast<std::size_t>(e.pickups[0].first)]
                                           [static_cast<std::size_t>(e.pickups[0].second)];
        const double t_d = sched->departure[static_cast<std::size_t>(e.deliveries[0].first)]
                                           [static_cast<std::size_t>(e.deliveries[0].second)];
        if (t_p > t_d + kTimeTol)
          flag(Constraint::precedence, rname(r) + ": delivered before picked up in time");
      }
    }
  }

  // Loads.
  for (std::size_t k = 0; k < solution.routes.size() && k < M; ++k) {
    const auto& stops = solution.routes[k].stops;
    const int cap = instance.vehicle(static_cast<VehicleId>(k)).capacity;
    int y = 0;
    for (std::size_t s = 0; s < stops.size(); ++s) {
      y += load_change(instance, stops[s]);
      const std::string where = kname(k) + " stop " + std::to_string(s);
      if (s == 0 && y != 0) flag(Constraint::load_zero, where + ": load leaving depot is not 0");
      if (y > cap) flag(Constraint::capacity, where + ": load " + std::to_string(y) + " > " +
                                                  std::to_string(cap));
      if (y < 0) flag(Constraint::nonneg_load, where + ": load " + std::to_string(y));
    }
  }

  report.feasible = report.violations.empty();
  return report;
}

}  // namespace pdpt
