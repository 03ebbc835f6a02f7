#include <algorithm>
#include <optional>

#include "pdpt/insertion.hpp"
#include "pdpt/local_search.hpp"
#include "pdpt/model.hpp"

namespace pdpt {

namespace {

// Directly served requests of a route, ordered by pickup position.
std::vector<RequestId> direct_requests(const Solution& solution, const Route& route) {
  std::vector<RequestId> out;
  for (const auto& stop : route.stops) {
    if (stop.action != StopAction::pickup) continue;
    const auto& a = solution.assignment[static_cast<std::size_t>(stop.request)];
    if (a.is_direct() && a.first == route.vehicle) out.push_back(stop.request);
  }
  return out;
}

int index_of(const Route& route, RequestId r, StopAction action) {
  for (std::size_t s = 0; s < route.stops.size(); ++s)
    if (route.stops[s].request == r && route.stops[s].action == action) return static_cast<int>(s);
  return -1;
}

}  // namespace

std::string_view to_string(MoveKind kind) {
  switch (kind) {
    case MoveKind::swr: return "SWR";
    case MoveKind::rnr: return "RNR";
    case MoveKind::adr: return "ADR";
  }
  return "?";
}

MoveUndo apply_move(const Instance& instance, Solution& solution, const Move& move) {
  MoveUndo undo;
  auto& from = solution.routes[static_cast<std::size_t>(move.from_route)];
  auto& to = solution.routes[static_cast<std::size_t>(move.to_route)];
  undo.routes.emplace_back(move.from_route, from);
  if (move.to_route != move.from_route) undo.routes.emplace_back(move.to_route, to);
  undo.assignments.emplace_back(move.request,
                                solution.assignment[static_cast<std::size_t>(move.request)]);
  if (move.kind == MoveKind::swr)
    undo.assignments.emplace_back(move.other, solution.assignment[static_cast<std::size_t>(move.other)]);

  switch (move.kind) {
    case MoveKind::adr: {
      from = without_request(from, move.request);
      insert_leg(from, direct_leg(instance, move.request), move.pickup_pos, move.delivery_pos);
      break;
    }
    case MoveKind::rnr: {
      from = without_request(from, move.request);
      insert_leg(to, direct_leg(instance, move.request), move.pickup_pos, move.delivery_pos);
      solution.assignment[static_cast<std::size_t>(move.request)] = Assignment::direct(move.to_route);
      break;
    }
    case MoveKind::swr: {
      from = without_request(from, move.request);
      to = without_request(to, move.other);
      insert_leg(to, direct_leg(instance, move.request), move.pickup_pos, move.delivery_pos);
      insert_leg(from, direct_leg(instance, move.other), move.other_pickup_pos,
                 move.other_delivery_pos);
      solution.assignment[static_cast<std::size_t>(move.request)] = Assignment::direct(move.to_route);
      solution.assignment[static_cast<std::size_t>(move.other)] = Assignment::direct(move.from_route);
      break;
    }
  }
  return undo;
}

void revert_move(Solution& solution, const MoveUndo& undo) {
  for (const auto& [k, route] : undo.routes) solution.routes[static_cast<std::size_t>(k)] = route;
  for (const auto& [r, a] : undo.assignments) solution.assignment[static_cast<std::size_t>(r)] = a;
}

void for_each_adr(const Instance& instance, const Solution& solution, const MoveVisitor& visit) {
  bool go = true;
  for (const auto& route : solution.routes) {
    for (RequestId r : direct_requests(solution, route)) {
      const int p = index_of(route, r, StopAction::pickup);
      const int d = index_of(route, r, StopAction::delivery);
      const int same_first = p;
      const int same_second = d - 1;
      const Route reduced = without_request(route, r);
      const auto loads = route_loads(instance, reduced);
      const double rem = removal_delta(instance, route, r);
      for_each_leg_insertion(instance, reduced, loads, direct_leg(instance, r),
                             [&](const LegInsertion& ins) {
                               if (!go) return;
                               if (ins.first_pos == same_first && ins.second_pos == same_second) return;
                               Move m;
                               m.kind = MoveKind::adr;
                               m.request = r;
                               m.from_route = m.to_route = route.vehicle;
                               m.pickup_pos = ins.first_pos;
                               m.delivery_pos = ins.second_pos;
                               m.delta = rem + ins.delta;
                               go = visit(m);
                             });
      if (!go) return;
    }
  }
}

void for_each_rnr(const Instance& instance, const Solution& solution, const MoveVisitor& visit) {
  std::vector<std::vector<int>> loads;
  for (const auto& route : solution.routes) loads.push_back(route_loads(instance, route));
  bool go = true;
  for (const auto& route : solution.routes) {
    for (RequestId r : direct_requests(solution, route)) {
      const double rem = removal_delta(instance, route, r);
      const Leg leg = direct_leg(instance, r);
      for (const auto& target : solution.routes) {
        if (target.vehicle == route.vehicle) continue;
        for_each_leg_insertion(instance, target, loads[static_cast<std::size_t>(target.vehicle)], leg,
                               [&](const LegInsertion& ins) {
                                 if (!go) return;
                                 Move m;
                                 m.kind = MoveKind::rnr;
                                 m.request = r;
                                 m.from_route = route.vehicle;
                                 m.to_route = target.vehicle;
                                 m.pickup_pos = ins.first_pos;
                                 m.delivery_pos = ins.second_pos;
                                 m.delta = rem + ins.delta;
                                 go = visit(m);
                               });
        if (!go) return;
      }
    }
  }
}

void for_each_swr(const Instance& instance, const Solution& solution, const MoveVisitor& visit) {
  struct Prepared {
    RequestId request;
    Route reduced;
    std::vector<int> loads;
    double removal;
  };
  std::vector<std::vector<Prepared>> per_route;
  for (const auto& route : solution.routes) {
    std::vector<Prepared> items;
    for (RequestId r : direct_requests(solution, route)) {
      Route reduced = without_request(route, r);
      auto loads = route_loads(instance, reduced);
      items.push_back({r, std::move(reduced), std::move(loads), removal_delta(instance, route, r)});
    }
    per_route.push_back(std::move(items));
  }
  for (std::size_t a = 0; a < per_route.size(); ++a) {
    for (const auto& mine : per_route[a]) {
      const Leg my_leg = direct_leg(instance, mine.request);
      for (std::size_t b = a + 1; b < per_route.size(); ++b) {
        for (const auto& theirs : per_route[b]) {
          auto into_b = best_leg_insertion(instance, theirs.reduced, theirs.loads, my_leg);
          if (!into_b) continue;
          auto into_a = best_leg_insertion(instance, mine.reduced, mine.loads,
                                           direct_leg(instance, theirs.request));
          if (!into_a) continue;
          Move m;
          m.kind = MoveKind::swr;
          m.request = mine.request;
          m.other = theirs.request;
          m.from_route = static_cast<VehicleId>(a);
          m.to_route = static_cast<VehicleId>(b);
          m.pickup_pos = into_b->first_pos;
          m.delivery_pos = into_b->second_pos;
          m.other_pickup_pos = into_a->first_pos;
          m.other_delivery_pos = into_a->second_pos;
          m.delta = mine.removal + theirs.removal + into_b->delta + into_a->delta;
          if (!visit(m)) return;
        }
      }
    }
  }
}

namespace {

std::vector<Move> collect(void (*each)(const Instance&, const Solution&, const MoveVisitor&),
                          const Instance& instance, const Solution& solution) {
  std::vector<Move> out;
  each(instance, solution, [&out](const Move& m) {
    out.push_back(m);
    return true;
  });
  return out;
}

}  // namespace

std::vector<Move> neighborhood_swr(const Instance& instance, const Solution& solution) {
  return collect(for_each_swr, instance, solution);
}
std::vector<Move> neighborhood_rnr(const Instance& instance, const Solution& solution) {
  return collect(for_each_rnr, instance, solution);
}
std::vector<Move> neighborhood_adr(const Instance& instance, const Solution& solution) {
  return collect(for_each_adr, instance, solution);
}

SearchResult vnd(const Instance& instance, Solution solution, Improvement strategy) {
  using Each = void (*)(const Instance&, const Solution&, const MoveVisitor&);
  const Each order[] = {for_each_adr, for_each_rnr, for_each_swr};
  SearchResult result;
  double cost = solution_cost(instance, solution);
  result.trace.push_back(cost);
  std::size_t idx = 0;
  while (idx < std::size(order)) {
    std::optional<Move> chosen;
    order[idx](instance, solution, [&](const Move& m) {
      if (m.delta < -kCostEps && (!chosen || m.delta < chosen->delta)) chosen = m;
      return !(chosen && strategy == Improvement::first);
    });
    if (!chosen) {
      ++idx;
      continue;
    }
    apply_move(instance, solution, *chosen);
    cost = solution_cost(instance, solution);
    result.trace.push_back(cost);
    idx = 0;
  }
  result.solution = std::move(solution);
  return result;
}

}  // namespace pdpt
