#include "pdpt/insertion.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>

#include "pdpt/model.hpp"

namespace pdpt {

Leg direct_leg(const Instance& instance, RequestId r) {
  const auto& req = instance.request(r);
  return Leg{Stop{req.pickup, StopAction::pickup, r}, Stop{req.delivery, StopAction::delivery, r},
             req.quantity};
}

Leg inbound_leg(const Instance& instance, RequestId r, NodeId transfer) {
  const auto& req = instance.request(r);
  return Leg{Stop{req.pickup, StopAction::pickup, r},
             Stop{transfer, StopAction::transfer_drop, r}, req.quantity};
}

Leg outbound_leg(const Instance& instance, RequestId r, NodeId transfer) {
  const auto& req = instance.request(r);
  return Leg{Stop{transfer, StopAction::transfer_pick, r},
             Stop{req.delivery, StopAction::delivery, r}, req.quantity};
}

bool better_insertion(const LegInsertion& a, const LegInsertion& b) {
  if (a.delta < b.delta - kCostEps) return true;
  if (a.delta > b.delta + kCostEps) return false;
  return std::tie(a.route, a.first_pos, a.second_pos) < std::tie(b.route, b.first_pos, b.second_pos);
}

std::vector<int> route_loads(const Instance& instance, const Route& route) {
  std::vector<int> loads(route.stops.size(), 0);
  int y = 0;
  for (std::size_t s = 0; s < route.stops.size(); ++s) {
    const auto& stop = route.stops[s];
    if (stop.request >= 0) {
      const int q = instance.request(stop.request).quantity;
      if (stop.action == StopAction::pickup || stop.action == StopAction::transfer_pick) y += q;
      if (stop.action == StopAction::delivery || stop.action == StopAction::transfer_drop) y -= q;
    }
    loads[s] = y;
  }
  return loads;
}

double leg_insertion_delta(const Instance& instance, const Route& route, const Leg& leg,
                           int first_pos, int second_pos) {
  const auto& st = route.stops;
  const auto i = static_cast<std::size_t>(first_pos);
  const auto j = static_cast<std::size_t>(second_pos);
  const NodeId a = leg.first.node;
  const NodeId b = leg.second.node;
  if (i == j) {
    return instance.dist(st[i - 1].node, a) + instance.dist(a, b) + instance.dist(b, st[i].node) -
           instance.dist(st[i - 1].node, st[i].node);
  }
  return instance.dist(st[i - 1].node, a) + instance.dist(a, st[i].node) -
         instance.dist(st[i - 1].node, st[i].node) + instance.dist(st[j - 1].node, b) +
         instance.dist(b, st[j].node) - instance.dist(st[j - 1].node, st[j].node);
}

std::optional<LegInsertion> best_leg_insertion(const Instance& instance, const Route& route,
                                               std::span<const int> loads, const Leg& leg) {
  const auto& st = route.stops;
  if (st.size() < 2) return std::nullopt;
  const int limit = instance.vehicle(route.vehicle).capacity - leg.quantity;
  const NodeId a = leg.first.node;
  const NodeId b = leg.second.node;

  std::optional<LegInsertion> best;
  auto offer = [&](int i, int j, double delta) {
    LegInsertion cand{route.vehicle, i, j, delta};
    if (!best || better_insertion(cand, *best)) best = cand;
  };

  int window_i = -1;  // best first position whose load segment is still feasible
  double window_cost = 0.0;
  for (std::size_t j = 1; j < st.size(); ++j) {
    if (loads[j - 1] > limit) {
      window_i = -1;
      continue;
    }
    const NodeId prev = st[j - 1].node;
    const NodeId next = st[j].node;
    const double base = instance.dist(prev, next);
    offer(static_cast<int>(j), static_cast<int>(j),
          instance.dist(prev, a) + instance.dist(a, b) + instance.dist(b, next) - base);
    if (window_i >= 0)
      offer(window_i, static_cast<int>(j),
            window_cost + instance.dist(prev, b) + instance.dist(b, next) - base);
    const double open_cost = instance.dist(prev, a) + instance.dist(a, next) - base;
    if (window_i < 0 || open_cost < window_cost - kCostEps) {
      window_i = static_cast<int>(j);
      window_cost = open_cost;
    }
  }
  return best;
}

void for_each_leg_insertion(const Instance& instance, const Route& route,
                            std::span<const int> loads, const Leg& leg,
                            const std::function<void(const LegInsertion&)>& visit) {
  const auto& st = route.stops;
  if (st.size() < 2) return;
  const int limit = instance.vehicle(route.vehicle).capacity - leg.quantity;
  for (std::size_t i = 1; i < st.size(); ++i) {
    int seg_max = loads[i - 1];
    for (std::size_t j = i; j < st.size(); ++j) {
      if (j > i) seg_max = std::max(seg_max, loads[j - 1]);
      if (seg_max > limit) break;
      const int fi = static_cast<int>(i);
      const int sj = static_cast<int>(j);
      visit(LegInsertion{route.vehicle, fi, sj, leg_insertion_delta(instance, route, leg, fi, sj)});
    }
  }
}

void insert_leg(Route& route, const Leg& leg, int first_pos, int second_pos) {
  route.stops.insert(route.stops.begin() + second_pos, leg.second);
  route.stops.insert(route.stops.begin() + first_pos, leg.first);
}

Route without_request(const Route& route, RequestId r) {
  Route out{route.vehicle, {}};
  out.stops.reserve(route.stops.size());
  for (const auto& stop : route.stops)
    if (stop.request != r) out.stops.push_back(stop);
  return out;
}

void remove_request(Solution& solution, RequestId r) {
  for (auto& route : solution.routes) {
    std::erase_if(route.stops, [r](const Stop& s) { return s.request == r; });
  }
  if (r >= 0 && static_cast<std::size_t>(r) < solution.assignment.size())
    solution.assignment[static_cast<std::size_t>(r)] = Assignment{};
}

double removal_delta(const Instance& instance, const Route& route, RequestId r) {
  double delta = 0.0;
  const auto& st = route.stops;
  // Walk the route, replacing each maximal run of r's stops by a direct arc.
  std::size_t s = 0;
  while (s < st.size()) {
    if (st[s].request != r) {
      ++s;
      continue;
    }
    const std::size_t begin = s;
    while (s < st.size() && st[s].request == r) ++s;
    if (begin == 0 || s == st.size()) continue;  // malformed: r at a route end
    const NodeId before = st[begin - 1].node;
    const NodeId after = st[s].node;
    double run = instance.dist(before, st[begin].node) + instance.dist(st[s - 1].node, after);
    for (std::size_t t = begin + 1; t < s; ++t) run += instance.dist(st[t - 1].node, st[t].node);
    delta += instance.dist(before, after) - run;
  }
  return delta;
}

std::optional<Placement> best_direct_placement(const Instance& instance, const Solution& solution,
                                               RequestId r) {
  const Leg leg = direct_leg(instance, r);
  std::optional<LegInsertion> best;
  for (const auto& route : solution.routes) {
    const auto loads = route_loads(instance, route);
    auto cand = best_leg_insertion(instance, route, loads, leg);
    if (cand && (!best || better_insertion(*cand, *best))) best = cand;
  }
  if (!best) return std::nullopt;
  Placement p;
  p.request = r;
  p.delta = best->delta;
  p.first = *best;
  return p;
}

namespace {

bool has_transfer_stops(const Solution& solution) {
  for (const auto& route : solution.routes)
    for (const auto& stop : route.stops)
      if (stop.action == StopAction::transfer_drop || stop.action == StopAction::transfer_pick)
        return true;
  return false;
}

}  // namespace

std::optional<Placement> best_split_placement(const Instance& instance, const Solution& solution,
                                              RequestId r, NodeId transfer, SplitOrder order) {
  if (solution.routes.size() < 2) return std::nullopt;
  const Leg inbound = inbound_leg(instance, r, transfer);
  const Leg outbound = outbound_leg(instance, r, transfer);
  const Leg& lead = order == SplitOrder::inbound_first ? inbound : outbound;
  const Leg& follow = order == SplitOrder::inbound_first ? outbound : inbound;

  std::vector<std::vector<int>> loads;
  loads.reserve(solution.routes.size());
  for (const auto& route : solution.routes) loads.push_back(route_loads(instance, route));

  std::optional<LegInsertion> lead_best;
  for (std::size_t k = 0; k < solution.routes.size(); ++k) {
    auto cand = best_leg_insertion(instance, solution.routes[k], loads[k], lead);
    if (cand && (!lead_best || better_insertion(*cand, *lead_best))) lead_best = cand;
  }
  if (!lead_best) return std::nullopt;

  std::vector<LegInsertion> follow_options;
  for (std::size_t k = 0; k < solution.routes.size(); ++k) {
    if (static_cast<VehicleId>(k) == lead_best->route) continue;
    if (auto cand = best_leg_insertion(instance, solution.routes[k], loads[k], follow))
      follow_options.push_back(*cand);
  }
  std::sort(follow_options.begin(), follow_options.end(), better_insertion);

  const bool check_cycles = has_transfer_stops(solution);
  for (const auto& follow_ins : follow_options) {
    Placement p;
    p.request = r;
    p.transfer = transfer;
    p.first = order == SplitOrder::inbound_first ? *lead_best : follow_ins;
    p.second = order == SplitOrder::inbound_first ? follow_ins : *lead_best;
    p.delta = p.first.delta + p.second.delta;
    if (!check_cycles) return p;
    Solution trial = solution;
    apply_placement(instance, trial, p);
    if (transfer_dependencies_acyclic(trial)) return p;
  }
  return std::nullopt;
}

std::optional<Placement> best_placement(const Instance& instance, const Solution& solution,
                                        RequestId r, bool allow_transfers) {
  auto best = best_direct_placement(instance, solution, r);
  if (!allow_transfers) return best;
  for (NodeId t : instance.transfer_points()) {
    for (auto order : {SplitOrder::inbound_first, SplitOrder::outbound_first}) {
      auto cand = best_split_placement(instance, solution, r, t, order);
      if (cand && (!best || cand->delta < best->delta - kCostEps)) best = cand;
    }
  }
  return best;
}

void apply_placement(const Instance& instance, Solution& solution, const Placement& p) {
  auto& assignment = solution.assignment[static_cast<std::size_t>(p.request)];
  if (p.transfer < 0) {
    insert_leg(solution.routes[static_cast<std::size_t>(p.first.route)],
               direct_leg(instance, p.request), p.first.first_pos, p.first.second_pos);
    assignment = Assignment::direct(p.first.route);
    return;
  }
  insert_leg(solution.routes[static_cast<std::size_t>(p.first.route)],
             inbound_leg(instance, p.request, p.transfer), p.first.first_pos, p.first.second_pos);
  insert_leg(solution.routes[static_cast<std::size_t>(p.second.route)],
             outbound_leg(instance, p.request, p.transfer), p.second.first_pos,
             p.second.second_pos);
  assignment = Assignment::transferred(p.first.route, p.transfer, p.second.route);
}

}  // namespace pdpt
