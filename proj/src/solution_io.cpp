#include "pdpt/solution_io.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "pdpt/error.hpp"

namespace pdpt {

namespace {

[[noreturn]] void parse_fail(int line_no, const std::string& what) {
  throw Error(ErrorCode::parse_error, "line " + std::to_string(line_no) + ": " + what);
}

int to_int(const std::string& tok, int line_no) {
  int v = 0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc{} || ptr != tok.data() + tok.size()) parse_fail(line_no, "bad integer '" + tok + "'");
  return v;
}

std::optional<StopAction> action_from(const std::string& tok) {
  for (auto a : {StopAction::depart_depot, StopAction::arrive_depot, StopAction::pickup,
                 StopAction::delivery, StopAction::transfer_drop, StopAction::transfer_pick}) {
    if (to_string(a) == tok) return a;
  }
  return std::nullopt;
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

void write_solution(std::ostream& out, const Solution& solution, double cost,
                    const Schedule* schedule) {
  out << "cost " << format_double(cost) << '\n';
  for (std::size_t k = 0; k < solution.routes.size(); ++k) {
    const auto& route = solution.routes[k];
    out << "route " << route.vehicle << '\n';
    for (std::size_t s = 0; s < route.stops.size(); ++s) {
      const auto& stop = route.stops[s];
      out << "  " << stop.node << ' ' << to_string(stop.action);
      if (stop.request >= 0) out << ' ' << stop.request;
      if (stop.action == StopAction::transfer_drop || stop.action == StopAction::transfer_pick)
        out << ' ' << stop.node;
      if (schedule && k < schedule->departure.size() && s < schedule->departure[k].size())
        out << "  # D=" << format_double(schedule->departure[k][s])
            << " y=" << schedule->load[k][s];
      out << '\n';
    }
  }
}

std::vector<Assignment> infer_assignment(const Solution& solution, std::size_t request_count) {
  std::vector<Assignment> out(request_count);
  std::vector<VehicleId> pickup_route(request_count, -1), delivery_route(request_count, -1),
      drop_route(request_count, -1), pick_route(request_count, -1);
  std::vector<NodeId> drop_node(request_count, -1);
  for (const auto& route : solution.routes) {
    for (const auto& stop : route.stops) {
      if (stop.request < 0 || static_cast<std::size_t>(stop.request) >= request_count) continue;
      const auto r = static_cast<std::size_t>(stop.request);
      switch (stop.action) {
        case StopAction::pickup: pickup_route[r] = route.vehicle; break;
        case StopAction::delivery: delivery_route[r] = route.vehicle; break;
        case StopAction::transfer_drop:
          drop_route[r] = route.vehicle;
          drop_node[r] = stop.node;
          break;
        case StopAction::transfer_pick: pick_route[r] = route.vehicle; break;
        default: break;
      }
    }
  }
  for (std::size_t r = 0; r < request_count; ++r) {
    if (drop_route[r] >= 0 || pick_route[r] >= 0)
      out[r] = Assignment::transferred(drop_route[r], drop_node[r], pick_route[r]);
    else if (pickup_route[r] >= 0)
      out[r] = Assignment::direct(pickup_route[r]);
    else if (delivery_route[r] >= 0)
      out[r] = Assignment::direct(delivery_route[r]);
  }
  return out;
}

Solution read_solution(std::istream& in, std::optional<std::size_t> request_count) {
  Solution sol;
  std::string line;
  int line_no = 0;
  bool have_cost = false;
  int max_request = -1;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ss(line);
    std::vector<std::string> tok;
    for (std::string t; ss >> t;) tok.push_back(t);
    if (tok.empty()) continue;
    if (tok[0] == "cost") {
      if (tok.size() != 2 || have_cost) parse_fail(line_no, "malformed cost line");
      try {
        std::size_t used = 0;
        (void)std::stod(tok[1], &used);
        if (used != tok[1].size()) parse_fail(line_no, "bad cost");
      } catch (const std::logic_error&) {
        parse_fail(line_no, "bad cost");
      }
      have_cost = true;
      continue;
    }
    if (tok[0] == "route") {
      if (tok.size() != 2) parse_fail(line_no, "malformed route line");
      const int v = to_int(tok[1], line_no);
      if (v != static_cast<int>(sol.routes.size()))
        parse_fail(line_no, "routes must be listed in vehicle order");
      sol.routes.push_back(Route{v, {}});
      continue;
    }
    if (sol.routes.empty()) parse_fail(line_no, "stop outside of a route");
    if (tok.size() < 2) parse_fail(line_no, "stop needs node and action");
    Stop stop;
    stop.node = to_int(tok[0], line_no);
    auto action = action_from(tok[1]);
    if (!action) parse_fail(line_no, "unknown action '" + tok[1] + "'");
    stop.action = *action;
    const bool depot = stop.action == StopAction::depart_depot || stop.action == StopAction::arrive_depot;
    const bool transfer = stop.action == StopAction::transfer_drop || stop.action == StopAction::transfer_pick;
    const std::size_t expected = depot ? 2 : (transfer ? 4 : 3);
    if (tok.size() != expected && !(transfer && tok.size() == 3))
      parse_fail(line_no, "wrong number of fields for " + tok[1]);
    if (!depot) {
      stop.request = to_int(tok[2], line_no);
      if (stop.request < 0) parse_fail(line_no, "negative request id");
      max_request = std::max(max_request, stop.request);
    }
    if (transfer && tok.size() == 4 && to_int(tok[3], line_no) != stop.node)
      parse_fail(line_no, "transfer node differs from stop node");
    sol.routes.back().stops.push_back(stop);
  }
  if (!have_cost) parse_fail(line_no, "missing cost line");
  sol.assignment = infer_assignment(
      sol, request_count.value_or(static_cast<std::size_t>(max_request + 1)));
  return sol;
}

}  // namespace pdpt
