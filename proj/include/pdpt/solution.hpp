#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "pdpt/instance.hpp"

namespace pdpt {

enum class StopAction {
  depart_depot,
  arrive_depot,
  pickup,
  delivery,
  transfer_drop,
  transfer_pick,
};

std::string_view to_string(StopAction action);

struct Stop {
  NodeId node = 0;
  StopAction action = StopAction::pickup;
  RequestId request = -1;  // -1 for depot stops

  bool operator==(const Stop&) const = default;
};

struct Route {
  VehicleId vehicle = 0;
  std::vector<Stop> stops;

  bool operator==(const Route&) const = default;
};

// Direct requests only set `first`; transferred ones ride `first` from the
// pickup to `transfer` and `second` from there to the delivery.
struct Assignment {
  VehicleId first = -1;
  NodeId transfer = -1;
  VehicleId second = -1;

  static Assignment direct(VehicleId v) { return {v, -1, -1}; }
  static Assignment transferred(VehicleId a, NodeId t, VehicleId b) { return {a, t, b}; }

  bool assigned() const noexcept { return first >= 0; }
  bool is_transferred() const noexcept { return first >= 0 && transfer >= 0; }
  bool is_direct() const noexcept { return first >= 0 && transfer < 0; }

  bool operator==(const Assignment&) const = default;
};

struct Solution {
  std::vector<Route> routes;            // routes[k].vehicle == k
  std::vector<Assignment> assignment;   // indexed by request id

  // One depot-to-depot route per vehicle, nothing assigned.
  static Solution empty(const Instance& instance);

  bool operator==(const Solution&) const = default;
};

// Departure time and departing load per (route, stop index).
struct Schedule {
  std::vector<std::vector<double>> departure;
  std::vector<std::vector<int>> load;
};

enum class Constraint {
  assign,
  visit,
  depot_start,
  depot_end,
  clock_zero,
  precedence,
  time_prop,
  load_zero,
  capacity,
  nonneg_time,
  nonneg_load,
  transfer_sync,
};

std::string_view to_string(Constraint c);

struct Violation {
  Constraint constraint;
  std::string detail;
};

struct FeasibilityReport {
  bool feasible = true;
  std::vector<Violation> violations;

  bool has(Constraint c) const;
};

}  // namespace pdpt
