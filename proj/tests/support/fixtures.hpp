#pragma once

#include <cstdint>
#include <initializer_list>
#include <string>
#include <vector>

#include "pdpt/instance.hpp"
#include "pdpt/instance_io.hpp"
#include "pdpt/solution.hpp"

namespace pdpt::test {

struct Point {
  double x;
  double y;
};

// Nodes are laid out as: pickups and deliveries (request r -> 2r, 2r+1),
// start/end depot per vehicle, then transfer points.
struct MicroSpec {
  std::vector<std::pair<Point, Point>> requests;
  std::vector<int> quantities;
  std::vector<std::pair<Point, Point>> depots;  // (start, end) per vehicle
  std::vector<int> capacities;
  std::vector<Point> transfers;
};

Instance make_instance(const MicroSpec& spec);

// At most 3 requests, 2 vehicles and 1 transfer point; every request fits
// at least one vehicle.
Instance micro_instance(std::uint64_t seed);

// Two vehicles meeting halfway: A runs (0,0) -> (10,1), B runs (10,-1) ->
// (20,0), one request from (1,0) to (19,0), transfer point at (10,0). The
// relayed cost is 22; any direct service costs more.
Instance relay_instance();

Stop depart(NodeId n);
Stop arrive(NodeId n);
Stop pick(NodeId n, RequestId r);
Stop drop(NodeId n, RequestId r);
Stop tdrop(NodeId n, RequestId r);
Stop tpick(NodeId n, RequestId r);

Route route_of(VehicleId k, std::initializer_list<Stop> stops);

// Li & Lim text with `n` requests on a small grid.
std::string lilim_text(int requests, std::uint64_t seed);
RawPdptwFile random_raw(int requests, std::uint64_t seed);

// Path to the bundled lc204 stand-in (PDPT_TEST_DATA_DIR at build time).
std::string data_path(const std::string& file);

}  // namespace pdpt::test
