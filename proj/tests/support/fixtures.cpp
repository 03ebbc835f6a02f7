#include "fixtures.hpp"

#include <algorithm>
#include <sstream>

#include "pdpt/random.hpp"

namespace pdpt::test {

Instance make_instance(const MicroSpec& spec) {
  std::vector<Node> nodes;
  std::vector<Request> requests;
  std::vector<Vehicle> vehicles;
  std::vector<NodeId> transfers;
  auto add = [&nodes](Point p, NodeKind kind) {
    const auto id = static_cast<NodeId>(nodes.size());
    nodes.push_back({id, p.x, p.y, kind});
    return id;
  };
  for (std::size_t r = 0; r < spec.requests.size(); ++r) {
    const NodeId p = add(spec.requests[r].first, NodeKind::pickup);
    const NodeId d = add(spec.requests[r].second, NodeKind::delivery);
    const int q = r < spec.quantities.size() ? spec.quantities[r] : 1;
    requests.push_back({static_cast<RequestId>(r), p, d, q});
  }
  for (std::size_t k = 0; k < spec.depots.size(); ++k) {
    const NodeId s = add(spec.depots[k].first, NodeKind::start_depot);
    const NodeId e = add(spec.depots[k].second, NodeKind::end_depot);
    const int cap = k < spec.capacities.size() ? spec.capacities[k] : 10;
    vehicles.push_back({static_cast<VehicleId>(k), cap, s, e});
  }
  for (Point t : spec.transfers) transfers.push_back(add(t, NodeKind::transfer));
  return Instance::create(std::move(nodes), std::move(requests), std::move(vehicles), std::move(transfers));
}

Instance micro_instance(std::uint64_t seed) {
  Rng rng(derive_seed(seed, {0x6d6963}));
  auto uni = [&rng](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  auto point = [&] { return Point{static_cast<double>(uni(0, 40)), static_cast<double>(uni(0, 40))}; };

  MicroSpec spec;
  const int requests = uni(1, 3);
  const int vehicles = uni(1, 2);
  const int transfers = uni(0, 1);
  for (int k = 0; k < vehicles; ++k) {
    const Point home = point();
    spec.depots.push_back({home, uni(0, 3) == 0 ? point() : home});
    spec.capacities.push_back(uni(4, 10));
  }
  const int max_cap = *std::max_element(spec.capacities.begin(), spec.capacities.end());
  for (int r = 0; r < requests; ++r) {
    spec.requests.push_back({point(), point()});
    spec.quantities.push_back(uni(1, max_cap));
  }
  for (int t = 0; t < transfers; ++t) spec.transfers.push_back(point());
  return make_instance(spec);
}

Instance relay_instance() {
  MicroSpec spec;
  spec.requests = {{{1, 0}, {19, 0}}};
  spec.quantities = {1};
  spec.depots = {{{0, 0}, {10, 1}}, {{10, -1}, {20, 0}}};
  spec.capacities = {5, 5};
  spec.transfers = {{10, 0}};
  return make_instance(spec);
}

Stop depart(NodeId n) { return {n, StopAction::depart_depot, -1}; }
Stop arrive(NodeId n) { return {n, StopAction::arrive_depot, -1}; }
Stop pick(NodeId n, RequestId r) { return {n, StopAction::pickup, r}; }
Stop drop(NodeId n, RequestId r) { return {n, StopAction::delivery, r}; }
Stop tdrop(NodeId n, RequestId r) { return {n, StopAction::transfer_drop, r}; }
Stop tpick(NodeId n, RequestId r) { return {n, StopAction::transfer_pick, r}; }

Route route_of(VehicleId k, std::initializer_list<Stop> stops) { return Route{k, std::vector<Stop>(stops)}; }

std::string lilim_text(int requests, std::uint64_t seed) {
  Rng rng(seed);
  auto uni = [&rng](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  std::ostringstream out;
  out << uni(1, 25) << '\t' << uni(50, 700) << '\t' << 1 << '\n';
  out << 0 << '\t' << uni(0, 100) << '\t' << uni(0, 100) << "\t0\t0\t" << uni(1000, 4000) << "\t0\t0\t0\n";
  // pickups 1..n, deliveries n+1..2n
  for (int i = 1; i <= 2 * requests; ++i) {
    const bool pickup = i <= requests;
    const int partner = pickup ? i + requests : i - requests;
    const int q = 1 + static_cast<int>(derive_seed(seed, {static_cast<std::uint64_t>(pickup ? i : partner)}) % 40);
    out << i << '\t' << uni(0, 100) << '\t' << uni(0, 100) << '\t' << (pickup ? q : -q) << '\t' << uni(0, 500)
        << '\t' << uni(500, 3000) << '\t' << 90 << '\t' << (pickup ? 0 : partner) << '\t' << (pickup ? partner : 0)
        << '\n';
  }
  return out.str();
}

RawPdptwFile random_raw(int requests, std::uint64_t seed) {
  std::istringstream in(lilim_text(requests, seed));
  return parse_lilim(in);
}

std::string data_path(const std::string& file) { return std::string(PDPT_TEST_DATA_DIR) + "/" + file; }

}  // namespace pdpt::test
