#include "pdpt/instance.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "pdpt/error.hpp"

namespace pdpt {

namespace {

[[noreturn]] void fail(const std::string& what) { throw Error(ErrorCode::input_error, what); }

}  // namespace

Instance Instance::create(std::vector<Node> nodes, std::vector<Request> requests,
                          std::vector<Vehicle> vehicles, std::vector<NodeId> transfer_points) {
  const auto n = static_cast<NodeId>(nodes.size());
  auto in_range = [n](NodeId id) { return id >= 0 && id < n; };

  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (nodes[i].id != static_cast<NodeId>(i)) fail("node ids must be dense and ordered");
    if (!std::isfinite(nodes[i].x) || !std::isfinite(nodes[i].y))
      fail("node " + std::to_string(i) + " has non-finite coordinates");
  }
  for (std::size_t r = 0; r < requests.size(); ++r) {
    const auto& req = requests[r];
    if (req.id != static_cast<RequestId>(r)) fail("request ids must be dense and ordered");
    if (!in_range(req.pickup) || !in_range(req.delivery))
      fail("request " + std::to_string(r) + " references an unknown node");
    if (req.pickup == req.delivery) fail("request " + std::to_string(r) + " has pickup == delivery");
    if (req.quantity < 1) fail("request " + std::to_string(r) + " has non-positive quantity");
  }
  for (std::size_t k = 0; k < vehicles.size(); ++k) {
    const auto& v = vehicles[k];
    if (v.id != static_cast<VehicleId>(k)) fail("vehicle ids must be dense and ordered");
    if (v.capacity < 1) fail("vehicle " + std::to_string(k) + " has non-positive capacity");
    if (!in_range(v.start_depot) || !in_range(v.end_depot))
      fail("vehicle " + std::to_string(k) + " references an unknown depot");
  }

  Instance inst;
  inst.transfer_flag_.assign(nodes.size(), false);
  for (NodeId t : transfer_points) {
    if (!in_range(t)) fail("transfer point " + std::to_string(t) + " out of range");
    if (inst.transfer_flag_[static_cast<std::size_t>(t)]) fail("duplicate transfer point");
    inst.transfer_flag_[static_cast<std::size_t>(t)] = true;
  }

  const std::size_t size = nodes.size();
  inst.metric_.assign(size * size, 0.0);
  for (std::size_t i = 0; i < size; ++i) {
    for (std::size_t j = i + 1; j < size; ++j) {
      const double d = std::hypot(nodes[i].x - nodes[j].x, nodes[i].y - nodes[j].y);
      inst.metric_[i * size + j] = d;
      inst.metric_[j * size + i] = d;
    }
  }
  inst.nodes_ = std::move(nodes);
  inst.requests_ = std::move(requests);
  inst.vehicles_ = std::move(vehicles);
  inst.transfers_ = std::move(transfer_points);
  return inst;
}

bool Instance::is_transfer_point(NodeId id) const noexcept {
  return id >= 0 && static_cast<std::size_t>(id) < transfer_flag_.size() &&
         transfer_flag_[static_cast<std::size_t>(id)];
}

int Instance::max_capacity() const noexcept {
  int best = 0;
  for (const auto& v : vehicles_) best = std::max(best, v.capacity);
  return best;
}

double distance(const Instance& instance, NodeId i, NodeId j) {
  const auto n = static_cast<NodeId>(instance.node_count());
  if (i < 0 || i >= n || j < 0 || j >= n)
    throw Error(ErrorCode::input_error,
                "node id out of range: " + std::to_string(i) + ", " + std::to_string(j));
  return instance.dist(i, j);
}

}  // namespace pdpt
