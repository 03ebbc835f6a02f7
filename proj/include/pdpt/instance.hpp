#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace pdpt {

using NodeId = int;
using RequestId = int;
using VehicleId = int;

enum class NodeKind { pickup, delivery, start_depot, end_depot, transfer };

struct Node {
  NodeId id = 0;
  double x = 0.0;
  double y = 0.0;
  NodeKind kind = NodeKind::pickup;

  bool operator==(const Node&) const = default;
};

struct Request {
  RequestId id = 0;
  NodeId pickup = 0;
  NodeId delivery = 0;
  int quantity = 1;

  bool operator==(const Request&) const = default;
};

struct Vehicle {
  VehicleId id = 0;
  int capacity = 1;
  NodeId start_depot = 0;
  NodeId end_depot = 0;

  bool operator==(const Vehicle&) const = default;
};

// Immutable problem description. The metric is the dense L2 distance matrix
// over all nodes; it backs travel distance, travel time and travel cost alike.
class Instance {
 public:
  Instance() = default;

  // Validates ids (dense, in range), request/vehicle invariants and the
  // transfer list, then precomputes the metric. Throws Error(input_error).
  static Instance create(std::vector<Node> nodes, std::vector<Request> requests,
                         std::vector<Vehicle> vehicles,
                         std::vector<NodeId> transfer_points);

  const std::vector<Node>& nodes() const noexcept { return nodes_; }
  const std::vector<Request>& requests() const noexcept { return requests_; }
  const std::vector<Vehicle>& vehicles() const noexcept { return vehicles_; }
  const std::vector<NodeId>& transfer_points() const noexcept { return transfers_; }

  std::size_t node_count() const noexcept { return nodes_.size(); }
  std::size_t request_count() const noexcept { return requests_.size(); }
  std::size_t vehicle_count() const noexcept { return vehicles_.size(); }

  const Node& node(NodeId id) const { return nodes_[static_cast<std::size_t>(id)]; }
  const Request& request(RequestId id) const {
    return requests_[static_cast<std::size_t>(id)];
  }
  const Vehicle& vehicle(VehicleId id) const {
    return vehicles_[static_cast<std::size_t>(id)];
  }

  // Unchecked lookup for hot loops.
  double dist(NodeId i, NodeId j) const noexcept {
    return metric_[static_cast<std::size_t>(i) * nodes_.size() + static_cast<std::size_t>(j)];
  }

  bool is_transfer_point(NodeId id) const noexcept;
  int max_capacity() const noexcept;
  // Number of pickup and delivery nodes.
  std::size_t customer_count() const noexcept { return 2 * requests_.size(); }

  bool operator==(const Instance&) const = default;

 private:
  std::vector<Node> nodes_;
  std::vector<Request> requests_;
  std::vector<Vehicle> vehicles_;
  std::vector<NodeId> transfers_;
  std::vector<bool> transfer_flag_;
  std::vector<double> metric_;
};

// Range-checked Euclidean distance between two nodes.
double distance(const Instance& instance, NodeId i, NodeId j);

}  // namespace pdpt
