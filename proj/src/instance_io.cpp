#include "pdpt/instance_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <random>
#include <sstream>
#include <string>

#include "pdpt/error.hpp"
#include "pdpt/random.hpp"

namespace pdpt {

namespace {

std::vector<std::string> split_fields(const std::string& line) {
  std::istringstream ss(line);
  std::vector<std::string> out;
  std::string tok;
  while (ss >> tok) out.push_back(tok);
  return out;
}

int parse_int(const std::string& tok, int line_no) {
  int value = 0;
  const auto* first = tok.data();
  const auto* last = tok.data() + tok.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last)
    throw Error(ErrorCode::parse_error,
                "line " + std::to_string(line_no) + ": not an integer: '" + tok + "'");
  return value;
}

void check_pairing(const RawPdptwFile& raw) {
  if (raw.rows.empty()) throw Error(ErrorCode::structure_error, "no depot row");
  if (raw.rows[0].demand != 0) throw Error(ErrorCode::structure_error, "depot row has demand");
  std::map<int, std::size_t> by_id;
  for (std::size_t i = 0; i < raw.rows.size(); ++i) {
    if (!by_id.emplace(raw.rows[i].id, i).second)
      throw Error(ErrorCode::structure_error, "duplicate row id " + std::to_string(raw.rows[i].id));
  }
  std::size_t pairs = 0;
  for (std::size_t i = 1; i < raw.rows.size(); ++i) {
    const auto& row = raw.rows[i];
    const std::string who = "row id " + std::to_string(row.id);
    if (row.demand == 0) throw Error(ErrorCode::structure_error, who + ": customer without demand");
    const int sibling = row.demand > 0 ? row.delivery_sibling : row.pickup_sibling;
    auto it = by_id.find(sibling);
    if (it == by_id.end() || it->second == 0)
      throw Error(ErrorCode::structure_error, who + ": sibling " + std::to_string(sibling) + " missing");
    const auto& other = raw.rows[it->second];
    const int back = row.demand > 0 ? other.pickup_sibling : other.delivery_sibling;
    if (other.demand != -row.demand || back != row.id)
      throw Error(ErrorCode::structure_error, who + ": unpaired pickup/delivery");
    if (row.demand > 0) ++pairs;
  }
  if (pairs == 0) throw Error(ErrorCode::structure_error, "file contains no requests");
}

}  // namespace

RawPdptwFile parse_lilim(std::istream& in) {
  RawPdptwFile raw;
  std::string line;
  int line_no = 0;
  bool header = false;
  while (std::getline(in, line)) {
    ++line_no;
    const auto fields = split_fields(line);
    if (fields.empty()) continue;
    if (!header) {
      if (fields.size() != 3)
        throw Error(ErrorCode::parse_error,
                    "line " + std::to_string(line_no) + ": header needs 3 fields, got " +
                        std::to_string(fields.size()));
      raw.vehicle_count = parse_int(fields[0], line_no);
      raw.capacity = parse_int(fields[1], line_no);
      raw.speed = parse_int(fields[2], line_no);
      header = true;
      continue;
    }
    if (fields.size() != 9)
      throw Error(ErrorCode::parse_error, "line " + std::to_string(line_no) +
                                              ": expected 9 fields, got " +
                                              std::to_string(fields.size()));
    LilimRow row;
    int* slots[] = {&row.id,      &row.x,      &row.y,       &row.demand,        &row.earliest,
                    &row.latest, &row.service, &row.pickup_sibling, &row.delivery_sibling};
    for (std::size_t f = 0; f < 9; ++f) *slots[f] = parse_int(fields[f], line_no);
    raw.rows.push_back(row);
  }
  if (!header) throw Error(ErrorCode::parse_error, "empty file");
  check_pairing(raw);
  return raw;
}

RawPdptwFile parse_lilim_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::input_error, "cannot open " + path);
  return parse_lilim(in);
}

void print_lilim(std::ostream& out, const RawPdptwFile& raw) {
  out << raw.vehicle_count << '\t' << raw.capacity << '\t' << raw.speed << '\n';
  for (const auto& r : raw.rows) {
    out << r.id << '\t' << r.x << '\t' << r.y << '\t' << r.demand << '\t' << r.earliest << '\t'
        << r.latest << '\t' << r.service << '\t' << r.pickup_sibling << '\t'
        << r.delivery_sibling << '\n';
  }
}

Instance build_instance(const RawPdptwFile& raw, const AugmentationConfig& cfg) {
  check_pairing(raw);
  Rng rng(cfg.seed);

  std::vector<Node> nodes;
  std::map<int, NodeId> node_of_row;
  for (std::size_t i = 1; i < raw.rows.size(); ++i) {
    const auto& row = raw.rows[i];
    const auto id = static_cast<NodeId>(nodes.size());
    nodes.push_back(Node{id, static_cast<double>(row.x), static_cast<double>(row.y),
                         row.demand > 0 ? NodeKind::pickup : NodeKind::delivery});
    node_of_row[row.id] = id;
  }
  const std::size_t customers = nodes.size();

  std::vector<Request> requests;
  for (std::size_t i = 1; i < raw.rows.size(); ++i) {
    const auto& row = raw.rows[i];
    if (row.demand <= 0) continue;
    requests.push_back(Request{static_cast<RequestId>(requests.size()), node_of_row.at(row.id),
                               node_of_row.at(row.delivery_sibling), row.demand});
  }

  int fleet = 0;
  switch (cfg.fleet) {
    case AugmentationConfig::Fleet::file: fleet = raw.vehicle_count; break;
    case AugmentationConfig::Fleet::fixed: fleet = cfg.vehicle_count; break;
    case AugmentationConfig::Fleet::random: {
      const int hi = std::max(2, static_cast<int>((requests.size() + 7) / 8));
      fleet = std::uniform_int_distribution<int>(2, hi)(rng);
      break;
    }
  }
  if (fleet < 1) throw Error(ErrorCode::config_error, "vehicle count must be positive");

  double min_x = raw.rows[0].x, max_x = raw.rows[0].x;
  double min_y = raw.rows[0].y, max_y = raw.rows[0].y;
  for (const auto& row : raw.rows) {
    min_x = std::min<double>(min_x, row.x);
    max_x = std::max<double>(max_x, row.x);
    min_y = std::min<double>(min_y, row.y);
    max_y = std::max<double>(max_y, row.y);
  }
  std::vector<Vehicle> vehicles;
  auto place = [&](NodeKind kind) {
    const auto id = static_cast<NodeId>(nodes.size());
    if (cfg.depot_mode == DepotMode::shared) {
      nodes.push_back(Node{id, static_cast<double>(raw.rows[0].x),
                           static_cast<double>(raw.rows[0].y), kind});
    } else {
      const double x = std::uniform_real_distribution<double>(min_x, max_x)(rng);
      const double y = std::uniform_real_distribution<double>(min_y, max_y)(rng);
      nodes.push_back(Node{id, x, y, kind});
    }
    return id;
  };
  for (int k = 0; k < fleet; ++k) {
    const NodeId start = place(NodeKind::start_depot);
    const NodeId end = place(NodeKind::end_depot);
    vehicles.push_back(Vehicle{k, raw.capacity, start, end});
  }

  int transfers = 0;
  if (cfg.transfer_count) {
    transfers = *cfg.transfer_count;
    if (transfers < 0) throw Error(ErrorCode::config_error, "negative transfer count");
  } else {
    const int hi = std::max(1, static_cast<int>(std::ceil(0.05 * static_cast<double>(customers))));
    transfers = std::uniform_int_distribution<int>(1, hi)(rng);
  }
  if (static_cast<std::size_t>(transfers) > customers)
    throw Error(ErrorCode::config_error, "transfer count " + std::to_string(transfers) +
                                             " exceeds node count " + std::to_string(customers));

  // Partial Fisher-Yates over customer node ids.
  std::vector<NodeId> pool(customers);
  for (std::size_t i = 0; i < customers; ++i) pool[i] = static_cast<NodeId>(i);
  std::vector<NodeId> transfer_ids;
  for (int t = 0; t < transfers; ++t) {
    const auto j = std::uniform_int_distribution<std::size_t>(
        static_cast<std::size_t>(t), customers - 1)(rng);
    std::swap(pool[static_cast<std::size_t>(t)], pool[j]);
    const Node& host = nodes[static_cast<std::size_t>(pool[static_cast<std::size_t>(t)])];
    const auto id = static_cast<NodeId>(nodes.size());
    nodes.push_back(Node{id, host.x, host.y, NodeKind::transfer});
    transfer_ids.push_back(id);
  }

  return Instance::create(std::move(nodes), std::move(requests), std::move(vehicles),
                          std::move(transfer_ids));
}

}  // namespace pdpt
