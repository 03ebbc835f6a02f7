#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "pdpt/instance.hpp"

namespace pdpt {

// One data line of a Li & Lim PDPTW file. Time-window and service fields are
// kept for round-tripping but play no role in the model.
struct LilimRow {
  int id = 0;
  int x = 0;
  int y = 0;
  int demand = 0;
  int earliest = 0;
  int latest = 0;
  int service = 0;
  int pickup_sibling = 0;
  int delivery_sibling = 0;

  bool operator==(const LilimRow&) const = default;
};

struct RawPdptwFile {
  int vehicle_count = 0;
  int capacity = 0;
  int speed = 0;
  std::vector<LilimRow> rows;  // rows[0] is the depot

  bool operator==(const RawPdptwFile&) const = default;
};

// Throws Error(parse_error) with the offending line number, or
// Error(structure_error) when the pickup/delivery pairing is broken.
RawPdptwFile parse_lilim(std::istream& in);
RawPdptwFile parse_lilim_file(const std::string& path);
void print_lilim(std::ostream& out, const RawPdptwFile& raw);

enum class DepotMode { shared, scattered };

struct AugmentationConfig {
  std::optional<int> transfer_count;  // nullopt: uniform in [1, ceil(0.05 * customers)]
  enum class Fleet { file, fixed, random } fleet = Fleet::random;
  int vehicle_count = 0;              // used when fleet == fixed
  DepotMode depot_mode = DepotMode::scattered;
  std::uint64_t seed = 0;
};

// Node layout of the result: one node per customer row in file order, then a
// start and an end depot node per vehicle, then one node per transfer point
// (co-located with a sampled customer node).
Instance build_instance(const RawPdptwFile& raw, const AugmentationConfig& cfg);

}  // namespace pdpt
