#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>

#include "pdpt/instance.hpp"
#include "pdpt/solution.hpp"

namespace pdpt {

// Text format:
//   cost <float>
//   route <vehicle_id>
//     <node_id> <action> [<request_id>] [<transfer_node_id>]
// '#' starts a comment. The schedule, when given, is written as comments.
void write_solution(std::ostream& out, const Solution& solution, double cost,
                    const Schedule* schedule = nullptr);

// Assignments are rebuilt from the stops. `request_count` sizes the
// assignment vector; when absent the largest request id seen decides.
Solution read_solution(std::istream& in, std::optional<std::size_t> request_count = std::nullopt);

// Derives the request assignment implied by the stops of `solution.routes`.
std::vector<Assignment> infer_assignment(const Solution& solution, std::size_t request_count);

}  // namespace pdpt
