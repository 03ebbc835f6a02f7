#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "pdpt/instance.hpp"
#include "pdpt/random.hpp"
#include "pdpt/solution.hpp"

namespace pdpt {

struct GraspParams {
  double alpha = 0.3;  // 0: pure greedy, 1: uniform over feasible candidates
  int iterations = 32;
  std::uint64_t seed = 0;
};

// Randomized cheapest insertion. Each round looks at the cheapest insertion
// of every (unplaced request, vehicle) pair and picks uniformly among those
// with delta <= d_min + alpha * (d_max - d_min). alpha == 0 follows
// greedy_construct exactly and consumes no randomness.
Solution grasp_construct(const Instance& instance, double alpha, Rng& rng);

using Improver = std::function<Solution(const Instance&, Solution)>;

struct GraspResult {
  Solution best;
  std::vector<double> trace;  // best-so-far cost after each iteration
};

// Construction-only GRASP: `iterations` independent constructions (each with
// its own derived RNG stream), optionally passed through `improver`; keeps the
// cheapest, earliest iteration on ties.
GraspResult grasp_run(const Instance& instance, const GraspParams& params,
                      const Improver& improver = {});

}  // namespace pdpt
