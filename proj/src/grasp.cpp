#include "pdpt/grasp.hpp"

#include <algorithm>
#include <optional>

#include "pdpt/constructive.hpp"
#include "pdpt/error.hpp"
#include "pdpt/model.hpp"

namespace pdpt {

Solution grasp_construct(const Instance& instance, double alpha, Rng& rng) {
  if (!(alpha >= 0.0 && alpha <= 1.0))
    throw Error(ErrorCode::input_error, "GRASP alpha must lie in [0, 1]");
  if (alpha == 0.0) return greedy_construct(instance);

  std::vector<std::size_t> rcl;
  return construct_by_insertion(instance, [&](const std::vector<InsertionCandidate>& cands) {
    double lo = cands.front().delta_cost;
    double hi = lo;
    for (const auto& c : cands) {
      lo = std::min(lo, c.delta_cost);
      hi = std::max(hi, c.delta_cost);
    }
    const double threshold = lo + alpha * (hi - lo);
    rcl.clear();
    for (std::size_t i = 0; i < cands.size(); ++i)
      if (cands[i].delta_cost <= threshold) rcl.push_back(i);
    return rcl[std::uniform_int_distribution<std::size_t>(0, rcl.size() - 1)(rng)];
  });
}

GraspResult grasp_run(const Instance& instance, const GraspParams& params, const Improver& improver) {
  if (params.iterations < 1) throw Error(ErrorCode::input_error, "GRASP needs iterations >= 1");
  GraspResult result;
  std::optional<double> best_cost;
  std::optional<Error> last_error;
  for (int it = 0; it < params.iterations; ++it) {
    Rng rng(derive_seed(params.seed, {static_cast<std::uint64_t>(it)}));
    try {
      Solution s = grasp_construct(instance, params.alpha, rng);
      if (improver) s = improver(instance, std::move(s));
      const double c = solution_cost(instance, s);
      if (!best_cost || c < *best_cost - 1e-9) {
        result.best = std::move(s);
        best_cost = c;
      }
    } catch (const Error& e) {
      last_error = e;
    }
    if (best_cost) result.trace.push_back(*best_cost);
  }
  if (!best_cost) throw *last_error;
  return result;
}

}  // namespace pdpt
