#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>

#include "pdpt/error.hpp"
#include "pdpt/insertion.hpp"
#include "pdpt/local_search.hpp"
#include "pdpt/model.hpp"

namespace pdpt {

std::size_t select_weighted(std::span<const double> weights, Rng& rng) {
  double total = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0) || !std::isfinite(w)) throw Error(ErrorCode::domain_error, "weights must be finite and non-negative");
    total += w;
  }
  if (weights.empty() || total <= 0.0) throw Error(ErrorCode::selection_error, "no positive weight");
  const double u = uniform01(rng) * total;
  double acc = 0.0;
  std::size_t last_positive = 0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (weights[i] <= 0.0) continue;
    last_positive = i;
    acc += weights[i];
    if (u < acc) return i;
  }
  return last_positive;
}

double update_weight(double weight, double score, double reaction) {
  return std::max(kMinWeight, (1.0 - reaction) * weight + reaction * score);
}

namespace {

std::vector<RequestId> assigned_requests(const Solution& solution) {
  std::vector<RequestId> out;
  for (std::size_t r = 0; r < solution.assignment.size(); ++r)
    if (solution.assignment[r].assigned()) out.push_back(static_cast<RequestId>(r));
  return out;
}

double request_removal_gain(const Instance& instance, const Solution& solution, RequestId r) {
  double gain = 0.0;
  for (const auto& route : solution.routes) gain -= removal_delta(instance, route, r);
  return gain;
}

std::vector<RequestId> remove_random(Solution& s, int k, Rng& rng) {
  auto pool = assigned_requests(s);
  std::vector<RequestId> removed;
  for (int n = 0; n < k && !pool.empty(); ++n) {
    std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
    const std::size_t at = pick(rng);
    removed.push_back(pool[at]);
    pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(at));
  }
  for (RequestId r : removed) remove_request(s, r);
  return removed;
}

std::vector<RequestId> remove_worst(const Instance& instance, Solution& s, int k) {
  std::vector<RequestId> removed;
  for (int n = 0; n < k; ++n) {
    auto pool = assigned_requests(s);
    if (pool.empty()) break;
    RequestId worst = pool.front();
    double worst_gain = -std::numeric_limits<double>::infinity();
    for (RequestId r : pool) {
      const double g = request_removal_gain(instance, s, r);
      if (g > worst_gain + kCostEps) {
        worst = r;
        worst_gain = g;
      }
    }
    remove_request(s, worst);
    removed.push_back(worst);
  }
  return removed;
}

// Shaw-style: the seed plus the requests whose endpoints lie closest to it.
std::vector<RequestId> remove_related(const Instance& instance, Solution& s, int k, Rng& rng) {
  auto pool = assigned_requests(s);
  if (pool.empty()) return {};
  std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
  const RequestId seed = pool[pick(rng)];
  const auto& a = instance.request(seed);
  auto relatedness = [&](RequestId r) {
    const auto& b = instance.request(r);
    return instance.dist(a.pickup, b.pickup) + instance.dist(a.delivery, b.delivery);
  };
  std::vector<std::pair<double, RequestId>> ranked;
  for (RequestId r : pool)
    if (r != seed) ranked.emplace_back(relatedness(r), r);
  std::sort(ranked.begin(), ranked.end());
  std::vector<RequestId> removed{seed};
  for (std::size_t i = 0; i < ranked.size() && static_cast<int>(removed.size()) < k; ++i)
    removed.push_back(ranked[i].second);
  for (RequestId r : removed) remove_request(s, r);
  return removed;
}

bool insert_greedy(const Instance& instance, Solution& s, std::vector<RequestId> pending) {
  while (!pending.empty()) {
    std::optional<Placement> best;
    std::size_t best_at = 0;
    for (std::size_t i = 0; i < pending.size(); ++i) {
      auto p = best_direct_placement(instance, s, pending[i]);
      if (!p) return false;
      if (!best || p->delta < best->delta - kCostEps) {
        best = p;
        best_at = i;
      }
    }
    apply_placement(instance, s, *best);
    pending.erase(pending.begin() + static_cast<std::ptrdiff_t>(best_at));
  }
  return true;
}

bool insert_regret(const Instance& instance, Solution& s, std::vector<RequestId> pending) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  while (!pending.empty()) {
    std::vector<std::vector<int>> loads;
    for (const auto& route : s.routes) loads.push_back(route_loads(instance, route));
    std::optional<LegInsertion> chosen;
    std::size_t chosen_at = 0;
    double chosen_regret = -inf;
    for (std::size_t i = 0; i < pending.size(); ++i) {
      const Leg leg = direct_leg(instance, pending[i]);
      std::optional<LegInsertion> first;
      double second = inf;
      for (std::size_t k = 0; k < s.routes.size(); ++k) {
        auto cand = best_leg_insertion(instance, s.routes[k], loads[k], leg);
        if (!cand) continue;
        if (!first || better_insertion(*cand, *first)) {
          if (first) second = std::min(second, first->delta);
          first = cand;
        } else {
          second = std::min(second, cand->delta);
        }
      }
      if (!first) return false;
      const double regret = second - first->delta;
      const bool wins = !chosen || regret > chosen_regret + kCostEps ||
                        (std::abs(regret - chosen_regret) <= kCostEps && first->delta < chosen->delta - kCostEps) ||
                        (regret == inf && chosen_regret == inf && first->delta < chosen->delta - kCostEps);
      if (wins) {
        chosen = first;
        chosen_at = i;
        chosen_regret = regret;
      }
    }
    const RequestId r = pending[chosen_at];
    insert_leg(s.routes[static_cast<std::size_t>(chosen->route)], direct_leg(instance, r),
               chosen->first_pos, chosen->second_pos);
    s.assignment[static_cast<std::size_t>(r)] = Assignment::direct(chosen->route);
    pending.erase(pending.begin() + static_cast<std::ptrdiff_t>(chosen_at));
  }
  return true;
}

bool insert_transfer_aware(const Instance& instance, Solution& s, const std::vector<RequestId>& pending) {
  for (RequestId r : pending) {
    auto p = best_placement(instance, s, r, true);
    if (!p) return false;
    apply_placement(instance, s, *p);
  }
  return true;
}

void check_weights(const std::vector<double>& w, const char* what) {
  if (w.size() != 3) throw Error(ErrorCode::config_error, std::string(what) + " needs three weights");
  bool positive = false;
  for (double x : w) {
    if (!(x >= 0.0) || !std::isfinite(x))
      throw Error(ErrorCode::domain_error, std::string(what) + " weights must be non-negative");
    positive = positive || x > 0.0;
  }
  if (!positive) throw Error(ErrorCode::selection_error, std::string(what) + " weights are all zero");
}

}  // namespace

AlnsResult alns(const Instance& instance, Solution solution, const AlnsParams& params) {
  check_weights(params.removal_weights, "removal");
  check_weights(params.insertion_weights, "insertion");
  if (params.iterations < 0) throw Error(ErrorCode::config_error, "iterations must be >= 0");
  if (!(params.reaction >= 0.0 && params.reaction <= 1.0))
    throw Error(ErrorCode::domain_error, "reaction must lie in [0, 1]");

  AlnsResult result;
  result.removal_weights = params.removal_weights;
  result.insertion_weights = params.insertion_weights;
  Rng rng(params.seed);

  const int requests = static_cast<int>(instance.requests().size());
  const int max_remove =
      params.max_remove > 0 ? params.max_remove : std::max(1, static_cast<int>(std::ceil(0.1 * requests)));
  const int min_remove = std::clamp(params.min_remove, 1, std::max(1, max_remove));

  double cost = solution_cost(instance, solution);
  for (int it = 0; it < params.iterations; ++it) {
    const int assigned = static_cast<int>(assigned_requests(solution).size());
    if (assigned == 0) {
      result.trace.push_back(cost);
      continue;
    }
    const std::size_t ri = select_weighted(result.removal_weights, rng);
    const std::size_t ii = select_weighted(result.insertion_weights, rng);
    const int hi = std::min(max_remove, assigned);
    const int lo = std::min(min_remove, hi);
    const int k = std::uniform_int_distribution<int>(lo, hi)(rng);

    Solution candidate = solution;
    std::vector<RequestId> removed;
    switch (ri) {
      case 0: removed = remove_random(candidate, k, rng); break;
      case 1: removed = remove_worst(instance, candidate, k); break;
      default: removed = remove_related(instance, candidate, k, rng); break;
    }
    bool repaired = false;
    switch (ii) {
      case 0: repaired = insert_greedy(instance, candidate, removed); break;
      case 1: repaired = insert_regret(instance, candidate, removed); break;
      default: repaired = insert_transfer_aware(instance, candidate, removed); break;
    }

    double score = kScoreOther;
    if (repaired) {
      const double c = solution_cost(instance, candidate);
      if (c < cost - kCostEps) {
        solution = std::move(candidate);
        cost = c;
        score = kScoreBest;
      } else if (c <= cost + kCostEps) {
        score = kScoreImprove;
      }
    }
    result.removal_weights[ri] = update_weight(result.removal_weights[ri], score, params.reaction);
    result.insertion_weights[ii] = update_weight(result.insertion_weights[ii], score, params.reaction);
    result.trace.push_back(cost);
  }
  result.solution = std::move(solution);
  return result;
}

SearchResult mix_vnd_alns(const Instance& instance, Solution solution, const MixParams& params) {
  if (params.rounds < 0 || params.batch_iterations < 0)
    throw Error(ErrorCode::config_error, "rounds and batch size must be >= 0");
  SearchResult result = vnd(instance, std::move(solution));
  for (int round = 0; round < params.rounds; ++round) {
    AlnsParams batch = params.alns;
    batch.iterations = params.batch_iterations;
    batch.seed = derive_seed(params.alns.seed, {static_cast<std::uint64_t>(round)});
    auto perturbed = alns(instance, result.solution, batch);
    auto polished = vnd(instance, std::move(perturbed.solution));
    for (double c : polished.trace)
      if (c < result.trace.back() - 1e-12) result.trace.push_back(c);
    result.solution = std::move(polished.solution);
  }
  return result;
}

}  // namespace pdpt
