#include <algorithm>
#include <array>
#include <cmath>
#include <tuple>

#include "pdpt/error.hpp"
#include "pdpt/insertion.hpp"
#include "pdpt/local_search.hpp"
#include "pdpt/model.hpp"

namespace pdpt {

double acceptance_probability(double current, double candidate, double temperature) {
  if (!(temperature > 0.0)) throw Error(ErrorCode::domain_error, "temperature must be positive");
  if (candidate <= current) return 1.0;
  return std::exp((current - candidate) / temperature);
}

bool metropolis_accept(double current, double candidate, double temperature, Rng& rng) {
  const double p = acceptance_probability(current, candidate, temperature);
  if (p >= 1.0) return true;
  return uniform01(rng) < p;
}

namespace {

constexpr int kAttempts = 64;

struct DirectRef {
  RequestId request;
  VehicleId route;
};

std::vector<DirectRef> direct_refs(const Solution& solution) {
  std::vector<DirectRef> out;
  for (const auto& route : solution.routes)
    for (const auto& stop : route.stops)
      if (stop.action == StopAction::pickup) {
        const auto& a = solution.assignment[static_cast<std::size_t>(stop.request)];
        if (a.is_direct() && a.first == route.vehicle) out.push_back({stop.request, route.vehicle});
      }
  return out;
}

// Number of (i, j) with 1 <= i <= j <= L - 1.
long long pair_count(std::size_t stops) {
  if (stops < 2) return 0;
  const auto n = static_cast<long long>(stops) - 1;
  return n * (n + 1) / 2;
}

std::pair<int, int> decode_pair(std::size_t stops, long long u) {
  const int n = static_cast<int>(stops) - 1;
  for (int i = 1; i <= n; ++i) {
    const long long row = n - i + 1;
    if (u < row) return {i, i + static_cast<int>(u)};
    u -= row;
  }
  return {n, n};
}

bool fits(const Instance& instance, const Route& route, std::span<const int> loads, int q, int i, int j) {
  const int cap = instance.vehicle(route.vehicle).capacity;
  for (int s = i - 1; s <= j - 1; ++s)
    if (loads[static_cast<std::size_t>(s)] + q > cap) return false;
  return true;
}

int index_of(const Route& route, RequestId r, StopAction action) {
  for (std::size_t s = 0; s < route.stops.size(); ++s)
    if (route.stops[s].request == r && route.stops[s].action == action) return static_cast<int>(s);
  return -1;
}

// Uniform (i, j) over a route of `stops` stops, thinned so that every
// tuple across routes of different lengths ends up equally likely.
bool draw_positions(std::size_t stops, long long max_pairs, Rng& rng, int& i, int& j) {
  const long long pairs = pair_count(stops);
  if (pairs == 0) return false;
  if (uniform01(rng) * static_cast<double>(max_pairs) >= static_cast<double>(pairs)) return false;
  std::tie(i, j) = decode_pair(stops, std::uniform_int_distribution<long long>(0, pairs - 1)(rng));
  return true;
}

bool sample_adr(const Instance& instance, const Solution& sol, const std::vector<DirectRef>& refs,
                Rng& rng, Move& out) {
  long long max_pairs = 0;
  for (const auto& route : sol.routes)
    if (route.stops.size() >= 4) max_pairs = std::max(max_pairs, pair_count(route.stops.size() - 2));
  if (max_pairs == 0) return false;
  std::uniform_int_distribution<std::size_t> pick(0, refs.size() - 1);
  for (int attempt = 0; attempt < kAttempts; ++attempt) {
    const auto ref = refs[pick(rng)];
    const Route& route = sol.routes[static_cast<std::size_t>(ref.route)];
    const Route reduced = without_request(route, ref.request);
    int i = 0, j = 0;
    if (!draw_positions(reduced.stops.size(), max_pairs, rng, i, j)) continue;
    const int p = index_of(route, ref.request, StopAction::pickup);
    const int d = index_of(route, ref.request, StopAction::delivery);
    if (i == p && j == d - 1) continue;
    const auto loads = route_loads(instance, reduced);
    const int q = instance.request(ref.request).quantity;
    if (!fits(instance, reduced, loads, q, i, j)) continue;
    out = Move{};
    out.kind = MoveKind::adr;
    out.request = ref.request;
    out.from_route = out.to_route = ref.route;
    out.pickup_pos = i;
    out.delivery_pos = j;
    out.delta = removal_delta(instance, route, ref.request) +
                leg_insertion_delta(instance, reduced, direct_leg(instance, ref.request), i, j);
    return true;
  }
  return false;
}

bool sample_rnr(const Instance& instance, const Solution& sol, const std::vector<DirectRef>& refs,
                Rng& rng, Move& out) {
  if (sol.routes.size() < 2) return false;
  long long max_pairs = 0;
  for (const auto& route : sol.routes) max_pairs = std::max(max_pairs, pair_count(route.stops.size()));
  std::uniform_int_distribution<std::size_t> pick(0, refs.size() - 1);
  std::uniform_int_distribution<std::size_t> other(0, sol.routes.size() - 2);
  for (int attempt = 0; attempt < kAttempts; ++attempt) {
    const auto ref = refs[pick(rng)];
    std::size_t b = other(rng);
    if (b >= static_cast<std::size_t>(ref.route)) ++b;
    const Route& target = sol.routes[b];
    int i = 0, j = 0;
    if (!draw_positions(target.stops.size(), max_pairs, rng, i, j)) continue;
    const auto loads = route_loads(instance, target);
    if (!fits(instance, target, loads, instance.request(ref.request).quantity, i, j)) continue;
    out = Move{};
    out.kind = MoveKind::rnr;
    out.request = ref.request;
    out.from_route = ref.route;
    out.to_route = static_cast<VehicleId>(b);
    out.pickup_pos = i;
    out.delivery_pos = j;
    out.delta = removal_delta(instance, sol.routes[static_cast<std::size_t>(ref.route)], ref.request) +
                leg_insertion_delta(instance, target, direct_leg(instance, ref.request), i, j);
    return true;
  }
  return false;
}

bool sample_swr(const Instance& instance, const Solution& sol, const std::vector<DirectRef>& refs,
                Rng& rng, Move& out) {
  std::uniform_int_distribution<std::size_t> pick(0, refs.size() - 1);
  for (int attempt = 0; attempt < kAttempts; ++attempt) {
    auto a = refs[pick(rng)];
    auto b = refs[pick(rng)];
    if (a.route == b.route) continue;
    if (a.route > b.route) std::swap(a, b);
    const Route& ra = sol.routes[static_cast<std::size_t>(a.route)];
    const Route& rb = sol.routes[static_cast<std::size_t>(b.route)];
    const Route reduced_a = without_request(ra, a.request);
    const Route reduced_b = without_request(rb, b.request);
    const auto loads_a = route_loads(instance, reduced_a);
    const auto loads_b = route_loads(instance, reduced_b);
    auto into_b = best_leg_insertion(instance, reduced_b, loads_b, direct_leg(instance, a.request));
    if (!into_b) continue;
    auto into_a = best_leg_insertion(instance, reduced_a, loads_a, direct_leg(instance, b.request));
    if (!into_a) continue;
    out = Move{};
    out.kind = MoveKind::swr;
    out.request = a.request;
    out.other = b.request;
    out.from_route = a.route;
    out.to_route = b.route;
    out.pickup_pos = into_b->first_pos;
    out.delivery_pos = into_b->second_pos;
    out.other_pickup_pos = into_a->first_pos;
    out.other_delivery_pos = into_a->second_pos;
    out.delta = removal_delta(instance, ra, a.request) + removal_delta(instance, rb, b.request) +
                into_b->delta + into_a->delta;
    return true;
  }
  return false;
}

}  // namespace

bool sample_move(const Instance& instance, const Solution& solution, Rng& rng, Move& out) {
  const auto refs = direct_refs(solution);
  if (refs.empty()) return false;
  std::array<MoveKind, 3> kinds{MoveKind::swr, MoveKind::rnr, MoveKind::adr};
  std::shuffle(kinds.begin(), kinds.end(), rng);
  for (MoveKind kind : kinds) {
    bool ok = false;
    switch (kind) {
      case MoveKind::swr: ok = sample_swr(instance, solution, refs, rng, out); break;
      case MoveKind::rnr: ok = sample_rnr(instance, solution, refs, rng, out); break;
      case MoveKind::adr: ok = sample_adr(instance, solution, refs, rng, out); break;
    }
    if (ok) return true;
  }
  return false;
}

SaResult simulated_annealing(const Instance& instance, Solution solution, const SaSchedule& schedule) {
  if (!(schedule.cooling > 0.0 && schedule.cooling < 1.0))
    throw Error(ErrorCode::domain_error, "cooling factor must lie in (0, 1)");
  if (schedule.iterations < 0) throw Error(ErrorCode::config_error, "iterations must be >= 0");
  Rng rng(schedule.seed);
  double cost = solution_cost(instance, solution);
  double temperature = schedule.initial_temperature;
  if (temperature <= 0.0) temperature = cost > 0.0 ? 0.05 * cost : 1.0;

  SaResult result;
  result.solution = solution;
  double best = cost;
  for (int it = 0; it < schedule.iterations; ++it) {
    Move move;
    if (sample_move(instance, solution, rng, move) &&
        metropolis_accept(cost, cost + move.delta, std::max(temperature, 1e-300), rng)) {
      apply_move(instance, solution, move);
      cost = solution_cost(instance, solution);
      if (cost < best - kCostEps) {
        best = cost;
        result.solution = solution;
      }
    }
    result.best_trace.push_back(best);
    result.temperatures.push_back(temperature);
    temperature *= schedule.cooling;
  }
  return result;
}

}  // namespace pdpt
