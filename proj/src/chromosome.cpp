#include <algorithm>
#include <cfloat>
#include <cmath>
#include <map>

#include "pdpt/error.hpp"
#include "pdpt/genetic.hpp"
#include "pdpt/model.hpp"

namespace pdpt {

double logistic_transform(double x) {
  if (!(x >= 0.0)) throw Error(ErrorCode::domain_error, "logistic_transform needs x >= 0");
  if (x == 0.0) return 0.0;
  const double e = std::exp(-x);
  return e / ((1.0 + e) * (1.0 + e));
}

Chromosome Chromosome::from_entries(int nodes, int vehicles, std::vector<Entry> entries) {
  Chromosome c(nodes, vehicles);
  std::stable_sort(entries.begin(), entries.end(),
                   [](const Entry& a, const Entry& b) { return a.first < b.first; });
  for (const auto& e : entries) {
    if (e.second < 0.0) throw Error(ErrorCode::domain_error, "chromosome entries must be >= 0");
    if (e.second == 0.0) continue;
    if (!c.entries_.empty() && c.entries_.back().first == e.first) continue;
    c.entries_.push_back(e);
  }
  return c;
}

Chromosome::Slot Chromosome::slot(NodeId i, NodeId j, VehicleId k) const {
  if (i < 0 || j < 0 || k < 0 || i >= nodes_ || j >= nodes_ || k >= vehicles_)
    throw Error(ErrorCode::input_error, "chromosome index out of range");
  const auto n = static_cast<Slot>(nodes_);
  return (static_cast<Slot>(k) * n + static_cast<Slot>(i)) * n + static_cast<Slot>(j);
}

void Chromosome::unpack(Slot s, NodeId& i, NodeId& j, VehicleId& k) const {
  const auto n = static_cast<Slot>(nodes_);
  j = static_cast<NodeId>(s % n);
  s /= n;
  i = static_cast<NodeId>(s % n);
  k = static_cast<VehicleId>(s / n);
}

double Chromosome::at(Slot s) const {
  auto it = std::lower_bound(entries_.begin(), entries_.end(), s,
                             [](const Entry& e, Slot v) { return e.first < v; });
  return it != entries_.end() && it->first == s ? it->second : 0.0;
}

void Chromosome::set(Slot s, double value) {
  if (value < 0.0) throw Error(ErrorCode::domain_error, "chromosome entries must be >= 0");
  auto it = std::lower_bound(entries_.begin(), entries_.end(), s,
                             [](const Entry& e, Slot v) { return e.first < v; });
  const bool present = it != entries_.end() && it->first == s;
  if (value == 0.0) {
    if (present) entries_.erase(it);
  } else if (present) {
    it->second = value;
  } else {
    entries_.insert(it, Entry{s, value});
  }
}

namespace {

// Zero-length arcs (co-located nodes) still have to show up as present.
double arc_value(double d) { return std::max(logistic_transform(d), DBL_MIN); }

}  // namespace

Chromosome encode(const Instance& instance, const Solution& solution) {
  const int n = static_cast<int>(instance.node_count());
  const int m = static_cast<int>(instance.vehicle_count());
  Chromosome shape(n, m);
  std::vector<Chromosome::Entry> entries;
  for (const auto& route : solution.routes) {
    NodeId prev = -1;
    for (const auto& stop : route.stops) {
      if (stop.node == prev) continue;
      if (prev >= 0)
        entries.emplace_back(shape.slot(prev, stop.node, route.vehicle),
                             arc_value(instance.dist(prev, stop.node)));
      prev = stop.node;
    }
  }
  return Chromosome::from_entries(n, m, std::move(entries));
}

std::optional<Solution> decode(const Instance& instance, const Chromosome& chromosome) {
  const int n = static_cast<int>(instance.node_count());
  const int m = static_cast<int>(instance.vehicle_count());
  if (chromosome.nodes() != n || chromosome.vehicles() != m) return std::nullopt;

  std::vector<RequestId> pickup_of(static_cast<std::size_t>(n), -1);
  std::vector<RequestId> delivery_of(static_cast<std::size_t>(n), -1);
  for (const auto& r : instance.requests()) {
    pickup_of[static_cast<std::size_t>(r.pickup)] = r.id;
    delivery_of[static_cast<std::size_t>(r.delivery)] = r.id;
  }

  // Walk every slice into a node path.
  std::vector<std::vector<NodeId>> paths(static_cast<std::size_t>(m));
  const auto& entries = chromosome.entries();
  std::size_t cursor = 0;
  std::vector<NodeId> succ(static_cast<std::size_t>(n));
  for (VehicleId k = 0; k < m; ++k) {
    std::fill(succ.begin(), succ.end(), -1);
    const Chromosome::Slot end_slot = static_cast<Chromosome::Slot>(k + 1) * static_cast<Chromosome::Slot>(n) *
                                      static_cast<Chromosome::Slot>(n);
    for (; cursor < entries.size() && entries[cursor].first < end_slot; ++cursor) {
      NodeId i = 0, j = 0;
      VehicleId kk = 0;
      chromosome.unpack(entries[cursor].first, i, j, kk);
      if (succ[static_cast<std::size_t>(i)] >= 0) return std::nullopt;  // branching
      succ[static_cast<std::size_t>(i)] = j;
    }
    const auto& v = instance.vehicle(k);
    auto& path = paths[static_cast<std::size_t>(k)];
    path.push_back(v.start_depot);
    NodeId cur = v.start_depot;
    while (cur != v.end_depot) {
      cur = succ[static_cast<std::size_t>(cur)];
      if (cur < 0) return std::nullopt;
      path.push_back(cur);
      if (static_cast<int>(path.size()) > n + 1) return std::nullopt;
    }
  }

  // Locate customer visits; transfer visits may repeat across routes.
  const std::size_t requests = instance.request_count();
  std::vector<std::pair<VehicleId, int>> pickup_at(requests, {-1, -1}), delivery_at(requests, {-1, -1});
  std::vector<std::vector<std::pair<NodeId, int>>> transfer_visits(static_cast<std::size_t>(m));
  std::vector<std::vector<int>> route_pos(static_cast<std::size_t>(m), std::vector<int>(static_cast<std::size_t>(n), -1));
  for (VehicleId k = 0; k < m; ++k) {
    const auto& path = paths[static_cast<std::size_t>(k)];
    for (std::size_t p = 0; p < path.size(); ++p) {
      const NodeId node = path[p];
      route_pos[static_cast<std::size_t>(k)][static_cast<std::size_t>(node)] = static_cast<int>(p);
      if (p == 0 || p + 1 == path.size()) continue;
      const auto kind = instance.node(node).kind;
      if (kind == NodeKind::start_depot || kind == NodeKind::end_depot) return std::nullopt;
      if (instance.is_transfer_point(node)) {
        transfer_visits[static_cast<std::size_t>(k)].emplace_back(node, static_cast<int>(p));
        continue;
      }
      if (RequestId r = pickup_of[static_cast<std::size_t>(node)]; r >= 0) {
        if (pickup_at[static_cast<std::size_t>(r)].first >= 0) return std::nullopt;
        pickup_at[static_cast<std::size_t>(r)] = {k, static_cast<int>(p)};
      } else if (RequestId r2 = delivery_of[static_cast<std::size_t>(node)]; r2 >= 0) {
        if (delivery_at[static_cast<std::size_t>(r2)].first >= 0) return std::nullopt;
        delivery_at[static_cast<std::size_t>(r2)] = {k, static_cast<int>(p)};
      } else {
        return std::nullopt;
      }
    }
  }

  Solution sol;
  sol.assignment.assign(requests, Assignment{});
  // Per route and path position: the transfer actions happening there.
  std::vector<std::map<int, std::pair<std::vector<RequestId>, std::vector<RequestId>>>> at_transfer(
      static_cast<std::size_t>(m));
  for (std::size_t r = 0; r < requests; ++r) {
    const auto [ka, pa] = pickup_at[r];
    const auto [kb, pb] = delivery_at[r];
    if (ka < 0 && kb < 0) continue;
    if (ka < 0 || kb < 0 || ka == kb) {
      sol.assignment[r] = Assignment::direct(ka >= 0 ? ka : kb);
      continue;
    }
    bool linked = false;
    for (const auto& [t, pos] : transfer_visits[static_cast<std::size_t>(ka)]) {
      if (pos <= pa) continue;
      const int other = route_pos[static_cast<std::size_t>(kb)][static_cast<std::size_t>(t)];
      if (other < 0 || other >= pb || other == 0) continue;
      at_transfer[static_cast<std::size_t>(ka)][pos].first.push_back(static_cast<RequestId>(r));
      at_transfer[static_cast<std::size_t>(kb)][other].second.push_back(static_cast<RequestId>(r));
      sol.assignment[r] = Assignment::transferred(ka, t, kb);
      linked = true;
      break;
    }
    if (!linked) sol.assignment[r] = Assignment::direct(ka);
  }

  sol.routes.resize(static_cast<std::size_t>(m));
  for (VehicleId k = 0; k < m; ++k) {
    const auto& path = paths[static_cast<std::size_t>(k)];
    auto& route = sol.routes[static_cast<std::size_t>(k)];
    route.vehicle = k;
    route.stops.push_back(Stop{path.front(), StopAction::depart_depot, -1});
    for (std::size_t p = 1; p + 1 < path.size(); ++p) {
      const NodeId node = path[p];
      if (instance.is_transfer_point(node)) {
        auto it = at_transfer[static_cast<std::size_t>(k)].find(static_cast<int>(p));
        if (it == at_transfer[static_cast<std::size_t>(k)].end()) continue;
        for (RequestId r : it->second.first) route.stops.push_back(Stop{node, StopAction::transfer_drop, r});
        for (RequestId r : it->second.second) route.stops.push_back(Stop{node, StopAction::transfer_pick, r});
      } else if (RequestId r = pickup_of[static_cast<std::size_t>(node)]; r >= 0) {
        route.stops.push_back(Stop{node, StopAction::pickup, r});
      } else {
        route.stops.push_back(Stop{node, StopAction::delivery, delivery_of[static_cast<std::size_t>(node)]});
      }
    }
    route.stops.push_back(Stop{path.back(), StopAction::arrive_depot, -1});
  }
  return sol;
}

double fitness(const Instance& instance, const Chromosome& chromosome) {
  auto sol = decode(instance, chromosome);
  if (!sol) return kInfiniteFitness;
  if (!check_feasibility(instance, *sol).feasible) return kInfiniteFitness;
  return solution_cost(instance, *sol);
}

namespace {

std::vector<NodeId> shared_nodes(const Instance& instance) {
  std::vector<NodeId> out;
  for (const auto& r : instance.requests()) {
    out.push_back(r.pickup);
    out.push_back(r.delivery);
  }
  for (NodeId t : instance.transfer_points()) out.push_back(t);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace

std::vector<Chromosome::Slot> admissible_slots(const Instance& instance, VehicleId k) {
  const Chromosome shape(static_cast<int>(instance.node_count()), static_cast<int>(instance.vehicle_count()));
  const auto& v = instance.vehicle(k);
  auto from = shared_nodes(instance);
  auto to = from;
  from.push_back(v.start_depot);
  to.push_back(v.end_depot);
  std::vector<Chromosome::Slot> out;
  for (NodeId i : from)
    for (NodeId j : to)
      if (i != j) out.push_back(shape.slot(i, j, k));
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::size_t> sus_select(std::span<const double> fitnesses, std::size_t count, Rng& rng) {
  std::vector<double> w(fitnesses.size(), 0.0);
  double total = 0.0;
  for (std::size_t i = 0; i < fitnesses.size(); ++i) {
    if (std::isfinite(fitnesses[i])) w[i] = 1.0 / std::max(fitnesses[i], 1e-300);
    total += w[i];
  }
  if (!(total > 0.0)) throw Error(ErrorCode::selection_error, "no finite-fitness member to select");
  std::vector<std::size_t> out;
  if (count == 0) return out;
  out.reserve(count);
  const double step = total / static_cast<double>(count);
  const double start = uniform01(rng) * step;
  std::size_t i = 0;
  double acc = w[0];
  std::size_t last_positive = 0;
  for (std::size_t j = 0; j < w.size(); ++j)
    if (w[j] > 0.0) last_positive = j;
  for (std::size_t p = 0; p < count; ++p) {
    const double pointer = start + static_cast<double>(p) * step;
    while (pointer >= acc && i < last_positive) acc += w[++i];
    out.push_back(i);
  }
  return out;
}

Chromosome uniform_crossover(const Chromosome& a, const Chromosome& b, Rng& rng) {
  if (!a.same_shape(b)) throw Error(ErrorCode::input_error, "crossover parents differ in shape");
  std::vector<Chromosome::Entry> child;
  const auto& ea = a.entries();
  const auto& eb = b.entries();
  std::size_t x = 0, y = 0;
  while (x < ea.size() || y < eb.size()) {
    Chromosome::Slot s;
    double va = 0.0, vb = 0.0;
    if (y == eb.size() || (x < ea.size() && ea[x].first < eb[y].first)) {
      s = ea[x].first;
      va = ea[x++].second;
    } else if (x == ea.size() || eb[y].first < ea[x].first) {
      s = eb[y].first;
      vb = eb[y++].second;
    } else {
      s = ea[x].first;
      va = ea[x++].second;
      vb = eb[y++].second;
    }
    const double v = uniform01(rng) < 0.5 ? va : vb;
    if (v > 0.0) child.emplace_back(s, v);
  }
  return Chromosome::from_entries(a.nodes(), a.vehicles(), std::move(child));
}

Chromosome shift_mutation(const Chromosome& chromosome, double probability, Rng& rng) {
  Chromosome out = chromosome;
  if (uniform01(rng) >= probability) return out;
  if (out.nonzero_count() == 0 || out.nodes() < 2) return out;
  const auto& e = out.entries()[std::uniform_int_distribution<std::size_t>(0, out.nonzero_count() - 1)(rng)];
  NodeId i = 0, j = 0;
  VehicleId k = 0;
  out.unpack(e.first, i, j, k);
  NodeId j2 = std::uniform_int_distribution<NodeId>(0, out.nodes() - 2)(rng);
  if (j2 >= i) ++j2;
  const double a = out.at(i, j, k);
  const double b = out.at(i, j2, k);
  out.set(i, j, k, b);
  out.set(i, j2, k, a);
  return out;
}

double adaptive_mutation_rate(double fitness_variance, double temperature, const AdaptiveMutation& cfg) {
  if (!(fitness_variance >= 0.0)) throw Error(ErrorCode::input_error, "variance must be >= 0");
  if (!(temperature >= 0.0)) throw Error(ErrorCode::input_error, "temperature must be >= 0");
  if (!(cfg.t0 > 0.0) || !(cfg.sigma_ref > 0.0))
    throw Error(ErrorCode::input_error, "t0 and sigma_ref must be positive");
  double rate = cfg.alpha_base * (1.0 + temperature / cfg.t0);
  if (std::isfinite(fitness_variance))
    rate *= cfg.sigma_ref / (cfg.sigma_ref + fitness_variance);
  else
    rate = 0.0;
  return std::clamp(rate, 0.001, 0.5);
}

double boltzmann_probability(double incumbent, double candidate, double temperature) {
  if (!(temperature > 0.0)) throw Error(ErrorCode::input_error, "temperature must be positive");
  if (!std::isfinite(candidate)) return 0.0;
  if (!std::isfinite(incumbent) || candidate <= incumbent) return 1.0;
  return std::exp((incumbent - candidate) / temperature);
}

bool boltzmann_replace(double incumbent, double candidate, double temperature, Rng& rng) {
  const double p = boltzmann_probability(incumbent, candidate, temperature);
  if (p >= 1.0) return true;
  if (p <= 0.0) return false;
  return uniform01(rng) < p;
}

double minkowski_distance(const Chromosome& a, const Chromosome& b, double p) {
  if (!(p >= 1.0)) throw Error(ErrorCode::input_error, "Minkowski order must be >= 1");
  if (!a.same_shape(b)) throw Error(ErrorCode::input_error, "chromosomes differ in shape");
  const auto& ea = a.entries();
  const auto& eb = b.entries();
  double sum = 0.0;
  auto add = [&](double d) { sum += p == 1.0 ? std::abs(d) : (p == 2.0 ? d * d : std::pow(std::abs(d), p)); };
  std::size_t x = 0, y = 0;
  while (x < ea.size() || y < eb.size()) {
    if (y == eb.size() || (x < ea.size() && ea[x].first < eb[y].first)) {
      add(ea[x++].second);
    } else if (x == ea.size() || eb[y].first < ea[x].first) {
      add(eb[y++].second);
    } else {
      add(ea[x++].second - eb[y++].second);
    }
  }
  if (p == 1.0) return sum;
  if (p == 2.0) return std::sqrt(sum);
  return std::pow(sum, 1.0 / p);
}

bool taboo_replace(Population& population, const Chromosome& candidate, double candidate_fitness,
                   TabooList& taboo, double delta, double p) {
  if (!std::isfinite(candidate_fitness) || population.members.empty()) return false;
  for (const auto& t : taboo.entries)
    if (minkowski_distance(candidate, t, p) < delta) return false;
  for (const auto& member : population.members)
    if (minkowski_distance(candidate, member, p) < delta) return false;
  std::size_t worst = 0;
  for (std::size_t i = 1; i < population.fitnesses.size(); ++i)
    if (population.fitnesses[i] > population.fitnesses[worst]) worst = i;
  if (!(candidate_fitness < population.fitnesses[worst])) return false;
  population.members[worst] = candidate;
  population.fitnesses[worst] = candidate_fitness;
  if (taboo.tenure == 0) return true;
  taboo.entries.push_back(candidate);
  while (taboo.entries.size() > taboo.tenure) taboo.entries.erase(taboo.entries.begin());
  return true;
}

bool stop_criterion(std::span<const double> best_history, double epsilon) {
  if (best_history.size() < 4) return false;
  std::vector<double> last;
  for (auto it = best_history.rbegin(); it != best_history.rend() && last.size() < 4; ++it)
    if (std::isfinite(*it)) last.push_back(*it);
  if (last.size() < 4) return false;
  const double mean = (last[0] + last[1] + last[2] + last[3]) / 4.0;
  double var = 0.0;
  for (double v : last) var += (v - mean) * (v - mean);
  return var / 4.0 < epsilon;
}

}  // namespace pdpt
