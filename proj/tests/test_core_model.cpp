#include <gtest/gtest.h>

#include <cmath>

#include "fixtures.hpp"
#include "pdpt/error.hpp"
#include "pdpt/model.hpp"

using namespace pdpt;
using namespace pdpt::test;

namespace {

// depot (0,0); pickup (1,0); delivery (2,0)
Instance line_instance(int quantity, int capacity) {
  MicroSpec spec;
  spec.requests = {{{1, 0}, {2, 0}}};
  spec.quantities = {quantity};
  spec.depots = {{{0, 0}, {0, 0}}};
  spec.capacities = {capacity};
  return make_instance(spec);
}

// nodes: p=0 d=1 start=2 end=3
Solution line_solution(bool reversed = false) {
  Solution s;
  s.routes = {reversed ? route_of(0, {depart(2), drop(1, 0), pick(0, 0), arrive(3)})
                       : route_of(0, {depart(2), pick(0, 0), drop(1, 0), arrive(3)})};
  s.assignment = {Assignment::direct(0)};
  return s;
}

}  // namespace

TEST(Distance, ThreeFourFive) {
  MicroSpec spec;
  spec.requests = {{{0, 0}, {3, 4}}};
  spec.depots = {{{1, 1}, {2, 2}}};
  auto inst = make_instance(spec);
  EXPECT_DOUBLE_EQ(distance(inst, 0, 1), 5.0);
  EXPECT_EQ(distance(inst, 1, 1), 0.0);
  EXPECT_NEAR(distance(inst, 2, 3), 1.4142135623730951, 1e-15);
}

TEST(Distance, OutOfRangeIsInputError) {
  auto inst = line_instance(1, 1);
  try {
    distance(inst, 0, 99);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::input_error);
  }
}

TEST(Instance, RejectsBrokenIds) {
  std::vector<Node> nodes{{0, 0, 0, NodeKind::pickup}, {2, 1, 1, NodeKind::delivery}};
  EXPECT_THROW(Instance::create(nodes, {}, {}, {}), Error);
  nodes[1].id = 1;
  EXPECT_THROW(Instance::create(nodes, {{0, 0, 0, 1}}, {}, {}), Error);
  EXPECT_THROW(Instance::create(nodes, {}, {}, {1, 1}), Error);
}

TEST(Schedule, SingleRouteChain) {
  auto inst = line_instance(4, 10);
  auto sched = propagate_schedule(inst, line_solution());
  ASSERT_EQ(sched.departure.size(), 1u);
  EXPECT_EQ(sched.departure[0], (std::vector<double>{0, 1, 2, 4}));
  EXPECT_EQ(sched.load[0], (std::vector<int>{0, 4, 0, 0}));
}

TEST(Schedule, EmptyRoute) {
  MicroSpec spec;
  spec.depots = {{{0, 0}, {3, 4}}};
  auto inst = make_instance(spec);
  auto sched = propagate_schedule(inst, Solution::empty(inst));
  EXPECT_EQ(sched.departure[0], (std::vector<double>{0, 5}));
  EXPECT_EQ(sched.load[0], (std::vector<int>{0, 0}));
}

TEST(Schedule, TransferPickWaitsForDrop) {
  auto inst = relay_instance();
  // p=0 d=1 A:2->3 B:4->5 t=6
  Solution s;
  s.routes = {route_of(0, {depart(2), pick(0, 0), tdrop(6, 0), arrive(3)}),
              route_of(1, {depart(4), tpick(6, 0), drop(1, 0), arrive(5)})};
  s.assignment = {Assignment::transferred(0, 6, 1)};
  auto sched = propagate_schedule(inst, s);
  // A reaches t at 1 + 9 = 10; B would be there at 1 and waits.
  EXPECT_DOUBLE_EQ(sched.departure[0][2], 10.0);
  EXPECT_DOUBLE_EQ(sched.departure[1][1], 10.0);
  EXPECT_DOUBLE_EQ(sched.departure[1][2], 19.0);
  EXPECT_DOUBLE_EQ(sched.departure[1][3], 20.0);
  EXPECT_TRUE(check_feasibility(inst, s).feasible);
  EXPECT_DOUBLE_EQ(solution_cost(inst, s), 22.0);
}

TEST(Schedule, CyclicTransferThrows) {
  MicroSpec spec;
  spec.requests = {{{1, 0}, {19, 0}}, {{19, 1}, {1, 1}}};
  spec.depots = {{{0, 0}, {0, 0}}, {{20, 0}, {20, 0}}};
  spec.transfers = {{10, 0}};
  auto inst = make_instance(spec);
  // p0=0 d0=1 p1=2 d1=3 A:4,5 B:6,7 t=8
  // A picks request 1 at t before dropping request 0 there; B does the reverse.
  Solution s;
  s.routes = {route_of(0, {depart(4), pick(0, 0), tpick(8, 1), tdrop(8, 0), drop(3, 1), arrive(5)}),
              route_of(1, {depart(6), pick(2, 1), tpick(8, 0), tdrop(8, 1), drop(1, 0), arrive(7)})};
  s.assignment = {Assignment::transferred(0, 8, 1), Assignment::transferred(1, 8, 0)};
  EXPECT_FALSE(transfer_dependencies_acyclic(s));
  try {
    propagate_schedule(inst, s);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::cyclic_transfer);
  }
  auto report = check_feasibility(inst, s);
  EXPECT_FALSE(report.feasible);
  EXPECT_TRUE(report.has(Constraint::transfer_sync));
}

TEST(Checker, FeasibleLine) {
  auto inst = line_instance(5, 5);
  auto report = check_feasibility(inst, line_solution());
  EXPECT_TRUE(report.feasible);
  EXPECT_TRUE(report.violations.empty());
}

TEST(Checker, DeliveryBeforePickupIsPrecedence) {
  auto inst = line_instance(1, 5);
  auto report = check_feasibility(inst, line_solution(true));
  EXPECT_FALSE(report.feasible);
  EXPECT_TRUE(report.has(Constraint::precedence));
}

TEST(Checker, OverCapacity) {
  auto inst = line_instance(6, 5);
  auto report = check_feasibility(inst, line_solution());
  EXPECT_FALSE(report.feasible);
  EXPECT_TRUE(report.has(Constraint::capacity));
}

TEST(Checker, MissingPickupFlagsAssignAndVisit) {
  auto inst = line_instance(1, 5);
  Solution s = line_solution();
  s.routes[0].stops.erase(s.routes[0].stops.begin() + 1);
  auto report = check_feasibility(inst, s);
  EXPECT_FALSE(report.feasible);
  EXPECT_TRUE(report.has(Constraint::assign));
  EXPECT_TRUE(report.has(Constraint::visit));
}

TEST(Checker, WrongDepots) {
  auto inst = line_instance(1, 5);
  Solution s = line_solution();
  s.routes[0].stops.front().node = 0;
  s.routes[0].stops.back().node = 1;
  auto report = check_feasibility(inst, s);
  EXPECT_TRUE(report.has(Constraint::depot_start));
  EXPECT_TRUE(report.has(Constraint::depot_end));
}

TEST(Checker, DeterministicReport) {
  auto inst = line_instance(6, 5);
  auto a = check_feasibility(inst, line_solution(true));
  auto b = check_feasibility(inst, line_solution(true));
  ASSERT_EQ(a.violations.size(), b.violations.size());
  for (std::size_t i = 0; i < a.violations.size(); ++i) {
    EXPECT_EQ(a.violations[i].constraint, b.violations[i].constraint);
    EXPECT_EQ(a.violations[i].detail, b.violations[i].detail);
  }
}

TEST(Checker, ConstraintNames) {
  EXPECT_EQ(to_string(Constraint::assign), "ASSIGN(2)");
  EXPECT_EQ(to_string(Constraint::nonneg_load), "NONNEG_LOAD(12)");
  EXPECT_EQ(to_string(Constraint::transfer_sync), "TRANSFER_SYNC");
}

TEST(Cost, IdleCoLocatedDepots) {
  MicroSpec spec;
  spec.depots = {{{5, 5}, {5, 5}}, {{5, 5}, {5, 5}}};
  auto inst = make_instance(spec);
  EXPECT_EQ(solution_cost(inst, Solution::empty(inst)), 0.0);
}

TEST(Cost, RoundTripTenUnits) {
  MicroSpec spec;
  spec.requests = {{{3, 4}, {3, 4}}};
  spec.depots = {{{0, 0}, {0, 0}}};
  auto inst = make_instance(spec);
  Solution s;
  s.routes = {route_of(0, {depart(2), pick(0, 0), drop(1, 0), arrive(3)})};
  s.assignment = {Assignment::direct(0)};
  EXPECT_DOUBLE_EQ(solution_cost(inst, s), 10.0);
}

TEST(Cost, TwoRoutesSum) {
  MicroSpec spec;
  spec.requests = {{{0, 3}, {4, 3}}, {{10, 0}, {10, 5}}};
  spec.depots = {{{0, 0}, {0, 0}}, {{10, 10}, {10, 10}}};
  auto inst = make_instance(spec);
  // p0=0 d0=1 p1=2 d1=3 A:4,5 B:6,7
  Solution s;
  s.routes = {route_of(0, {depart(4), pick(0, 0), drop(1, 0), arrive(5)}),
              route_of(1, {depart(6), pick(2, 1), drop(3, 1), arrive(7)})};
  s.assignment = {Assignment::direct(0), Assignment::direct(1)};
  EXPECT_TRUE(check_feasibility(inst, s).feasible);
  EXPECT_DOUBLE_EQ(solution_cost(inst, s), (3 + 4 + 5) + (10 + 5 + 5));
}
