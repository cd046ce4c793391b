/*
 * Copyright 2026 The fieldcov Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "doctest.h"
#include "fieldcov/error.hpp"
#include "fieldcov/mission_simulator.hpp"
#include "support/fixtures.hpp"

#include <cstring>

using namespace fieldcov;
using testing::build_rect;

namespace {

RatePredictor feed(RatePredictor pred, double f0, double rate, int count) {
  for (int i = 0; i < count; ++i) pred = update_predictor(pred, f0 - rate * pred.dt * i);
  return pred;
}

std::vector<int> lanes_on(const TransitionGraph& g, const RoutePath& r) {
  std::vector<int> out;
  for (const auto& s : r.steps)
    if (g.edge(s.edge).kind == EdgeKind::kLane) out.push_back(g.edge(s.edge).lane);
  return out;
}

std::size_t step_of_lane(const CoveragePlan& plan, int lane) {
  for (std::size_t k = 0; k < plan.steps.size(); ++k)
    if (plan.steps[k].edge == plan.graph.lane_edge(lane)) return k;
  FAIL("lane not in plan");
  return 0;
}

// Scripted walk of the exhaustion policy built only from plan steps and
// shortest_path queries.
struct HandResult {
  int runs = 1;
  double total = 0.0;
};

HandResult hand_simulate(const CoveragePlan& plan, double capacity) {
  const TransitionGraph& g = plan.graph;
  HandResult out;
  out.total = plan.length;
  double left = capacity;
  double work_left = plan.working_length();
  auto on = [&](std::size_t k, double along) {
    const PlanStep& s = plan.steps[k];
    const double w = g.edge(s.edge).weight;
    return NetworkPosition::on_edge(s.edge, s.forward ? along : w - along,
                                    s.forward ? Heading::kForward : Heading::kBackward);
  };
  auto trip = [&](const NetworkPosition& from, const NetworkPosition& to, double skipped) {
    out.total += shortest_path(g, from, NetworkPosition::at_node(0)).length +
                 shortest_path(g, NetworkPosition::at_node(0), to).length - skipped;
    ++out.runs;
    left = capacity;
  };
  for (std::size_t k = 0; k < plan.steps.size(); ++k) {
    const PlanStep& s = plan.steps[k];
    if (!s.working) continue;
    const double w = g.edge(s.edge).weight;
    if (left <= 1e-9 && work_left > 1e-9) trip(on(k - 1, g.edge(plan.steps[k - 1].edge).weight), on(k, 0.0), s.turn_before);
    double done = 0.0;
    while (w - done > 1e-9) {
      const double chunk = std::min(w - done, left);
      done += chunk;
      left -= chunk;
      work_left -= chunk;
      if (w - done > 1e-9 && left <= 1e-9) trip(on(k, done), on(k, done), 0.0);
    }
  }
  return out;
}

}  // namespace

TEST_CASE("constant rate is identified exactly") {
  RatePredictor pred;
  pred.dt = 1.0;
  CHECK(std::abs(feed(pred, 0.9, 0.01, 3).rate - 0.01) < 1e-9);
  const RatePredictor five = feed(pred, 0.9, 0.01, 5);
  CHECK(std::abs(five.rate - 0.01) < 1e-9);
  CHECK(std::abs(five.fill - (0.9 - 0.04)) < 1e-9);
}

TEST_CASE("zero rate keeps the fill") {
  RatePredictor pred;
  pred = feed(pred, 0.7, 0.0, 10);
  CHECK(pred.fill == doctest::Approx(0.7));
  CHECK(std::abs(pred.rate) < 1e-12);
}

TEST_CASE("rate step is tracked") {
  RatePredictor pred;
  double f = 1.0;
  for (int t = 0; t <= 10; ++t) {
    pred = update_predictor(pred, f);
    f -= 0.01;
  }
  f += 0.01;
  for (int i = 0; i < 10; ++i) {
    f -= 0.02;
    pred = update_predictor(pred, f);
  }
  CHECK(std::abs(pred.rate - 0.02) <= 0.1 * 0.02);
}

TEST_CASE("refill keeps the rate estimate") {
  RatePredictor pred = feed(RatePredictor{}, 0.9, 0.01, 4);
  pred.reset_fill(1.0);
  CHECK(pred.fill == 1.0);
  CHECK(pred.rate == doctest::Approx(0.01));
  pred = update_predictor(pred, 0.99);
  CHECK(pred.rate == doctest::Approx(0.01));
}

TEST_CASE("return trigger") {
  const auto b = build_rect(9);
  const CoveragePlan plan = plan_circ(b.field);
  const TransitionGraph& g = plan.graph;
  TankState tank;
  tank.speed = 2.0;
  const ReturnPolicy policy{PolicyKind::kThreshold, 0.1};
  const std::size_t k = step_of_lane(plan, 3);
  REQUIRE(plan.steps[k].forward);  // lane 3 is worked upwards

  RatePredictor pred;
  pred.fill = 0.05;
  pred.rate = 0.05 / 600.0;  // about 1200 working m left

  tank.fill = 0.0;
  CHECK(trigger_return(tank, pred, g, plan, k, 10.0, policy));
  tank.fill = 0.9;
  CHECK_FALSE(trigger_return(tank, pred, g, plan, k, 10.0, policy));
  tank.fill = 0.05;
  CHECK(trigger_return(tank, pred, g, plan, k, 480.0, policy));
  CHECK_FALSE(trigger_return(tank, pred, g, plan, k, 480.0, ReturnPolicy{PolicyKind::kExhaustion, 0.1}));
}

TEST_CASE("returns follow the traces") {
  const auto b = build_rect(9);
  const CoveragePlan abp = plan_abp(b.field);
  const CoveragePlan circ = plan_circ(b.field);
  const int lane3 = abp.graph.lane_edge(3);

  const RoutePath down = plan_return(abp.graph, abp, NetworkPosition::on_edge(lane3, 250.0, Heading::kBackward));
  CHECK(lanes_on(abp.graph, down) == std::vector<int>{3, 9});

  const RoutePath up = plan_return(circ.graph, circ, NetworkPosition::on_edge(lane3, 250.0, Heading::kForward));
  CHECK(lanes_on(circ.graph, up) == std::vector<int>{3});
  CHECK(up.nodes.back() == 0);

  CHECK(plan_return(abp.graph, abp, NetworkPosition::at_node(0)).length == 0.0);
  CHECK(plan_resume(abp.graph, abp, NetworkPosition::at_node(0)).length == 0.0);
}

TEST_CASE("resumes arrive in the stored heading") {
  const auto b = build_rect(9);
  const CoveragePlan circ = plan_circ(b.field);
  const TransitionGraph& g = circ.graph;
  const int lane = g.lane_edge(5);
  const RoutePath up = plan_resume(g, circ, NetworkPosition::on_edge(lane, 250.0, Heading::kForward));
  REQUIRE_FALSE(up.steps.empty());
  CHECK(up.steps.back().edge == lane);
  CHECK(up.steps.back().forward);
  CHECK(up.steps.back().from == 0.0);

  const RoutePath down = plan_resume(g, circ, NetworkPosition::on_edge(lane, 250.0, Heading::kBackward));
  CHECK(down.steps.back().edge == lane);
  CHECK_FALSE(down.steps.back().forward);
  CHECK(down.steps.back().from == g.edge(lane).weight);
}

TEST_CASE("unlimited tank runs the plan once") {
  const auto b = build_rect(7);
  for (Pattern pattern : {Pattern::kAbp, Pattern::kCirc, Pattern::kCircStar}) {
    const CoveragePlan plan = make_plan(pattern, b.field);
    const MissionLog log = simulate(plan, plan.graph, TankState{});
    CHECK(log.rho() == 1);
    CHECK(log.total_length == doctest::Approx(plan.length).epsilon(1e-14));
    CHECK(log.runs[0].return_m == 0.0);
    CHECK(log.runs[0].working_m == doctest::Approx(plan.working_length()));
  }
}

TEST_CASE("exhaustion policy matches a scripted walk") {
  const auto b = build_rect(9);
  for (Pattern pattern : {Pattern::kAbp, Pattern::kCirc, Pattern::kCircStar}) {
    const CoveragePlan plan = make_plan(pattern, b.field);
    for (double capacity : {5000.0, 2500.0, 1750.0, 1000.0}) {
      TankState tank;
      tank.capacity_working_m = capacity;
      const MissionLog log = simulate(plan, plan.graph, tank);
      const HandResult hand = hand_simulate(plan, capacity);
      CHECK(log.rho() == hand.runs);
      CHECK(log.total_length == doctest::Approx(hand.total).epsilon(1e-12));
    }
  }
}

TEST_CASE("conservation, additivity and monotonicity") {
  const auto b = build_rect(9);
  for (Pattern pattern : {Pattern::kAbp, Pattern::kCirc, Pattern::kCircStar}) {
    const CoveragePlan plan = make_plan(pattern, b.field);
    double previous = 0.0;
    for (double capacity : {1e12, 5000.0, 2500.0, 1750.0, 1200.0}) {
      TankState tank;
      tank.capacity_working_m = capacity;
      const MissionLog log = simulate(plan, plan.graph, tank);
      double working = 0.0, trips = 0.0;
      for (const auto& r : log.runs) {
        working += r.working_m;
        trips += r.return_m + r.resume_m;
      }
      CHECK(std::abs(working - plan.working_length()) < 1e-9);
      CHECK(std::abs(log.excess() - trips) < 1e-9);
      CHECK(log.total_length >= previous - 1e-9);
      previous = log.total_length;
    }
  }
}

TEST_CASE("refills widen the gap between ABp and CIRC*") {
  const auto b = build_rect(9);
  const CoveragePlan abp = plan_abp(b.field);
  const CoveragePlan star = plan_circ_star(b.field);
  TankState tank;
  tank.capacity_working_m = 1750.0;
  const double multi = simulate(abp, abp.graph, tank).total_length - simulate(star, star.graph, tank).total_length;
  CHECK(multi > abp.length - star.length);
}

TEST_CASE("ABp returns from the far side use the last lane") {
  const auto b = build_rect(9);
  const CoveragePlan plan = plan_abp(b.field);
  const TransitionGraph& g = plan.graph;
  const double xi0 = b.field.nodes[0].x;
  const double bottom = b.field.lanes[0].lower.y;
  int checked = 0;
  for (double capacity : {700.0, 1300.0, 1750.0, 2500.0}) {
    TankState tank;
    tank.capacity_working_m = capacity;
    const MissionLog log = simulate(plan, g, tank);
    for (const auto& run : log.runs) {
      if (!run.trigger) continue;
      const Point at = g.point_on_edge(run.trigger->edge, run.trigger->offset);
      const bool on_lane = g.edge(run.trigger->edge).kind == EdgeKind::kLane;
      if (at.x < xi0 || !(on_lane || std::abs(at.y - bottom) < 1e-6)) continue;
      const auto lanes = lanes_on(g, run.return_path);
      CHECK(std::find(lanes.begin(), lanes.end(), g.lane_count()) != lanes.end());
      ++checked;
    }
  }
  CHECK(checked > 5);
}

TEST_CASE("threshold policy keeps the books balanced") {
  const auto b = build_rect(9);
  const CoveragePlan plan = plan_circ_star(b.field);
  TankState tank;
  tank.capacity_working_m = 2500.0;
  tank.speed = 2.0;
  tank.dt = 1.0;
  const MissionLog log = simulate(plan, plan.graph, tank, {PolicyKind::kThreshold, 0.1});
  double working = 0.0, trips = 0.0;
  for (const auto& r : log.runs) {
    working += r.working_m;
    trips += r.return_m + r.resume_m;
    CHECK(r.working_m <= 2500.0 + 1e-6);
  }
  CHECK(log.rho() >= 3);
  CHECK(std::abs(working - plan.working_length()) < 1e-6);
  CHECK(std::abs(log.excess() - trips) < 1e-9);
}

TEST_CASE("identical inputs give identical logs") {
  const auto b = build_rect(7);
  const CoveragePlan plan = plan_circ(b.field);
  TankState tank;
  tank.capacity_working_m = 1500.0;
  const MissionLog x = simulate(plan, plan.graph, tank);
  const MissionLog y = simulate(plan, plan.graph, tank);
  REQUIRE(x.rho() == y.rho());
  for (int i = 0; i < x.rho(); ++i) {
    CHECK(std::memcmp(&x.runs[i].cumulative_m, &y.runs[i].cumulative_m, sizeof(double)) == 0);
    CHECK(std::memcmp(&x.runs[i].return_m, &y.runs[i].return_m, sizeof(double)) == 0);
  }
}

TEST_CASE("running dry without traces strands the vehicle") {
  const auto b = build_rect(5);
  const CoveragePlan plan = plan_abp(b.field);
  TankState tank;
  tank.capacity_working_m = 2500.0;
  try {
    simulate(plan, b.graph, tank);
    FAIL("expected a stranded vehicle");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kStranded);
  }
  tank.capacity_working_m = 0.0;
  CHECK_THROWS_AS(simulate(plan, plan.graph, tank), Error);
}
