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

#include "fieldcov/mission_simulator.hpp"

#include "fieldcov/error.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>

namespace fieldcov {
namespace {

constexpr double kEps = 1e-9;

NetworkPosition plan_position(const CoveragePlan& plan, std::size_t step, double done) {
  const PlanStep& s = plan.steps.at(step);
  const double w = plan.graph.edge(s.edge).weight;
  return NetworkPosition::on_edge(s.edge, s.forward ? done : w - done,
                                  s.forward ? Heading::kForward : Heading::kBackward);
}

}  // namespace

double TankState::rate_at(double t) const {
  if (rate) return rate(t);
  return std::isfinite(capacity_working_m) ? speed / capacity_working_m : 0.0;
}

void RatePredictor::reset_fill(double f) {
  fill = f;
  cov[0][0] = measurement_noise;
  cov[0][1] = cov[1][0] = 0.0;
  if (updates > 1) updates = 2;
}

RatePredictor update_predictor(RatePredictor pred, double measured_fill) {
  const double z = std::clamp(measured_fill, 0.0, 1.0);
  const double r = pred.measurement_noise;
  if (pred.updates == 0) {
    pred.fill = z;
    pred.cov[0][0] = r;
    pred.updates = 1;
    return pred;
  }
  if (pred.updates == 1) {
    // Two-point start: exact rate from consecutive readings.
    pred.rate = (pred.fill - z) / pred.dt;
    pred.fill = z;
    pred.cov[0][0] = r;
    pred.cov[0][1] = pred.cov[1][0] = r / pred.dt;
    pred.cov[1][1] = 2.0 * r / (pred.dt * pred.dt);
    pred.updates = 2;
    return pred;
  }
  const double dt = pred.dt;
  // Predict with F = [[1, -dt], [0, 1]], Q = diag(0, q).
  const double f_pred = pred.fill - pred.rate * dt;
  const double p00 = pred.cov[0][0] - dt * (pred.cov[0][1] + pred.cov[1][0]) + dt * dt * pred.cov[1][1];
  const double p01 = pred.cov[0][1] - dt * pred.cov[1][1];
  const double p11 = pred.cov[1][1] + pred.process_noise;
  const double s = p00 + r;
  const double k0 = p00 / s, k1 = p01 / s;
  const double innovation = z - f_pred;
  pred.fill = std::clamp(f_pred + k0 * innovation, 0.0, 1.0);
  pred.rate = pred.rate + k1 * innovation;
  pred.cov[0][0] = (1.0 - k0) * p00;
  pred.cov[0][1] = pred.cov[1][0] = (1.0 - k0) * p01;
  pred.cov[1][1] = p11 - k1 * p01;
  ++pred.updates;
  return pred;
}

RoutePath plan_return(const TransitionGraph& g, const CoveragePlan& plan, const NetworkPosition& at) {
  (void)plan;
  return shortest_path(g, at, NetworkPosition::at_node(0));
}

RoutePath plan_resume(const TransitionGraph& g, const CoveragePlan& plan, const NetworkPosition& last_work) {
  (void)plan;
  return shortest_path(g, NetworkPosition::at_node(0), last_work);
}

std::optional<NetworkPosition> project_along_plan(const CoveragePlan& plan, std::size_t step, double done,
                                                  double working_m) {
  double left = working_m;
  for (std::size_t k = step; k < plan.steps.size(); ++k) {
    const PlanStep& s = plan.steps[k];
    const double w = plan.graph.edge(s.edge).weight;
    const double start = k == step ? done : 0.0;
    if (!s.working) continue;
    if (w - start >= left) return plan_position(plan, k, start + left);
    left -= w - start;
  }
  return std::nullopt;
}

bool trigger_return(const TankState& tank, const RatePredictor& pred, const TransitionGraph& g,
                    const CoveragePlan& plan, std::size_t step, double done, const ReturnPolicy& policy) {
  if (tank.fill <= kEps) return true;
  if (policy.kind != PolicyKind::kThreshold || tank.fill >= policy.threshold) return false;
  if (pred.rate <= 0.0) return false;
  const double working_left = pred.fill / pred.rate * tank.speed;
  const auto empty_at = project_along_plan(plan, step, done, working_left);
  if (!empty_at) return false;
  const double now = shortest_path(g, plan_position(plan, step, done), NetworkPosition::at_node(0)).length;
  const double later = shortest_path(g, *empty_at, NetworkPosition::at_node(0)).length;
  return now < later;
}

MissionLog simulate(const CoveragePlan& plan, const TransitionGraph& g, TankState tank, const ReturnPolicy& policy) {
  if (!(tank.capacity_working_m > 0.0)) throw Error(ErrorCode::kInvalidParams, "capacity must be positive");
  if (!(tank.speed > 0.0) || !(tank.dt > 0.0)) throw Error(ErrorCode::kInvalidParams, "speed and dt must be positive");
  const bool threshold = policy.kind == PolicyKind::kThreshold;

  MissionLog log;
  log.plan_length = plan.length;
  double remaining = plan.working_length();
  double capacity_left = tank.capacity_working_m;
  tank.fill = 1.0;
  double clock = 0.0;
  double since_measure = 0.0;
  RatePredictor pred;
  pred.dt = tank.dt;
  pred = update_predictor(pred, tank.fill);
  VehicleState vehicle;
  vehicle.position = NetworkPosition::at_node(0);

  RunRecord run;
  double cumulative = 0.0;
  auto close_run = [&] {
    cumulative += run.resume_m + run.working_m + run.nonworking_m + run.return_m;
    run.cumulative_m = cumulative;
    log.runs.push_back(run);
  };
  auto empty = [&] { return threshold ? tank.fill <= kEps : capacity_left <= kEps; };
  auto depot_trip = [&](const NetworkPosition& from, const NetworkPosition& to, double skipped) {
    vehicle.mode = Mode::kReturn;
    vehicle.last_work = to;
    try {
      run.return_path = plan_return(g, plan, from);
      run.trigger = to;
      run.return_m = run.return_path.length;
      close_run();
      run = RunRecord{};
      run.run_index = static_cast<int>(log.runs.size()) + 1;
      vehicle.mode = Mode::kResume;
      run.resume_path = plan_resume(g, plan, to);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kUnreachable) throw;
      throw Error(ErrorCode::kStranded, fmt::format("tank empty after {:.3f} working m with no way back: {}",
                                                    plan.working_length() - remaining, e.what()));
    }
    // A plan turn that is replaced by the resume path's own turn is not driven.
    run.resume_m = run.resume_path.length - skipped;
    capacity_left = tank.capacity_working_m;
    tank.fill = 1.0;
    pred.reset_fill(1.0);
    since_measure = 0.0;
    vehicle.mode = Mode::kCoverage;
  };

  for (std::size_t k = 0; k < plan.steps.size(); ++k) {
    const PlanStep& s = plan.steps[k];
    const double w = plan.graph.edge(s.edge).weight;
    if (!s.working) {
      run.nonworking_m += s.turn_before + w;
      clock += (std::max(0.0, s.turn_before) + w) / tank.speed;
      continue;
    }
    if (empty() && remaining > kEps) {
      const NetworkPosition from = k > 0 ? plan_position(plan, k - 1, plan.graph.edge(plan.steps[k - 1].edge).weight)
                                         : NetworkPosition::at_node(0);
      depot_trip(from, plan_position(plan, k, 0.0), s.turn_before);
    }
    run.nonworking_m += s.turn_before;
    double done = 0.0;
    while (done < w - kEps) {
      double chunk = w - done;
      if (threshold) {
        // Measurements are taken every dt of working time.
        const double rate = tank.rate_at(clock);
        chunk = std::min(chunk, (tank.dt - since_measure) * tank.speed);
        if (rate > 0.0) chunk = std::min(chunk, tank.fill / rate * tank.speed);
        clock += chunk / tank.speed;
        since_measure += chunk / tank.speed;
        tank.fill = std::max(0.0, tank.fill - rate * chunk / tank.speed);
        if (since_measure >= tank.dt - kEps) {
          pred.dt = since_measure;
          pred = update_predictor(pred, tank.fill);
          since_measure = 0.0;
        }
      } else {
        chunk = std::min(chunk, capacity_left);
        capacity_left -= chunk;
        tank.fill = capacity_left / tank.capacity_working_m;
      }
      done += chunk;
      run.working_m += chunk;
      remaining -= chunk;
      if (done >= w - kEps || remaining <= kEps) break;
      if (empty() || (threshold && trigger_return(tank, pred, g, plan, k, done, policy))) {
        const NetworkPosition here = plan_position(plan, k, done);
        depot_trip(here, here, 0.0);
      }
    }
  }
  close_run();
  log.total_length = cumulative;
  return log;
}

}  // namespace fieldcov
