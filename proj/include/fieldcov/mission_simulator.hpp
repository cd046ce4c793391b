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

#pragma once

#include "fieldcov/pattern_planners.hpp"
#include "fieldcov/transition_graph.hpp"

#include <functional>
#include <limits>
#include <optional>
#include <vector>

namespace fieldcov {

struct TankState {
  double fill = 1.0;                 // f, fraction of a full tank
  double capacity_working_m = std::numeric_limits<double>::infinity();
  /// Emptying rate a_f(t) in fractions per second while working; when
  /// empty, a full tank lasts exactly capacity_working_m working metres.
  std::function<double(double)> rate;
  double dt = 1.0;                   // s, step of the threshold policy
  double speed = 1.0;                // m/s

  double rate_at(double t) const;
};

enum class Mode { kResume = 0, kCoverage = 1, kReturn = 2 };

struct VehicleState {
  NetworkPosition position;
  Mode mode = Mode::kCoverage;
  std::optional<NetworkPosition> last_work;   // set on leaving coverage
};

/// Two-state (fill, rate) recursive estimator for f(t + dt) = f(t) - a_f dt.
struct RatePredictor {
  double fill = 1.0;          // f-hat
  double rate = 0.0;          // a_f-hat, per second
  double dt = 1.0;            // s between measurements
  double process_noise = 1e-8;      // rate variance added per step
  double measurement_noise = 1e-8;  // fill variance
  double cov[2][2] = {{0.0, 0.0}, {0.0, 0.0}};
  int updates = 0;

  /// Drops fill history (after a refill) while keeping the rate estimate.
  void reset_fill(double f);
};

/// Feeds one fill measurement taken `pred.dt` after the previous one.
RatePredictor update_predictor(RatePredictor pred, double measured_fill);

enum class PolicyKind {
  kExhaustion,  // return exactly when the next working metre would exceed capacity
  kThreshold,   // return early once f < threshold and returning now is cheaper
};

struct ReturnPolicy {
  PolicyKind kind = PolicyKind::kExhaustion;
  double threshold = 0.1;
};

struct RunRecord {
  int run_index = 1;
  double working_m = 0.0;
  double nonworking_m = 0.0;   // plan travel without application, turns included
  double return_m = 0.0;       // trip to the depot that ends this run
  double resume_m = 0.0;       // trip from the depot that starts this run
  double cumulative_m = 0.0;
  std::optional<NetworkPosition> trigger;   // where work stopped
  RoutePath return_path;
  RoutePath resume_path;
};

struct MissionLog {
  std::vector<RunRecord> runs;
  double plan_length = 0.0;   // D^(1)
  double total_length = 0.0;  // D^(rho)

  int rho() const { return static_cast<int>(runs.size()); }
  double excess() const { return total_length - plan_length; }
};

/// Shortest admissible path from the vehicle to the entrance.
RoutePath plan_return(const TransitionGraph& g, const CoveragePlan& plan, const NetworkPosition& at);

/// Shortest admissible path from the entrance that arrives at `last_work`
/// travelling in its stored heading.
RoutePath plan_resume(const TransitionGraph& g, const CoveragePlan& plan, const NetworkPosition& last_work);

/// Position reached after `working_m` further working metres along the plan,
/// starting from (step, offset); empty when the plan ends first.
std::optional<NetworkPosition> project_along_plan(const CoveragePlan& plan, std::size_t step, double done,
                                                  double working_m);

/// Threshold-policy decision for the vehicle at plan step `step` with
/// `done` metres of that step behind it.
bool trigger_return(const TankState& tank, const RatePredictor& pred, const TransitionGraph& g,
                    const CoveragePlan& plan, std::size_t step, double done, const ReturnPolicy& policy);

/// Runs the plan with refills at the entrance. Throws kStranded when the
/// tank runs dry somewhere without an admissible way back.
MissionLog simulate(const CoveragePlan& plan, const TransitionGraph& g, TankState tank,
                    const ReturnPolicy& policy = {});

}  // namespace fieldcov
