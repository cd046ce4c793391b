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

#include "fieldcov/field_model.hpp"
#include "fieldcov/transition_graph.hpp"

#include <numbers>
#include <string_view>
#include <vector>

namespace fieldcov {

/// Rectangular-field quantities with turns rounded at radius R.
struct RectParams {
  double lane_length = 0.0;      // H0, m
  double operating_width = 0.0;  // W0, m
  double turning_radius = 0.0;   // R, m

  double quarter_arc() const { return turning_radius * std::numbers::pi / 2.0; }    // C
  double effective_lane() const { return lane_length - 2.0 * turning_radius + 2.0 * quarter_arc(); }  // H
  double effective_width() const { return operating_width - 2.0 * turning_radius; }  // W
  double u_turn() const { return 2.0 * quarter_arc() + effective_width(); }
  /// Throws kInvalidParams unless H0 > 0, R >= 0 and W0 > 2R.
  void validate() const;
};

enum class Pattern { kAbp, kCirc, kCircStar };

std::string_view to_string(Pattern p);

/// One full edge traversal of a plan.
struct PlanStep {
  int edge = 0;
  bool forward = true;       // a -> b
  bool working = false;      // first traversal of the edge
  double turn_before = 0.0;  // transition cost paid when entering the edge (m)
};

struct LaneVisit {
  int lane = 0;
  bool upward = false;   // +eta

  friend bool operator==(const LaneVisit&, const LaneVisit&) = default;
};

struct CoveragePlan {
  Pattern pattern = Pattern::kAbp;
  TransitionGraph graph;          // arcs established by this plan
  std::vector<PlanStep> steps;
  std::vector<int> nodes;         // nodes.size() == steps.size() + 1
  std::vector<LaneVisit> lane_order;
  double length = 0.0;            // D^(1), m

  std::vector<TraceArc> arcs() const { return graph.arcs(); }
  double working_length() const;
  /// Number of traversals per edge id.
  std::vector<int> edge_counts() const;
};

CoveragePlan plan_abp(const NormalizedField& nf);
CoveragePlan plan_circ(const NormalizedField& nf);
CoveragePlan plan_circ_star(const NormalizedField& nf);
CoveragePlan make_plan(Pattern pattern, const NormalizedField& nf);

/// Re-establishes the plan's arcs on `g`. Throws kPlanFieldMismatch when the
/// plan was generated for a different field layout.
TransitionGraph establish_traces(const TransitionGraph& g, const CoveragePlan& plan);

enum class SegmentKind { kLine, kArc };

/// Geometric piece of a realized path. Arcs run from `start` to `end`
/// around `center`; `sweep` is signed, counter-clockwise positive.
struct PathSegment {
  SegmentKind kind = SegmentKind::kLine;
  bool working = false;
  Point start;
  Point end;
  Point center;
  double radius = 0.0;
  double sweep = 0.0;
  double length = 0.0;
};

/// Rounds every corner of the route with a tangent arc of the graph's
/// turning radius. Throws kTurnInfeasible when W0 <= 2R or a straight piece
/// is too short for the arcs at both of its ends.
std::vector<PathSegment> realize_geometry(const TransitionGraph& g, const std::vector<PlanStep>& steps,
                                          double operating_width);
std::vector<PathSegment> realize_geometry(const CoveragePlan& plan, double operating_width);

/// Maps realized segments back to the global frame.
std::vector<PathSegment> denormalize(const TransformChain& chain, const std::vector<PathSegment>& segments);

}  // namespace fieldcov
