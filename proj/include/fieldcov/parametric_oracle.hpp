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
#include "fieldcov/pattern_planners.hpp"
#include "fieldcov/transition_graph.hpp"

namespace fieldcov {

enum class EdgeContext { kHeadlandReturn, kHeadlandResume, kLaneReturn, kLaneResume };

/// An edge of the rectangle's network in one query context. `index` is the
/// lane number for lane edges and the counter-clockwise start node for
/// headland edges.
struct EdgeClass {
  EdgeContext context = EdgeContext::kHeadlandReturn;
  int index = 0;

  bool even() const { return index % 2 == 0; }
};

/// Rectangle with odd N >= 5 and the entrance between lanes 1 and 2.
struct RectQuery {
  RectParams rect;
  int lane_count = 0;
  double fraction = 0.0;        // p, position along the lane measured from its lower end
  double entrance_offset = 0.0; // q_l, distance from lane 1 to the entrance

  /// Throws kUnsupportedCase outside odd N >= 5, kInvalidParams otherwise.
  void validate() const;
};

/// D_return(ABp) - D_return(CIRC) for a vehicle on the given edge.
double delta_return(const EdgeClass& cls, const RectQuery& q);

/// D_resume(ABp) - D_resume(CIRC) for work stopped on the given edge.
double delta_resume(const EdgeClass& cls, const RectQuery& q);

/// D_ABp - D_method for a single run; odd N only.
double delta_single_run(Pattern method, int lane_count, double operating_width);

/// Lane-edge offset (graph units from the lower end) of fraction p along the
/// effective lane H, whose ends lie on the turn arcs.
double lane_offset(const RectParams& rp, double fraction);

/// Table index of an edge: lane number or counter-clockwise start node.
int table_index(const TransitionGraph& g, int edge);

/// Rectangular field with N lanes of length H0, headland offset W0/2 and
/// the entrance on the upper headland `entrance_offset` right of lane 1.
FieldSpec make_rect_field(double lane_length, int lane_count, double operating_width, double turning_radius,
                          double entrance_offset);

}  // namespace fieldcov
