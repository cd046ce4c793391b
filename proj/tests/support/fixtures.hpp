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
#include "fieldcov/parametric_oracle.hpp"
#include "fieldcov/pattern_planners.hpp"
#include "fieldcov/transition_graph.hpp"

namespace fieldcov::testing {

struct BuiltField {
  NormalizedField field;
  TransformChain chain;
  TransitionGraph graph;   // no traces
};

inline BuiltField build_field(const FieldSpec& spec) {
  Normalization n = normalize(spec, generate_skeleton(spec));
  TransitionGraph g = build_graph(n.field);
  return {std::move(n.field), n.chain, std::move(g)};
}

inline BuiltField build_rect(int lanes, double radius = 7.0, double entrance_offset = 10.0,
                             double lane_length = 500.0, double width = 36.0) {
  return build_field(make_rect_field(lane_length, lanes, width, radius, entrance_offset));
}

}  // namespace fieldcov::testing
