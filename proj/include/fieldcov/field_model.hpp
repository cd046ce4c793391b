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

#include "fieldcov/geometry.hpp"

#include <optional>
#include <string_view>
#include <vector>

namespace fieldcov {

/// Tolerance for snapping the entrance/exit onto the headland path (m).
inline constexpr double kEntranceSnapTolerance = 0.5;

/// Raw field description in the global (x, y) frame.
///
/// `theta` is the angle of the rotation that maps global coordinates into the
/// lane-aligned frame; after rotating by `theta` every lane is parallel to the
/// vertical axis.
struct FieldSpec {
  Polyline contour;                  // closed ring, last vertex not repeated
  Point entrance;
  std::optional<Point> exit;         // defaults to the entrance
  double theta = 0.0;                // rad
  double operating_width = 0.0;      // W0, m
  double turning_radius = 0.0;       // R, m
  std::optional<double> headland_offset;  // m, defaults to W0 / 2

  double effective_headland_offset() const {
    return headland_offset.value_or(0.5 * operating_width);
  }
};

/// Throws Error(kInvalidField) naming the first violated invariant.
void validate(const FieldSpec& spec);

struct LaneSegment {
  Point a;
  Point b;
};

/// Headland ring and interior lanes, still in the global frame.
struct Skeleton {
  Polyline headland;                // closed ring
  std::vector<LaneSegment> lanes;   // ordered by abscissa in the lane-aligned frame
};

/// Offsets the contour inward and slices the enclosed region into lanes
/// perpendicular spacing W0. The first lane sits W0/2 inside the area left
/// uncovered by the headland pass; a lane is emitted only while it stays at
/// least W0/2 from the far side of that area.
///
/// Throws kDegenerateField when the offset leaves no room for a lane and
/// kInterruptedLane when any slice crosses the region more than once.
Skeleton generate_skeleton(const FieldSpec& spec);

/// One rotation, a translation of the bounding-box minimum to the origin and
/// up to two reflections about the extent midpoints.
struct TransformChain {
  double theta = 0.0;
  Point translation;       // subtracted after rotation
  bool reflect_x = false;
  double extent_x = 0.0;   // reflection maps x -> extent_x - x
  bool reflect_y = false;
  double extent_y = 0.0;

  Point forward(Point p) const;
  Point inverse(Point p) const;
  /// True when the chain flips orientation (exactly one reflection).
  bool mirrors() const { return reflect_x != reflect_y; }
};

enum class EntranceClass { kZ01, kZ02 };

std::string_view to_string(EntranceClass c);

struct NormalizedLane {
  double xi = 0.0;
  Point lower;
  Point upper;
  double s_lower = 0.0;
  double s_upper = 0.0;

  double length() const { return upper.y - lower.y; }
};

/// Field expressed in the normalized (xi, eta) frame.
///
/// Node numbering: 0 entrance, 1..N lower lane ends, N+1..2N upper lane ends,
/// 2N+1 / 2N+2 midpoints of the left / right headland parts, 2N+3 exit.
/// The headland ring runs counter-clockwise (upper part towards smaller xi)
/// and starts at Z_M, so `headland[0]` has arc length s = 0.
struct NormalizedField {
  Polyline headland;
  double perimeter = 0.0;
  std::vector<NormalizedLane> lanes;
  std::vector<Point> nodes;      // indexed by node id, size 2N+4
  std::vector<double> node_s;    // arc length of each node on the headland
  bool exit_is_entrance = true;
  EntranceClass entrance_class = EntranceClass::kZ01;
  double xi_m = 0.0;
  double operating_width = 0.0;
  double turning_radius = 0.0;

  int lane_count() const { return static_cast<int>(lanes.size()); }
  int lower_node(int lane) const { return lane; }
  int upper_node(int lane) const { return lane_count() + lane; }
  int left_node() const { return 2 * lane_count() + 1; }
  int right_node() const { return 2 * lane_count() + 2; }
  int exit_node() const { return exit_is_entrance ? 0 : 2 * lane_count() + 3; }
};

struct Normalization {
  NormalizedField field;
  TransformChain chain;
};

/// Rotates the skeleton into the lane-aligned frame and applies the first
/// reflection combination (none, x, y, xy) that places the entrance in
/// Z0^(1) or Z0^(2). Throws kEntranceOffHeadland if the entrance or exit is
/// farther than kEntranceSnapTolerance from the headland path.
Normalization normalize(const FieldSpec& spec, const Skeleton& skeleton);

/// Builds a chain without reflections and applies the requested ones.
TransformChain make_chain(double theta, std::span<const Point> headland, bool reflect_x,
                          bool reflect_y);

Polyline denormalize(const TransformChain& chain, std::span<const Point> path);

}  // namespace fieldcov
