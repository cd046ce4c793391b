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

#include <cmath>
#include <numbers>
#include <span>
#include <vector>

namespace fieldcov {

struct Point {
  double x = 0.0;
  double y = 0.0;

  friend Point operator+(Point a, Point b) { return {a.x + b.x, a.y + b.y}; }
  friend Point operator-(Point a, Point b) { return {a.x - b.x, a.y - b.y}; }
  friend Point operator*(double s, Point a) { return {s * a.x, s * a.y}; }
  friend bool operator==(Point a, Point b) = default;
};

using Polyline = std::vector<Point>;

inline double dot(Point a, Point b) { return a.x * b.x + a.y * b.y; }
inline double cross(Point a, Point b) { return a.x * b.y - a.y * b.x; }
inline double norm(Point a) { return std::hypot(a.x, a.y); }
inline double distance(Point a, Point b) { return norm(b - a); }

inline Point normalized(Point a) {
  const double n = norm(a);
  return n > 0.0 ? Point{a.x / n, a.y / n} : Point{};
}

inline Point lerp(Point a, Point b, double t) { return a + t * (b - a); }

/// Unsigned deflection angle in [0, pi] between two travel directions.
inline double deflection(Point dir_in, Point dir_out) {
  const Point a = normalized(dir_in);
  const Point b = normalized(dir_out);
  return std::atan2(std::abs(cross(a, b)), dot(a, b));
}

/// Length change when a corner of deflection `phi` is replaced by a tangent
/// arc of radius `radius`: arc length minus the two trimmed tangent lengths.
/// Equals R*pi/2 - 2R at a right angle.
inline double fillet_correction(double radius, double phi) {
  if (radius <= 0.0 || phi <= 0.0) return 0.0;
  return radius * (phi - 2.0 * std::tan(0.5 * phi));
}

double polyline_length(std::span<const Point> pts);

/// Signed area, positive for counter-clockwise rings (closing edge implied).
double signed_area(std::span<const Point> ring);

/// True if no two non-adjacent edges of the closed ring intersect.
bool is_simple_ring(std::span<const Point> ring);

struct RingProjection {
  double s = 0.0;        // arc length from ring[0]
  Point point;           // closest point on the ring
  double distance = 0.0;
};

/// Closest point on a closed ring, with its arc-length coordinate.
RingProjection project_onto_ring(std::span<const Point> ring, Point p);

/// Point at arc length `s` (taken modulo the perimeter) along a closed ring.
Point point_on_ring(std::span<const Point> ring, double s);

/// Sub-polyline of a closed ring from arc length `s0` forward to `s1`,
/// wrapping around the closing edge when `s1 < s0`.
Polyline ring_slice(std::span<const Point> ring, double s0, double s1);

}  // namespace fieldcov
