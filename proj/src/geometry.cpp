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

#include "fieldcov/geometry.hpp"
#include "fieldcov/error.hpp"

#include <algorithm>
#include <limits>

namespace fieldcov {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidField: return "InvalidField";
    case ErrorCode::kInterruptedLane: return "InterruptedLane";
    case ErrorCode::kDegenerateField: return "DegenerateField";
    case ErrorCode::kEntranceOffHeadland: return "EntranceOffHeadland";
    case ErrorCode::kPlanFieldMismatch: return "PlanFieldMismatch";
    case ErrorCode::kUnreachable: return "Unreachable";
    case ErrorCode::kTurnInfeasible: return "TurnInfeasible";
    case ErrorCode::kStranded: return "Stranded";
    case ErrorCode::kUnsupportedCase: return "UnsupportedCase";
    case ErrorCode::kInvalidParams: return "InvalidParams";
    case ErrorCode::kParseError: return "ParseError";
  }
  return "Unknown";
}

double polyline_length(std::span<const Point> pts) {
  double len = 0.0;
  for (std::size_t i = 1; i < pts.size(); ++i) len += distance(pts[i - 1], pts[i]);
  return len;
}

double signed_area(std::span<const Point> ring) {
  double a = 0.0;
  const std::size_t n = ring.size();
  for (std::size_t i = 0; i < n; ++i) a += cross(ring[i], ring[(i + 1) % n]);
  return 0.5 * a;
}

namespace {

int orient(Point a, Point b, Point c) {
  const double v = cross(b - a, c - a);
  constexpr double kEps = 1e-12;
  return v > kEps ? 1 : (v < -kEps ? -1 : 0);
}

bool on_segment(Point a, Point b, Point p) {
  return std::min(a.x, b.x) - 1e-12 <= p.x && p.x <= std::max(a.x, b.x) + 1e-12 &&
         std::min(a.y, b.y) - 1e-12 <= p.y && p.y <= std::max(a.y, b.y) + 1e-12;
}

bool segments_intersect(Point a, Point b, Point c, Point d) {
  const int o1 = orient(a, b, c), o2 = orient(a, b, d);
  const int o3 = orient(c, d, a), o4 = orient(c, d, b);
  if (o1 != o2 && o3 != o4) return true;
  if (o1 == 0 && on_segment(a, b, c)) return true;
  if (o2 == 0 && on_segment(a, b, d)) return true;
  if (o3 == 0 && on_segment(c, d, a)) return true;
  if (o4 == 0 && on_segment(c, d, b)) return true;
  return false;
}

}  // namespace

bool is_simple_ring(std::span<const Point> ring) {
  const std::size_t n = ring.size();
  if (n < 3) return false;
  for (std::size_t i = 0; i < n; ++i) {
    const Point a = ring[i], b = ring[(i + 1) % n];
    if (a == b) return false;
    for (std::size_t j = i + 1; j < n; ++j) {
      if (j == i + 1 || (i == 0 && j == n - 1)) continue;
      if (segments_intersect(a, b, ring[j], ring[(j + 1) % n])) return false;
    }
  }
  return true;
}

RingProjection project_onto_ring(std::span<const Point> ring, Point p) {
  RingProjection best;
  best.distance = std::numeric_limits<double>::infinity();
  double s = 0.0;
  const std::size_t n = ring.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Point a = ring[i], b = ring[(i + 1) % n];
    const Point ab = b - a;
    const double len2 = dot(ab, ab);
    const double t = len2 > 0.0 ? std::clamp(dot(p - a, ab) / len2, 0.0, 1.0) : 0.0;
    const Point q = lerp(a, b, t);
    const double d = distance(p, q);
    if (d < best.distance) best = {s + t * std::sqrt(len2), q, d};
    s += std::sqrt(len2);
  }
  return best;
}

Point point_on_ring(std::span<const Point> ring, double s) {
  const std::size_t n = ring.size();
  double perimeter = 0.0;
  for (std::size_t i = 0; i < n; ++i) perimeter += distance(ring[i], ring[(i + 1) % n]);
  s = std::fmod(s, perimeter);
  if (s < 0.0) s += perimeter;
  for (std::size_t i = 0; i < n; ++i) {
    const Point a = ring[i], b = ring[(i + 1) % n];
    const double len = distance(a, b);
    if (s <= len) return len > 0.0 ? lerp(a, b, s / len) : a;
    s -= len;
  }
  return ring.front();
}

Polyline ring_slice(std::span<const Point> ring, double s0, double s1) {
  const std::size_t n = ring.size();
  std::vector<double> cum(n + 1, 0.0);
  for (std::size_t i = 0; i < n; ++i) cum[i + 1] = cum[i] + distance(ring[i], ring[(i + 1) % n]);
  const double perimeter = cum[n];
  double end = s1;
  if (end < s0) end += perimeter;

  Polyline out{point_on_ring(ring, s0)};
  // Vertices strictly inside (s0, end), visiting the ring up to twice for wrap.
  for (std::size_t lap = 0; lap < 2; ++lap) {
    for (std::size_t i = 0; i < n; ++i) {
      const double sv = cum[i] + static_cast<double>(lap) * perimeter;
      if (sv > s0 + 1e-12 && sv < end - 1e-12) out.push_back(ring[i]);
    }
  }
  out.push_back(point_on_ring(ring, s1));
  return out;
}

}  // namespace fieldcov
