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

#include "fieldcov/field_model.hpp"

#include "fieldcov/error.hpp"

#include <boost/geometry.hpp>
#include <boost/geometry/geometries/point_xy.hpp>
#include <boost/geometry/geometries/polygon.hpp>
#include <fmt/format.h>

#include <algorithm>
#include <array>
#include <limits>

namespace fieldcov {
namespace {

namespace bg = boost::geometry;
using BPoint = bg::model::d2::point_xy<double>;
using BPolygon = bg::model::polygon<BPoint, false>;
using BMulti = bg::model::multi_polygon<BPolygon>;

constexpr double kEps = 1e-9;

Point rotate(Point p, double theta) {
  const double c = std::cos(theta), s = std::sin(theta);
  return {c * p.x - s * p.y, s * p.x + c * p.y};
}

Polyline ccw(Polyline ring) {
  if (signed_area(ring) < 0.0) std::reverse(ring.begin(), ring.end());
  return ring;
}

// Drops repeated and collinear vertices.
Polyline clean_ring(const Polyline& ring) {
  Polyline out;
  for (const Point& p : ring)
    if (out.empty() || distance(out.back(), p) > kEps) out.push_back(p);
  while (out.size() > 1 && distance(out.front(), out.back()) <= kEps) out.pop_back();
  bool changed = true;
  while (changed && out.size() > 3) {
    changed = false;
    for (std::size_t i = 0; i < out.size(); ++i) {
      const Point prev = out[(i + out.size() - 1) % out.size()];
      const Point next = out[(i + 1) % out.size()];
      const Point a = out[i] - prev, b = next - out[i];
      if (std::abs(cross(normalized(a), normalized(b))) < 1e-12 && dot(a, b) > 0.0) {
        out.erase(out.begin() + static_cast<std::ptrdiff_t>(i));
        changed = true;
        break;
      }
    }
  }
  return out;
}

// Inward offset of a counter-clockwise ring; one ring per resulting component.
std::vector<Polyline> erode(const Polyline& ring, double dist) {
  if (dist <= 0.0) return {ring};
  BPolygon poly;
  for (const Point& p : ring) bg::append(poly.outer(), BPoint(p.x, p.y));
  bg::append(poly.outer(), BPoint(ring.front().x, ring.front().y));
  bg::correct(poly);

  BMulti result;
  bg::buffer(poly, result, bg::strategy::buffer::distance_symmetric<double>(-dist),
             bg::strategy::buffer::side_straight(), bg::strategy::buffer::join_miter(),
             bg::strategy::buffer::end_flat(), bg::strategy::buffer::point_square());

  std::vector<Polyline> out;
  for (const BPolygon& part : result) {
    if (bg::area(part) <= kEps) continue;
    Polyline r;
    for (const BPoint& q : part.outer()) r.push_back({q.x(), q.y()});
    r = ccw(clean_ring(r));
    if (r.size() >= 3) out.push_back(std::move(r));
  }
  return out;
}

// Ordinates where the vertical line x = xv crosses the ring (half-open rule
// so that a vertex on the line is counted once).
std::vector<double> vertical_crossings(const Polyline& ring, double xv) {
  std::vector<double> ys;
  const std::size_t n = ring.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Point a = ring[i], b = ring[(i + 1) % n];
    if ((a.x <= xv && xv < b.x) || (b.x <= xv && xv < a.x)) {
      const double t = (xv - a.x) / (b.x - a.x);
      ys.push_back(a.y + t * (b.y - a.y));
    }
  }
  std::sort(ys.begin(), ys.end());
  return ys;
}

struct Box {
  double min_x, min_y, max_x, max_y;
};

Box bounds(std::span<const Point> pts) {
  Box b{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity(),
        -std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
  for (const Point& p : pts) {
    b.min_x = std::min(b.min_x, p.x);
    b.min_y = std::min(b.min_y, p.y);
    b.max_x = std::max(b.max_x, p.x);
    b.max_y = std::max(b.max_y, p.y);
  }
  return b;
}

// Rotates the ring so it starts at the top crossing of x = xm.
Polyline anchor_at_top(const Polyline& ring, double xm) {
  const std::size_t n = ring.size();
  double best_y = -std::numeric_limits<double>::infinity();
  std::size_t best_edge = 0;
  Point best;
  for (std::size_t i = 0; i < n; ++i) {
    const Point a = ring[i], b = ring[(i + 1) % n];
    const double lo = std::min(a.x, b.x), hi = std::max(a.x, b.x);
    if (xm < lo - kEps || xm > hi + kEps) continue;
    Point q;
    if (hi - lo < kEps) {
      q = a.y > b.y ? a : b;
      q.x = xm;
    } else {
      const double t = std::clamp((xm - a.x) / (b.x - a.x), 0.0, 1.0);
      q = lerp(a, b, t);
    }
    if (q.y > best_y) {
      best_y = q.y;
      best = q;
      best_edge = i;
    }
  }
  Polyline out{best};
  for (std::size_t k = 1; k <= n; ++k) {
    const Point v = ring[(best_edge + k) % n];
    if (distance(v, best) > kEps) out.push_back(v);
  }
  while (out.size() > 1 && distance(out.back(), best) <= kEps) out.pop_back();
  return out;
}

double ring_perimeter(const Polyline& ring) {
  double p = 0.0;
  for (std::size_t i = 0; i < ring.size(); ++i) p += distance(ring[i], ring[(i + 1) % ring.size()]);
  return p;
}

}  // namespace

void validate(const FieldSpec& spec) {
  auto fail = [](const std::string& what) { throw Error(ErrorCode::kInvalidField, what); };
  if (spec.contour.size() < 3) fail("contour needs at least 3 vertices");
  for (const Point& p : spec.contour)
    if (!std::isfinite(p.x) || !std::isfinite(p.y)) fail("contour has a non-finite vertex");
  if (!is_simple_ring(spec.contour)) fail("contour is self-intersecting");
  if (std::abs(signed_area(spec.contour)) <= kEps) fail("contour has zero area");
  if (!(spec.operating_width > 0.0)) fail("operating width must be positive");
  if (!(spec.turning_radius >= 0.0)) fail("turning radius must be non-negative");
  if (!(spec.effective_headland_offset() >= 0.0)) fail("headland offset must be non-negative");
  if (!std::isfinite(spec.theta)) fail("theta must be finite");
  if (!std::isfinite(spec.entrance.x) || !std::isfinite(spec.entrance.y))
    fail("entrance must be finite");
}

Skeleton generate_skeleton(const FieldSpec& spec) {
  validate(spec);
  Polyline rotated;
  for (const Point& p : spec.contour) rotated.push_back(rotate(p, spec.theta));
  rotated = ccw(clean_ring(rotated));

  const auto headland_parts = erode(rotated, spec.effective_headland_offset());
  if (headland_parts.empty())
    throw Error(ErrorCode::kDegenerateField, "headland offset leaves no interior");
  if (headland_parts.size() > 1)
    throw Error(ErrorCode::kDegenerateField, "headland path splits into several loops");
  const Polyline& headland = headland_parts.front();

  const double w0 = spec.operating_width;
  const auto interior = erode(headland, 0.5 * w0);
  if (interior.empty()) throw Error(ErrorCode::kDegenerateField, "no room for a lane inside the headland");
  double min_x = std::numeric_limits<double>::infinity();
  double max_x = -min_x;
  for (const Polyline& part : interior) {
    const Box b = bounds(part);
    min_x = std::min(min_x, b.min_x);
    max_x = std::max(max_x, b.max_x);
  }

  Skeleton sk;
  for (const Point& p : headland) sk.headland.push_back(rotate(p, -spec.theta));
  for (int k = 0;; ++k) {
    const double xv = min_x + 0.5 * w0 + k * w0;
    if (xv > max_x - 0.5 * w0 + 1e-6) break;
    const auto ys = vertical_crossings(headland, xv);
    if (ys.size() != 2)
      throw Error(ErrorCode::kInterruptedLane,
                  fmt::format("lane {} crosses the headland path {} times", k + 1, ys.size()));
    sk.lanes.push_back({rotate({xv, ys[0]}, -spec.theta), rotate({xv, ys[1]}, -spec.theta)});
  }
  if (sk.lanes.empty()) throw Error(ErrorCode::kDegenerateField, "field is narrower than one lane");
  return sk;
}

Point TransformChain::forward(Point p) const {
  Point q = rotate(p, theta) - translation;
  if (reflect_x) q.x = extent_x - q.x;
  if (reflect_y) q.y = extent_y - q.y;
  return q;
}

Point TransformChain::inverse(Point p) const {
  Point q = p;
  if (reflect_y) q.y = extent_y - q.y;
  if (reflect_x) q.x = extent_x - q.x;
  return rotate(q + translation, -theta);
}

std::string_view to_string(EntranceClass c) { return c == EntranceClass::kZ01 ? "Z0_1" : "Z0_2"; }

TransformChain make_chain(double theta, std::span<const Point> headland, bool reflect_x,
                          bool reflect_y) {
  Polyline rotated;
  for (const Point& p : headland) rotated.push_back(rotate(p, theta));
  const Box b = bounds(rotated);
  TransformChain chain;
  chain.theta = theta;
  chain.translation = {b.min_x, b.min_y};
  chain.extent_x = b.max_x - b.min_x;
  chain.extent_y = b.max_y - b.min_y;
  chain.reflect_x = reflect_x;
  chain.reflect_y = reflect_y;
  return chain;
}

Polyline denormalize(const TransformChain& chain, std::span<const Point> path) {
  Polyline out;
  out.reserve(path.size());
  for (const Point& p : path) out.push_back(chain.inverse(p));
  return out;
}

namespace {

std::optional<NormalizedField> try_normalize(const FieldSpec& spec, const Skeleton& sk,
                                             const TransformChain& chain) {
  NormalizedField nf;
  nf.operating_width = spec.operating_width;
  nf.turning_radius = spec.turning_radius;

  Polyline ring;
  for (const Point& p : sk.headland) ring.push_back(chain.forward(p));
  ring = ccw(ring);

  for (const LaneSegment& l : sk.lanes) {
    Point a = chain.forward(l.a), b = chain.forward(l.b);
    if (a.y > b.y) std::swap(a, b);
    nf.lanes.push_back({0.5 * (a.x + b.x), a, b, 0.0, 0.0});
  }
  std::sort(nf.lanes.begin(), nf.lanes.end(),
            [](const NormalizedLane& l, const NormalizedLane& r) { return l.xi < r.xi; });
  const int n = nf.lane_count();
  nf.xi_m = 0.5 * (nf.lanes.front().xi + nf.lanes.back().xi);
  nf.headland = anchor_at_top(ring, nf.xi_m);
  nf.perimeter = ring_perimeter(nf.headland);

  auto s_of = [&](Point p) { return project_onto_ring(nf.headland, p); };
  for (NormalizedLane& l : nf.lanes) {
    l.s_lower = s_of(l.lower).s;
    l.s_upper = s_of(l.upper).s;
  }
  // s = P is the same point as s = 0; upper ends at Z_M belong to s = 0.
  for (NormalizedLane& l : nf.lanes)
    if (nf.perimeter - l.s_upper < kEps) l.s_upper = 0.0;

  const RingProjection entrance = s_of(chain.forward(spec.entrance));
  double s0 = entrance.s;
  if (nf.perimeter - s0 < kEps) s0 = 0.0;
  const double s_top1 = nf.lanes.front().s_upper;
  const double s_bot1 = nf.lanes.front().s_lower;
  if (s0 <= s_top1 + kEps) {
    nf.entrance_class = EntranceClass::kZ01;
  } else if (s0 <= s_bot1 + kEps) {
    nf.entrance_class = EntranceClass::kZ02;
  } else {
    return std::nullopt;
  }

  nf.nodes.assign(2 * n + 4, Point{});
  nf.node_s.assign(2 * n + 4, 0.0);
  nf.nodes[0] = entrance.point;
  nf.node_s[0] = s0;
  for (int i = 1; i <= n; ++i) {
    const NormalizedLane& l = nf.lanes[i - 1];
    nf.nodes[i] = l.lower;
    nf.node_s[i] = l.s_lower;
    nf.nodes[n + i] = l.upper;
    nf.node_s[n + i] = l.s_upper;
  }
  const double s_left = 0.5 * (s_top1 + s_bot1);
  double s_right_top = nf.lanes.back().s_upper;
  const double s_right_bot = nf.lanes.back().s_lower;
  if (s_right_top <= s_right_bot) s_right_top += nf.perimeter;
  double s_right = 0.5 * (s_right_bot + s_right_top);
  if (s_right >= nf.perimeter) s_right -= nf.perimeter;
  nf.nodes[2 * n + 1] = point_on_ring(nf.headland, s_left);
  nf.node_s[2 * n + 1] = s_left;
  nf.nodes[2 * n + 2] = point_on_ring(nf.headland, s_right);
  nf.node_s[2 * n + 2] = s_right;

  nf.nodes[2 * n + 3] = nf.nodes[0];
  nf.node_s[2 * n + 3] = s0;
  if (spec.exit && distance(*spec.exit, spec.entrance) > kEps) {
    const RingProjection ex = s_of(chain.forward(*spec.exit));
    nf.exit_is_entrance = false;
    nf.nodes[2 * n + 3] = ex.point;
    nf.node_s[2 * n + 3] = nf.perimeter - ex.s < kEps ? 0.0 : ex.s;
  }
  return nf;
}

double snap_distance(const Polyline& headland, Point p) { return project_onto_ring(headland, p).distance; }

}  // namespace

Normalization normalize(const FieldSpec& spec, const Skeleton& skeleton) {
  if (skeleton.lanes.empty()) throw Error(ErrorCode::kDegenerateField, "skeleton has no lanes");
  const double d_in = snap_distance(skeleton.headland, spec.entrance);
  if (d_in > kEntranceSnapTolerance)
    throw Error(ErrorCode::kEntranceOffHeadland,
                fmt::format("entrance is {:.3f} m from the headland path", d_in));
  if (spec.exit) {
    const double d_out = snap_distance(skeleton.headland, *spec.exit);
    if (d_out > kEntranceSnapTolerance)
      throw Error(ErrorCode::kEntranceOffHeadland,
                  fmt::format("exit is {:.3f} m from the headland path", d_out));
  }
  constexpr std::array<std::array<bool, 2>, 4> kReflections{{{false, false}, {true, false},
                                                             {false, true}, {true, true}}};
  for (const auto& [rx, ry] : kReflections) {
    const TransformChain chain = make_chain(spec.theta, skeleton.headland, rx, ry);
    if (auto nf = try_normalize(spec, skeleton, chain)) return {std::move(*nf), chain};
  }
  throw Error(ErrorCode::kUnsupportedCase, "no reflection places the entrance in a supported region");
}

}  // namespace fieldcov
