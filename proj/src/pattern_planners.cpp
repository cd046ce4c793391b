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

#include "fieldcov/pattern_planners.hpp"

#include "fieldcov/error.hpp"

#include <fmt/format.h>

#include <algorithm>

namespace fieldcov {

std::string_view to_string(Pattern p) {
  switch (p) {
    case Pattern::kAbp: return "abp";
    case Pattern::kCirc: return "circ";
    case Pattern::kCircStar: return "circstar";
  }
  return "?";
}

void RectParams::validate() const {
  if (!(lane_length > 0.0)) throw Error(ErrorCode::kInvalidParams, "lane length must be positive");
  if (!(turning_radius >= 0.0)) throw Error(ErrorCode::kInvalidParams, "turning radius must be non-negative");
  if (!(operating_width > 2.0 * turning_radius))
    throw Error(ErrorCode::kInvalidParams, "operating width must exceed twice the turning radius");
}

double CoveragePlan::working_length() const {
  double w = 0.0;
  for (const PlanStep& s : steps)
    if (s.working) w += graph.edge(s.edge).weight;
  return w;
}

std::vector<int> CoveragePlan::edge_counts() const {
  std::vector<int> counts(graph.edges().size(), 0);
  for (const PlanStep& s : steps) ++counts[s.edge];
  return counts;
}

namespace {

// Accumulates a walk of full edge traversals.
class Walk {
 public:
  Walk(const TransitionGraph& g, int start) : g_(g) { nodes_.push_back(start); }

  int at() const { return nodes_.back(); }

  void take(int edge) {
    const GraphEdge& e = g_.edge(edge);
    if (e.a != at() && e.b != at())
      throw Error(ErrorCode::kPlanFieldMismatch, fmt::format("edge {} does not touch node {}", edge, at()));
    steps_.push_back({edge, e.a == at(), false, 0.0});
    nodes_.push_back(g_.other(edge, at()));
  }

  // Moves along the headland, at least one edge, until `target` is reached.
  void headland_to(int target, bool ccw) {
    do {
      take(next_headland(at(), ccw));
    } while (at() != target);
  }

  void lane(int index, bool upward) {
    const int n = g_.lane_count();
    const int entry = upward ? index : n + index;
    if (at() != entry)
      throw Error(ErrorCode::kPlanFieldMismatch, fmt::format("lane {} entered from node {}", index, at()));
    take(g_.lane_edge(index));
    order_.push_back({index, upward});
  }

  // Headland move between two ends on the same side of the field.
  void connect_to_lane(int index, bool upward) {
    const int n = g_.lane_count();
    const int target = upward ? index : n + index;
    const bool at_bottom = at() >= 1 && at() <= n;
    const int current_lane = at_bottom ? at() : at() - n;
    const bool rightwards = index > current_lane;
    headland_to(target, at_bottom == rightwards);
    lane(index, upward);
  }

  int last_edge() const { return steps_.back().edge; }
  const std::vector<PlanStep>& steps() const { return steps_; }
  std::vector<PlanStep>& steps() { return steps_; }
  std::vector<int>& nodes() { return nodes_; }
  const std::vector<LaneVisit>& order() const { return order_; }

 private:
  int next_headland(int node, bool ccw) const {
    for (int e : g_.incident(node)) {
      const GraphEdge& edge = g_.edge(e);
      if (edge.kind == EdgeKind::kHeadland && (ccw ? edge.a : edge.b) == node) return e;
    }
    throw Error(ErrorCode::kPlanFieldMismatch, fmt::format("node {} is not on the headland", node));
  }

  const TransitionGraph& g_;
  std::vector<PlanStep> steps_;
  std::vector<int> nodes_;
  std::vector<LaneVisit> order_;
};

std::vector<TraceArc> derive_arcs(const TransitionGraph& g, const std::vector<PlanStep>& steps,
                                  const std::vector<int>& nodes) {
  std::vector<TraceArc> arcs;
  for (std::size_t k = 1; k < steps.size(); ++k) {
    const GraphEdge& in = g.edge(steps[k - 1].edge);
    const GraphEdge& out = g.edge(steps[k].edge);
    if (in.kind == out.kind) continue;
    const int node = nodes[k];
    const int h = in.kind == EdgeKind::kHeadland ? steps[k - 1].edge : steps[k].edge;
    const TraceArc arc{node, g.side_of(node, h)};
    if (std::find(arcs.begin(), arcs.end(), arc) == arcs.end()) arcs.push_back(arc);
  }
  return arcs;
}

// Appends the shortest admissible continuation from the end of the walk.
void route_to(Walk& walk, const TransitionGraph& traced, int target) {
  if (walk.at() == target) return;
  const PlanStep last = walk.steps().back();
  const GraphEdge& e = traced.edge(last.edge);
  const auto from = NetworkPosition::on_edge(last.edge, last.forward ? e.weight : 0.0,
                                             last.forward ? Heading::kForward : Heading::kBackward);
  const RoutePath path = shortest_path(traced, from, NetworkPosition::at_node(target));
  for (std::size_t k = 1; k < path.steps.size(); ++k) walk.take(path.steps[k].edge);
}

// Establishes arcs, then closes the walk at node 0 and the exit.
CoveragePlan finish(Pattern pattern, const TransitionGraph& base, Walk& walk,
                    std::vector<TraceArc> extra_arcs, bool route_home) {
  std::vector<TraceArc> arcs = derive_arcs(base, walk.steps(), walk.nodes());
  for (const TraceArc& a : extra_arcs)
    if (std::find(arcs.begin(), arcs.end(), a) == arcs.end()) arcs.push_back(a);
  TransitionGraph traced = establish_traces(base, arcs);
  if (route_home) route_to(walk, traced, 0);
  route_to(walk, traced, traced.exit_node());

  CoveragePlan plan;
  plan.pattern = pattern;
  plan.graph = std::move(traced);
  plan.nodes = walk.nodes();
  plan.steps = walk.steps();
  plan.lane_order = walk.order();
  std::vector<bool> seen(plan.graph.edges().size(), false);
  plan.length = 0.0;
  for (std::size_t k = 0; k < plan.steps.size(); ++k) {
    PlanStep& s = plan.steps[k];
    s.working = !seen[s.edge];
    seen[s.edge] = true;
    if (k > 0) {
      const auto turn = plan.graph.transition_cost(plan.nodes[k], plan.steps[k - 1].edge, s.edge);
      if (!turn)
        throw Error(ErrorCode::kPlanFieldMismatch,
                    fmt::format("inadmissible transition at node {}", plan.nodes[k]));
      s.turn_before = *turn;
    }
    plan.length += s.turn_before + plan.graph.edge(s.edge).weight;
  }
  return plan;
}

}  // namespace

CoveragePlan plan_abp(const NormalizedField& nf) {
  const TransitionGraph g = build_graph(nf);
  const int n = nf.lane_count();
  const bool from_top = nf.entrance_class == EntranceClass::kZ01;
  Walk walk(g, 0);
  walk.headland_to(0, true);
  walk.headland_to(from_top ? g.lane_count() + 1 : 1, true);
  walk.lane(1, !from_top);
  for (int i = 2; i <= n; ++i) walk.connect_to_lane(i, from_top == (i % 2 == 0));
  // The last lane exits towards the entrance side.
  const TraceArc exit_arc{walk.at(), Side::kLeft};
  return finish(Pattern::kAbp, g, walk, {exit_arc}, true);
}

CoveragePlan plan_circ(const NormalizedField& nf) {
  const TransitionGraph g = build_graph(nf);
  const int n = nf.lane_count();
  std::vector<LaneVisit> order;
  if (nf.entrance_class == EntranceClass::kZ01) {
    order.push_back({1, false});
    for (int k = 1;; ++k) {
      if (2 * k + 1 <= n) {
        order.push_back({2 * k + 1, true});
        order.push_back({2 * k, false});
      } else {
        if (2 * k == n) order.push_back({n, true});
        break;
      }
    }
  } else {
    for (int k = 1;; ++k) {
      if (2 * k <= n) {
        order.push_back({2 * k, true});
        order.push_back({2 * k - 1, false});
      } else {
        if (2 * k - 1 == n) order.push_back({n, true});
        break;
      }
    }
  }
  Walk walk(g, 0);
  walk.headland_to(0, true);
  const LaneVisit first = order.front();
  walk.headland_to(first.upward ? first.lane : n + first.lane, true);
  walk.lane(first.lane, first.upward);
  for (std::size_t k = 1; k < order.size(); ++k) walk.connect_to_lane(order[k].lane, order[k].upward);
  // Downward lanes turn right at both ends, upward lanes left.
  const TraceArc exit_arc{walk.at(), order.back().upward ? Side::kLeft : Side::kRight};
  return finish(Pattern::kCirc, g, walk, {exit_arc}, true);
}

CoveragePlan plan_circ_star(const NormalizedField& nf) {
  const TransitionGraph g = build_graph(nf);
  const int n = nf.lane_count();
  Walk walk(g, 0);
  for (int k = 1; 2 * k <= n; ++k) {
    walk.headland_to(2 * k, true);
    walk.lane(2 * k, true);
    walk.headland_to(n + 2 * k - 1, true);
    walk.lane(2 * k - 1, false);
  }
  if (n % 2 == 1) {
    walk.headland_to(n, true);
    walk.headland_to(2 * n, true);
    walk.lane(n, false);
  }
  walk.headland_to(0, true);
  return finish(Pattern::kCircStar, g, walk, {}, false);
}

CoveragePlan make_plan(Pattern pattern, const NormalizedField& nf) {
  switch (pattern) {
    case Pattern::kAbp: return plan_abp(nf);
    case Pattern::kCirc: return plan_circ(nf);
    case Pattern::kCircStar: return plan_circ_star(nf);
  }
  throw Error(ErrorCode::kUnsupportedCase, "unknown pattern");
}

TransitionGraph establish_traces(const TransitionGraph& g, const CoveragePlan& plan) {
  if (g.lane_count() != plan.graph.lane_count() || g.edges().size() != plan.graph.edges().size())
    throw Error(ErrorCode::kPlanFieldMismatch, "plan was generated for a different field");
  for (std::size_t e = 0; e < g.edges().size(); ++e) {
    const GraphEdge& l = g.edge(static_cast<int>(e));
    const GraphEdge& r = plan.graph.edge(static_cast<int>(e));
    if (l.a != r.a || l.b != r.b || std::abs(l.weight - r.weight) > 1e-9)
      throw Error(ErrorCode::kPlanFieldMismatch, fmt::format("edge {} differs from the plan's field", e));
  }
  const auto arcs = plan.arcs();
  return establish_traces(g, arcs);
}

std::vector<PathSegment> realize_geometry(const TransitionGraph& g, const std::vector<PlanStep>& steps,
                                          double operating_width) {
  const double radius = g.turning_radius();
  if (radius > 0.0 && g.lane_count() > 1 && operating_width <= 2.0 * radius)
    throw Error(ErrorCode::kTurnInfeasible,
                fmt::format("operating width {} m does not admit turns of radius {} m", operating_width, radius));

  // Flatten to vertices with one working flag per straight piece.
  Polyline pts;
  std::vector<bool> working;
  for (const PlanStep& s : steps) {
    const GraphEdge& e = g.edge(s.edge);
    Polyline shape = e.shape;
    if (!s.forward) std::reverse(shape.begin(), shape.end());
    for (const Point& p : shape) {
      if (pts.empty()) {
        pts.push_back(p);
      } else if (distance(pts.back(), p) > 1e-12) {
        pts.push_back(p);
        working.push_back(s.working);
      }
    }
  }
  std::vector<PathSegment> out;
  if (pts.size() < 2) return out;

  // Straight runs between true corners; collinear vertices only split the
  // working flag.
  struct Run {
    std::size_t first = 0;  // index of the first piece
    std::size_t last = 0;   // one past the last piece
    double length = 0.0;
  };
  std::vector<Run> runs;
  std::vector<double> phi;  // deflection after each run
  const std::size_t pieces = pts.size() - 1;
  Run run;
  for (std::size_t i = 0; i < pieces; ++i) {
    run.length += distance(pts[i], pts[i + 1]);
    const double turn = i + 1 < pieces ? deflection(pts[i + 1] - pts[i], pts[i + 2] - pts[i + 1]) : 0.0;
    if (i + 1 == pieces || turn > 1e-9) {
      run.last = i + 1;
      runs.push_back(run);
      phi.push_back(turn);
      run = Run{i + 1, i + 1, 0.0};
    }
  }
  std::vector<double> trim(runs.size() + 1, 0.0);  // trim[k]: corner before run k
  for (std::size_t k = 0; k + 1 < runs.size(); ++k)
    if (radius > 0.0) trim[k + 1] = radius * std::tan(0.5 * phi[k]);

  for (std::size_t k = 0; k < runs.size(); ++k) {
    const Run& r = runs[k];
    const double lo = trim[k], hi = r.length - trim[k + 1];
    if (hi - lo < -1e-9)
      throw Error(ErrorCode::kTurnInfeasible,
                  fmt::format("straight of {:.3f} m cannot hold turns of radius {} m", r.length, radius));
    const Point dir = normalized(pts[r.last] - pts[r.first]);
    double acc = 0.0;
    for (std::size_t i = r.first; i < r.last; ++i) {
      const double len = distance(pts[i], pts[i + 1]);
      const double a = std::max(acc, lo), b = std::min(acc + len, hi);
      if (b - a > 1e-12)
        out.push_back({SegmentKind::kLine, working[i], pts[r.first] + a * dir, pts[r.first] + b * dir, {}, 0.0,
                       0.0, b - a});
      acc += len;
    }
    if (k + 1 < runs.size() && trim[k + 1] > 0.0) {
      const Point corner = pts[r.last];
      const Point next = normalized(pts[runs[k + 1].last] - corner);
      const bool left = cross(dir, next) > 0.0;
      const Point normal = left ? Point{-dir.y, dir.x} : Point{dir.y, -dir.x};
      PathSegment arc;
      arc.kind = SegmentKind::kArc;
      arc.start = corner - trim[k + 1] * dir;
      arc.end = corner + trim[k + 1] * next;
      arc.center = arc.start + radius * normal;
      arc.radius = radius;
      arc.sweep = left ? phi[k] : -phi[k];
      arc.length = radius * phi[k];
      out.push_back(arc);
    }
  }
  return out;
}

std::vector<PathSegment> realize_geometry(const CoveragePlan& plan, double operating_width) {
  return realize_geometry(plan.graph, plan.steps, operating_width);
}

std::vector<PathSegment> denormalize(const TransformChain& chain, const std::vector<PathSegment>& segments) {
  std::vector<PathSegment> out = segments;
  for (PathSegment& s : out) {
    s.start = chain.inverse(s.start);
    s.end = chain.inverse(s.end);
    if (s.kind == SegmentKind::kArc) {
      s.center = chain.inverse(s.center);
      if (chain.mirrors()) s.sweep = -s.sweep;
    }
  }
  return out;
}

}  // namespace fieldcov
