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

#include "fieldcov/transition_graph.hpp"

#include "fieldcov/error.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <map>
#include <optional>
#include <queue>

namespace fieldcov {
namespace {

constexpr double kTieEps = 1e-9;

// Direction of the ring segment running through arc length s (forward).
Point ring_tangent(std::span<const Point> ring, double s) {
  const std::size_t n = ring.size();
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const Point a = ring[i], b = ring[(i + 1) % n];
    const double len = distance(a, b);
    if (s < acc + len - 1e-12 && len > 0.0) return normalized(b - a);
    acc += len;
  }
  return normalized(ring[0] - ring[n - 1]);
}

double shape_weight(const Polyline& shape, double radius) {
  double w = polyline_length(shape);
  for (std::size_t i = 1; i + 1 < shape.size(); ++i) {
    const Point in = shape[i] - shape[i - 1], out = shape[i + 1] - shape[i];
    if (norm(in) > 0.0 && norm(out) > 0.0) w += fillet_correction(radius, deflection(in, out));
  }
  return w;
}

Point first_direction(const Polyline& shape) {
  for (std::size_t i = 1; i < shape.size(); ++i)
    if (distance(shape[i - 1], shape[i]) > 1e-12) return normalized(shape[i] - shape[i - 1]);
  return {};
}

Point last_direction(const Polyline& shape) {
  for (std::size_t i = shape.size(); i-- > 1;)
    if (distance(shape[i - 1], shape[i]) > 1e-12) return normalized(shape[i] - shape[i - 1]);
  return {};
}

// Arc-length point along a polyline, clamped to its ends.
Point along(const Polyline& shape, double d) {
  if (d <= 0.0) return shape.front();
  for (std::size_t i = 1; i < shape.size(); ++i) {
    const double len = distance(shape[i - 1], shape[i]);
    if (d <= len) return len > 0.0 ? lerp(shape[i - 1], shape[i], d / len) : shape[i];
    d -= len;
  }
  return shape.back();
}

}  // namespace

std::string_view to_string(Side side) { return side == Side::kLeft ? "left" : "right"; }

int TransitionGraph::other(int edge, int node) const {
  const GraphEdge& e = edges_.at(edge);
  return e.a == node ? e.b : e.a;
}

Side TransitionGraph::side_of(int node, int edge) const {
  const auto& s = side_edge_.at(node);
  if (s[0] == edge) return Side::kLeft;
  if (s[1] == edge) return Side::kRight;
  throw Error(ErrorCode::kPlanFieldMismatch,
              fmt::format("edge {} is not a headland edge at node {}", edge, node));
}

int TransitionGraph::headland_edge(int node, Side side) const {
  return side_edge_.at(node)[side == Side::kLeft ? 0 : 1];
}

void TransitionGraph::add_arc(TraceArc arc) {
  if (!is_lane_end(arc.node))
    throw Error(ErrorCode::kPlanFieldMismatch, fmt::format("node {} is not a lane end", arc.node));
  arcs_.at(arc.node)[arc.side == Side::kLeft ? 0 : 1] = true;
}

bool TransitionGraph::has_arc(int node, Side side) const {
  return arcs_.at(node)[side == Side::kLeft ? 0 : 1];
}

std::vector<TraceArc> TransitionGraph::arcs() const {
  std::vector<TraceArc> out;
  for (int v = 0; v < node_count(); ++v)
    for (Side s : {Side::kLeft, Side::kRight})
      if (has_arc(v, s)) out.push_back({v, s});
  return out;
}

void TransitionGraph::clear_arcs() {
  for (auto& a : arcs_) a = {false, false};
}

Point TransitionGraph::leaving_direction(int edge, int node) const {
  const GraphEdge& e = edges_.at(edge);
  return e.a == node ? e.dir_at_a : -1.0 * e.dir_at_b;
}

Point TransitionGraph::arriving_direction(int edge, int node) const {
  const GraphEdge& e = edges_.at(edge);
  return e.b == node ? e.dir_at_b : -1.0 * e.dir_at_a;
}

std::optional<double> TransitionGraph::transition_cost(int node, int edge_in, int edge_out,
                                                       bool ignore_traces) const {
  if (edge_in == edge_out || !enabled_.at(edge_in) || !enabled_.at(edge_out)) return std::nullopt;
  const GraphEdge& in = edges_.at(edge_in);
  const GraphEdge& out = edges_.at(edge_out);
  if (in.kind == EdgeKind::kLane && out.kind == EdgeKind::kLane) return std::nullopt;
  if (in.kind != out.kind && !ignore_traces) {
    const int h = in.kind == EdgeKind::kHeadland ? edge_in : edge_out;
    if (!has_arc(node, side_of(node, h))) return std::nullopt;
  }
  return fillet_correction(turning_radius_,
                           deflection(arriving_direction(edge_in, node), leaving_direction(edge_out, node)));
}

Point TransitionGraph::point_on_edge(int edge, double offset) const {
  const GraphEdge& e = edges_.at(edge);
  const double len = polyline_length(e.shape);
  const double scale = e.weight > 0.0 ? len / e.weight : 0.0;
  return along(e.shape, offset * scale);
}

Polyline TransitionGraph::edge_slice(int edge, double from, double to) const {
  const GraphEdge& e = edges_.at(edge);
  const double len = polyline_length(e.shape);
  const double scale = e.weight > 0.0 ? len / e.weight : 0.0;
  const double lo = std::min(from, to) * scale, hi = std::max(from, to) * scale;
  Polyline out{along(e.shape, lo)};
  double acc = 0.0;
  for (std::size_t i = 1; i + 1 < e.shape.size(); ++i) {
    acc += distance(e.shape[i - 1], e.shape[i]);
    if (acc > lo + 1e-12 && acc < hi - 1e-12) out.push_back(e.shape[i]);
  }
  out.push_back(along(e.shape, hi));
  if (from > to) std::reverse(out.begin(), out.end());
  return out;
}

TransitionGraph build_graph(const NormalizedField& nf) {
  TransitionGraph g;
  const int n = nf.lane_count();
  g.lane_count_ = n;
  g.turning_radius_ = nf.turning_radius;
  g.exit_node_ = nf.exit_node();
  g.node_pos_ = nf.nodes;
  const int node_total = static_cast<int>(nf.nodes.size());
  g.incident_.assign(node_total, {});
  g.side_edge_.assign(node_total, {-1, -1});
  g.arcs_.assign(node_total, {false, false});
  g.lane_edge_.assign(n + 1, -1);

  std::vector<int> order;
  for (int v = 0; v <= 2 * n + 2; ++v) order.push_back(v);
  if (!nf.exit_is_entrance) order.push_back(2 * n + 3);
  auto rank = [&](int v) { return v == 0 ? 0 : (v == 2 * n + 3 ? 1 : 2); };
  std::sort(order.begin(), order.end(), [&](int l, int r) {
    if (nf.node_s[l] != nf.node_s[r]) return nf.node_s[l] < nf.node_s[r];
    if (rank(l) != rank(r)) return rank(l) < rank(r);
    return l < r;
  });

  auto add_edge = [&](GraphEdge e) {
    const int id = static_cast<int>(g.edges_.size());
    g.incident_[e.a].push_back(id);
    g.incident_[e.b].push_back(id);
    g.edges_.push_back(std::move(e));
    g.enabled_.push_back(true);
    return id;
  };

  const std::size_t m = order.size();
  std::vector<int> cycle;
  for (std::size_t k = 0; k < m; ++k) {
    const int u = order[k], v = order[(k + 1) % m];
    GraphEdge e;
    e.a = u;
    e.b = v;
    e.kind = EdgeKind::kHeadland;
    if (nf.node_s[u] == nf.node_s[v] && k + 1 < m) {
      e.shape = {nf.nodes[u], nf.nodes[v]};
    } else {
      e.shape = ring_slice(nf.headland, nf.node_s[u], nf.node_s[v]);
      e.shape.front() = nf.nodes[u];
      e.shape.back() = nf.nodes[v];
    }
    e.weight = shape_weight(e.shape, nf.turning_radius);
    e.dir_at_a = first_direction(e.shape);
    e.dir_at_b = last_direction(e.shape);
    if (norm(e.dir_at_a) == 0.0) e.dir_at_a = e.dir_at_b = ring_tangent(nf.headland, nf.node_s[u]);
    const int id = add_edge(std::move(e));
    cycle.push_back(id);
    // Counter-clockwise travel runs right along the lower headland and left along the upper one.
    auto mark = [&](int node, bool leaving) {
      if (node < 1 || node > 2 * n) return;
      const bool lower = node <= n;
      const bool right = lower == leaving;
      g.side_edge_[node][right ? 1 : 0] = id;
    };
    mark(u, true);
    mark(v, false);
  }
  const auto start = std::find_if(cycle.begin(), cycle.end(), [&](int id) { return g.edges_[id].a == 0; });
  std::rotate(cycle.begin(), start, cycle.end());
  g.headland_cycle_ = cycle;

  for (int i = 1; i <= n; ++i) {
    const NormalizedLane& lane = nf.lanes[i - 1];
    GraphEdge e;
    e.a = i;
    e.b = n + i;
    e.kind = EdgeKind::kLane;
    e.lane = i;
    e.shape = {lane.lower, lane.upper};
    e.weight = lane.length();
    e.dir_at_a = e.dir_at_b = {0.0, 1.0};
    g.lane_edge_[i] = add_edge(std::move(e));
  }
  return g;
}

TransitionGraph establish_traces(const TransitionGraph& g, std::span<const TraceArc> arcs) {
  TransitionGraph out = g;
  out.clear_arcs();
  for (const TraceArc& a : arcs) out.add_arc(a);
  return out;
}

namespace {

struct Label {
  double cost = 0.0;
  double turns = 0.0;
  std::vector<int> nodes;
  std::vector<RouteStep> steps;
};

bool better(const Label& l, const Label& r) {
  if (std::abs(l.cost - r.cost) > kTieEps) return l.cost < r.cost;
  if (l.steps.size() != r.steps.size()) return l.steps.size() < r.steps.size();
  return l.nodes < r.nodes;
}

bool allows(Heading h, bool forward) {
  return h == Heading::kAny || (h == Heading::kForward) == forward;
}

}  // namespace

RoutePath shortest_path(const TransitionGraph& g, const NetworkPosition& from, const NetworkPosition& to) {
  auto check = [&](const NetworkPosition& p, const char* what) {
    if (p.is_node()) {
      if (p.node >= g.node_count() || !g.on_network(p.node))
        throw Error(ErrorCode::kUnreachable, fmt::format("{} node {} is not on the network", what, p.node));
    } else if (p.edge < 0 || p.edge >= static_cast<int>(g.edges().size()) || !g.enabled(p.edge)) {
      throw Error(ErrorCode::kUnreachable, fmt::format("{} edge {} is not on the network", what, p.edge));
    }
  };
  check(from, "start");
  check(to, "target");

  if (from.is_node() && to.is_node() && from.node == to.node) return RoutePath{{}, {from.node}, 0.0, 0.0};

  // State 2*e + k: edge e traversed, arriving at its end a (k = 0) or b (k = 1).
  const std::size_t state_count = 2 * g.edges().size();
  const std::size_t final_state = state_count;
  std::vector<std::optional<Label>> best(state_count + 1);

  using Entry = std::pair<std::size_t, Label>;
  auto cmp = [](const Entry& l, const Entry& r) { return better(r.second, l.second); };
  std::priority_queue<Entry, std::vector<Entry>, decltype(cmp)> queue(cmp);

  // Turn corrections can be negative, so states may be improved after
  // their first expansion; the queue keeps ordering work close to Dijkstra.
  auto relax = [&](std::size_t state, Label label) {
    if (best[state] && !better(label, *best[state])) return;
    best[state] = label;
    queue.emplace(state, std::move(label));
  };
  auto state_of = [&](int edge, int node) {
    return static_cast<std::size_t>(2 * edge + (g.edge(edge).b == node ? 1 : 0));
  };
  // Finishing on the target edge after entering it at `node`.
  auto try_finish_from = [&](const Label& base, int node, int edge, double turn) {
    if (to.is_node() || edge != to.edge) return;
    const GraphEdge& e = g.edge(edge);
    const bool forward = e.a == node;
    if (!allows(to.heading, forward)) return;
    Label l = base;
    const double part = forward ? to.offset : e.weight - to.offset;
    l.cost += turn + part;
    l.turns += turn;
    l.steps.push_back({edge, forward, forward ? 0.0 : e.weight, to.offset, turn});
    relax(final_state, std::move(l));
  };

  Label root;
  if (from.is_node()) {
    root.nodes.push_back(from.node);
    for (int e : g.incident(from.node)) {
      if (!g.enabled(e)) continue;
      const GraphEdge& edge = g.edge(e);
      const bool forward = edge.a == from.node;
      try_finish_from(root, from.node, e, 0.0);
      Label l = root;
      const int next = g.other(e, from.node);
      l.cost += edge.weight;
      l.nodes.push_back(next);
      l.steps.push_back({e, forward, forward ? 0.0 : edge.weight, forward ? edge.weight : 0.0, 0.0});
      relax(state_of(e, next), std::move(l));
    }
  } else {
    const GraphEdge& edge = g.edge(from.edge);
    for (bool forward : {true, false}) {
      if (!allows(from.heading, forward)) continue;
      if (!to.is_node() && to.edge == from.edge && allows(to.heading, forward) &&
          (forward ? to.offset >= from.offset : to.offset <= from.offset)) {
        Label l;
        l.cost = std::abs(to.offset - from.offset);
        l.steps.push_back({from.edge, forward, from.offset, to.offset, 0.0});
        relax(final_state, std::move(l));
      }
      Label l;
      const int next = forward ? edge.b : edge.a;
      l.cost = forward ? edge.weight - from.offset : from.offset;
      l.nodes.push_back(next);
      l.steps.push_back({from.edge, forward, from.offset, forward ? edge.weight : 0.0, 0.0});
      relax(state_of(from.edge, next), std::move(l));
    }
  }

  while (!queue.empty()) {
    auto [state, label] = queue.top();
    queue.pop();
    if (better(*best[state], label) || state == final_state) continue;
    const int edge_in = static_cast<int>(state / 2);
    const int node = state % 2 == 1 ? g.edge(edge_in).b : g.edge(edge_in).a;
    if (to.is_node() && node == to.node) {
      relax(final_state, label);
      continue;
    }
    for (int e : g.incident(node)) {
      const auto cost = g.transition_cost(node, edge_in, e);
      if (!cost) continue;
      const double turn = *cost;
      try_finish_from(label, node, e, turn);
      const GraphEdge& edge = g.edge(e);
      const bool forward = edge.a == node;
      const int next = g.other(e, node);
      Label l = label;
      l.cost += turn + edge.weight;
      l.turns += turn;
      l.nodes.push_back(next);
      l.steps.push_back({e, forward, forward ? 0.0 : edge.weight, forward ? edge.weight : 0.0, turn});
      relax(state_of(e, next), std::move(l));
    }
  }
  if (!best[final_state]) throw Error(ErrorCode::kUnreachable, "no admissible route between the given positions");
  Label& label = *best[final_state];
  RoutePath path;
  path.length = label.cost;
  path.turn_length = label.turns;
  path.nodes = std::move(label.nodes);
  path.steps = std::move(label.steps);
  return path;
}

std::string dump(const TransitionGraph& g) {
  std::string out;
  for (int v = 0; v < g.node_count(); ++v) {
    if (!g.on_network(v)) continue;
    const Point p = g.node_position(v);
    out += fmt::format("node {} {:.6f} {:.6f}", v, p.x, p.y);
    for (Side s : {Side::kLeft, Side::kRight})
      if (g.is_lane_end(v) && g.has_arc(v, s)) out += fmt::format(" arc:{}", to_string(s));
    out += '\n';
    for (int e : g.incident(v)) {
      const GraphEdge& edge = g.edge(e);
      out += fmt::format("  -> {} {} {:.6f}{}\n", g.other(e, v),
                         edge.kind == EdgeKind::kLane ? "lane" : "headland", edge.weight,
                         g.enabled(e) ? "" : " disabled");
    }
  }
  return out;
}

}  // namespace fieldcov
