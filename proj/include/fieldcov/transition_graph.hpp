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

#include <array>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace fieldcov {

enum class EdgeKind { kHeadland, kLane };

/// Headland side of a lane-end junction, by abscissa.
enum class Side { kLeft, kRight };

std::string_view to_string(Side side);

struct GraphEdge {
  int a = 0;                 // headland: a precedes b counter-clockwise; lane: a is the lower end
  int b = 0;
  double weight = 0.0;       // m, includes fillet corrections of interior corners
  EdgeKind kind = EdgeKind::kHeadland;
  int lane = 0;              // 1-based lane index for lane edges
  Polyline shape;            // a -> b in the normalized frame
  Point dir_at_a;            // travel direction a -> b, leaving a
  Point dir_at_b;            // travel direction a -> b, arriving at b
};

/// Turn arc joining a lane end to one headland side.
struct TraceArc {
  int node = 0;
  Side side = Side::kLeft;

  friend bool operator==(const TraceArc&, const TraceArc&) = default;
};

class TransitionGraph {
 public:
  int lane_count() const { return lane_count_; }
  int node_count() const { return static_cast<int>(node_pos_.size()); }
  double turning_radius() const { return turning_radius_; }
  int exit_node() const { return exit_node_; }

  const std::vector<GraphEdge>& edges() const { return edges_; }
  const GraphEdge& edge(int id) const { return edges_.at(id); }
  const std::vector<int>& incident(int node) const { return incident_.at(node); }
  Point node_position(int node) const { return node_pos_.at(node); }
  bool on_network(int node) const { return !incident_.at(node).empty(); }

  int lane_edge(int lane) const { return lane_edge_.at(lane); }
  /// Headland edges in counter-clockwise order, starting at the edge leaving node 0.
  const std::vector<int>& headland_cycle() const { return headland_cycle_; }
  int other(int edge, int node) const;

  bool is_lane_end(int node) const { return node >= 1 && node <= 2 * lane_count_; }
  /// Side of `node` that the headland edge `edge` leaves towards.
  Side side_of(int node, int edge) const;
  /// Headland edge leaving a lane end towards `side`.
  int headland_edge(int node, Side side) const;

  void add_arc(TraceArc arc);
  bool has_arc(int node, Side side) const;
  std::vector<TraceArc> arcs() const;
  void clear_arcs();

  /// Removes an edge from every later query (used by reachability checks).
  void disable_edge(int edge) { enabled_.at(edge) = false; }
  bool enabled(int edge) const { return enabled_.at(edge); }

  /// Extra length (negative for rounded corners) for passing `node` from
  /// `edge_in` to `edge_out`; empty when the transition is inadmissible.
  /// With `ignore_traces` every lane/headland junction is treated as open.
  std::optional<double> transition_cost(int node, int edge_in, int edge_out,
                                        bool ignore_traces = false) const;

  /// Travel direction when traversing `edge` away from / into `node`.
  Point leaving_direction(int edge, int node) const;
  Point arriving_direction(int edge, int node) const;

  /// Location at `offset` metres (in weight units) from end a of `edge`.
  Point point_on_edge(int edge, double offset) const;
  /// Sub-shape of `edge` between two offsets, in travel order.
  Polyline edge_slice(int edge, double from, double to) const;

  friend TransitionGraph build_graph(const NormalizedField& nf);

 private:
  int lane_count_ = 0;
  double turning_radius_ = 0.0;
  int exit_node_ = 0;
  std::vector<Point> node_pos_;
  std::vector<GraphEdge> edges_;
  std::vector<bool> enabled_;
  std::vector<std::vector<int>> incident_;
  std::vector<int> lane_edge_;          // index 1..N
  std::vector<int> headland_cycle_;
  std::vector<std::array<int, 2>> side_edge_;   // per node: headland edge on left / right
  std::vector<std::array<bool, 2>> arcs_;
};

/// Splits the headland at every labeled node and adds one edge per lane.
/// No arcs are established.
TransitionGraph build_graph(const NormalizedField& nf);

/// Returns a copy of `g` whose only admissible lane/headland transitions are
/// `arcs`. Throws kPlanFieldMismatch for nodes that are not lane ends.
TransitionGraph establish_traces(const TransitionGraph& g, std::span<const TraceArc> arcs);

enum class Heading { kAny, kForward, kBackward };

/// A node, or a point on an edge with an optional travel direction
/// (forward = from end a towards end b).
struct NetworkPosition {
  int node = -1;
  int edge = -1;
  double offset = 0.0;
  Heading heading = Heading::kAny;

  static NetworkPosition at_node(int n) { return {n, -1, 0.0, Heading::kAny}; }
  static NetworkPosition on_edge(int e, double off, Heading h = Heading::kAny) {
    return {-1, e, off, h};
  }
  bool is_node() const { return node >= 0; }
};

/// Part of one edge covered by a route.
struct RouteStep {
  int edge = 0;
  bool forward = true;
  double from = 0.0;   // offsets from end a
  double to = 0.0;
  double turn_before = 0.0;  // transition cost paid entering this step

  double length() const { return std::abs(to - from); }
};

struct RoutePath {
  std::vector<RouteStep> steps;
  std::vector<int> nodes;   // nodes passed, in order
  double length = 0.0;      // edge portions plus transition costs
  double turn_length = 0.0;
};

/// Minimum-length admissible route. Ties go to fewer steps, then the
/// lexicographically smaller node sequence. Throws kUnreachable.
RoutePath shortest_path(const TransitionGraph& g, const NetworkPosition& from,
                        const NetworkPosition& to);

/// Plain-text adjacency listing.
std::string dump(const TransitionGraph& g);

}  // namespace fieldcov
