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
#include "fieldcov/mission_simulator.hpp"
#include "fieldcov/pattern_planners.hpp"

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace fieldcov {

/// Parses the plain-text field format:
///
///   # comment
///   theta_deg = 0
///   operating_width_m = 36
///   turning_radius_m = 7
///   headland_offset_m = 18      (optional)
///   entrance = 54 518
///   exit = 54 518               (optional)
///   contour:
///     0 0
///     396 0
///     ...
///
/// Syntax errors are reported as kParseError with line and column;
/// invariant violations as kInvalidField.
FieldSpec parse_field(std::string_view text);
FieldSpec parse_field_file(const std::filesystem::path& path);

/// Inverse of parse_field; parse_field(serialize_field(s)) reproduces s exactly.
std::string serialize_field(const FieldSpec& spec);

void write_segments_csv(std::ostream& out, const std::vector<PathSegment>& segments);
void write_mission_csv(std::ostream& out, const MissionLog& log);

struct CompareRow {
  Pattern pattern = Pattern::kAbp;
  double capacity_m = 0.0;   // inf allowed
  std::optional<MissionLog> log;   // empty when stranded
};

void write_compare_csv(std::ostream& out, const std::vector<CompareRow>& rows);

/// Parses "inf" or a positive number of working metres.
double parse_capacity(std::string_view text);
std::string format_capacity(double capacity_m);
Pattern parse_pattern(std::string_view text);

struct RunConfig {
  std::filesystem::path field;
  std::vector<Pattern> patterns;        // at least one
  std::vector<double> capacities;       // working m, inf allowed
  std::optional<double> threshold;      // switches to the threshold policy
  std::filesystem::path out_dir = ".";
  bool emit_segments = false;
  bool emit_graph = false;
  double speed = 2.0;                   // m/s, threshold policy only
  double dt = 1.0;                      // s, threshold policy only

  /// Throws kInvalidParams on an empty pattern list or bad capacity.
  void validate() const;
};

/// Writes plan_<pattern>.csv per pattern and plan_summary.csv; prints N,
/// entrance class and D^(1) per pattern to `report`.
void run_plan(const RunConfig& config, std::ostream& report);

/// Writes mission_<pattern>_<capacity>.csv per pattern and capacity.
void run_simulate(const RunConfig& config, std::ostream& report);

/// Writes compare.csv with one row per (pattern, capacity).
std::vector<CompareRow> run_compare(const RunConfig& config, std::ostream& report);

}  // namespace fieldcov
