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

#include "fieldcov/cli_io.hpp"

#include "fieldcov/error.hpp"
#include "fieldcov/transition_graph.hpp"

#include <fmt/format.h>
#include <fmt/ostream.h>

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <numbers>
#include <ostream>
#include <sstream>

namespace fieldcov {
namespace {

struct Token {
  std::string_view text;
  int column = 0;   // 1-based
};

[[noreturn]] void parse_fail(int line, int column, const std::string& what) {
  throw Error(ErrorCode::kParseError, fmt::format("line {}, col {}: {}", line, column, what));
}

std::vector<Token> split(std::string_view line, int first_column) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    const std::size_t start = i;
    while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    if (i > start) out.push_back({line.substr(start, i - start), first_column + static_cast<int>(start)});
  }
  return out;
}

double to_number(const Token& t, int line) {
  double v = 0.0;
  const char* end = t.text.data() + t.text.size();
  const auto [ptr, ec] = std::from_chars(t.text.data(), end, v);
  if (ec != std::errc() || ptr != end || !std::isfinite(v))
    parse_fail(line, t.column, fmt::format("expected a number, got '{}'", t.text));
  return v;
}

Point to_point(const std::vector<Token>& tokens, int line, int column) {
  if (tokens.size() != 2) parse_fail(line, column, fmt::format("expected 'x y', got {} values", tokens.size()));
  return {to_number(tokens[0], line), to_number(tokens[1], line)};
}

double to_scalar(const std::vector<Token>& tokens, int line, int column) {
  if (tokens.size() != 1) parse_fail(line, column, fmt::format("expected one value, got {}", tokens.size()));
  return to_number(tokens[0], line);
}

std::string csv_number(double v) {
  if (std::abs(v) < 5e-7) v = 0.0;  // no "-0.000000"
  return fmt::format("{:.6f}", v);
}

}  // namespace

FieldSpec parse_field(std::string_view text) {
  FieldSpec spec;
  std::map<std::string, int, std::less<>> seen;
  bool in_contour = false;
  bool have_contour = false;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    const auto tokens = split(line, 1);
    if (tokens.empty()) continue;

    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      if (tokens.size() == 1 && tokens[0].text == "contour:") {
        if (have_contour) parse_fail(line_no, tokens[0].column, "duplicate contour block");
        in_contour = have_contour = true;
        continue;
      }
      if (!in_contour) parse_fail(line_no, tokens[0].column, fmt::format("unexpected '{}'", tokens[0].text));
      spec.contour.push_back(to_point(tokens, line_no, tokens[0].column));
      continue;
    }
    in_contour = false;
    const auto key_tokens = split(line.substr(0, eq), 1);
    if (key_tokens.size() != 1) parse_fail(line_no, 1, "expected 'key = value'");
    const std::string key(key_tokens[0].text);
    const int value_col = static_cast<int>(eq) + 2;
    const auto values = split(line.substr(eq + 1), value_col);
    if (values.empty()) parse_fail(line_no, value_col, fmt::format("missing value for '{}'", key));
    if (seen.count(key) != 0) parse_fail(line_no, key_tokens[0].column, fmt::format("duplicate key '{}'", key));
    seen[key] = line_no;

    if (key == "theta_deg") {
      spec.theta = to_scalar(values, line_no, value_col) * std::numbers::pi / 180.0;
    } else if (key == "theta_rad") {
      spec.theta = to_scalar(values, line_no, value_col);
    } else if (key == "operating_width_m") {
      spec.operating_width = to_scalar(values, line_no, value_col);
    } else if (key == "turning_radius_m") {
      spec.turning_radius = to_scalar(values, line_no, value_col);
    } else if (key == "headland_offset_m") {
      spec.headland_offset = to_scalar(values, line_no, value_col);
    } else if (key == "entrance") {
      spec.entrance = to_point(values, line_no, value_col);
    } else if (key == "exit") {
      spec.exit = to_point(values, line_no, value_col);
    } else {
      parse_fail(line_no, key_tokens[0].column, fmt::format("unknown key '{}'", key));
    }
  }
  if (seen.count("theta_deg") && seen.count("theta_rad"))
    parse_fail(seen["theta_rad"], 1, "theta_deg and theta_rad are exclusive");
  for (const char* required : {"operating_width_m", "turning_radius_m", "entrance"})
    if (seen.count(required) == 0) throw Error(ErrorCode::kParseError, fmt::format("missing key '{}'", required));
  if (!have_contour) throw Error(ErrorCode::kParseError, "missing 'contour:' block");
  validate(spec);
  return spec;
}

FieldSpec parse_field_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kParseError, fmt::format("cannot read '{}'", path.string()));
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_field(buf.str());
  } catch (const Error& e) {
    throw Error(e.code(), fmt::format("{}: {}", path.string(), e.what()));
  }
}

std::string serialize_field(const FieldSpec& spec) {
  std::string out;
  const double deg = spec.theta * 180.0 / std::numbers::pi;
  if (deg * std::numbers::pi / 180.0 == spec.theta)
    out += fmt::format("theta_deg = {}\n", deg);
  else
    out += fmt::format("theta_rad = {}\n", spec.theta);
  out += fmt::format("operating_width_m = {}\n", spec.operating_width);
  out += fmt::format("turning_radius_m = {}\n", spec.turning_radius);
  if (spec.headland_offset) out += fmt::format("headland_offset_m = {}\n", *spec.headland_offset);
  out += fmt::format("entrance = {} {}\n", spec.entrance.x, spec.entrance.y);
  if (spec.exit) out += fmt::format("exit = {} {}\n", spec.exit->x, spec.exit->y);
  out += "contour:\n";
  for (const Point& p : spec.contour) out += fmt::format("  {} {}\n", p.x, p.y);
  return out;
}

void write_segments_csv(std::ostream& out, const std::vector<PathSegment>& segments) {
  out << "index,kind,working,x0,y0,x1,y1,cx,cy,radius_m,sweep_rad,length_m\n";
  for (std::size_t i = 0; i < segments.size(); ++i) {
    const PathSegment& s = segments[i];
    const bool arc = s.kind == SegmentKind::kArc;
    fmt::print(out, "{},{},{},{},{},{},{},{},{},{},{},{}\n", i, arc ? "arc" : "line", s.working ? 1 : 0,
               csv_number(s.start.x), csv_number(s.start.y), csv_number(s.end.x), csv_number(s.end.y),
               arc ? csv_number(s.center.x) : "", arc ? csv_number(s.center.y) : "",
               arc ? csv_number(s.radius) : "", arc ? csv_number(s.sweep) : "", csv_number(s.length));
  }
}

void write_mission_csv(std::ostream& out, const MissionLog& log) {
  out << "run_index,working_m,nonworking_m,return_m,resume_m,cumulative_m\n";
  double working = 0.0, nonworking = 0.0, ret = 0.0, res = 0.0;
  for (const RunRecord& r : log.runs) {
    fmt::print(out, "{},{},{},{},{},{}\n", r.run_index, csv_number(r.working_m), csv_number(r.nonworking_m),
               csv_number(r.return_m), csv_number(r.resume_m), csv_number(r.cumulative_m));
    working += r.working_m;
    nonworking += r.nonworking_m;
    ret += r.return_m;
    res += r.resume_m;
  }
  fmt::print(out, "total,{},{},{},{},{}\n", csv_number(working), csv_number(nonworking), csv_number(ret),
             csv_number(res), csv_number(log.total_length));
}

void write_compare_csv(std::ostream& out, const std::vector<CompareRow>& rows) {
  out << "pattern,capacity_m,rho,D_total_m,D_excess_m\n";
  for (const CompareRow& row : rows) {
    if (row.log) {
      fmt::print(out, "{},{},{},{},{}\n", to_string(row.pattern), format_capacity(row.capacity_m), row.log->rho(),
                 csv_number(row.log->total_length), csv_number(row.log->excess()));
    } else {
      fmt::print(out, "{},{},stranded,,\n", to_string(row.pattern), format_capacity(row.capacity_m));
    }
  }
}

double parse_capacity(std::string_view text) {
  if (text == "inf") return std::numeric_limits<double>::infinity();
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size() || !(v > 0.0) || !std::isfinite(v))
    throw Error(ErrorCode::kInvalidParams, fmt::format("capacity must be a positive number or 'inf', got '{}'", text));
  return v;
}

std::string format_capacity(double capacity_m) {
  return std::isfinite(capacity_m) ? fmt::format("{}", capacity_m) : "inf";
}

Pattern parse_pattern(std::string_view text) {
  if (text == "abp") return Pattern::kAbp;
  if (text == "circ") return Pattern::kCirc;
  if (text == "circstar") return Pattern::kCircStar;
  throw Error(ErrorCode::kInvalidParams, fmt::format("unknown pattern '{}'", text));
}

void RunConfig::validate() const {
  if (patterns.empty()) throw Error(ErrorCode::kInvalidParams, "no pattern selected");
  for (double c : capacities)
    if (!(c > 0.0)) throw Error(ErrorCode::kInvalidParams, "capacities must be positive or inf");
  if (threshold && !(*threshold > 0.0 && *threshold < 1.0))
    throw Error(ErrorCode::kInvalidParams, "threshold must lie in (0, 1)");
}

namespace {

struct Prepared {
  FieldSpec spec;
  Normalization norm;
};

Prepared prepare(const RunConfig& config) {
  config.validate();
  Prepared p;
  p.spec = parse_field_file(config.field);
  p.norm = normalize(p.spec, generate_skeleton(p.spec));
  std::filesystem::create_directories(config.out_dir);
  return p;
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kParseError, fmt::format("cannot write '{}'", path.string()));
  return out;
}

void emit_plan_files(const RunConfig& config, const Prepared& p, const CoveragePlan& plan) {
  auto out = open_out(config.out_dir / fmt::format("plan_{}.csv", to_string(plan.pattern)));
  write_segments_csv(out, denormalize(p.norm.chain, realize_geometry(plan, p.spec.operating_width)));
}

void emit_graph(const RunConfig& config, const Prepared& p) {
  auto out = open_out(config.out_dir / "graph.txt");
  out << dump(build_graph(p.norm.field));
}

MissionLog run_one(const RunConfig& config, const CoveragePlan& plan, double capacity) {
  TankState tank;
  tank.capacity_working_m = capacity;
  tank.speed = config.speed;
  tank.dt = config.dt;
  ReturnPolicy policy;
  if (config.threshold) policy = {PolicyKind::kThreshold, *config.threshold};
  return simulate(plan, plan.graph, tank, policy);
}

}  // namespace

void run_plan(const RunConfig& config, std::ostream& report) {
  const Prepared p = prepare(config);
  if (config.emit_graph) emit_graph(config, p);
  auto summary = open_out(config.out_dir / "plan_summary.csv");
  summary << "pattern,lanes,entrance_class,D1_m,working_m\n";
  fmt::print(report, "lanes N = {}, entrance class {}\n", p.norm.field.lane_count(),
             to_string(p.norm.field.entrance_class));
  for (Pattern pattern : config.patterns) {
    const CoveragePlan plan = make_plan(pattern, p.norm.field);
    emit_plan_files(config, p, plan);
    fmt::print(summary, "{},{},{},{},{}\n", to_string(pattern), p.norm.field.lane_count(),
               to_string(p.norm.field.entrance_class), csv_number(plan.length), csv_number(plan.working_length()));
    fmt::print(report, "{:<9} D1 = {:.3f} m  working = {:.3f} m\n", to_string(pattern), plan.length,
               plan.working_length());
  }
}

void run_simulate(const RunConfig& config, std::ostream& report) {
  const Prepared p = prepare(config);
  if (config.emit_graph) emit_graph(config, p);
  const std::vector<double> capacities =
      config.capacities.empty() ? std::vector<double>{std::numeric_limits<double>::infinity()} : config.capacities;
  for (Pattern pattern : config.patterns) {
    const CoveragePlan plan = make_plan(pattern, p.norm.field);
    if (config.emit_segments) emit_plan_files(config, p, plan);
    for (double capacity : capacities) {
      const MissionLog log = run_one(config, plan, capacity);
      auto out = open_out(config.out_dir / fmt::format("mission_{}_{}.csv", to_string(pattern), format_capacity(capacity)));
      write_mission_csv(out, log);
      fmt::print(report, "{:<9} capacity {:>6}  rho = {}  D = {:.3f} m  excess = {:.3f} m\n", to_string(pattern),
                 format_capacity(capacity), log.rho(), log.total_length, log.excess());
    }
  }
}

std::vector<CompareRow> run_compare(const RunConfig& config, std::ostream& report) {
  const Prepared p = prepare(config);
  if (config.emit_graph) emit_graph(config, p);
  const std::vector<double> capacities =
      config.capacities.empty() ? std::vector<double>{std::numeric_limits<double>::infinity()} : config.capacities;
  std::vector<CompareRow> rows;
  for (Pattern pattern : config.patterns) {
    const CoveragePlan plan = make_plan(pattern, p.norm.field);
    if (config.emit_segments) emit_plan_files(config, p, plan);
    for (double capacity : capacities) {
      CompareRow row{pattern, capacity, std::nullopt};
      try {
        row.log = run_one(config, plan, capacity);
      } catch (const Error& e) {
        if (e.code() != ErrorCode::kStranded) throw;
        fmt::print(report, "{} capacity {}: {}\n", to_string(pattern), format_capacity(capacity), e.what());
      }
      rows.push_back(std::move(row));
    }
  }
  auto out = open_out(config.out_dir / "compare.csv");
  write_compare_csv(out, rows);
  write_compare_csv(report, rows);
  return rows;
}

}  // namespace fieldcov
