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

#include "doctest.h"
#include "fieldcov/cli_io.hpp"
#include "fieldcov/error.hpp"
#include "fieldcov/parametric_oracle.hpp"

#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>

using namespace fieldcov;
namespace fs = std::filesystem;

namespace {

const fs::path kSource = FIELDCOV_SOURCE_DIR;

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("fieldcov_unit_" + name);
  fs::remove_all(dir);
  return dir;
}

bool same_bits(double a, double b) { return std::memcmp(&a, &b, sizeof a) == 0; }

bool same_spec(const FieldSpec& a, const FieldSpec& b) {
  if (a.contour.size() != b.contour.size()) return false;
  for (std::size_t i = 0; i < a.contour.size(); ++i)
    if (!same_bits(a.contour[i].x, b.contour[i].x) || !same_bits(a.contour[i].y, b.contour[i].y)) return false;
  if (a.exit.has_value() != b.exit.has_value()) return false;
  if (a.exit && (!same_bits(a.exit->x, b.exit->x) || !same_bits(a.exit->y, b.exit->y))) return false;
  if (a.headland_offset.has_value() != b.headland_offset.has_value()) return false;
  if (a.headland_offset && !same_bits(*a.headland_offset, *b.headland_offset)) return false;
  return same_bits(a.entrance.x, b.entrance.x) && same_bits(a.entrance.y, b.entrance.y) &&
         same_bits(a.theta, b.theta) && same_bits(a.operating_width, b.operating_width) &&
         same_bits(a.turning_radius, b.turning_radius);
}

std::string parse_message(std::string_view text) {
  try {
    parse_field(text);
  } catch (const Error& e) {
    return e.what();
  }
  return "";
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

RunConfig config_for(const std::string& fixture, const fs::path& out) {
  RunConfig c;
  c.field = kSource / "fixtures" / fixture;
  c.patterns = {Pattern::kAbp, Pattern::kCirc, Pattern::kCircStar};
  c.out_dir = out;
  return c;
}

}  // namespace

TEST_CASE("demo field parses") {
  const FieldSpec s = parse_field_file(kSource / "fixtures/demo_square.field");
  CHECK(s.contour.size() == 4);
  CHECK(s.operating_width == 10.0);
  CHECK(s.turning_radius == 2.0);
  CHECK(s.headland_offset == 5.0);
  CHECK(s.entrance.x == 20.0);
  CHECK_FALSE(s.exit.has_value());
  CHECK(s.theta == 0.0);
}

TEST_CASE("degrees are converted to radians") {
  const FieldSpec s = parse_field(
      "theta_deg = 90\noperating_width_m = 10\nturning_radius_m = 2\nentrance = 5 0\n"
      "contour:\n 0 0\n 100 0\n 100 100\n 0 100\n");
  CHECK(s.theta == doctest::Approx(std::numbers::pi / 2));
}

TEST_CASE("serialization round trip is bit exact") {
  for (const char* name : {"demo_square.field", "rect_n9.field", "synthetic_32ha.field"}) {
    const FieldSpec s = parse_field_file(kSource / "fixtures" / name);
    CHECK(same_spec(parse_field(serialize_field(s)), s));
  }
  FieldSpec odd = parse_field_file(kSource / "fixtures/demo_square.field");
  odd.theta = 0.1234567891234567;
  odd.exit = Point{100.0 / 3.0, 95.0};
  odd.headland_offset.reset();
  odd.contour[1].x = 100.0 + 1e-13;
  CHECK(same_spec(parse_field(serialize_field(odd)), odd));
}

TEST_CASE("parse errors name the problem") {
  const std::string base = "operating_width_m = 10\nturning_radius_m = 2\nentrance = 5 0\ncontour:\n 0 0\n 100 0\n 100 100\n";
  CHECK(parse_message("turning_radius_m = 2\nentrance = 5 0\ncontour:\n 0 0\n 100 0\n 100 100\n")
            .find("operating_width_m") != std::string::npos);
  CHECK(parse_message("operating_width_m = ten\n").find("line 1, col 21") != std::string::npos);
  CHECK(parse_message(base + " 5 5 5\n").find("line 8") != std::string::npos);
  CHECK(parse_message(base + "colour = red\n").find("unknown key 'colour'") != std::string::npos);
  CHECK(parse_message("operating_width_m = 10\noperating_width_m = 12\n").find("duplicate") != std::string::npos);
  CHECK(parse_message("operating_width_m = 10\nturning_radius_m = 2\nentrance = 5 0\n").find("contour") !=
        std::string::npos);

  try {
    parse_field_file(kSource / "tests/data/two_vertices.field");
    FAIL("two-vertex contour accepted");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kInvalidField);
  }
}

TEST_CASE("synthetic fixture lane count follows its geometry") {
  const FieldSpec s = parse_field_file(kSource / "fixtures/synthetic_32ha.field");
  CHECK(std::abs(signed_area(s.contour)) == doctest::Approx(322000.0).epsilon(0.01));
  const Skeleton sk = generate_skeleton(s);
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (const Point& p : sk.headland) {
    const double x = std::cos(s.theta) * p.x - std::sin(s.theta) * p.y;
    lo = std::min(lo, x);
    hi = std::max(hi, x);
  }
  // Lanes keep a full width from both sides of the headland path.
  const int expected = static_cast<int>(std::floor((hi - lo - 2 * s.operating_width) / s.operating_width + 1e-9)) + 1;
  CHECK(static_cast<int>(sk.lanes.size()) == expected);
}

TEST_CASE("capacities and patterns") {
  CHECK(std::isinf(parse_capacity("inf")));
  CHECK(parse_capacity("1750") == 1750.0);
  CHECK_THROWS_AS(parse_capacity("-5"), Error);
  CHECK_THROWS_AS(parse_capacity("0"), Error);
  CHECK_THROWS_AS(parse_capacity("lots"), Error);
  CHECK(format_capacity(std::numeric_limits<double>::infinity()) == "inf");
  CHECK(format_capacity(1750.0) == "1750");
  CHECK(parse_pattern("circstar") == Pattern::kCircStar);
  CHECK_THROWS_AS(parse_pattern("zigzag"), Error);

  RunConfig c;
  CHECK_THROWS_AS(c.validate(), Error);
  c.patterns = {Pattern::kAbp};
  c.capacities = {-1.0};
  CHECK_THROWS_AS(c.validate(), Error);
  c.capacities = {std::numeric_limits<double>::infinity(), 100.0};
  CHECK_NOTHROW(c.validate());
}

TEST_CASE("CSV headers") {
  std::ostringstream seg, mission, compare;
  write_segments_csv(seg, {});
  CHECK(seg.str() == "index,kind,working,x0,y0,x1,y1,cx,cy,radius_m,sweep_rad,length_m\n");
  MissionLog log;
  log.runs.push_back(RunRecord{});
  write_mission_csv(mission, log);
  CHECK(lines_of(mission.str()).front() == "run_index,working_m,nonworking_m,return_m,resume_m,cumulative_m");
  CHECK(lines_of(mission.str()).back().rfind("total,", 0) == 0);
  write_compare_csv(compare, {CompareRow{Pattern::kCirc, 100.0, std::nullopt}});
  CHECK(compare.str() == "pattern,capacity_m,rho,D_total_m,D_excess_m\ncirc,100,stranded,,\n");
}

TEST_CASE("plan run on the square demo") {
  const fs::path out = scratch("square");
  RunConfig c = config_for("demo_square.field", out);
  c.patterns = {Pattern::kCircStar};
  std::ostringstream report;
  run_plan(c, report);
  CHECK(report.str().find("entrance class") != std::string::npos);
  const auto rows = lines_of(slurp(out / "plan_circstar.csv"));
  REQUIRE(rows.size() > 2);
  // Contiguity in the written coordinates.
  double px = 0, py = 0;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    std::vector<std::string> f;
    std::istringstream ss(rows[i]);
    for (std::string cell; std::getline(ss, cell, ',');) f.push_back(cell);
    const double x0 = std::stod(f[3]), y0 = std::stod(f[4]);
    if (i > 1) CHECK(std::hypot(x0 - px, y0 - py) < 1e-5);
    px = std::stod(f[5]);
    py = std::stod(f[6]);
  }
}

TEST_CASE("summary differences match the closed forms on the rectangle") {
  const fs::path out = scratch("rect_plan");
  std::ostringstream report;
  run_plan(config_for("rect_n9.field", out), report);
  const auto rows = lines_of(slurp(out / "plan_summary.csv"));
  REQUIRE(rows.size() == 4);
  auto d1 = [&](int i) { return std::stod(rows[i].substr(rows[i].rfind(',', rows[i].rfind(',') - 1) + 1)); };
  CHECK(d1(1) - d1(2) == doctest::Approx(delta_single_run(Pattern::kCirc, 9, 36)).epsilon(1e-6));
  CHECK(d1(1) - d1(3) == doctest::Approx(delta_single_run(Pattern::kCircStar, 9, 36)).epsilon(1e-6));
  for (const char* p : {"abp", "circ", "circstar"}) CHECK(fs::exists(out / (std::string("plan_") + p + ".csv")));
}

TEST_CASE("unlimited compare gives single runs") {
  const fs::path out = scratch("inf");
  RunConfig c = config_for("rect_n9.field", out);
  c.capacities = {std::numeric_limits<double>::infinity()};
  std::ostringstream report;
  const auto rows = run_compare(c, report);
  REQUIRE(rows.size() == 3);
  for (const auto& r : rows) CHECK(r.log->rho() == 1);
}

TEST_CASE("CIRC* has the smallest total on the rectangle fixture" * doctest::may_fail()) {
  const fs::path out = scratch("rect_cmp");
  RunConfig c = config_for("rect_n9.field", out);
  c.capacities = {std::numeric_limits<double>::infinity(), 5000, 2500, 1750};
  std::ostringstream report;
  const auto rows = run_compare(c, report);
  for (std::size_t k = 0; k < c.capacities.size(); ++k) {
    const double abp = rows[k].log->total_length;
    const double circ = rows[4 + k].log->total_length;
    const double star = rows[8 + k].log->total_length;
    INFO("capacity " << c.capacities[k] << ": abp " << abp << " circ " << circ << " circstar " << star);
    CHECK(star <= std::min(abp, circ));
  }
}

TEST_CASE("outputs are deterministic and match the golden files") {
  const fs::path a = scratch("golden_a"), b = scratch("golden_b");
  for (const fs::path& out : {a, b}) {
    std::ostringstream report;
    RunConfig c = config_for("rect_n9.field", out);
    c.capacities = {std::numeric_limits<double>::infinity(), 5000, 2500, 1750};
    run_compare(c, report);
    run_plan(c, report);
    c.patterns = {Pattern::kCircStar};
    c.capacities = {1750};
    run_simulate(c, report);
    RunConfig square = config_for("demo_square.field", out / "square");
    square.patterns = {Pattern::kCircStar};
    square.emit_graph = true;
    run_plan(square, report);
  }
  const fs::path golden = kSource / "tests/golden";
  for (const char* name : {"compare.csv", "plan_summary.csv", "mission_circstar_1750.csv"}) {
    CHECK(slurp(a / name) == slurp(b / name));
    CHECK(slurp(a / name) == slurp(golden / "rect_n9" / name));
  }
  for (const char* name : {"plan_circstar.csv", "graph.txt", "plan_summary.csv"}) {
    CHECK(slurp(a / "square" / name) == slurp(b / "square" / name));
    CHECK(slurp(a / "square" / name) == slurp(golden / "demo_square" / name));
  }
}
