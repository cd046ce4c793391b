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

// fieldcov: coverage plans and refill missions for headland/lane fields.

#include "fieldcov/cli_io.hpp"
#include "fieldcov/error.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>

#include <iostream>

namespace {

enum ExitCode { kOk = 0, kUsage = 1, kInput = 2, kFailure = 3 };

int exit_code_for(fieldcov::ErrorCode code) {
  using fieldcov::ErrorCode;
  switch (code) {
    case ErrorCode::kParseError:
    case ErrorCode::kInvalidField:
    case ErrorCode::kInterruptedLane:
    case ErrorCode::kDegenerateField:
    case ErrorCode::kEntranceOffHeadland:
      return kInput;
    case ErrorCode::kInvalidParams:
      return kUsage;
    default:
      return kFailure;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Coverage path planning with depot refills (ABp, CIRC, CIRC*)"};
  app.require_subcommand(1);

  std::string field;
  std::string pattern = "all";
  std::vector<std::string> capacities;
  double threshold = 0.0;
  std::string out_dir = ".";
  bool emit_segments = false;
  bool emit_graph = false;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--field", field, "Field file")->required();
    cmd->add_option("--pattern", pattern, "abp, circ, circstar or all")
        ->check(CLI::IsMember({"abp", "circ", "circstar", "all"}));
    cmd->add_option("--out", out_dir, "Output directory");
    cmd->add_flag("--emit-graph", emit_graph, "Write the transition graph listing");
  };
  auto add_mission = [&](CLI::App* cmd) {
    cmd->add_option("--capacity", capacities, "Working metres per tank, or inf (repeatable)");
    cmd->add_option("--threshold", threshold, "Early-return fill threshold in (0, 1)");
    cmd->add_flag("--emit-segments", emit_segments, "Also write plan segment CSVs");
  };
  CLI::App* plan = app.add_subcommand("plan", "Generate coverage plans and segment CSVs");
  add_common(plan);
  plan->add_flag("--emit-segments", emit_segments, "Accepted for symmetry; plan always writes segments");
  CLI::App* simulate = app.add_subcommand("simulate", "Simulate missions with refills");
  add_common(simulate);
  add_mission(simulate);
  CLI::App* compare = app.add_subcommand("compare", "Tabulate rho and total distance per pattern and capacity");
  add_common(compare);
  add_mission(compare);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }

  try {
    fieldcov::RunConfig config;
    config.field = field;
    config.out_dir = out_dir;
    config.emit_segments = emit_segments;
    config.emit_graph = emit_graph;
    if (pattern == "all")
      config.patterns = {fieldcov::Pattern::kAbp, fieldcov::Pattern::kCirc, fieldcov::Pattern::kCircStar};
    else
      config.patterns = {fieldcov::parse_pattern(pattern)};
    for (const std::string& c : capacities) config.capacities.push_back(fieldcov::parse_capacity(c));
    if (threshold != 0.0) config.threshold = threshold;

    if (plan->parsed()) fieldcov::run_plan(config, std::cout);
    if (simulate->parsed()) fieldcov::run_simulate(config, std::cout);
    if (compare->parsed()) fieldcov::run_compare(config, std::cout);
  } catch (const fieldcov::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kFailure;
  }
  return kOk;
}
