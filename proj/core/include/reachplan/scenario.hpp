// Copyright 2026 The reachplan Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef REACHPLAN__SCENARIO_HPP_
#define REACHPLAN__SCENARIO_HPP_

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "reachplan/dynamics.hpp"
#include "reachplan/geometry.hpp"
#include "reachplan/repair.hpp"
#include "reachplan/verifier.hpp"

namespace reachplan
{

enum class PlannerMode
{
  kStandard,  // inflated FRS, no execution-time verification
  kRax,       // non-inflated FRS, verification and repair
};

std::string_view to_string(PlannerMode mode);
std::string_view to_string(DisturbanceRealization realization);

struct FrsSettings
{
  int n_k = 41;
  double dt = 0.025;               // s
  std::filesystem::path cache;     // optional on-disk cache of the plain table
};

struct TrackingSettings
{
  Interval v0_offset{-0.5, 0.5};   // m/s, initial speed mismatch covered by the inflation
  int samples = 64;
  std::uint64_t seed = 1;
  bool per_cell = false;
  /// Standard mode only: restrict v_des to the current speed +- the largest
  /// covered offset so that the inflation remains a valid bound.
  bool rate_limit = false;
};

struct Scenario
{
  int schema_version = 1;
  std::string name = "unnamed";
  UnicycleState start;
  Vec2 goal;
  double goal_radius = 0.3;  // m
  double robot_radius = 0.2; // m
  std::vector<ConvexPolygon> obstacles;
  std::vector<DisturbancePatch> patches;
  VehicleLimits limits;
  FrsSettings frs;
  TrackingSettings tracking;
  UncertaintyConfig verifier;  // epsilon and step pad; w_bounds are measured online
  double verifier_dt = 0.01;   // s
  RepairConfig repair;
  PlannerMode mode = PlannerMode::kRax;
  double replan_period = 1.5;  // s
  int max_cycles = 30;
  std::uint64_t seed = 0;
  double sim_dt = 0.01;        // s
  DisturbanceRealization realization = DisturbanceRealization::kRandom;

  /// Throws ScenarioError describing the first violated invariant.
  void validate() const;
};

class ScenarioError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

/// Parses the YAML scenario format (see docs/scenario_format.md). Unknown keys
/// are rejected. Concave polygons are split into convex pieces.
Scenario parse_scenario(std::string_view yaml_text);
Scenario load_scenario(const std::filesystem::path & path);

/// Splits a simple polygon (either orientation) into convex pieces by ear
/// clipping. Convex input comes back as a single counterclockwise polygon.
std::vector<ConvexPolygon> convex_decompose(std::vector<Vec2> vertices);

/// Rectangle of the given size centered at `center`, rotated by `angle`.
ConvexPolygon rotated_rectangle(Vec2 center, double width, double height, double angle);

}  // namespace reachplan

#endif  // REACHPLAN__SCENARIO_HPP_
