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

#ifndef REACHPLAN__HARNESS_HPP_
#define REACHPLAN__HARNESS_HPP_

#include <cstddef>
#include <cstdint>
#include <limits>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "reachplan/dynamics.hpp"
#include "reachplan/frs.hpp"
#include "reachplan/planner.hpp"
#include "reachplan/repair.hpp"
#include "reachplan/scenario.hpp"
#include "reachplan/verifier.hpp"

namespace reachplan
{

/// Obstacle index used in a Collision when the disturbance bounds could not be
/// closed over the tube, rather than a geometric hit.
inline constexpr std::size_t kUnclosedDisturbance = std::numeric_limits<std::size_t>::max();

/// Offline products shared by every run of a scenario configuration.
struct PlannerResources
{
  FrsTable plain;
  FrsTable inflated;
  TrackingErrorBound tracking;
};

/// Builds (or fetches from a process-wide cache) the tables for `scenario`.
std::shared_ptr<const PlannerResources> prepare_resources(const Scenario & scenario);

/// Per-index disturbance bounds for a candidate: the hull of the bounds of
/// every patch meeting the candidate's non-inflated footprint at that time,
/// widened to contain zero unless the footprint lies inside one patch.
/// Zero interval when no patch is met.
std::vector<Box2> measure_disturbance(
  const CommandProfile & profile, const PlanState & pose, std::span<const DisturbancePatch> patches,
  const FrsTable & frs, std::span<const double> times);

/// Same rule applied to arbitrary world-frame regions, one per index.
std::vector<Box2> disturbance_over_regions(
  std::span<const Box2> regions, std::span<const DisturbancePatch> patches);

/// Measures disturbance bounds, propagates the tube from `x_now` and certifies
/// it. Bounds are widened until they cover every patch the tube itself meets
/// (at most `max_refinements` re-propagations); an unclosed result is unsafe.
Certificate verify_candidate(
  const TrajParam & k, const UnicycleState & x_now, const Scenario & scenario, const FrsTable & plain,
  std::vector<Box2> * w_bounds_out = nullptr, int max_refinements = 4);

struct CycleTimings
{
  double constraint_setup = 0.0;
  double rtd_solve = 0.0;
  double reference_rollout = 0.0;
  double verify = 0.0;
  double repair_loop = 0.0;
  double total = 0.0;
};

enum class CycleAction
{
  kExecute,
  kFailsafe,
};

std::string_view to_string(CycleAction action);

struct CycleRecord
{
  std::size_t index = 0;
  std::size_t sample = 0;  // trajectory sample at cycle start
  double t = 0.0;
  UnicycleState start;
  PlanOutcome plan;
  std::optional<Certificate> certificate;  // rax mode, initial candidate
  std::optional<RepairOutcome> repair;
  CycleAction action = CycleAction::kExecute;
  std::optional<TrajParam> executed;       // empty for fail-safe
  CycleTimings timings;

  /// Tube of the last candidate verified this cycle, if any.
  std::shared_ptr<const ReachTube> final_tube() const;
};

struct TrajectorySample
{
  double t = 0.0;
  UnicycleState state;
  Vec2 w;  // disturbance applied over the following step
};

enum class OutcomeKind
{
  kReachedGoal,
  kCollided,
  kFailsafeStop,
  kMaxCycles,
};

std::string_view to_string(OutcomeKind kind);
/// Process exit code: 0 goal or cycle limit, 2 collision, 3 fail-safe stop.
int exit_code(OutcomeKind kind);

struct RunResult
{
  std::string scenario;
  PlannerMode mode = PlannerMode::kRax;
  std::uint64_t seed = 0;
  DisturbanceRealization realization = DisturbanceRealization::kRandom;
  OutcomeKind outcome = OutcomeKind::kMaxCycles;
  double end_time = 0.0;
  std::optional<Collision> collision;  // time_index is the trajectory sample
  std::vector<TrajectorySample> trajectory;
  std::vector<CycleRecord> cycles;

  double path_length() const;
  std::size_t repairs_invoked() const;
};

struct RunOptions
{
  std::optional<PlannerMode> mode;
  std::optional<std::uint64_t> seed;
  std::optional<DisturbanceRealization> realization;
};

/// Closed-loop receding-horizon run. Each cycle plans from the current state,
/// (rax) verifies and repairs, then executes the cruise phase for one replan
/// period. With no acceptable candidate the previous plan's fail-safe phase
/// is executed and the run ends.
RunResult run(const Scenario & scenario, const RunOptions & options = {});
RunResult run(const Scenario & scenario, const PlannerResources & res, const RunOptions & options = {});

struct BenchRow
{
  std::string name;
  double mean = 0.0;  // s
  double std = 0.0;   // s
};

/// Runs `trials` seeds after one untimed warm-up and reports, per stage, the
/// mean and sample standard deviation over trials of the per-cycle mean time.
std::vector<BenchRow> bench(const Scenario & scenario, int trials, const RunOptions & options = {});

std::string format_bench_table(std::span<const BenchRow> rows);

}  // namespace reachplan

#endif  // REACHPLAN__HARNESS_HPP_
