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

#ifndef REACHPLAN__REPAIR_HPP_
#define REACHPLAN__REPAIR_HPP_

#include <functional>
#include <optional>
#include <string_view>
#include <vector>

#include "reachplan/dynamics.hpp"
#include "reachplan/planner.hpp"
#include "reachplan/verifier.hpp"

namespace reachplan
{

struct RepairConfig
{
  std::vector<double> speed_backoff_factors{0.8, 0.6, 0.4};  // descending, in (0, 1)
  std::vector<double> lateral_push_steps{0.1, 0.2, 0.3};     // ascending k1 offsets
  std::vector<double> tighten_buffers{0.05, 0.10, 0.20};     // ascending, m
  double time_budget = 0.020;                                // s

  void validate() const;
};

enum class RepairAction
{
  kSpeedBackoff,
  kLateralPush,
  kTighten,
};

std::string_view to_string(RepairAction action);

struct RepairAttempt
{
  RepairAction action = RepairAction::kSpeedBackoff;
  double parameter = 0.0;        // factor, push step or buffer
  std::optional<TrajParam> k;    // empty when a re-solve was infeasible
  bool safe = false;
};

struct RepairOutcome
{
  bool repaired = false;
  TrajParam k_safe;
  Certificate certificate;  // safe when repaired
  std::vector<RepairAttempt> attempts;
  double elapsed = 0.0;  // s
  bool out_of_time = false;
};

/// Scales the cruise speed by `factor` through the affine k2 map; k1 is kept.
TrajParam speed_backoff(const TrajParam & k, double factor);

/// Lateral component of `w` in the body frame of `pose` (w rotated by -h).
double lateral_disturbance(Vec2 w, const PlanState & pose);

/// Shifts k1 by `step` against the body-frame lateral disturbance. Purely
/// longitudinal disturbances leave k unchanged.
TrajParam lateral_push(const TrajParam & k, Vec2 w_estimate, const PlanState & pose, double step);

struct RepairContext
{
  RepairConfig cfg;
  PlanState pose;
  Vec2 w_estimate;
  /// Certifies one candidate (disturbance measurement, tube, collision check).
  std::function<Certificate(const TrajParam &)> verify;
  /// Re-solves the planning problem with an added obstacle buffer.
  std::function<PlanOutcome(double)> resolve;
};

/// Runs speed backoff, then lateral push on every backoff level tried
/// (including none), then constraint tightening, until a trial certifies
/// safe, the ladder is exhausted, or the time budget runs out.
RepairOutcome repair(const TrajParam & k_rejected, const Certificate & cert, const RepairContext & ctx);

}  // namespace reachplan

#endif  // REACHPLAN__REPAIR_HPP_
