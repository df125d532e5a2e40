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

#ifndef REACHPLAN__PLANNER_HPP_
#define REACHPLAN__PLANNER_HPP_

#include <cstddef>
#include <optional>
#include <vector>

#include "reachplan/dynamics.hpp"
#include "reachplan/frs.hpp"
#include "reachplan/geometry.hpp"

namespace reachplan
{

struct PlanningProblem
{
  PlanState pose;
  Vec2 goal;
  std::vector<ConvexPolygon> obstacles;  // world frame
  const FrsTable * frs = nullptr;
  IntervalVector<2> k_adm = IntervalVector<2>::from_bounds({-1.0, -1.0}, {1.0, 1.0});
  double buffer = 0.0;  // m

  /// Throws std::invalid_argument when the invariants do not hold.
  void validate() const;
};

/// Obstacles moved into the body frame of the problem pose.
struct PreparedConstraints
{
  std::vector<ConvexPolygon> body_obstacles;
};

struct PlanOutcome
{
  std::optional<TrajParam> k_star;  // empty when infeasible
  double cost = 0.0;
  int evaluations = 0;
  double solve_time = 0.0;  // s
  std::size_t cell = 0;

  bool feasible() const { return k_star.has_value(); }
};

/// Squared distance from the cruise-phase endpoint to the goal.
double objective(const TrajParam & k, const PlanningProblem & problem);

PreparedConstraints prepare_constraints(const PlanningProblem & problem);

/// Grid search over safe cells followed by bounded coordinate descent inside
/// the winning cell. Equal costs resolve to the lowest cell index.
PlanOutcome solve(const PlanningProblem & problem, const PreparedConstraints & prepared);
PlanOutcome solve(const PlanningProblem & problem);

}  // namespace reachplan

#endif  // REACHPLAN__PLANNER_HPP_
