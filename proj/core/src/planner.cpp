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

#include "reachplan/planner.hpp"

#include <algorithm>
#include <chrono>
#include <numeric>
#include <stdexcept>
#include <utility>

namespace reachplan
{
namespace
{

constexpr int kRefineEvaluations = 25;

struct Scored
{
  double cost;
  std::size_t cell;
  TrajParam k;
};

// Parameter region of `cell` restricted to the admissible set; nullopt if empty.
std::optional<IntervalVector<2>> admissible_region(
  const FrsTable & frs, std::size_t cell, const IntervalVector<2> & k_adm)
{
  const IntervalVector<2> b = frs.cell_bounds(cell);
  IntervalVector<2> out;
  for (std::size_t i = 0; i < 2; ++i) {
    out[i] = {std::max(b[i].lo, k_adm[i].lo), std::min(b[i].hi, k_adm[i].hi)};
    if (out[i].lo > out[i].hi) return std::nullopt;
  }
  return out;
}

TrajParam clamp_into(const TrajParam & k, const IntervalVector<2> & region)
{
  return {std::clamp(k.k1, region[0].lo, region[0].hi), std::clamp(k.k2, region[1].lo, region[1].hi)};
}

}  // namespace

void PlanningProblem::validate() const
{
  if (frs == nullptr) throw std::invalid_argument("planning problem has no FRS table");
  if (!(buffer >= 0.0)) throw std::invalid_argument("planning buffer must be >= 0");
  const auto full = IntervalVector<2>::from_bounds({-1.0, -1.0}, {1.0, 1.0});
  if (!k_adm.valid() || !full.contains(k_adm)) {
    throw std::invalid_argument("admissible parameter set must be a valid subset of [-1, 1]^2");
  }
}

double objective(const TrajParam & k, const PlanningProblem & problem)
{
  const CommandProfile profile = param_to_commands(k, problem.frs->limits());
  const PlanState end = plan_flow(problem.pose, profile, profile.t_plan());
  const double dx = end.x - problem.goal.x;
  const double dy = end.y - problem.goal.y;
  return dx * dx + dy * dy;
}

PreparedConstraints prepare_constraints(const PlanningProblem & problem)
{
  return {obstacles_in_body_frame(problem.obstacles, problem.pose)};
}

PlanOutcome solve(const PlanningProblem & problem, const PreparedConstraints & prepared)
{
  const auto start = std::chrono::steady_clock::now();
  problem.validate();
  const FrsTable & frs = *problem.frs;
  PlanOutcome out;

  std::vector<Scored> scored;
  scored.reserve(frs.cell_count());
  for (std::size_t cell = 0; cell < frs.cell_count(); ++cell) {
    const auto region = admissible_region(frs, cell, problem.k_adm);
    if (!region) continue;
    const TrajParam k = clamp_into(frs.cell_center(cell), *region);
    scored.push_back({objective(k, problem), cell, k});
    ++out.evaluations;
  }
  // Ascending cost, lowest cell index on ties; the first safe entry is the
  // argmin over the masked grid.
  std::sort(scored.begin(), scored.end(), [](const Scored & a, const Scored & b) {
    return a.cost < b.cost || (a.cost == b.cost && a.cell < b.cell);
  });
  const auto winner = std::find_if(scored.begin(), scored.end(), [&](const Scored & s) {
    return cell_is_safe(frs, s.cell, prepared.body_obstacles, problem.buffer);
  });

  if (winner != scored.end()) {
    const IntervalVector<2> region = *admissible_region(frs, winner->cell, problem.k_adm);
    TrajParam best = winner->k;
    double best_cost = winner->cost;
    double step = 0.25 * frs.grid_spacing();
    int budget = kRefineEvaluations;
    while (budget > 0 && step > 1e-6) {
      bool improved = false;
      for (int axis = 0; axis < 2 && budget > 0; ++axis) {
        for (double dir : {1.0, -1.0}) {
          if (budget == 0) break;
          TrajParam trial = best;
          (axis == 0 ? trial.k1 : trial.k2) += dir * step;
          trial = clamp_into(trial, region);
          if (trial == best) continue;
          // Constraint values are a function of the cell; staying in the
          // winning cell keeps the trial feasible.
          if (frs.cell_of(trial) != winner->cell) continue;
          const double c = objective(trial, problem);
          --budget;
          ++out.evaluations;
          if (c < best_cost) {
            best_cost = c;
            best = trial;
            improved = true;
            break;
          }
        }
      }
      if (!improved) step *= 0.5;
    }
    out.k_star = best;
    out.cost = best_cost;
    out.cell = winner->cell;
  }

  out.solve_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return out;
}

PlanOutcome solve(const PlanningProblem & problem)
{
  return solve(problem, prepare_constraints(problem));
}

}  // namespace reachplan
