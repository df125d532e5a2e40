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

#include "reachplan/repair.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>

namespace reachplan
{
namespace
{

constexpr double kLateralEpsilon = 1e-12;

void check_list(const std::vector<double> & values, const char * name)
{
  if (values.empty()) throw std::invalid_argument(std::string(name) + " must not be empty");
}

}  // namespace

void RepairConfig::validate() const
{
  check_list(speed_backoff_factors, "speed_backoff_factors");
  check_list(lateral_push_steps, "lateral_push_steps");
  check_list(tighten_buffers, "tighten_buffers");
  for (double f : speed_backoff_factors) {
    if (!(f > 0.0 && f < 1.0)) throw std::invalid_argument("backoff factors must lie in (0, 1)");
  }
  for (double s : lateral_push_steps) {
    if (!(s > 0.0)) throw std::invalid_argument("lateral push steps must be positive");
  }
  for (double b : tighten_buffers) {
    if (!(b > 0.0)) throw std::invalid_argument("tighten buffers must be positive");
  }
  if (!(time_budget > 0.0)) throw std::invalid_argument("repair time budget must be positive");
}

std::string_view to_string(RepairAction action)
{
  switch (action) {
    case RepairAction::kSpeedBackoff:
      return "speed_backoff";
    case RepairAction::kLateralPush:
      return "lateral_push";
    case RepairAction::kTighten:
      return "tighten";
  }
  return "unknown";
}

TrajParam speed_backoff(const TrajParam & k, double factor)
{
  if (!(factor > 0.0 && factor < 1.0)) throw std::invalid_argument("backoff factor must lie in (0, 1)");
  // v_des = (k2 + 1) / 2 * v_max, so scaling v_des scales (k2 + 1).
  return {k.k1, std::clamp(factor * (k.k2 + 1.0) - 1.0, -1.0, 1.0)};
}

double lateral_disturbance(Vec2 w, const PlanState & pose)
{
  return -std::sin(pose.h) * w.x + std::cos(pose.h) * w.y;
}

TrajParam lateral_push(const TrajParam & k, Vec2 w_estimate, const PlanState & pose, double step)
{
  if (!(step > 0.0)) throw std::invalid_argument("lateral push step must be positive");
  const double lateral = lateral_disturbance(w_estimate, pose);
  if (std::abs(lateral) < kLateralEpsilon) return k;
  const double sign = lateral > 0.0 ? 1.0 : -1.0;
  return {std::clamp(k.k1 - sign * step, -1.0, 1.0), k.k2};
}

RepairOutcome repair(const TrajParam & k_rejected, const Certificate & cert, const RepairContext & ctx)
{
  if (cert.safe()) throw std::invalid_argument("repair requires a rejected (unsafe) candidate");
  ctx.cfg.validate();
  const auto start = std::chrono::steady_clock::now();
  auto elapsed = [&start] {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  };

  RepairOutcome out;
  std::vector<TrajParam> tried{k_rejected};
  auto seen = [&tried](const TrajParam & k) {
    return std::find(tried.begin(), tried.end(), k) != tried.end();
  };

  // Returns true when the ladder should stop (safe result or out of time).
  auto trial = [&](RepairAction action, double parameter, const TrajParam & k) {
    if (elapsed() >= ctx.cfg.time_budget) {
      out.out_of_time = true;
      return true;
    }
    tried.push_back(k);
    Certificate c = ctx.verify(k);
    out.attempts.push_back({action, parameter, k, c.safe()});
    if (c.safe()) {
      out.repaired = true;
      out.k_safe = k;
      out.certificate = std::move(c);
      return true;
    }
    return false;
  };

  auto finish = [&] {
    out.elapsed = elapsed();
    return out;
  };

  std::vector<TrajParam> levels{k_rejected};
  for (double factor : ctx.cfg.speed_backoff_factors) {
    const TrajParam k = speed_backoff(k_rejected, factor);
    if (seen(k)) continue;
    levels.push_back(k);
    if (trial(RepairAction::kSpeedBackoff, factor, k)) return finish();
  }

  if (std::abs(lateral_disturbance(ctx.w_estimate, ctx.pose)) >= kLateralEpsilon) {
    for (const TrajParam & level : levels) {
      for (double step : ctx.cfg.lateral_push_steps) {
        const TrajParam k = lateral_push(level, ctx.w_estimate, ctx.pose, step);
        if (seen(k)) continue;
        if (trial(RepairAction::kLateralPush, step, k)) return finish();
      }
    }
  }

  for (double buffer : ctx.cfg.tighten_buffers) {
    if (!ctx.resolve) break;
    if (elapsed() >= ctx.cfg.time_budget) {
      out.out_of_time = true;
      return finish();
    }
    const PlanOutcome plan = ctx.resolve(buffer);
    if (!plan.feasible()) {
      out.attempts.push_back({RepairAction::kTighten, buffer, std::nullopt, false});
      continue;
    }
    if (seen(*plan.k_star)) continue;
    if (trial(RepairAction::kTighten, buffer, *plan.k_star)) return finish();
  }
  return finish();
}

}  // namespace reachplan
