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

#ifndef REACHPLAN__DYNAMICS_HPP_
#define REACHPLAN__DYNAMICS_HPP_

#include <array>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "reachplan/geometry.hpp"

namespace reachplan
{

/// Unicycle state: position (m), heading (rad, unwrapped), speed (m/s).
struct UnicycleState
{
  double x = 0.0;
  double y = 0.0;
  double h = 0.0;
  double v = 0.0;

  std::array<double, 4> to_array() const { return {x, y, h, v}; }
  static UnicycleState from_array(const std::array<double, 4> & a) { return {a[0], a[1], a[2], a[3]}; }
  Vec2 position() const { return {x, y}; }

  friend bool operator==(const UnicycleState &, const UnicycleState &) = default;
};

/// Dubins planning-model state, a projection of UnicycleState.
struct PlanState
{
  double x = 0.0;
  double y = 0.0;
  double h = 0.0;

  Vec2 position() const { return {x, y}; }
  Pose2 pose() const { return {{x, y}, h}; }

  friend bool operator==(const PlanState &, const PlanState &) = default;
};

inline PlanState plan_state_of(const UnicycleState & s) { return {s.x, s.y, s.h}; }

/// Trajectory parameter: k1 selects yaw rate, k2 selects speed. Both in [-1, 1].
struct TrajParam
{
  double k1 = 0.0;
  double k2 = 0.0;

  bool valid() const { return k1 >= -1.0 && k1 <= 1.0 && k2 >= -1.0 && k2 <= 1.0; }
  TrajParam clamped() const;

  friend bool operator==(const TrajParam &, const TrajParam &) = default;
};

struct VehicleLimits
{
  double v_max = 2.0;   // m/s
  double w_max = 1.0;   // rad/s
  double a_max = 2.0;   // m/s^2
  double k_a = 4.0;     // 1/s, speed tracking gain
  double t_plan = 1.5;  // s, cruise phase
  double t_stop = 1.0;  // s, fail-safe phase

  double horizon() const { return t_plan + t_stop; }
  /// Throws std::invalid_argument unless every field is positive and finite.
  void validate() const;

  friend bool operator==(const VehicleLimits &, const VehicleLimits &) = default;
};

/// Commanded (v_des, w_des) over [0, T]: constant during cruise, then both
/// ramp linearly to zero over the fail-safe phase. Zero after T.
class CommandProfile
{
public:
  CommandProfile() = default;
  CommandProfile(TrajParam k, const VehicleLimits & limits, double v_cruise, double w_cruise);

  const TrajParam & param() const { return k_; }
  const VehicleLimits & limits() const { return limits_; }
  double v_cruise() const { return v_cruise_; }
  double w_cruise() const { return w_cruise_; }
  double t_plan() const { return limits_.t_plan; }
  double horizon() const { return limits_.horizon(); }

  double v_des(double t) const { return v_cruise_ * scale(t); }
  double w_des(double t) const { return w_cruise_ * scale(t); }
  /// d(v_des)/dt, the feedforward term of the speed tracking law.
  double v_des_rate(double t) const;

private:
  double scale(double t) const;

  TrajParam k_;
  VehicleLimits limits_;
  double v_cruise_ = 0.0;
  double w_cruise_ = 0.0;
};

/// Affine map of k onto cruise commands: w = k1 * w_max, v = (k2 + 1) / 2 * v_max.
CommandProfile param_to_commands(const TrajParam & k, const VehicleLimits & limits);

/// Dubins flow of the planning model from `z0` under `profile` to time t in
/// [0, T]. Closed form over the cruise phase, Gauss-Legendre quadrature of
/// the closed-form heading over the fail-safe phase. Throws std::out_of_range
/// for t outside [0, T].
PlanState plan_flow(const PlanState & z0, const CommandProfile & profile, double t);

/// plan_flow evaluated at nondecreasing `times`, sharing work between samples.
std::vector<PlanState> plan_rollout(
  const PlanState & z0, const CommandProfile & profile, std::span<const double> times);

/// Speed tracking law: clamp(feedforward + k_a * (v_des - v), -a_max, a_max).
inline double tracking_accel(double feedforward, double v_des, double v, double k_a, double a_max)
{
  const double a = feedforward + k_a * (v_des - v);
  return a < -a_max ? -a_max : (a > a_max ? a_max : a);
}

/// Closed-loop unicycle vector field with additive position disturbance w.
UnicycleState closed_loop_field(
  const UnicycleState & x, double t, const CommandProfile & profile, Vec2 w);

/// Rectangular region of the workspace with a bounded velocity disturbance.
struct DisturbancePatch
{
  ConvexPolygon region;
  Box2 w_bounds;
};

enum class DisturbanceRealization
{
  kRandom,     // uniform inside the patch bounds, resampled every step
  kWorstCase,  // the bound corner of largest magnitude per axis
  kZero,
};

/// Draws the realized disturbance at a position. The first patch whose region
/// contains the position is active; zero outside all patches.
class DisturbanceSampler
{
public:
  DisturbanceSampler(DisturbanceRealization mode, std::uint64_t seed) : mode_(mode), rng_(seed) {}

  Vec2 sample(Vec2 position, std::span<const DisturbancePatch> patches);
  DisturbanceRealization mode() const { return mode_; }

private:
  double uniform(double lo, double hi);

  DisturbanceRealization mode_;
  std::mt19937_64 rng_;
};

/// One RK4 step of the closed-loop field with `w` held over the step.
UnicycleState hifi_step(
  const UnicycleState & x, double t, double dt, const CommandProfile & profile, Vec2 w);

/// Realizes the disturbance at the current position, then steps.
UnicycleState hifi_step(
  const UnicycleState & x, double t, double dt, const CommandProfile & profile,
  std::span<const DisturbancePatch> patches, DisturbanceSampler & sampler, Vec2 * realized = nullptr);

}  // namespace reachplan

#endif  // REACHPLAN__DYNAMICS_HPP_
