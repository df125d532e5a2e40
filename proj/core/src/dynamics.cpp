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

#include "reachplan/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "reachplan/integrate.hpp"

namespace reachplan
{
namespace
{

constexpr double kTimeSlack = 1e-9;
// Longest quadrature panel over the fail-safe phase.
constexpr double kPanel = 0.01;

constexpr std::array<double, 4> kGaussNodes{
  -0.8611363115940526, -0.3399810435848563, 0.3399810435848563, 0.8611363115940526};
constexpr std::array<double, 4> kGaussWeights{
  0.3478548451374538, 0.6521451548625461, 0.6521451548625461, 0.3478548451374538};

// sin(u) / u, accurate near zero.
double sinc(double u)
{
  if (std::abs(u) < 1e-4) return 1.0 - u * u / 6.0;
  return std::sin(u) / u;
}

PlanState cruise_flow(const PlanState & z0, double v, double w, double t)
{
  const double half_turn = 0.5 * w * t;
  const double chord = v * t * sinc(half_turn);
  const double mid_heading = z0.h + half_turn;
  return {z0.x + chord * std::cos(mid_heading), z0.y + chord * std::sin(mid_heading), z0.h + w * t};
}

// Fail-safe segment starting at z1 (start of the ramp). Integrates position
// from ramp time s_a to s_b given the position at s_a.
struct RampFlow
{
  PlanState start;
  double v0;
  double w0;
  double t_stop;

  double heading(double s) const { return start.h + w0 * (s - s * s / (2.0 * t_stop)); }
  double speed(double s) const { return v0 * (1.0 - s / t_stop); }

  Vec2 advance(Vec2 p, double s_a, double s_b) const
  {
    if (s_b <= s_a || v0 == 0.0) return p;
    const int panels = std::max(1, static_cast<int>(std::ceil((s_b - s_a) / kPanel)));
    const double width = (s_b - s_a) / panels;
    for (int i = 0; i < panels; ++i) {
      const double a = s_a + i * width;
      const double mid = a + 0.5 * width;
      double sx = 0.0;
      double sy = 0.0;
      for (std::size_t q = 0; q < kGaussNodes.size(); ++q) {
        const double s = mid + 0.5 * width * kGaussNodes[q];
        const double vs = speed(s);
        const double hs = heading(s);
        sx += kGaussWeights[q] * vs * std::cos(hs);
        sy += kGaussWeights[q] * vs * std::sin(hs);
      }
      p.x += 0.5 * width * sx;
      p.y += 0.5 * width * sy;
    }
    return p;
  }
};

double check_time(const CommandProfile & profile, double t)
{
  const double horizon = profile.horizon();
  if (!(t >= -kTimeSlack && t <= horizon + kTimeSlack)) {
    throw std::out_of_range(
      "plan_flow time " + std::to_string(t) + " outside [0, " + std::to_string(horizon) + "]");
  }
  return std::clamp(t, 0.0, horizon);
}

}  // namespace

TrajParam TrajParam::clamped() const
{
  return {std::clamp(k1, -1.0, 1.0), std::clamp(k2, -1.0, 1.0)};
}

void VehicleLimits::validate() const
{
  const std::array<std::pair<const char *, double>, 6> fields{{
    {"v_max", v_max}, {"w_max", w_max}, {"a_max", a_max},
    {"k_a", k_a}, {"t_plan", t_plan}, {"t_stop", t_stop},
  }};
  for (const auto & [name, value] : fields) {
    if (!std::isfinite(value) || value <= 0.0) {
      throw std::invalid_argument(std::string("vehicle limit ") + name + " must be positive");
    }
  }
}

CommandProfile::CommandProfile(
  TrajParam k, const VehicleLimits & limits, double v_cruise, double w_cruise)
: k_(k), limits_(limits), v_cruise_(v_cruise), w_cruise_(w_cruise)
{
}

double CommandProfile::scale(double t) const
{
  if (t < limits_.t_plan) return 1.0;
  const double s = t - limits_.t_plan;
  if (s >= limits_.t_stop) return 0.0;
  return 1.0 - s / limits_.t_stop;
}

double CommandProfile::v_des_rate(double t) const
{
  if (t < limits_.t_plan || t >= limits_.horizon()) return 0.0;
  return -v_cruise_ / limits_.t_stop;
}

CommandProfile param_to_commands(const TrajParam & k, const VehicleLimits & limits)
{
  if (!k.valid()) {
    throw std::invalid_argument(
      "trajectory parameter outside [-1, 1]^2: (" + std::to_string(k.k1) + ", " +
      std::to_string(k.k2) + ")");
  }
  const double w = k.k1 * limits.w_max;
  const double v = 0.5 * (k.k2 + 1.0) * limits.v_max;
  return CommandProfile(k, limits, v, w);
}

PlanState plan_flow(const PlanState & z0, const CommandProfile & profile, double t)
{
  t = check_time(profile, t);
  const double t_plan = profile.t_plan();
  if (t <= t_plan) return cruise_flow(z0, profile.v_cruise(), profile.w_cruise(), t);

  const PlanState z1 = cruise_flow(z0, profile.v_cruise(), profile.w_cruise(), t_plan);
  const RampFlow ramp{z1, profile.v_cruise(), profile.w_cruise(), profile.limits().t_stop};
  const double s = t - t_plan;
  const Vec2 p = ramp.advance(z1.position(), 0.0, s);
  return {p.x, p.y, ramp.heading(s)};
}

std::vector<PlanState> plan_rollout(
  const PlanState & z0, const CommandProfile & profile, std::span<const double> times)
{
  std::vector<PlanState> out;
  out.reserve(times.size());
  const double t_plan = profile.t_plan();
  const PlanState z1 = cruise_flow(z0, profile.v_cruise(), profile.w_cruise(), t_plan);
  const RampFlow ramp{z1, profile.v_cruise(), profile.w_cruise(), profile.limits().t_stop};

  double last_s = 0.0;
  Vec2 last_p = z1.position();
  double prev_t = 0.0;
  for (double t : times) {
    t = check_time(profile, t);
    if (t < prev_t) throw std::invalid_argument("plan_rollout times must be nondecreasing");
    prev_t = t;
    if (t <= t_plan) {
      out.push_back(cruise_flow(z0, profile.v_cruise(), profile.w_cruise(), t));
      continue;
    }
    const double s = t - t_plan;
    last_p = ramp.advance(last_p, last_s, s);
    last_s = s;
    out.push_back({last_p.x, last_p.y, ramp.heading(s)});
  }
  return out;
}

UnicycleState closed_loop_field(
  const UnicycleState & x, double t, const CommandProfile & profile, Vec2 w)
{
  const VehicleLimits & lim = profile.limits();
  return {
    x.v * std::cos(x.h) + w.x,
    x.v * std::sin(x.h) + w.y,
    profile.w_des(t),
    tracking_accel(profile.v_des_rate(t), profile.v_des(t), x.v, lim.k_a, lim.a_max),
  };
}

double DisturbanceSampler::uniform(double lo, double hi)
{
  // 53 random mantissa bits; portable across standard libraries.
  const double u = static_cast<double>(rng_() >> 11) * 0x1.0p-53;
  return lo + (hi - lo) * u;
}

Vec2 DisturbanceSampler::sample(Vec2 position, std::span<const DisturbancePatch> patches)
{
  for (const auto & patch : patches) {
    if (!patch.region.contains(position)) continue;
    const Box2 & b = patch.w_bounds;
    switch (mode_) {
      case DisturbanceRealization::kRandom:
        return {uniform(b[0].lo, b[0].hi), uniform(b[1].lo, b[1].hi)};
      case DisturbanceRealization::kWorstCase: {
        auto pick = [](const Interval & i) { return std::abs(i.lo) > std::abs(i.hi) ? i.lo : i.hi; };
        return {pick(b[0]), pick(b[1])};
      }
      case DisturbanceRealization::kZero:
        return {0.0, 0.0};
    }
  }
  return {0.0, 0.0};
}

UnicycleState hifi_step(
  const UnicycleState & x, double t, double dt, const CommandProfile & profile, Vec2 w)
{
  if (!(dt > 0.0)) throw std::invalid_argument("hifi_step requires dt > 0");
  auto field = [&](double tau, const std::array<double, 4> & s) {
    return closed_loop_field(UnicycleState::from_array(s), tau, profile, w).to_array();
  };
  return UnicycleState::from_array(rk4_step<4>(x.to_array(), t, dt, field));
}

UnicycleState hifi_step(
  const UnicycleState & x, double t, double dt, const CommandProfile & profile,
  std::span<const DisturbancePatch> patches, DisturbanceSampler & sampler, Vec2 * realized)
{
  const Vec2 w = sampler.sample(x.position(), patches);
  if (realized != nullptr) *realized = w;
  return hifi_step(x, t, dt, profile, w);
}

}  // namespace reachplan
