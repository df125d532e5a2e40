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

#include "reachplan/verifier.hpp"

#include <cmath>
#include <string>
#include <utility>

#include "reachplan/integrate.hpp"

namespace reachplan
{

bool EmbeddingState::ordered() const
{
  for (std::size_t i = 0; i < 4; ++i) {
    if (!(lower[i] <= upper[i])) return false;
  }
  return true;
}

Box2 EmbeddingState::position_box() const
{
  Box2 b;
  b[0] = {lower[0], upper[0]};
  b[1] = {lower[1], upper[1]};
  return b;
}

void UncertaintyConfig::validate() const
{
  for (double e : epsilon) {
    if (!(e >= 0.0) || !std::isfinite(e)) throw std::invalid_argument("epsilon must be finite and >= 0");
  }
  for (const Box2 & w : w_bounds) {
    if (!w.valid()) throw std::invalid_argument("disturbance bounds must be valid intervals");
  }
  if (!(step_pad >= 0.0)) throw std::invalid_argument("step pad must be >= 0");
}

Box2 UncertaintyConfig::w_at(std::size_t j) const
{
  if (w_bounds.empty()) return Box2{};
  if (w_bounds.size() == 1) return w_bounds.front();
  return w_bounds[std::min(j, w_bounds.size() - 1)];
}

StateBox inclusion_field(
  const StateBox & x_iv, double t, const CommandProfile & profile, const Box2 & w_iv)
{
  const VehicleLimits & lim = profile.limits();
  const Interval & h = x_iv[2];
  const Interval & v = x_iv[3];
  const double ff = profile.v_des_rate(t);
  const double v_des = profile.v_des(t);
  const double w_des = profile.w_des(t);

  Interval sin_h;
  Interval cos_h;
  interval_sincos(h, sin_h, cos_h);
  StateBox out;
  out[0] = v * cos_h + w_iv[0];
  out[1] = v * sin_h + w_iv[1];
  out[2] = Interval::point(w_des);
  // The tracking law is nonincreasing in v.
  out[3] = {
    tracking_accel(ff, v_des, v.hi, lim.k_a, lim.a_max),
    tracking_accel(ff, v_des, v.lo, lim.k_a, lim.a_max)};
  return out;
}

EmbeddingState embedding_field(
  const EmbeddingState & e, double t, const CommandProfile & profile, const Box2 & w_iv)
{
  // f_x and f_y do not depend on x or y, and f_h is a point, so pinning
  // coordinate i leaves component i unchanged for i < 3; one full-box
  // evaluation serves those faces. f_v depends on v alone.
  const StateBox full = inclusion_field(e.box(), t, profile, w_iv);
  const VehicleLimits & lim = profile.limits();
  const double ff = profile.v_des_rate(t);
  const double v_des = profile.v_des(t);
  EmbeddingState d;
  for (std::size_t i = 0; i < 3; ++i) {
    d.lower[i] = full[i].lo;
    d.upper[i] = full[i].hi;
  }
  d.lower[3] = tracking_accel(ff, v_des, e.lower[3], lim.k_a, lim.a_max);
  d.upper[3] = tracking_accel(ff, v_des, e.upper[3], lim.k_a, lim.a_max);
  return d;
}

namespace
{

std::array<double, 8> pack(const EmbeddingState & e)
{
  return {e.lower[0], e.lower[1], e.lower[2], e.lower[3], e.upper[0], e.upper[1], e.upper[2], e.upper[3]};
}

EmbeddingState unpack(const std::array<double, 8> & a)
{
  return {{a[0], a[1], a[2], a[3]}, {a[4], a[5], a[6], a[7]}};
}

}  // namespace

namespace
{

std::size_t step_count(const CommandProfile & profile, const UncertaintyConfig & cfg, double dt_v)
{
  cfg.validate();
  if (!(dt_v > 0.0)) throw std::invalid_argument("verifier step must be positive");
  const double horizon = profile.horizon();
  const double steps_real = horizon / dt_v;
  const double steps_rounded = std::round(steps_real);
  if (std::abs(steps_real * dt_v - steps_rounded * dt_v) > 1e-9) {
    throw std::invalid_argument("verifier step must divide the horizon");
  }
  return static_cast<std::size_t>(steps_rounded);
}

// Appends the initial box to `tube`.
EmbeddingState start_tube(const UnicycleState & x_hat, const UncertaintyConfig & cfg, std::size_t steps, ReachTube & tube)
{
  tube.times.reserve(steps + 1);
  tube.states.reserve(steps + 1);
  tube.position_boxes.reserve(steps + 1);
  tube.swept_hulls.reserve(steps);

  const auto x0 = x_hat.to_array();
  EmbeddingState e;
  for (std::size_t i = 0; i < 4; ++i) {
    e.lower[i] = x0[i] - cfg.epsilon[i];
    e.upper[i] = x0[i] + cfg.epsilon[i];
  }
  tube.times.push_back(0.0);
  tube.states.push_back(e);
  tube.position_boxes.push_back(e.position_box());
  return e;
}

// Advances from index j to j + 1 and appends the result to `tube`.
void advance_tube(
  EmbeddingState & e, std::size_t j, const UncertaintyConfig & cfg, const CommandProfile & profile, double dt_v,
  ReachTube & tube)
{
  const double t = static_cast<double>(j) * dt_v;
  const Box2 w = interval_hull(cfg.w_at(j), cfg.w_at(j + 1));
  auto field = [&](double tau, const std::array<double, 8> & s) {
    return pack(embedding_field(unpack(s), tau, profile, w));
  };
  e = unpack(rk4_step<8>(pack(e), t, dt_v, field));
  if (cfg.step_pad > 0.0) {
    for (std::size_t i = 0; i < 4; ++i) {
      e.lower[i] -= cfg.step_pad;
      e.upper[i] += cfg.step_pad;
    }
  }
  if (!e.ordered()) {
    throw OrderViolation(
      "embedding bounds crossed at step " + std::to_string(j + 1) + "; reduce the verifier step");
  }
  tube.times.push_back(static_cast<double>(j + 1) * dt_v);
  tube.states.push_back(e);
  tube.position_boxes.push_back(e.position_box());
  tube.swept_hulls.push_back(interval_hull(tube.position_boxes[j], tube.position_boxes[j + 1]));
}

std::optional<std::size_t> first_hit(const Box2 & region, std::span<const ConvexPolygon> obstacles, double radius)
{
  const Box2 grown = region.padded(radius);
  for (std::size_t i = 0; i < obstacles.size(); ++i) {
    if (box_polygon_intersect(grown, obstacles[i])) return i;
  }
  return std::nullopt;
}

}  // namespace

ReachTube propagate_tube(
  const UnicycleState & x_hat, const UncertaintyConfig & cfg, const CommandProfile & profile, double dt_v)
{
  const std::size_t steps = step_count(profile, cfg, dt_v);
  ReachTube tube;
  EmbeddingState e = start_tube(x_hat, cfg, steps, tube);
  for (std::size_t j = 0; j < steps; ++j) advance_tube(e, j, cfg, profile, dt_v, tube);
  return tube;
}

Certificate verify_tube(
  const UnicycleState & x_hat, const UncertaintyConfig & cfg, const CommandProfile & profile, double dt_v,
  std::span<const ConvexPolygon> obstacles, double footprint_radius)
{
  const std::size_t steps = step_count(profile, cfg, dt_v);
  auto tube = std::make_shared<ReachTube>();
  EmbeddingState e = start_tube(x_hat, cfg, steps, *tube);
  Certificate cert;
  if (auto hit = first_hit(tube->position_boxes[0], obstacles, footprint_radius)) {
    cert.verdict = Verdict::kUnsafe;
    cert.first_collision = Collision{0, *hit};
  }
  for (std::size_t j = 0; j < steps && cert.safe(); ++j) {
    advance_tube(e, j, cfg, profile, dt_v, *tube);
    if (auto hit = first_hit(tube->swept_hulls[j], obstacles, footprint_radius)) {
      cert.verdict = Verdict::kUnsafe;
      cert.first_collision = Collision{j + 1, *hit};
    }
  }
  cert.tube = std::move(tube);
  return cert;
}

Certificate certify(
  std::shared_ptr<const ReachTube> tube, std::span<const ConvexPolygon> obstacles,
  double footprint_radius)
{
  Certificate cert;
  cert.tube = tube;
  if (!tube || tube->position_boxes.empty()) return cert;

  const std::size_t n = tube->position_boxes.size();
  for (std::size_t j = 0; j < n; ++j) {
    // Index j covers [t_{j-1}, t_j]: the swept hull contains both end boxes.
    const Box2 & region = j == 0 ? tube->position_boxes[0] : tube->swept_hulls[j - 1];
    if (auto hit = first_hit(region, obstacles, footprint_radius)) {
      cert.verdict = Verdict::kUnsafe;
      cert.first_collision = Collision{j, *hit};
      return cert;
    }
  }
  return cert;
}

}  // namespace reachplan
