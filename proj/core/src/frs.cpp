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

#include "reachplan/frs.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>

namespace reachplan
{
namespace
{

// Sub-steps per FRS time step when simulating tracking runs.
constexpr int kTrackingSubsteps = 5;

std::size_t checked_time_count(const VehicleLimits & limits, double dt)
{
  if (!(dt > 0.0)) throw std::invalid_argument("FRS time step must be positive");
  const double steps = limits.horizon() / dt;
  const double rounded = std::round(steps);
  if (std::abs(steps - rounded) > 1e-9 * std::max(1.0, steps)) {
    throw std::invalid_argument("FRS time step must divide the horizon");
  }
  return static_cast<std::size_t>(rounded) + 1;
}

void check_grid(int n_k)
{
  if (n_k < 3 || n_k % 2 == 0) {
    throw std::invalid_argument("FRS grid resolution must be odd and >= 3, got " + std::to_string(n_k));
  }
}

class Fnv1a
{
public:
  template <class T>
  void add(const T & value)
  {
    unsigned char bytes[sizeof(T)];
    std::memcpy(bytes, &value, sizeof(T));
    for (unsigned char b : bytes) {
      hash_ ^= b;
      hash_ *= 1099511628211ULL;
    }
  }
  std::uint64_t value() const { return hash_; }

private:
  std::uint64_t hash_ = 14695981039346656037ULL;
};

}  // namespace

double TrackingErrorBound::max() const
{
  double m = 0.0;
  for (double v : per_time) m = std::max(m, v);
  for (double v : per_cell) m = std::max(m, v);
  return m;
}

FrsTable::FrsTable(
  const VehicleLimits & limits, int n_k, double dt, double robot_radius,
  std::vector<Box2> footprints)
: limits_(limits), n_k_(n_k), dt_(dt), robot_radius_(robot_radius),
  time_count_(checked_time_count(limits, dt)), footprints_(std::move(footprints))
{
  check_grid(n_k);
  if (footprints_.size() != cell_count() * time_count_) {
    throw std::invalid_argument("FRS footprint count does not match the grid");
  }
  compute_hulls();
}

std::size_t FrsTable::time_index(double t) const
{
  const double j = std::round(t / dt_);
  if (j <= 0.0) return 0;
  return std::min(static_cast<std::size_t>(j), time_count_ - 1);
}

std::size_t FrsTable::cell_of(const TrajParam & k) const
{
  auto index = [this](double v) {
    const int i = static_cast<int>(std::lround((v + 1.0) / grid_spacing()));
    return std::clamp(i, 0, n_k_ - 1);
  };
  return cell_index(index(k.k1), index(k.k2));
}

TrajParam FrsTable::cell_center(std::size_t cell) const
{
  const int i1 = static_cast<int>(cell / n_k_);
  const int i2 = static_cast<int>(cell % n_k_);
  return {grid_value(i1), grid_value(i2)};
}

IntervalVector<2> FrsTable::cell_bounds(std::size_t cell) const
{
  const TrajParam c = cell_center(cell);
  const double half = 0.5 * grid_spacing();
  IntervalVector<2> out;
  out[0] = {std::max(-1.0, c.k1 - half), std::min(1.0, c.k1 + half)};
  out[1] = {std::max(-1.0, c.k2 - half), std::min(1.0, c.k2 + half)};
  return out;
}

Box2 FrsTable::footprint(std::size_t cell, std::size_t j) const
{
  const std::size_t idx = cell * time_count_ + j;
  if (inflation_.empty()) return footprints_[idx];
  return footprints_[idx].padded(inflation_[idx]);
}

FrsTable FrsTable::with_inflation(std::vector<double> inflation) const
{
  if (inflation.size() != footprints_.size()) {
    throw std::invalid_argument("inflation size does not match the FRS grid");
  }
  for (double g : inflation) {
    if (!(g >= 0.0) || !std::isfinite(g)) throw std::invalid_argument("inflation must be finite and >= 0");
  }
  FrsTable out = *this;
  out.inflation_ = std::move(inflation);
  out.compute_hulls();
  return out;
}

void FrsTable::compute_hulls()
{
  hulls_.assign(cell_count(), Box2{});
  for (std::size_t cell = 0; cell < cell_count(); ++cell) {
    Box2 h = footprint(cell, 0);
    for (std::size_t j = 1; j < time_count_; ++j) h = interval_hull(h, footprint(cell, j));
    hulls_[cell] = h;
  }
}

std::uint64_t frs_config_hash(const VehicleLimits & limits, int n_k, double dt, double robot_radius)
{
  Fnv1a h;
  h.add(limits.v_max);
  h.add(limits.w_max);
  h.add(limits.a_max);
  h.add(limits.k_a);
  h.add(limits.t_plan);
  h.add(limits.t_stop);
  h.add(n_k);
  h.add(dt);
  h.add(robot_radius);
  return h.value();
}

std::uint64_t FrsTable::config_hash() const
{
  return frs_config_hash(limits_, n_k_, dt_, robot_radius_);
}

bool operator==(const FrsTable & a, const FrsTable & b)
{
  return a.limits_ == b.limits_ && a.n_k_ == b.n_k_ && a.dt_ == b.dt_ &&
         a.robot_radius_ == b.robot_radius_ && a.footprints_ == b.footprints_ &&
         a.inflation_ == b.inflation_;
}

FrsTable build_frs(const VehicleLimits & limits, int n_k, double dt, double robot_radius)
{
  limits.validate();
  check_grid(n_k);
  if (!(robot_radius >= 0.0)) throw std::invalid_argument("robot radius must be >= 0");
  const std::size_t time_count = checked_time_count(limits, dt);

  // Half-step time samples and a doubled parameter grid: even indices are
  // cell centers, odd indices are cell edges.
  const std::size_t samples = 2 * (time_count - 1) + 1;
  std::vector<double> times(samples);
  for (std::size_t m = 0; m < samples; ++m) times[m] = std::min(0.5 * dt * m, limits.horizon());

  const int fine = 2 * n_k - 1;
  const double fine_spacing = 1.0 / (n_k - 1);
  std::vector<Vec2> positions(static_cast<std::size_t>(fine) * fine * samples);
  const PlanState origin{};
  for (int a = 0; a < fine; ++a) {
    for (int b = 0; b < fine; ++b) {
      const TrajParam k{std::clamp(-1.0 + a * fine_spacing, -1.0, 1.0),
                        std::clamp(-1.0 + b * fine_spacing, -1.0, 1.0)};
      const auto traj = plan_rollout(origin, param_to_commands(k, limits), times);
      Vec2 * dst = &positions[(static_cast<std::size_t>(a) * fine + b) * samples];
      for (std::size_t m = 0; m < samples; ++m) dst[m] = traj[m].position();
    }
  }
  auto pos = [&](int a, int b, std::size_t m) -> const Vec2 & {
    return positions[(static_cast<std::size_t>(a) * fine + b) * samples + m];
  };

  std::vector<Box2> footprints(static_cast<std::size_t>(n_k) * n_k * time_count);
  for (int i1 = 0; i1 < n_k; ++i1) {
    for (int i2 = 0; i2 < n_k; ++i2) {
      const int ca = 2 * i1;
      const int cb = 2 * i2;
      const int a_lo = std::max(0, ca - 1);
      const int a_hi = std::min(fine - 1, ca + 1);
      const int b_lo = std::max(0, cb - 1);
      const int b_hi = std::min(fine - 1, cb + 1);
      const std::size_t cell = static_cast<std::size_t>(i1) * n_k + i2;
      for (std::size_t j = 0; j < time_count; ++j) {
        const std::size_t m_center = 2 * j;
        const std::size_t m_lo = m_center == 0 ? 0 : m_center - 1;
        const std::size_t m_hi = std::min(samples - 1, m_center + 1);
        const Vec2 c = pos(ca, cb, m_center);
        double pad_x = 0.0;
        double pad_y = 0.0;
        for (int a = a_lo; a <= a_hi; ++a) {
          for (int b = b_lo; b <= b_hi; ++b) {
            for (std::size_t m = m_lo; m <= m_hi; ++m) {
              const Vec2 & p = pos(a, b, m);
              pad_x = std::max(pad_x, std::abs(p.x - c.x));
              pad_y = std::max(pad_y, std::abs(p.y - c.y));
            }
          }
        }
        Box2 box;
        box[0] = {c.x - robot_radius - pad_x, c.x + robot_radius + pad_x};
        box[1] = {c.y - robot_radius - pad_y, c.y + robot_radius + pad_y};
        footprints[cell * time_count + j] = box;
      }
    }
  }
  return FrsTable(limits, n_k, dt, robot_radius, std::move(footprints));
}

std::vector<double> tracking_deviation(
  const VehicleLimits & limits, const TrajParam & k, double v0, double dt)
{
  const std::size_t time_count = checked_time_count(limits, dt);
  const CommandProfile profile = param_to_commands(k, limits);
  const std::size_t steps = (time_count - 1) * kTrackingSubsteps;
  const double h = dt / kTrackingSubsteps;

  std::vector<double> times(steps + 1);
  for (std::size_t s = 0; s <= steps; ++s) times[s] = std::min(h * s, limits.horizon());
  const auto reference = plan_rollout(PlanState{}, profile, times);

  std::vector<double> deviation(time_count, 0.0);
  UnicycleState x{0.0, 0.0, 0.0, v0};
  for (std::size_t s = 0; s <= steps; ++s) {
    if (s > 0) x = hifi_step(x, times[s - 1], h, profile, Vec2{});
    const double d = std::hypot(x.x - reference[s].x, x.y - reference[s].y);
    const std::size_t j =
      std::min(time_count - 1, (s + kTrackingSubsteps / 2) / kTrackingSubsteps);
    deviation[j] = std::max(deviation[j], d);
  }
  return deviation;
}

namespace
{

double initial_speed(const VehicleLimits & limits, const TrajParam & k, double delta)
{
  const double v_des = param_to_commands(k, limits).v_cruise();
  return std::clamp(v_des + delta, 0.0, limits.v_max);
}

void accumulate_max(std::vector<double> & into, const std::vector<double> & from)
{
  for (std::size_t j = 0; j < into.size(); ++j) into[j] = std::max(into[j], from[j]);
}

}  // namespace

TrackingErrorBound estimate_tracking_error(
  const VehicleLimits & limits, int n_samples, Interval v0_offset, std::uint64_t seed, double dt)
{
  limits.validate();
  if (n_samples < 1) throw std::invalid_argument("estimate_tracking_error needs n_samples >= 1");
  if (!v0_offset.valid()) throw std::invalid_argument("v0 offset interval is inverted");
  const std::size_t time_count = checked_time_count(limits, dt);

  std::mt19937_64 rng(seed);
  auto uniform = [&rng](double lo, double hi) {
    return lo + (hi - lo) * (static_cast<double>(rng() >> 11) * 0x1.0p-53);
  };

  TrackingErrorBound bound;
  bound.per_time.assign(time_count, 0.0);
  for (int n = 0; n < n_samples; ++n) {
    const TrajParam k{uniform(-1.0, 1.0), uniform(-1.0, 1.0)};
    const double inner = uniform(v0_offset.lo, v0_offset.hi);
    for (double delta : {v0_offset.lo, v0_offset.hi, inner}) {
      accumulate_max(bound.per_time, tracking_deviation(limits, k, initial_speed(limits, k, delta), dt));
    }
  }
  return bound;
}

TrackingErrorBound estimate_tracking_error_per_cell(
  const VehicleLimits & limits, int n_k, Interval v0_offset, double dt)
{
  limits.validate();
  check_grid(n_k);
  if (!v0_offset.valid()) throw std::invalid_argument("v0 offset interval is inverted");
  const std::size_t time_count = checked_time_count(limits, dt);
  const double spacing = 2.0 / (n_k - 1);

  TrackingErrorBound bound;
  bound.per_time.assign(time_count, 0.0);
  bound.per_cell.assign(static_cast<std::size_t>(n_k) * n_k * time_count, 0.0);
  std::vector<double> cell_max(time_count);
  for (int i1 = 0; i1 < n_k; ++i1) {
    for (int i2 = 0; i2 < n_k; ++i2) {
      std::fill(cell_max.begin(), cell_max.end(), 0.0);
      const TrajParam c{-1.0 + spacing * i1, -1.0 + spacing * i2};
      for (double d1 : {-0.5, 0.0, 0.5}) {
        for (double d2 : {-0.5, 0.0, 0.5}) {
          if (d1 != 0.0 && d2 == 0.0) continue;
          if (d1 == 0.0 && d2 != 0.0) continue;
          const TrajParam k = TrajParam{c.k1 + d1 * spacing, c.k2 + d2 * spacing}.clamped();
          for (double delta : {v0_offset.lo, v0_offset.hi}) {
            accumulate_max(cell_max, tracking_deviation(limits, k, initial_speed(limits, k, delta), dt));
          }
        }
      }
      const std::size_t cell = static_cast<std::size_t>(i1) * n_k + i2;
      std::copy(cell_max.begin(), cell_max.end(), bound.per_cell.begin() + cell * time_count);
      accumulate_max(bound.per_time, cell_max);
    }
  }
  return bound;
}

FrsTable inflate_frs(const FrsTable & frs, const TrackingErrorBound & g)
{
  const std::size_t tc = frs.time_count();
  const std::size_t total = frs.cell_count() * tc;
  std::vector<double> inflation = frs.inflated() ? frs.inflation() : std::vector<double>(total, 0.0);
  if (!g.per_cell.empty()) {
    if (g.per_cell.size() != total) throw std::invalid_argument("per-cell tracking bound grid mismatch");
    for (std::size_t i = 0; i < total; ++i) inflation[i] += g.per_cell[i];
  } else {
    if (g.per_time.size() != tc) throw std::invalid_argument("tracking bound time grid mismatch");
    for (std::size_t cell = 0; cell < frs.cell_count(); ++cell) {
      for (std::size_t j = 0; j < tc; ++j) inflation[cell * tc + j] += g.per_time[j];
    }
  }
  return frs.with_inflation(std::move(inflation));
}

std::vector<ConvexPolygon> obstacles_in_body_frame(
  std::span<const ConvexPolygon> obstacles, const PlanState & pose)
{
  std::vector<ConvexPolygon> out;
  out.reserve(obstacles.size());
  const Pose2 p = pose.pose();
  for (const auto & o : obstacles) out.push_back(o.inverse_transformed(p));
  return out;
}

namespace
{

bool boxes_overlap(const Box2 & a, const Box2 & b)
{
  return !(a[0].lo > b[0].hi || b[0].lo > a[0].hi || a[1].lo > b[1].hi || b[1].lo > a[1].hi);
}

}  // namespace

bool cell_is_safe(
  const FrsTable & frs, std::size_t cell, std::span<const ConvexPolygon> body_obstacles,
  double buffer)
{
  const Box2 hull = frs.cell_hull(cell).padded(buffer);
  for (const auto & obs : body_obstacles) {
    if (!boxes_overlap(hull, obs.bounds())) continue;
    for (std::size_t j = 0; j < frs.time_count(); ++j) {
      const Box2 box = frs.footprint(cell, j);
      if (buffer <= 0.0) {
        if (box_polygon_intersect(box, obs)) return false;
        continue;
      }
      if (!box_polygon_intersect(box.padded(buffer), obs)) continue;
      if (box_polygon_distance(box, obs) <= buffer) return false;
    }
  }
  return true;
}

std::vector<char> project_unsafe_params_body(
  const FrsTable & frs, std::span<const ConvexPolygon> body_obstacles, double buffer)
{
  std::vector<char> unsafe(frs.cell_count(), 0);
  for (std::size_t cell = 0; cell < frs.cell_count(); ++cell) {
    unsafe[cell] = cell_is_safe(frs, cell, body_obstacles, buffer) ? 0 : 1;
  }
  return unsafe;
}

std::vector<char> project_unsafe_params(
  const FrsTable & frs, std::span<const ConvexPolygon> obstacles, const PlanState & pose,
  double buffer)
{
  const auto body = obstacles_in_body_frame(obstacles, pose);
  return project_unsafe_params_body(frs, body, buffer);
}

std::vector<double> constraint_values_body(
  const TrajParam & k, std::span<const ConvexPolygon> body_obstacles, const FrsTable & frs,
  double buffer)
{
  const std::size_t cell = frs.cell_of(k);
  std::vector<double> q;
  q.reserve(body_obstacles.size());
  for (const auto & obs : body_obstacles) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < frs.time_count() && best > 0.0; ++j) {
      best = std::min(best, box_polygon_distance(frs.footprint(cell, j), obs));
    }
    q.push_back(buffer - best);
  }
  return q;
}

std::vector<double> constraint_values(
  const TrajParam & k, std::span<const ConvexPolygon> obstacles, const PlanState & pose,
  const FrsTable & frs, double buffer)
{
  const auto body = obstacles_in_body_frame(obstacles, pose);
  return constraint_values_body(k, body, frs, buffer);
}

}  // namespace reachplan
