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

#ifndef REACHPLAN__FRS_HPP_
#define REACHPLAN__FRS_HPP_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "reachplan/dynamics.hpp"
#include "reachplan/geometry.hpp"

namespace reachplan
{

/// Worst-case position deviation between the unicycle and the planning model,
/// one entry per FRS time index. `per_cell`, when non-empty, holds a
/// cell-major (cell * time_count + j) refinement.
struct TrackingErrorBound
{
  std::vector<double> per_time;
  std::vector<double> per_cell;

  double max() const;
};

/// Sampled forward reachable set of the planning model in the body frame.
///
/// The k-space [-1, 1]^2 is covered by n_k x n_k cells centered on a regular
/// grid (cell = i1 * n_k + i2, i1 indexing k1). For every cell and time index
/// j the table stores a position box centered on the cell-center trajectory
/// at t_j, padded by the robot radius plus the largest per-axis deviation of
/// the cell's edge and corner parameters over [t_j - dt/2, t_j + dt/2].
class FrsTable
{
public:
  FrsTable() = default;
  FrsTable(
    const VehicleLimits & limits, int n_k, double dt, double robot_radius,
    std::vector<Box2> footprints);

  const VehicleLimits & limits() const { return limits_; }
  int n_k() const { return n_k_; }
  double dt() const { return dt_; }
  double robot_radius() const { return robot_radius_; }
  std::size_t cell_count() const { return static_cast<std::size_t>(n_k_) * n_k_; }
  std::size_t time_count() const { return time_count_; }
  double time_at(std::size_t j) const { return static_cast<double>(j) * dt_; }
  /// Nearest time index to t, clamped into the table.
  std::size_t time_index(double t) const;

  double grid_spacing() const { return 2.0 / (n_k_ - 1); }
  double grid_value(int i) const { return -1.0 + grid_spacing() * i; }
  std::size_t cell_index(int i1, int i2) const { return static_cast<std::size_t>(i1) * n_k_ + i2; }
  /// Cell whose center is nearest to k.
  std::size_t cell_of(const TrajParam & k) const;
  TrajParam cell_center(std::size_t cell) const;
  /// Parameter box covered by a cell, clipped to [-1, 1]^2.
  IntervalVector<2> cell_bounds(std::size_t cell) const;

  /// Effective footprint, including inflation when present.
  Box2 footprint(std::size_t cell, std::size_t j) const;
  /// Hull of footprint(cell, j) over all j.
  const Box2 & cell_hull(std::size_t cell) const { return hulls_[cell]; }

  bool inflated() const { return !inflation_.empty(); }
  const std::vector<Box2> & raw_footprints() const { return footprints_; }
  const std::vector<double> & inflation() const { return inflation_; }

  /// Copy with each footprint padded by the matching inflation entry.
  FrsTable with_inflation(std::vector<double> inflation) const;

  /// Hash of the construction inputs; used to invalidate cached tables.
  std::uint64_t config_hash() const;

  friend bool operator==(const FrsTable & a, const FrsTable & b);

private:
  void compute_hulls();

  VehicleLimits limits_;
  int n_k_ = 0;
  double dt_ = 0.0;
  double robot_radius_ = 0.0;
  std::size_t time_count_ = 0;
  std::vector<Box2> footprints_;
  std::vector<double> inflation_;
  std::vector<Box2> hulls_;
};

std::uint64_t frs_config_hash(const VehicleLimits & limits, int n_k, double dt, double robot_radius);

/// Builds the non-inflated table. Requires n_k >= 3 odd and dt dividing the
/// horizon; throws std::invalid_argument otherwise.
FrsTable build_frs(const VehicleLimits & limits, int n_k, double dt, double robot_radius);

/// Samples (k, v0) pairs, simulates the unicycle with w = 0 from rest pose
/// (0, 0, 0, v0) and records the worst position deviation from the planning
/// model per time index. `v0_offset` is relative to each sample's cruise
/// speed: v0 = clamp(v_des + delta, 0, v_max). Both offset endpoints are
/// simulated for every sampled k, plus one draw strictly inside.
TrackingErrorBound estimate_tracking_error(
  const VehicleLimits & limits, int n_samples, Interval v0_offset, std::uint64_t seed, double dt);

/// Deterministic variant filling `per_cell`: every cell center and corner of
/// an n_k grid is simulated at both offset endpoints.
TrackingErrorBound estimate_tracking_error_per_cell(
  const VehicleLimits & limits, int n_k, Interval v0_offset, double dt);

/// Position deviation trace of one tracking run, per time index.
std::vector<double> tracking_deviation(
  const VehicleLimits & limits, const TrajParam & k, double v0, double dt);

/// Pads every footprint by g at its time index (or per cell when g carries
/// per-cell entries). Throws std::invalid_argument on grid mismatch.
FrsTable inflate_frs(const FrsTable & frs, const TrackingErrorBound & g);

/// Obstacles expressed in the body frame of `pose`, ready for table queries.
std::vector<ConvexPolygon> obstacles_in_body_frame(
  std::span<const ConvexPolygon> obstacles, const PlanState & pose);

/// Unsafe-cell mask (true = unsafe). A cell is unsafe iff some footprint lies
/// within `buffer` of some obstacle (buffer 0: touches or overlaps).
std::vector<char> project_unsafe_params(
  const FrsTable & frs, std::span<const ConvexPolygon> obstacles, const PlanState & pose,
  double buffer = 0.0);

/// Same as project_unsafe_params for obstacles already in the body frame.
std::vector<char> project_unsafe_params_body(
  const FrsTable & frs, std::span<const ConvexPolygon> body_obstacles, double buffer = 0.0);

/// True iff the cell's footprints stay farther than `buffer` from every body-frame obstacle.
bool cell_is_safe(
  const FrsTable & frs, std::size_t cell, std::span<const ConvexPolygon> body_obstacles,
  double buffer = 0.0);

/// q_i(k) = buffer - min_j dist(footprint(cell(k), j), obstacle_i). The
/// parameter is feasible iff every q_i < 0.
std::vector<double> constraint_values(
  const TrajParam & k, std::span<const ConvexPolygon> obstacles, const PlanState & pose,
  const FrsTable & frs, double buffer = 0.0);

std::vector<double> constraint_values_body(
  const TrajParam & k, std::span<const ConvexPolygon> body_obstacles, const FrsTable & frs,
  double buffer = 0.0);

/// Binary cache. Layout (little-endian host order): magic "RPFRS001",
/// u64 config hash, 6 f64 limits, i32 n_k, f64 dt, f64 robot radius,
/// u64 time count, u8 inflated flag, footprints as 4 f64 each, then the
/// inflation entries when flagged.
void write_frs(const FrsTable & frs, const std::filesystem::path & path);
FrsTable read_frs(const std::filesystem::path & path);

/// Loads the cached table at `path` when its config hash matches, otherwise
/// rebuilds and rewrites it.
FrsTable load_or_build_frs(
  const std::filesystem::path & path, const VehicleLimits & limits, int n_k, double dt,
  double robot_radius);

}  // namespace reachplan

#endif  // REACHPLAN__FRS_HPP_
