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

#ifndef REACHPLAN__VERIFIER_HPP_
#define REACHPLAN__VERIFIER_HPP_

#include <array>
#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "reachplan/dynamics.hpp"
#include "reachplan/geometry.hpp"

namespace reachplan
{

/// Interval over the unicycle state (x, y, h, v).
using StateBox = IntervalVector<4>;

/// Point of the 8-dimensional embedding system: lower and upper state bounds.
struct EmbeddingState
{
  std::array<double, 4> lower{};
  std::array<double, 4> upper{};

  static EmbeddingState from_box(const StateBox & box) { return {box.lower(), box.upper()}; }
  StateBox box() const { return StateBox::from_bounds(lower, upper); }
  bool ordered() const;
  Box2 position_box() const;
};

struct UncertaintyConfig
{
  /// Half-widths of the initial box around the state estimate (m, m, rad, m/s).
  std::array<double, 4> epsilon{0.02, 0.02, 0.01, 0.02};
  /// Disturbance bounds (m/s) per verifier time index. One entry means
  /// constant over the horizon; empty means no disturbance.
  std::vector<Box2> w_bounds;
  /// Optional outward pad added to every component after each step.
  double step_pad = 0.0;

  void validate() const;
  Box2 w_at(std::size_t j) const;
};

struct ReachTube
{
  std::vector<double> times;
  std::vector<EmbeddingState> states;
  std::vector<Box2> position_boxes;  // projection of states onto (x, y)
  std::vector<Box2> swept_hulls;     // hull of consecutive position boxes

  std::size_t size() const { return states.size(); }
};

/// Raised when the integrated bounds cross, which signals a step size that is
/// too large for the embedding system.
class OrderViolation : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

enum class Verdict
{
  kSafe,
  kUnsafe,
};

struct Collision
{
  std::size_t time_index = 0;
  std::size_t obstacle = 0;

  friend bool operator==(const Collision &, const Collision &) = default;
};

struct Certificate
{
  Verdict verdict = Verdict::kSafe;
  std::optional<Collision> first_collision;
  std::shared_ptr<const ReachTube> tube;

  bool safe() const { return verdict == Verdict::kSafe; }
};

/// Natural inclusion function of closed_loop_field: contains
/// f(x, u(t), w) for every x in `x_iv` and w in `w_iv`.
StateBox inclusion_field(const StateBox & x_iv, double t, const CommandProfile & profile, const Box2 & w_iv);

/// Mixed-monotone embedding vector field: component i of the lower
/// derivative is the lower bound of the inclusion function on the face of the
/// box where x_i is pinned to its lower bound; symmetric for the upper part.
EmbeddingState embedding_field(
  const EmbeddingState & e, double t, const CommandProfile & profile, const Box2 & w_iv);

/// Integrates the embedding system with fixed-step RK4 from the box
/// [x_hat - eps, x_hat + eps] over [0, T]. dt_v must divide T. Throws
/// OrderViolation if the bounds ever cross.
ReachTube propagate_tube(
  const UnicycleState & x_hat, const UncertaintyConfig & cfg, const CommandProfile & profile, double dt_v);

/// propagate_tube and certify fused: integration stops at the first
/// collision, so an unsafe certificate carries the tube up to that index.
/// The verdict and collision equal certify(propagate_tube(...)).
Certificate verify_tube(
  const UnicycleState & x_hat, const UncertaintyConfig & cfg, const CommandProfile & profile, double dt_v,
  std::span<const ConvexPolygon> obstacles, double footprint_radius = 0.0);

/// Checks the initial position box and every swept hull, grown by
/// `footprint_radius`, against each obstacle. Time index j stands for the
/// hull over [t_{j-1}, t_j]. Reports the earliest index and, at that index,
/// the lowest obstacle index.
Certificate certify(
  std::shared_ptr<const ReachTube> tube, std::span<const ConvexPolygon> obstacles,
  double footprint_radius = 0.0);

}  // namespace reachplan

#endif  // REACHPLAN__VERIFIER_HPP_
