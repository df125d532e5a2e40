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

#include <gtest/gtest.h>

#include <cmath>
#include <memory>
#include <numbers>
#include <random>
#include <stdexcept>
#include <vector>

#include "oracles.hpp"
#include "reachplan/verifier.hpp"

namespace reachplan
{
namespace
{

constexpr double kPi = std::numbers::pi;

Interval random_interval(std::mt19937_64 & rng, double center_span, double max_width)
{
  std::uniform_real_distribution<double> c(-center_span, center_span);
  std::uniform_real_distribution<double> w(0.0, max_width);
  const double lo = c(rng);
  return {lo, lo + w(rng)};
}

/// Face-by-face construction of the embedding field from the inclusion function.
EmbeddingState faces(const EmbeddingState & e, double t, const CommandProfile & p, const Box2 & w)
{
  EmbeddingState d;
  const StateBox box = e.box();
  for (std::size_t i = 0; i < 4; ++i) {
    StateBox lo_face = box;
    lo_face[i] = Interval::point(e.lower[i]);
    d.lower[i] = inclusion_field(lo_face, t, p, w)[i].lo;
    StateBox hi_face = box;
    hi_face[i] = Interval::point(e.upper[i]);
    d.upper[i] = inclusion_field(hi_face, t, p, w)[i].hi;
  }
  return d;
}

TEST(InclusionField, DegenerateEqualsPointField)
{
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    const CommandProfile p = param_to_commands({u(rng), u(rng)}, VehicleLimits{});
    const UnicycleState x{u(rng), u(rng), 4.0 * u(rng), 1.0 + u(rng)};
    const double t = 1.25 * (u(rng) + 1.0);
    const StateBox out = inclusion_field(StateBox::point(x.to_array()), t, p, Box2{});
    const UnicycleState f = closed_loop_field(x, t, p, {0.0, 0.0});
    EXPECT_EQ(out, StateBox::point(f.to_array()));
  }
}

TEST(InclusionField, HeadingIntervalExample)
{
  VehicleLimits lim;
  lim.v_max = 2.0;
  const CommandProfile p(TrajParam{0.0, 0.0}, lim, 1.0, 0.0);
  StateBox x = StateBox::point({0.0, 0.0, 0.0, 1.0});
  x[2] = {-kPi / 2.0, kPi / 2.0};
  const StateBox out = inclusion_field(x, 0.0, p, Box2{});
  EXPECT_NEAR(out[0].lo, 0.0, 1e-15);
  EXPECT_EQ(out[0].hi, 1.0);
  EXPECT_EQ(out[1], Interval(-1.0, 1.0));
}

TEST(InclusionField, MonteCarloEnclosure)
{
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const VehicleLimits lim;
  for (int box_trial = 0; box_trial < 100; ++box_trial) {
    const CommandProfile p = param_to_commands({2.0 * u(rng) - 1.0, 2.0 * u(rng) - 1.0}, lim);
    const double t = lim.horizon() * u(rng);
    StateBox x;
    x[0] = random_interval(rng, 3.0, 1.0);
    x[1] = random_interval(rng, 3.0, 1.0);
    x[2] = random_interval(rng, 4.0, 2.0);
    const double v_lo = 2.0 * u(rng);
    x[3] = {v_lo, v_lo + u(rng)};
    Box2 w;
    w[0] = random_interval(rng, 0.3, 0.3);
    w[1] = random_interval(rng, 0.3, 0.3);
    const StateBox out = inclusion_field(x, t, p, w);
    for (int s = 0; s < 100; ++s) {
      std::array<double, 4> xs{};
      for (std::size_t i = 0; i < 4; ++i) xs[i] = x[i].lo + u(rng) * x[i].width();
      const Vec2 ws{w[0].lo + u(rng) * w[0].width(), w[1].lo + u(rng) * w[1].width()};
      const auto f = oracle::unicycle_rate(xs, p.v_des(t), p.v_des_rate(t), p.w_des(t), lim, ws);
      ASSERT_TRUE(out.padded(1e-12).contains(f));
    }
  }
}

TEST(EmbeddingField, EqualsFaceEvaluation)
{
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const VehicleLimits lim;
  for (int trial = 0; trial < 2000; ++trial) {
    const CommandProfile p = param_to_commands({2.0 * u(rng) - 1.0, 2.0 * u(rng) - 1.0}, lim);
    const double t = lim.horizon() * u(rng);
    StateBox x;
    x[0] = random_interval(rng, 3.0, 1.0);
    x[1] = random_interval(rng, 3.0, 1.0);
    x[2] = random_interval(rng, 4.0, trial % 5 == 0 ? 7.0 : 0.5);
    const double v_lo = 2.5 * u(rng) - 0.2;
    x[3] = {v_lo, v_lo + (trial % 4 == 0 ? 0.0 : u(rng))};
    Box2 w;
    w[0] = random_interval(rng, 0.3, 0.3);
    w[1] = random_interval(rng, 0.3, 0.3);
    const EmbeddingState e = EmbeddingState::from_box(x);
    const EmbeddingState a = embedding_field(e, t, p, w);
    const EmbeddingState b = faces(e, t, p, w);
    ASSERT_EQ(a.lower, b.lower);
    ASSERT_EQ(a.upper, b.upper);
  }
}

TEST(EmbeddingField, DegenerateHalvesEqualPointField)
{
  const CommandProfile p = param_to_commands({0.3, 0.5}, VehicleLimits{});
  const UnicycleState x{0.2, -0.4, 0.9, 1.1};
  const EmbeddingState e{x.to_array(), x.to_array()};
  const EmbeddingState d = embedding_field(e, 0.7, p, Box2{});
  const auto f = closed_loop_field(x, 0.7, p, {0.0, 0.0}).to_array();
  EXPECT_EQ(d.lower, f);
  EXPECT_EQ(d.upper, f);
}

TEST(EmbeddingField, HeadingRateIgnoresWidths)
{
  const CommandProfile p = param_to_commands({-0.4, 0.5}, VehicleLimits{});
  const EmbeddingState e{{-1.0, -2.0, -1.0, 0.1}, {1.0, 2.0, 2.0, 1.9}};
  for (double t : {0.0, 1.0, 1.8, 2.5}) {
    const EmbeddingState d = embedding_field(e, t, p, Box2::from_bounds({-0.5, -0.5}, {0.5, 0.5}));
    EXPECT_EQ(d.lower[2], p.w_des(t));
    EXPECT_EQ(d.upper[2], p.w_des(t));
  }
}

TEST(EmbeddingField, NestedStatesStayNestedAfterSmallStep)
{
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const VehicleLimits lim;
  const double dt = 1e-3;
  for (int trial = 0; trial < 500; ++trial) {
    const CommandProfile p = param_to_commands({2.0 * u(rng) - 1.0, 2.0 * u(rng) - 1.0}, lim);
    const double t = lim.horizon() * u(rng);
    EmbeddingState outer;
    EmbeddingState inner;
    for (std::size_t i = 0; i < 4; ++i) {
      const Interval o = i == 3 ? Interval{2.0 * u(rng), 0.0} : random_interval(rng, 3.0, 1.0);
      const Interval oo = i == 3 ? Interval{o.lo, o.lo + u(rng)} : o;
      outer.lower[i] = oo.lo;
      outer.upper[i] = oo.hi;
      inner.lower[i] = oo.lo + 0.5 * u(rng) * oo.width();
      inner.upper[i] = oo.hi - 0.5 * u(rng) * oo.width();
    }
    const Box2 w = Box2::from_bounds({-0.2, -0.1}, {0.1, 0.3});
    const EmbeddingState dout = embedding_field(outer, t, p, w);
    const EmbeddingState din = embedding_field(inner, t, p, w);
    for (std::size_t i = 0; i < 4; ++i) {
      ASSERT_LE(outer.lower[i] + dt * dout.lower[i], inner.lower[i] + dt * din.lower[i] + 1e-15);
      ASSERT_GE(outer.upper[i] + dt * dout.upper[i], inner.upper[i] + dt * din.upper[i] - 1e-15);
    }
  }
}

TEST(PropagateTube, DegenerateTubeIsTheNominalRollout)
{
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  UncertaintyConfig cfg;
  cfg.epsilon = {0.0, 0.0, 0.0, 0.0};
  const double dt = 0.01;
  for (int trial = 0; trial < 20; ++trial) {
    const CommandProfile p = param_to_commands({u(rng), u(rng)}, VehicleLimits{});
    const UnicycleState x0{u(rng), u(rng), 3.0 * u(rng), 1.0 + u(rng)};
    const ReachTube tube = propagate_tube(x0, cfg, p, dt);
    ASSERT_EQ(tube.size(), 251u);
    UnicycleState x = x0;
    for (std::size_t j = 0; j < tube.size(); ++j) {
      if (j > 0) x = hifi_step(x, (j - 1) * dt, dt, p, Vec2{0.0, 0.0});
      const auto arr = x.to_array();
      ASSERT_EQ(tube.states[j].lower, arr) << j;
      ASSERT_EQ(tube.states[j].upper, arr) << j;
    }
    const auto ref = oracle::fine_rollout(x0.to_array(), p, p.horizon(), 250);
    for (std::size_t i = 0; i < 4; ++i) EXPECT_NEAR(tube.states.back().lower[i], ref[i], 1e-9);
  }
}

TEST(PropagateTube, PositionWidthGrowsWithDisturbanceBound)
{
  UncertaintyConfig cfg;
  cfg.epsilon = {0.0, 0.0, 0.0, 0.0};
  cfg.w_bounds = {Box2::from_bounds({-0.1, -0.1}, {0.1, 0.1})};
  const CommandProfile p = param_to_commands({0.0, 0.6}, VehicleLimits{});
  const ReachTube tube = propagate_tube({0.0, 0.0, 0.0, p.v_cruise()}, cfg, p, 0.01);
  for (std::size_t j = 0; j < tube.size() && tube.times[j] <= p.t_plan(); ++j) {
    const double t = tube.times[j];
    EXPECT_LE(tube.position_boxes[j][0].width(), 0.2 * t + 1e-9);
    EXPECT_NEAR(tube.position_boxes[j][0].width(), 0.2 * t, 1e-9);
  }
}

TEST(PropagateTube, ContainsSampledClosedLoopRollouts)
{
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const VehicleLimits lim;
  const double dt = 0.01;
  for (int trial = 0; trial < 10; ++trial) {
    const CommandProfile p = param_to_commands({2.0 * u(rng) - 1.0, 2.0 * u(rng) - 1.0}, lim);
    UncertaintyConfig cfg;
    cfg.epsilon = {0.05 * u(rng), 0.05 * u(rng), 0.05 * u(rng), 0.3 * u(rng)};
    for (int j = 0; j < 251; j += 50) {
      Box2 w;
      w[0] = random_interval(rng, 0.2, 0.2);
      w[1] = random_interval(rng, 0.2, 0.2);
      cfg.w_bounds.push_back(w);
    }
    const UnicycleState xh{0.0, 0.0, 0.5, 0.3 + u(rng)};
    const ReachTube tube = propagate_tube(xh, cfg, p, dt);
    for (int roll = 0; roll < 300; ++roll) {
      UnicycleState x{
        xh.x + cfg.epsilon[0] * (2.0 * u(rng) - 1.0), xh.y + cfg.epsilon[1] * (2.0 * u(rng) - 1.0),
        xh.h + cfg.epsilon[2] * (2.0 * u(rng) - 1.0), xh.v + cfg.epsilon[3] * (2.0 * u(rng) - 1.0)};
      for (std::size_t j = 0; j < tube.size(); ++j) {
        ASSERT_TRUE(tube.states[j].box().padded(1e-9).contains(x.to_array())) << "trial " << trial << " j " << j;
        if (j + 1 == tube.size()) break;
        const Box2 wj = cfg.w_at(j);
        const Vec2 w{wj[0].lo + u(rng) * wj[0].width(), wj[1].lo + u(rng) * wj[1].width()};
        x = hifi_step(x, j * dt, dt, p, w);
      }
    }
  }
}

TEST(PropagateTube, RejectsBadStep)
{
  const CommandProfile p = param_to_commands({0.0, 0.0}, VehicleLimits{});
  EXPECT_THROW(propagate_tube({}, UncertaintyConfig{}, p, 0.0), std::invalid_argument);
  EXPECT_THROW(propagate_tube({}, UncertaintyConfig{}, p, 0.03), std::invalid_argument);
  UncertaintyConfig bad;
  bad.epsilon[0] = -1.0;
  EXPECT_THROW(propagate_tube({}, bad, p, 0.01), std::invalid_argument);
}

TEST(Certify, EmptyObstacleListIsSafe)
{
  const CommandProfile p = param_to_commands({0.2, 0.4}, VehicleLimits{});
  auto tube = std::make_shared<const ReachTube>(propagate_tube({}, UncertaintyConfig{}, p, 0.01));
  const Certificate c = certify(tube, {});
  EXPECT_TRUE(c.safe());
  EXPECT_FALSE(c.first_collision.has_value());
}

TEST(Certify, ObstacleOnStartIsIndexZero)
{
  const CommandProfile p = param_to_commands({0.2, 0.4}, VehicleLimits{});
  auto tube = std::make_shared<const ReachTube>(propagate_tube({}, UncertaintyConfig{}, p, 0.01));
  const std::vector<ConvexPolygon> obs{ConvexPolygon::rectangle(5.0, 5.0, 6.0, 6.0), ConvexPolygon::rectangle(-0.5, -0.5, 0.5, 0.5)};
  const Certificate c = certify(tube, obs);
  ASSERT_FALSE(c.safe());
  EXPECT_EQ(*c.first_collision, (Collision{0, 1}));
}

TEST(Certify, ThinWallBetweenSamplesIsCaught)
{
  VehicleLimits lim;
  const CommandProfile p = param_to_commands({0.0, 1.0}, lim);
  UncertaintyConfig cfg;
  cfg.epsilon = {1e-3, 1e-3, 0.0, 0.0};
  // 0.2 m between samples; the wall sits between the first two.
  auto tube = std::make_shared<const ReachTube>(propagate_tube({0.0, 0.0, 0.0, lim.v_max}, cfg, p, 0.1));
  const std::vector<ConvexPolygon> wall{ConvexPolygon::rectangle(0.09, -1.0, 0.11, 1.0)};
  for (const Box2 & b : tube->position_boxes) EXPECT_FALSE(box_polygon_intersect(b, wall[0]));
  const Certificate c = certify(tube, wall);
  ASSERT_FALSE(c.safe());
  EXPECT_EQ(c.first_collision->time_index, 1u);
}

TEST(Certify, FootprintRadiusGrowsBoxes)
{
  const CommandProfile p = param_to_commands({0.0, -1.0}, VehicleLimits{});
  UncertaintyConfig cfg;
  cfg.epsilon = {0.0, 0.0, 0.0, 0.0};
  auto tube = std::make_shared<const ReachTube>(propagate_tube({}, cfg, p, 0.01));
  const std::vector<ConvexPolygon> obs{ConvexPolygon::rectangle(0.15, -1.0, 1.0, 1.0)};
  EXPECT_TRUE(certify(tube, obs, 0.1).safe());
  EXPECT_FALSE(certify(tube, obs, 0.2).safe());
}

TEST(VerifyTube, MatchesCertifyOfFullTube)
{
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  int unsafe = 0;
  for (int trial = 0; trial < 60; ++trial) {
    const CommandProfile p = param_to_commands({u(rng), u(rng)}, VehicleLimits{});
    UncertaintyConfig cfg;
    cfg.w_bounds = {Box2::from_bounds({-0.1, 0.0}, {0.1, 0.2})};
    std::vector<ConvexPolygon> obs;
    for (int i = 0; i < 3; ++i) {
      const double x = 2.0 * u(rng) + 1.5;
      const double y = 2.0 * u(rng);
      obs.push_back(ConvexPolygon::rectangle(x, y, x + 0.4, y + 0.4));
    }
    const UnicycleState x0{0.0, 0.0, 0.3 * u(rng), 1.0};
    auto full = std::make_shared<const ReachTube>(propagate_tube(x0, cfg, p, 0.01));
    const Certificate a = certify(full, obs, 0.2);
    const Certificate b = verify_tube(x0, cfg, p, 0.01, obs, 0.2);
    ASSERT_EQ(a.verdict, b.verdict);
    ASSERT_EQ(a.first_collision, b.first_collision);
    ASSERT_TRUE(b.tube);
    if (b.safe()) {
      ASSERT_EQ(b.tube->size(), full->size());
    } else {
      ++unsafe;
      ASSERT_EQ(b.tube->size(), b.first_collision->time_index + 1);
    }
    for (std::size_t j = 0; j < b.tube->size(); ++j) {
      ASSERT_EQ(b.tube->states[j].lower, full->states[j].lower);
      ASSERT_EQ(b.tube->states[j].upper, full->states[j].upper);
    }
  }
  EXPECT_GT(unsafe, 5);
  EXPECT_LT(unsafe, 55);
}

}  // namespace
}  // namespace reachplan
