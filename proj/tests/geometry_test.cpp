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
#include <numbers>
#include <random>
#include <stdexcept>

#include "oracles.hpp"
#include "reachplan/geometry.hpp"

namespace reachplan
{
namespace
{

constexpr double kPi = std::numbers::pi;

TEST(IntervalSin, PointInterval)
{
  EXPECT_EQ(interval_sin({0.0, 0.0}), Interval(0.0, 0.0));
}

TEST(IntervalSin, MaximumInsideRange)
{
  const Interval r = interval_sin({0.0, kPi});
  EXPECT_NEAR(r.lo, 0.0, 1e-15);
  EXPECT_EQ(r.hi, 1.0);
}

TEST(IntervalSin, MonotoneRange)
{
  const Interval r = interval_sin({-kPi / 6.0, kPi / 3.0});
  EXPECT_NEAR(r.lo, -0.5, 1e-15);
  EXPECT_NEAR(r.hi, std::sin(kPi / 3.0), 1e-15);
}

TEST(IntervalCos, PointInterval)
{
  EXPECT_EQ(interval_cos({0.0, 0.0}), Interval(1.0, 1.0));
}

TEST(IntervalCos, SymmetricRange)
{
  const Interval r = interval_cos({-kPi / 2.0, kPi / 2.0});
  EXPECT_NEAR(r.lo, 0.0, 1e-15);
  EXPECT_EQ(r.hi, 1.0);
}

TEST(IntervalCos, DecreasingRange)
{
  const Interval r = interval_cos({kPi / 4.0, 3.0 * kPi / 4.0});
  EXPECT_NEAR(r.lo, -std::sqrt(2.0) / 2.0, 1e-15);
  EXPECT_NEAR(r.hi, std::sqrt(2.0) / 2.0, 1e-15);
}

TEST(IntervalTrig, FullPeriodGivesUnitRange)
{
  EXPECT_EQ(interval_sin({-1.0, -1.0 + 2.0 * kPi}), Interval(-1.0, 1.0));
  EXPECT_EQ(interval_cos({3.0, 30.0}), Interval(-1.0, 1.0));
}

TEST(IntervalTrig, SoundAndTightAgainstDenseSampling)
{
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> center(-20.0, 20.0);
  std::uniform_real_distribution<double> width(0.0, 7.0);
  for (int trial = 0; trial < 2000; ++trial) {
    const double lo = center(rng);
    const double hi = lo + (trial % 10 == 0 ? 0.0 : width(rng));
    const Interval a{lo, hi};
    const Interval s = interval_sin(a);
    const Interval c = interval_cos(a);
    const Interval s_ref = oracle::sampled_range([](double t) { return std::sin(t); }, lo, hi, 4001);
    const Interval c_ref = oracle::sampled_range([](double t) { return std::cos(t); }, lo, hi, 4001);
    ASSERT_TRUE(s.contains(s_ref)) << "sin [" << lo << ", " << hi << "]";
    ASSERT_TRUE(c.contains(c_ref)) << "cos [" << lo << ", " << hi << "]";
    // Sample spacing bounds how far the sampled extremum can fall short.
    const double slack = 0.5 * std::pow((hi - lo) / 4000.0, 2) + 1e-12;
    ASSERT_LE(s.width() - s_ref.width(), 2.0 * slack);
    ASSERT_LE(c.width() - c_ref.width(), 2.0 * slack);
  }
}

TEST(IntervalTrig, FusedMatchesSeparate)
{
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> center(-10.0, 10.0);
  std::uniform_real_distribution<double> width(0.0, 8.0);
  for (int trial = 0; trial < 5000; ++trial) {
    const double lo = center(rng);
    const Interval a{lo, lo + (trial % 7 == 0 ? 0.0 : width(rng))};
    Interval s;
    Interval c;
    interval_sincos(a, s, c);
    ASSERT_EQ(s, interval_sin(a));
    ASSERT_EQ(c, interval_cos(a));
  }
}

TEST(IntervalArithmetic, ProductCoversAllSignCombinations)
{
  const Interval r = Interval{-2.0, 3.0} * Interval{-1.0, 4.0};
  EXPECT_EQ(r, Interval(-8.0, 12.0));
  EXPECT_EQ(-2.0 * Interval(1.0, 3.0), Interval(-6.0, -2.0));
  EXPECT_EQ(Interval(1.0, 2.0) - Interval(0.5, 3.0), Interval(-2.0, 1.5));
}

TEST(SeOrder, NestedIsOrdered)
{
  const IntervalVector<1> a = IntervalVector<1>::from_bounds({0.0}, {2.0});
  const IntervalVector<1> b = IntervalVector<1>::from_bounds({0.5}, {1.0});
  EXPECT_TRUE(se_leq(a, b));
}

TEST(SeOrder, OverlappingIsNotOrdered)
{
  const IntervalVector<1> a = IntervalVector<1>::from_bounds({0.0}, {1.0});
  const IntervalVector<1> b = IntervalVector<1>::from_bounds({0.5}, {2.0});
  EXPECT_FALSE(se_leq(a, b));
}

TEST(SeOrder, Reflexive)
{
  const Box2 a = Box2::from_bounds({-1.0, 2.0}, {0.5, 3.0});
  EXPECT_TRUE(se_leq(a, a));
}

TEST(IntervalHull, Example)
{
  const Box2 a = Box2::from_bounds({0.0, 0.0}, {1.0, 1.0});
  const Box2 b = Box2::from_bounds({2.0, 0.5}, {3.0, 1.5});
  EXPECT_EQ(interval_hull(a, b), Box2::from_bounds({0.0, 0.0}, {3.0, 1.5}));
}

TEST(IntervalHull, IdempotentAndContaining)
{
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  for (int trial = 0; trial < 1000; ++trial) {
    IntervalVector<3> a;
    IntervalVector<3> b;
    for (std::size_t i = 0; i < 3; ++i) {
      const double p = u(rng);
      const double q = u(rng);
      const double r = u(rng);
      const double s = u(rng);
      a[i] = {std::min(p, q), std::max(p, q)};
      b[i] = {std::min(r, s), std::max(r, s)};
    }
    EXPECT_EQ(interval_hull(a, a), a);
    const auto h = interval_hull(a, b);
    EXPECT_TRUE(h.contains(a));
    EXPECT_TRUE(h.contains(b));
  }
}

TEST(ConvexPolygon, RejectsInvalidInput)
{
  EXPECT_THROW(ConvexPolygon({{0, 0}, {1, 0}}), std::invalid_argument);
  // Clockwise.
  EXPECT_THROW(ConvexPolygon({{0, 0}, {0, 1}, {1, 1}, {1, 0}}), std::invalid_argument);
  // Collinear vertex.
  EXPECT_THROW(ConvexPolygon({{0, 0}, {1, 0}, {2, 0}, {1, 1}}), std::invalid_argument);
  // Reflex vertex.
  EXPECT_THROW(ConvexPolygon({{0, 0}, {2, 0}, {1, 0.5}, {2, 2}, {0, 2}}), std::invalid_argument);
  EXPECT_THROW(ConvexPolygon({{0, 0}, {1, 0}, {0, NAN}}), std::invalid_argument);
  EXPECT_NO_THROW(ConvexPolygon({{0, 0}, {1, 0}, {0, 1}}));
}

TEST(ConvexPolygon, BoundsAndContainment)
{
  const ConvexPolygon p({{0, 0}, {2, 0}, {1, 3}});
  EXPECT_EQ(p.bounds(), Box2::from_bounds({0.0, 0.0}, {2.0, 3.0}));
  EXPECT_TRUE(p.contains({1.0, 1.0}));
  EXPECT_TRUE(p.contains({1.0, 0.0}));
  EXPECT_FALSE(p.contains({0.1, 2.0}));
}

TEST(ConvexPolygon, TransformRoundTrip)
{
  const ConvexPolygon p = ConvexPolygon::rectangle(1.0, 2.0, 3.0, 4.0);
  const Pose2 pose{{0.5, -1.0}, 0.7};
  const ConvexPolygon q = p.transformed(pose).inverse_transformed(pose);
  for (std::size_t i = 0; i < p.size(); ++i) {
    EXPECT_NEAR(q.vertices()[i].x, p.vertices()[i].x, 1e-12);
    EXPECT_NEAR(q.vertices()[i].y, p.vertices()[i].y, 1e-12);
  }
}

TEST(BoxPolygonIntersect, DisjointSquares)
{
  const Box2 box = Box2::from_bounds({0.0, 0.0}, {1.0, 1.0});
  EXPECT_FALSE(box_polygon_intersect(box, ConvexPolygon::rectangle(4.5, 4.5, 5.5, 5.5)));
}

TEST(BoxPolygonIntersect, OverlappingSquares)
{
  const Box2 box = Box2::from_bounds({0.0, 0.0}, {1.0, 1.0});
  EXPECT_TRUE(box_polygon_intersect(box, ConvexPolygon::rectangle(0.0, -0.5, 1.0, 0.5)));
}

TEST(BoxPolygonIntersect, TouchingCountsAsIntersecting)
{
  const Box2 box = Box2::from_bounds({0.0, 0.0}, {1.0, 1.0});
  EXPECT_TRUE(box_polygon_intersect(box, ConvexPolygon::rectangle(1.0, 0.2, 2.0, 0.8)));
}

TEST(BoxPolygonIntersect, DiagonalSeparationNeedsPolygonAxis)
{
  // Bounding boxes overlap but the triangle's hypotenuse separates them.
  const Box2 box = Box2::from_bounds({0.0, 0.0}, {1.0, 1.0});
  const ConvexPolygon tri({{1.6, 0.6}, {1.6, 1.6}, {0.6, 1.6}});
  EXPECT_FALSE(box_polygon_intersect(box, tri));
}

TEST(BoxPolygonIntersect, AgreesWithSamplingOracle)
{
  std::mt19937_64 rng(2026);
  std::uniform_real_distribution<double> pos(-2.0, 2.0);
  std::uniform_real_distribution<double> size(0.1, 1.5);
  int compared = 0;
  int hits = 0;
  while (compared < 300) {
    const double x = pos(rng);
    const double y = pos(rng);
    const Box2 box = Box2::from_bounds({x, y}, {x + size(rng), y + size(rng)});
    const auto verts = oracle::random_convex(rng, {pos(rng), pos(rng)}, size(rng));
    if (!oracle::strictly_convex_ccw(verts)) continue;
    const auto contact = oracle::sampled_contact(box, verts, 4000, rng);
    if (!contact.intersect && contact.min_distance <= 1e-3) continue;
    ++compared;
    hits += contact.intersect ? 1 : 0;
    ASSERT_EQ(box_polygon_intersect(box, ConvexPolygon(verts)), contact.intersect) << "pair " << compared;
  }
  // Both verdicts occur.
  EXPECT_GT(hits, 30);
  EXPECT_LT(hits, 270);
}

TEST(Distance, PointAndBoxToPolygon)
{
  const ConvexPolygon sq = ConvexPolygon::rectangle(0.0, 0.0, 1.0, 1.0);
  EXPECT_DOUBLE_EQ(point_polygon_distance({0.5, 0.5}, sq), 0.0);
  EXPECT_DOUBLE_EQ(point_polygon_distance({2.0, 0.5}, sq), 1.0);
  EXPECT_DOUBLE_EQ(point_polygon_distance({4.0, 5.0}, sq), 5.0);
  EXPECT_DOUBLE_EQ(box_polygon_distance(Box2::from_bounds({3.0, 0.0}, {4.0, 1.0}), sq), 2.0);
  EXPECT_DOUBLE_EQ(box_polygon_distance(Box2::from_bounds({0.5, 0.5}, {4.0, 1.0}), sq), 0.0);
}

TEST(Distance, BoxToPolygonMatchesSampling)
{
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> pos(-3.0, 3.0);
  std::uniform_real_distribution<double> size(0.1, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    const double x = pos(rng);
    const double y = pos(rng);
    const Box2 box = Box2::from_bounds({x, y}, {x + size(rng), y + size(rng)});
    const auto verts = oracle::random_convex(rng, {pos(rng), pos(rng)}, size(rng));
    if (!oracle::strictly_convex_ccw(verts)) continue;
    const auto contact = oracle::sampled_contact(box, verts, 4000, rng);
    const double d = box_polygon_distance(box, ConvexPolygon(verts));
    // Samples sit on the shapes, so they can only overestimate the gap.
    EXPECT_LE(d, contact.min_distance + 1e-12);
    EXPECT_GE(d, contact.min_distance - 5e-3);
  }
}

}  // namespace
}  // namespace reachplan
