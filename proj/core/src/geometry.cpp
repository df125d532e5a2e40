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

#include "reachplan/geometry.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <utility>

namespace reachplan
{
namespace
{

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// True if some phase + 2*k*pi lies in [lo, hi].
bool contains_critical(double lo, double hi, double phase)
{
  const double k = std::ceil((lo - phase) / kTwoPi);
  return phase + k * kTwoPi <= hi;
}

Interval periodic_range(
  const Interval & a, double (*fn)(double), double max_phase, double min_phase)
{
  if (a.lo == a.hi) {
    const double v = fn(a.lo);
    return {v, v};
  }
  if (a.width() >= kTwoPi) return {-1.0, 1.0};
  const double f_lo = fn(a.lo);
  const double f_hi = fn(a.hi);
  Interval out{std::min(f_lo, f_hi), std::max(f_lo, f_hi)};
  if (contains_critical(a.lo, a.hi, max_phase)) out.hi = 1.0;
  if (contains_critical(a.lo, a.hi, min_phase)) out.lo = -1.0;
  return out;
}

double sin_fn(double x) { return std::sin(x); }
double cos_fn(double x) { return std::cos(x); }

}  // namespace

Interval interval_sin(const Interval & a)
{
  return periodic_range(a, &sin_fn, 0.5 * std::numbers::pi, -0.5 * std::numbers::pi);
}

Interval interval_cos(const Interval & a)
{
  return periodic_range(a, &cos_fn, 0.0, std::numbers::pi);
}

void interval_sincos(const Interval & a, Interval & sin_out, Interval & cos_out)
{
  if (a.lo == a.hi || a.width() >= kTwoPi) {
    sin_out = interval_sin(a);
    cos_out = interval_cos(a);
    return;
  }
  const double s_lo = std::sin(a.lo);
  const double c_lo = std::cos(a.lo);
  const double s_hi = std::sin(a.hi);
  const double c_hi = std::cos(a.hi);
  sin_out = {std::min(s_lo, s_hi), std::max(s_lo, s_hi)};
  cos_out = {std::min(c_lo, c_hi), std::max(c_lo, c_hi)};
  if (contains_critical(a.lo, a.hi, 0.5 * std::numbers::pi)) sin_out.hi = 1.0;
  if (contains_critical(a.lo, a.hi, -0.5 * std::numbers::pi)) sin_out.lo = -1.0;
  if (contains_critical(a.lo, a.hi, 0.0)) cos_out.hi = 1.0;
  if (contains_critical(a.lo, a.hi, std::numbers::pi)) cos_out.lo = -1.0;
}

Vec2 Pose2::apply(Vec2 p) const
{
  const double c = std::cos(heading);
  const double s = std::sin(heading);
  return {origin.x + c * p.x - s * p.y, origin.y + s * p.x + c * p.y};
}

Vec2 Pose2::apply_inverse(Vec2 p) const
{
  const double c = std::cos(heading);
  const double s = std::sin(heading);
  const Vec2 d = p - origin;
  return {c * d.x + s * d.y, -s * d.x + c * d.y};
}

ConvexPolygon::ConvexPolygon(std::vector<Vec2> vertices) : vertices_(std::move(vertices))
{
  const std::size_t n = vertices_.size();
  if (n < 3) {
    throw std::invalid_argument("ConvexPolygon needs at least 3 vertices, got " + std::to_string(n));
  }
  for (const auto & v : vertices_) {
    if (!std::isfinite(v.x) || !std::isfinite(v.y)) {
      throw std::invalid_argument("ConvexPolygon vertex is not finite");
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 e0 = vertices_[(i + 1) % n] - vertices_[i];
    const Vec2 e1 = vertices_[(i + 2) % n] - vertices_[(i + 1) % n];
    if (!(cross(e0, e1) > 0.0)) {
      throw std::invalid_argument(
        "ConvexPolygon must be strictly convex and counterclockwise (vertex " +
        std::to_string((i + 1) % n) + ")");
    }
  }
  compute_bounds();
}

ConvexPolygon::ConvexPolygon(std::vector<Vec2> vertices, Trusted) : vertices_(std::move(vertices))
{
  compute_bounds();
}

void ConvexPolygon::compute_bounds()
{
  Box2 b;
  b[0] = Interval::point(vertices_.front().x);
  b[1] = Interval::point(vertices_.front().y);
  for (const auto & v : vertices_) {
    b[0] = hull(b[0], Interval::point(v.x));
    b[1] = hull(b[1], Interval::point(v.y));
  }
  bounds_ = b;
}

ConvexPolygon ConvexPolygon::rectangle(double x_lo, double y_lo, double x_hi, double y_hi)
{
  return ConvexPolygon({{x_lo, y_lo}, {x_hi, y_lo}, {x_hi, y_hi}, {x_lo, y_hi}});
}

ConvexPolygon ConvexPolygon::from_box(const Box2 & box)
{
  return rectangle(box[0].lo, box[1].lo, box[0].hi, box[1].hi);
}

bool ConvexPolygon::contains(Vec2 p) const
{
  const std::size_t n = vertices_.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 a = vertices_[i];
    const Vec2 b = vertices_[(i + 1) % n];
    if (cross(b - a, p - a) < 0.0) return false;
  }
  return true;
}

ConvexPolygon ConvexPolygon::transformed(const Pose2 & pose) const
{
  std::vector<Vec2> out;
  out.reserve(vertices_.size());
  for (const auto & v : vertices_) out.push_back(pose.apply(v));
  return ConvexPolygon(std::move(out), Trusted{});
}

ConvexPolygon ConvexPolygon::inverse_transformed(const Pose2 & pose) const
{
  std::vector<Vec2> out;
  out.reserve(vertices_.size());
  for (const auto & v : vertices_) out.push_back(pose.apply_inverse(v));
  return ConvexPolygon(std::move(out), Trusted{});
}

bool box_polygon_intersect(const Box2 & box, const ConvexPolygon & poly)
{
  const Box2 & pb = poly.bounds();
  if (box[0].lo > pb[0].hi || pb[0].lo > box[0].hi) return false;
  if (box[1].lo > pb[1].hi || pb[1].lo > box[1].hi) return false;

  const auto & vs = poly.vertices();
  const std::size_t n = vs.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 a = vs[i];
    const Vec2 e = vs[(i + 1) % n] - a;
    // Outward normal of a counterclockwise edge.
    const Vec2 normal{e.y, -e.x};
    // Box corner with the smallest projection onto the normal.
    const double cx = normal.x >= 0.0 ? box[0].lo : box[0].hi;
    const double cy = normal.y >= 0.0 ? box[1].lo : box[1].hi;
    if (dot(normal, Vec2{cx, cy} - a) > 0.0) return false;
  }
  return true;
}

double point_segment_distance(Vec2 p, Vec2 a, Vec2 b)
{
  const Vec2 ab = b - a;
  const double len2 = dot(ab, ab);
  double t = len2 > 0.0 ? dot(p - a, ab) / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  const Vec2 d = p - (a + t * ab);
  return std::sqrt(dot(d, d));
}

double point_polygon_distance(Vec2 p, const ConvexPolygon & poly)
{
  if (poly.contains(p)) return 0.0;
  const auto & vs = poly.vertices();
  const std::size_t n = vs.size();
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    best = std::min(best, point_segment_distance(p, vs[i], vs[(i + 1) % n]));
  }
  return best;
}

double box_polygon_distance(const Box2 & box, const ConvexPolygon & poly)
{
  if (box_polygon_intersect(box, poly)) return 0.0;
  const std::array<Vec2, 4> corners{
    Vec2{box[0].lo, box[1].lo}, Vec2{box[0].hi, box[1].lo}, Vec2{box[0].hi, box[1].hi},
    Vec2{box[0].lo, box[1].hi}};
  const auto & vs = poly.vertices();
  const std::size_t n = vs.size();
  double best = std::numeric_limits<double>::infinity();
  // Disjoint convex sets: the closest pair always involves a vertex of one
  // set and an edge of the other.
  for (const auto & c : corners) {
    for (std::size_t i = 0; i < n; ++i) {
      best = std::min(best, point_segment_distance(c, vs[i], vs[(i + 1) % n]));
    }
  }
  for (const auto & v : vs) {
    for (std::size_t i = 0; i < 4; ++i) {
      best = std::min(best, point_segment_distance(v, corners[i], corners[(i + 1) % 4]));
    }
  }
  return best;
}

}  // namespace reachplan
