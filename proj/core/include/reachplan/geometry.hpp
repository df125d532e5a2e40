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

#ifndef REACHPLAN__GEOMETRY_HPP_
#define REACHPLAN__GEOMETRY_HPP_

#include <algorithm>
#include <array>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace reachplan
{

/// Closed scalar interval [lo, hi]. Plain floating point, no directed rounding.
struct Interval
{
  double lo = 0.0;
  double hi = 0.0;

  constexpr Interval() = default;
  constexpr Interval(double lo_in, double hi_in) : lo(lo_in), hi(hi_in) {}
  static constexpr Interval point(double v) { return {v, v}; }

  constexpr double width() const { return hi - lo; }
  constexpr double mid() const { return 0.5 * (lo + hi); }
  constexpr bool valid() const { return lo <= hi; }
  constexpr bool contains(double v) const { return lo <= v && v <= hi; }
  constexpr bool contains(const Interval & o) const { return lo <= o.lo && o.hi <= hi; }

  friend constexpr bool operator==(const Interval &, const Interval &) = default;
};

constexpr Interval operator+(const Interval & a, const Interval & b)
{
  return {a.lo + b.lo, a.hi + b.hi};
}

constexpr Interval operator-(const Interval & a, const Interval & b)
{
  return {a.lo - b.hi, a.hi - b.lo};
}

constexpr Interval operator*(const Interval & a, const Interval & b)
{
  const double p1 = a.lo * b.lo;
  const double p2 = a.lo * b.hi;
  const double p3 = a.hi * b.lo;
  const double p4 = a.hi * b.hi;
  return {std::min(std::min(p1, p2), std::min(p3, p4)), std::max(std::max(p1, p2), std::max(p3, p4))};
}

constexpr Interval operator*(double s, const Interval & a)
{
  return s >= 0.0 ? Interval{s * a.lo, s * a.hi} : Interval{s * a.hi, s * a.lo};
}

constexpr Interval hull(const Interval & a, const Interval & b)
{
  return {std::min(a.lo, b.lo), std::max(a.hi, b.hi)};
}

/// Exact range of sin over `a`, using the critical points pi/2 + k*pi.
Interval interval_sin(const Interval & a);
/// Exact range of cos over `a`, using the critical points k*pi.
Interval interval_cos(const Interval & a);
/// Both ranges at once; equal to interval_sin and interval_cos.
void interval_sincos(const Interval & a, Interval & sin_out, Interval & cos_out);

/// Axis-aligned box in R^N under the componentwise order.
template <std::size_t N>
struct IntervalVector
{
  std::array<Interval, N> c{};

  static constexpr std::size_t dims() { return N; }

  constexpr Interval & operator[](std::size_t i) { return c[i]; }
  constexpr const Interval & operator[](std::size_t i) const { return c[i]; }

  static constexpr IntervalVector from_bounds(
    const std::array<double, N> & lower, const std::array<double, N> & upper)
  {
    IntervalVector out;
    for (std::size_t i = 0; i < N; ++i) out.c[i] = {lower[i], upper[i]};
    return out;
  }

  static constexpr IntervalVector point(const std::array<double, N> & p)
  {
    return from_bounds(p, p);
  }

  constexpr std::array<double, N> lower() const
  {
    std::array<double, N> out{};
    for (std::size_t i = 0; i < N; ++i) out[i] = c[i].lo;
    return out;
  }

  constexpr std::array<double, N> upper() const
  {
    std::array<double, N> out{};
    for (std::size_t i = 0; i < N; ++i) out[i] = c[i].hi;
    return out;
  }

  constexpr bool valid() const
  {
    return std::all_of(c.begin(), c.end(), [](const Interval & i) { return i.valid(); });
  }

  constexpr bool contains(const IntervalVector & o) const
  {
    for (std::size_t i = 0; i < N; ++i) {
      if (!c[i].contains(o.c[i])) return false;
    }
    return true;
  }

  constexpr bool contains(const std::array<double, N> & p) const
  {
    for (std::size_t i = 0; i < N; ++i) {
      if (!c[i].contains(p[i])) return false;
    }
    return true;
  }

  /// Grows every side by `pad`; a negative pad shrinks.
  constexpr IntervalVector padded(double pad) const
  {
    IntervalVector out = *this;
    for (auto & i : out.c) {
      i.lo -= pad;
      i.hi += pad;
    }
    return out;
  }

  constexpr double max_width() const
  {
    double w = 0.0;
    for (const auto & i : c) w = std::max(w, i.width());
    return w;
  }

  friend constexpr bool operator==(const IntervalVector &, const IntervalVector &) = default;
};

using Box2 = IntervalVector<2>;

/// Southeast order on interval pairs: a <=_SE b iff lower(a) <= lower(b) and
/// upper(b) <= upper(a), i.e. b is nested in a.
template <std::size_t N>
constexpr bool se_leq(const IntervalVector<N> & a, const IntervalVector<N> & b)
{
  return a.contains(b);
}

/// Smallest box containing both arguments.
template <std::size_t N>
constexpr IntervalVector<N> interval_hull(const IntervalVector<N> & a, const IntervalVector<N> & b)
{
  IntervalVector<N> out;
  for (std::size_t i = 0; i < N; ++i) out.c[i] = hull(a.c[i], b.c[i]);
  return out;
}

struct Vec2
{
  double x = 0.0;
  double y = 0.0;

  friend constexpr bool operator==(const Vec2 &, const Vec2 &) = default;
};

constexpr Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
constexpr Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
constexpr Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
constexpr double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
constexpr double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }

/// Planar rigid transform: rotate by `heading`, then translate by `origin`.
struct Pose2
{
  Vec2 origin;
  double heading = 0.0;

  Vec2 apply(Vec2 p) const;
  Vec2 apply_inverse(Vec2 p) const;
};

/// Strictly convex polygon with counterclockwise vertices. Construction
/// validates the invariant and throws std::invalid_argument otherwise.
class ConvexPolygon
{
public:
  explicit ConvexPolygon(std::vector<Vec2> vertices);

  /// Axis-aligned rectangle [x_lo, x_hi] x [y_lo, y_hi].
  static ConvexPolygon rectangle(double x_lo, double y_lo, double x_hi, double y_hi);
  static ConvexPolygon from_box(const Box2 & box);

  const std::vector<Vec2> & vertices() const { return vertices_; }
  std::size_t size() const { return vertices_.size(); }
  const Box2 & bounds() const { return bounds_; }

  /// Closed containment (boundary counts as inside).
  bool contains(Vec2 p) const;

  ConvexPolygon transformed(const Pose2 & pose) const;
  ConvexPolygon inverse_transformed(const Pose2 & pose) const;

private:
  struct Trusted
  {
  };
  ConvexPolygon(std::vector<Vec2> vertices, Trusted);
  void compute_bounds();

  std::vector<Vec2> vertices_;
  Box2 bounds_;
};

/// Closed-set intersection test by separating axes (box axes and polygon
/// edge normals). Touching counts as intersecting.
bool box_polygon_intersect(const Box2 & box, const ConvexPolygon & poly);

/// Euclidean distance between a closed box and a closed convex polygon;
/// zero when they intersect.
double box_polygon_distance(const Box2 & box, const ConvexPolygon & poly);

/// Euclidean distance from a point to a closed convex polygon; zero inside.
double point_polygon_distance(Vec2 p, const ConvexPolygon & poly);

/// Distance from `p` to the closed segment [a, b].
double point_segment_distance(Vec2 p, Vec2 a, Vec2 b);

}  // namespace reachplan

#endif  // REACHPLAN__GEOMETRY_HPP_
