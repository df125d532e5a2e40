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

#include "reachplan/scenario.hpp"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>
#include <utility>

namespace reachplan
{

std::string_view to_string(PlannerMode mode)
{
  return mode == PlannerMode::kStandard ? "standard" : "rax";
}

std::string_view to_string(DisturbanceRealization realization)
{
  switch (realization) {
    case DisturbanceRealization::kRandom:
      return "random";
    case DisturbanceRealization::kWorstCase:
      return "worst_case";
    case DisturbanceRealization::kZero:
      return "zero";
  }
  return "unknown";
}

namespace
{

constexpr int kSchemaVersion = 1;

[[noreturn]] void fail(const std::string & where, const std::string & what)
{
  throw ScenarioError(where + ": " + what);
}

void check_keys(const YAML::Node & node, const std::string & where, std::initializer_list<const char *> allowed)
{
  if (!node.IsMap()) fail(where, "expected a mapping");
  for (const auto & kv : node) {
    const auto key = kv.first.as<std::string>();
    bool ok = false;
    for (const char * a : allowed) ok = ok || key == a;
    if (!ok) fail(where, "unknown key '" + key + "'");
  }
}

template <typename T>
T scalar(const YAML::Node & node, const std::string & where)
{
  try {
    return node.as<T>();
  } catch (const YAML::Exception &) {
    fail(where, "invalid value");
  }
}

template <typename T>
void read_opt(const YAML::Node & parent, const char * key, T & out, const std::string & where)
{
  if (const YAML::Node n = parent[key]) out = scalar<T>(n, where + "." + key);
}

std::vector<double> number_list(const YAML::Node & node, const std::string & where)
{
  if (!node.IsSequence()) fail(where, "expected a list of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < node.size(); ++i) out.push_back(scalar<double>(node[i], where));
  return out;
}

std::vector<double> fixed_list(const YAML::Node & node, std::size_t n, const std::string & where)
{
  auto v = number_list(node, where);
  if (v.size() != n) fail(where, "expected " + std::to_string(n) + " numbers");
  return v;
}

Vec2 point(const YAML::Node & node, const std::string & where)
{
  const auto v = fixed_list(node, 2, where);
  return {v[0], v[1]};
}

std::vector<ConvexPolygon> shape(const YAML::Node & node, const std::string & where)
{
  check_keys(node, where, {"rectangle", "polygon", "rotated_rectangle"});
  if (node.size() != 1) fail(where, "expected exactly one shape");
  try {
    if (const YAML::Node r = node["rectangle"]) {
      const auto v = fixed_list(r, 4, where + ".rectangle");
      return {ConvexPolygon::rectangle(v[0], v[1], v[2], v[3])};
    }
    if (const YAML::Node p = node["polygon"]) {
      if (!p.IsSequence()) fail(where + ".polygon", "expected a list of points");
      std::vector<Vec2> pts;
      for (std::size_t i = 0; i < p.size(); ++i) pts.push_back(point(p[i], where + ".polygon"));
      return convex_decompose(std::move(pts));
    }
    const YAML::Node rr = node["rotated_rectangle"];
    const std::string w = where + ".rotated_rectangle";
    check_keys(rr, w, {"center", "size", "angle"});
    if (!rr["center"] || !rr["size"]) fail(w, "center and size are required");
    const Vec2 c = point(rr["center"], w + ".center");
    const Vec2 s = point(rr["size"], w + ".size");
    double angle = 0.0;
    read_opt(rr, "angle", angle, w);
    return {rotated_rectangle(c, s.x, s.y, angle)};
  } catch (const std::invalid_argument & e) {
    fail(where, e.what());
  }
}

DisturbanceRealization parse_realization(const std::string & s, const std::string & where)
{
  if (s == "random") return DisturbanceRealization::kRandom;
  if (s == "worst_case") return DisturbanceRealization::kWorstCase;
  if (s == "zero") return DisturbanceRealization::kZero;
  fail(where, "unknown realization '" + s + "'");
}

PlannerMode parse_mode(const std::string & s, const std::string & where)
{
  if (s == "standard") return PlannerMode::kStandard;
  if (s == "rax") return PlannerMode::kRax;
  fail(where, "unknown mode '" + s + "'");
}

double signed_area(const std::vector<Vec2> & p)
{
  double a = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) a += cross(p[i], p[(i + 1) % p.size()]);
  return 0.5 * a;
}

bool strictly_convex_ccw(const std::vector<Vec2> & p)
{
  const std::size_t n = p.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (!(cross(p[(i + 1) % n] - p[i], p[(i + 2) % n] - p[(i + 1) % n]) > 0.0)) return false;
  }
  return true;
}

bool in_triangle(Vec2 q, Vec2 a, Vec2 b, Vec2 c)
{
  return cross(b - a, q - a) >= 0.0 && cross(c - b, q - b) >= 0.0 && cross(a - c, q - c) >= 0.0;
}

// Drops repeated and collinear vertices.
std::vector<Vec2> simplify(std::vector<Vec2> p)
{
  bool changed = true;
  while (changed && p.size() >= 3) {
    changed = false;
    for (std::size_t i = 0; i < p.size(); ++i) {
      const Vec2 a = p[(i + p.size() - 1) % p.size()];
      const Vec2 b = p[i];
      const Vec2 c = p[(i + 1) % p.size()];
      if (b == c || cross(b - a, c - b) == 0.0) {
        p.erase(p.begin() + static_cast<std::ptrdiff_t>(i));
        changed = true;
        break;
      }
    }
  }
  return p;
}

}  // namespace

ConvexPolygon rotated_rectangle(Vec2 center, double width, double height, double angle)
{
  if (!(width > 0.0 && height > 0.0)) throw std::invalid_argument("rectangle size must be positive");
  const Pose2 pose{center, angle};
  const double hx = 0.5 * width;
  const double hy = 0.5 * height;
  return ConvexPolygon({pose.apply({-hx, -hy}), pose.apply({hx, -hy}), pose.apply({hx, hy}), pose.apply({-hx, hy})});
}

std::vector<ConvexPolygon> convex_decompose(std::vector<Vec2> vertices)
{
  for (const Vec2 & v : vertices) {
    if (!std::isfinite(v.x) || !std::isfinite(v.y)) throw std::invalid_argument("polygon vertices must be finite");
  }
  vertices = simplify(std::move(vertices));
  if (vertices.size() < 3) throw std::invalid_argument("polygon needs at least 3 distinct vertices");
  if (signed_area(vertices) < 0.0) std::reverse(vertices.begin(), vertices.end());
  if (strictly_convex_ccw(vertices)) return {ConvexPolygon(vertices)};

  std::vector<ConvexPolygon> out;
  std::vector<Vec2> p = vertices;
  while (p.size() > 3) {
    bool clipped = false;
    const std::size_t n = p.size();
    for (std::size_t i = 0; i < n && !clipped; ++i) {
      const Vec2 a = p[(i + n - 1) % n];
      const Vec2 b = p[i];
      const Vec2 c = p[(i + 1) % n];
      if (!(cross(b - a, c - b) > 0.0)) continue;
      bool empty = true;
      for (std::size_t k = 0; k < n && empty; ++k) {
        if (k == i || k == (i + 1) % n || k == (i + n - 1) % n) continue;
        empty = !in_triangle(p[k], a, b, c);
      }
      if (!empty) continue;
      out.emplace_back(std::vector<Vec2>{a, b, c});
      p.erase(p.begin() + static_cast<std::ptrdiff_t>(i));
      p = simplify(std::move(p));
      clipped = true;
    }
    if (!clipped) throw std::invalid_argument("polygon is not simple");
  }
  if (p.size() == 3) out.emplace_back(p);
  return out;
}

void Scenario::validate() const
{
  if (schema_version != kSchemaVersion) throw ScenarioError("unsupported schema_version");
  try {
    limits.validate();
    verifier.validate();
    repair.validate();
  } catch (const std::invalid_argument & e) {
    throw ScenarioError(e.what());
  }
  if (!(goal_radius > 0.0)) throw ScenarioError("goal_radius must be positive");
  if (!(robot_radius >= 0.0)) throw ScenarioError("robot_radius must be >= 0");
  if (frs.n_k < 3 || frs.n_k % 2 == 0) throw ScenarioError("frs.n_k must be odd and >= 3");
  if (!(frs.dt > 0.0)) throw ScenarioError("frs.dt must be positive");
  if (!(verifier_dt > 0.0)) throw ScenarioError("verifier.dt must be positive");
  if (!(sim_dt > 0.0)) throw ScenarioError("simulation.dt must be positive");
  if (!(replan_period > 0.0 && replan_period <= limits.t_plan + 1e-12)) {
    throw ScenarioError("simulation.replan_period must lie in (0, t_plan]");
  }
  const double ratio = replan_period / sim_dt;
  if (std::abs(ratio - std::round(ratio)) > 1e-9) throw ScenarioError("simulation.dt must divide the replan period");
  if (max_cycles < 1) throw ScenarioError("max_cycles must be >= 1");
  if (!tracking.v0_offset.valid()) throw ScenarioError("tracking.v0_offset must be an interval");
  if (tracking.samples < 1) throw ScenarioError("tracking.samples must be >= 1");
  for (const DisturbancePatch & p : patches) {
    if (!p.w_bounds.valid()) throw ScenarioError("patch bounds must be intervals");
  }
}

Scenario parse_scenario(std::string_view yaml_text)
{
  YAML::Node root;
  try {
    root = YAML::Load(std::string(yaml_text));
  } catch (const YAML::Exception & e) {
    throw ScenarioError(std::string("invalid YAML: ") + e.what());
  }
  check_keys(
    root, "scenario",
    {"schema_version", "name", "mode", "seed", "max_cycles", "start", "goal", "goal_radius", "robot_radius",
     "limits", "frs", "tracking", "verifier", "repair", "simulation", "obstacles", "patches"});

  Scenario s;
  if (!root["schema_version"]) fail("scenario", "schema_version is required");
  s.schema_version = scalar<int>(root["schema_version"], "schema_version");
  if (s.schema_version != kSchemaVersion) {
    fail("schema_version", "unsupported version " + std::to_string(s.schema_version));
  }
  read_opt(root, "name", s.name, "scenario");
  if (const YAML::Node m = root["mode"]) s.mode = parse_mode(scalar<std::string>(m, "mode"), "mode");
  read_opt(root, "seed", s.seed, "scenario");
  read_opt(root, "max_cycles", s.max_cycles, "scenario");
  read_opt(root, "goal_radius", s.goal_radius, "scenario");
  read_opt(root, "robot_radius", s.robot_radius, "scenario");

  if (const YAML::Node n = root["start"]) {
    check_keys(n, "start", {"x", "y", "h", "v"});
    read_opt(n, "x", s.start.x, "start");
    read_opt(n, "y", s.start.y, "start");
    read_opt(n, "h", s.start.h, "start");
    read_opt(n, "v", s.start.v, "start");
  }
  if (!root["goal"]) fail("scenario", "goal is required");
  s.goal = point(root["goal"], "goal");

  if (const YAML::Node n = root["limits"]) {
    check_keys(n, "limits", {"v_max", "w_max", "a_max", "k_a", "t_plan", "t_stop"});
    read_opt(n, "v_max", s.limits.v_max, "limits");
    read_opt(n, "w_max", s.limits.w_max, "limits");
    read_opt(n, "a_max", s.limits.a_max, "limits");
    read_opt(n, "k_a", s.limits.k_a, "limits");
    read_opt(n, "t_plan", s.limits.t_plan, "limits");
    read_opt(n, "t_stop", s.limits.t_stop, "limits");
  }
  s.replan_period = s.limits.t_plan;

  if (const YAML::Node n = root["frs"]) {
    check_keys(n, "frs", {"n_k", "dt", "cache"});
    read_opt(n, "n_k", s.frs.n_k, "frs");
    read_opt(n, "dt", s.frs.dt, "frs");
    if (const YAML::Node c = n["cache"]) s.frs.cache = scalar<std::string>(c, "frs.cache");
  }
  if (const YAML::Node n = root["tracking"]) {
    check_keys(n, "tracking", {"v0_offset", "samples", "seed", "per_cell", "rate_limit"});
    if (const YAML::Node o = n["v0_offset"]) {
      const Vec2 v = point(o, "tracking.v0_offset");
      s.tracking.v0_offset = {v.x, v.y};
    }
    read_opt(n, "samples", s.tracking.samples, "tracking");
    read_opt(n, "seed", s.tracking.seed, "tracking");
    read_opt(n, "per_cell", s.tracking.per_cell, "tracking");
    read_opt(n, "rate_limit", s.tracking.rate_limit, "tracking");
  }
  if (const YAML::Node n = root["verifier"]) {
    check_keys(n, "verifier", {"epsilon", "dt", "step_pad"});
    if (const YAML::Node e = n["epsilon"]) {
      const auto v = fixed_list(e, 4, "verifier.epsilon");
      for (std::size_t i = 0; i < 4; ++i) s.verifier.epsilon[i] = v[i];
    }
    read_opt(n, "dt", s.verifier_dt, "verifier");
    read_opt(n, "step_pad", s.verifier.step_pad, "verifier");
  }
  if (const YAML::Node n = root["repair"]) {
    check_keys(n, "repair", {"speed_backoff_factors", "lateral_push_steps", "tighten_buffers", "time_budget"});
    if (n["speed_backoff_factors"]) {
      s.repair.speed_backoff_factors = number_list(n["speed_backoff_factors"], "repair.speed_backoff_factors");
    }
    if (n["lateral_push_steps"]) {
      s.repair.lateral_push_steps = number_list(n["lateral_push_steps"], "repair.lateral_push_steps");
    }
    if (n["tighten_buffers"]) s.repair.tighten_buffers = number_list(n["tighten_buffers"], "repair.tighten_buffers");
    read_opt(n, "time_budget", s.repair.time_budget, "repair");
  }
  if (const YAML::Node n = root["simulation"]) {
    check_keys(n, "simulation", {"dt", "realization", "replan_period"});
    read_opt(n, "dt", s.sim_dt, "simulation");
    read_opt(n, "replan_period", s.replan_period, "simulation");
    if (const YAML::Node r = n["realization"]) {
      s.realization = parse_realization(scalar<std::string>(r, "simulation.realization"), "simulation.realization");
    }
  }
  if (const YAML::Node n = root["obstacles"]) {
    if (!n.IsSequence()) fail("obstacles", "expected a list");
    for (std::size_t i = 0; i < n.size(); ++i) {
      for (auto & piece : shape(n[i], "obstacles[" + std::to_string(i) + "]")) s.obstacles.push_back(std::move(piece));
    }
  }
  if (const YAML::Node n = root["patches"]) {
    if (!n.IsSequence()) fail("patches", "expected a list");
    for (std::size_t i = 0; i < n.size(); ++i) {
      const std::string where = "patches[" + std::to_string(i) + "]";
      check_keys(n[i], where, {"region", "w_lo", "w_hi"});
      if (!n[i]["region"] || !n[i]["w_lo"] || !n[i]["w_hi"]) fail(where, "region, w_lo and w_hi are required");
      const auto pieces = shape(n[i]["region"], where + ".region");
      const Vec2 lo = point(n[i]["w_lo"], where + ".w_lo");
      const Vec2 hi = point(n[i]["w_hi"], where + ".w_hi");
      Box2 w;
      w[0] = {lo.x, hi.x};
      w[1] = {lo.y, hi.y};
      for (const auto & piece : pieces) s.patches.push_back({piece, w});
    }
  }
  s.validate();
  return s;
}

Scenario load_scenario(const std::filesystem::path & path)
{
  std::ifstream in(path);
  if (!in) throw ScenarioError("cannot open scenario file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_scenario(ss.str());
}

}  // namespace reachplan
