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

#include "reachplan/harness.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>
#include <utility>

namespace reachplan
{
namespace
{

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start)
{
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string resource_key(const Scenario & s)
{
  const auto & l = s.limits;
  const auto & tr = s.tracking;
  return fmt::format(
    "{:a}|{:a}|{:a}|{:a}|{:a}|{:a}|{}|{:a}|{:a}|{:a}|{:a}|{}|{}|{}|{}", l.v_max, l.w_max, l.a_max, l.k_a,
    l.t_plan, l.t_stop, s.frs.n_k, s.frs.dt, s.robot_radius, tr.v0_offset.lo, tr.v0_offset.hi, tr.samples, tr.seed,
    tr.per_cell, s.frs.cache.string());
}

std::vector<double> verifier_times(double horizon, double dt_v)
{
  const auto steps = static_cast<std::size_t>(std::llround(horizon / dt_v));
  std::vector<double> t(steps + 1);
  for (std::size_t j = 0; j <= steps; ++j) t[j] = static_cast<double>(j) * dt_v;
  return t;
}

bool box_inside(const Box2 & box, const ConvexPolygon & poly)
{
  return poly.contains({box[0].lo, box[1].lo}) && poly.contains({box[0].hi, box[1].lo}) &&
         poly.contains({box[0].hi, box[1].hi}) && poly.contains({box[0].lo, box[1].hi});
}

Box2 zero_box()
{
  return Box2{};
}

Box2 disturbance_rule(const Box2 & region, std::span<const ConvexPolygon> regions, std::span<const DisturbancePatch> patches)
{
  bool any = false;
  bool inside_one = false;
  Box2 acc;
  for (std::size_t i = 0; i < patches.size(); ++i) {
    if (!box_polygon_intersect(region, regions[i])) continue;
    acc = any ? interval_hull(acc, patches[i].w_bounds) : patches[i].w_bounds;
    any = true;
    inside_one = inside_one || box_inside(region, regions[i]);
  }
  if (!any) return zero_box();
  // Part of the region may lie outside every patch, where w is zero.
  if (!inside_one) acc = interval_hull(acc, zero_box());
  return acc;
}

std::vector<ConvexPolygon> patch_regions(std::span<const DisturbancePatch> patches)
{
  std::vector<ConvexPolygon> out;
  out.reserve(patches.size());
  for (const auto & p : patches) out.push_back(p.region);
  return out;
}

bool collides(const UnicycleState & x, const Scenario & s, std::size_t & obstacle)
{
  for (std::size_t i = 0; i < s.obstacles.size(); ++i) {
    if (point_polygon_distance(x.position(), s.obstacles[i]) <= s.robot_radius) {
      obstacle = i;
      return true;
    }
  }
  return false;
}

bool at_goal(const UnicycleState & x, const Scenario & s)
{
  const Vec2 d = x.position() - s.goal;
  return std::sqrt(dot(d, d)) <= s.goal_radius;
}

IntervalVector<2> admissible_params(const Scenario & s, PlannerMode mode, const UnicycleState & x)
{
  auto k_adm = IntervalVector<2>::from_bounds({-1.0, -1.0}, {1.0, 1.0});
  if (mode != PlannerMode::kStandard || !s.tracking.rate_limit) return k_adm;
  const double delta = std::max(std::abs(s.tracking.v0_offset.lo), std::abs(s.tracking.v0_offset.hi));
  const double v_max = s.limits.v_max;
  const double v_lo = std::clamp(x.v - delta, 0.0, v_max);
  const double v_hi = std::clamp(x.v + delta, 0.0, v_max);
  k_adm[1] = {std::clamp(2.0 * v_lo / v_max - 1.0, -1.0, 1.0), std::clamp(2.0 * v_hi / v_max - 1.0, -1.0, 1.0)};
  return k_adm;
}

Vec2 disturbance_estimate(const std::vector<Box2> & w, const Certificate & cert)
{
  if (w.empty()) return {};
  std::size_t last = w.size() - 1;
  if (cert.first_collision && cert.first_collision->time_index < w.size()) last = cert.first_collision->time_index;
  Box2 acc = w.front();
  for (std::size_t j = 1; j <= last; ++j) acc = interval_hull(acc, w[j]);
  return {acc[0].mid(), acc[1].mid()};
}

}  // namespace

std::shared_ptr<const PlannerResources> prepare_resources(const Scenario & scenario)
{
  static std::mutex mutex;
  static std::map<std::string, std::shared_ptr<const PlannerResources>> cache;

  scenario.validate();
  const std::string key = resource_key(scenario);
  std::lock_guard<std::mutex> lock(mutex);
  if (auto it = cache.find(key); it != cache.end()) return it->second;

  auto res = std::make_shared<PlannerResources>();
  const auto & f = scenario.frs;
  res->plain = f.cache.empty()
                 ? build_frs(scenario.limits, f.n_k, f.dt, scenario.robot_radius)
                 : load_or_build_frs(f.cache, scenario.limits, f.n_k, f.dt, scenario.robot_radius);
  const auto & tr = scenario.tracking;
  res->tracking = tr.per_cell
                    ? estimate_tracking_error_per_cell(scenario.limits, f.n_k, tr.v0_offset, f.dt)
                    : estimate_tracking_error(scenario.limits, tr.samples, tr.v0_offset, tr.seed, f.dt);
  res->inflated = inflate_frs(res->plain, res->tracking);
  cache.emplace(key, res);
  return res;
}

std::vector<Box2> disturbance_over_regions(std::span<const Box2> regions, std::span<const DisturbancePatch> patches)
{
  const auto polys = patch_regions(patches);
  std::vector<Box2> out;
  out.reserve(regions.size());
  for (const Box2 & r : regions) out.push_back(disturbance_rule(r, polys, patches));
  return out;
}

std::vector<Box2> measure_disturbance(
  const CommandProfile & profile, const PlanState & pose, std::span<const DisturbancePatch> patches,
  const FrsTable & frs, std::span<const double> times)
{
  std::vector<Box2> out(times.size(), zero_box());
  if (patches.empty()) return out;
  std::vector<ConvexPolygon> body;
  body.reserve(patches.size());
  for (const auto & p : patches) body.push_back(p.region.inverse_transformed(pose.pose()));
  const std::size_t cell = frs.cell_of(profile.param());
  for (std::size_t j = 0; j < times.size(); ++j) {
    // Footprints carry the robot radius; the disturbance acts on the center.
    const Box2 center = frs.footprint(cell, frs.time_index(times[j])).padded(-frs.robot_radius());
    out[j] = disturbance_rule(center, body, patches);
  }
  return out;
}

Certificate verify_candidate(
  const TrajParam & k, const UnicycleState & x_now, const Scenario & scenario, const FrsTable & plain,
  std::vector<Box2> * w_bounds_out, int max_refinements)
{
  const CommandProfile profile = param_to_commands(k, scenario.limits);
  const auto times = verifier_times(profile.horizon(), scenario.verifier_dt);
  UncertaintyConfig cfg = scenario.verifier;
  cfg.w_bounds = measure_disturbance(profile, plan_state_of(x_now), scenario.patches, plain, times);

  for (int iter = 0;; ++iter) {
    Certificate cert = verify_tube(
      x_now, cfg, profile, scenario.verifier_dt, scenario.obstacles, scenario.robot_radius);
    // Widening the bounds only grows the tube, so a hit now is a hit at the fixpoint.
    if (!cert.safe()) {
      if (w_bounds_out) *w_bounds_out = cfg.w_bounds;
      return cert;
    }
    const ReachTube & tube = *cert.tube;
    std::vector<Box2> regions;
    regions.reserve(tube.size());
    regions.push_back(tube.position_boxes.front());
    for (const Box2 & h : tube.swept_hulls) regions.push_back(h);
    const auto need = disturbance_over_regions(regions, scenario.patches);

    std::optional<std::size_t> uncovered;
    for (std::size_t j = 0; j < need.size(); ++j) {
      if (se_leq(cfg.w_bounds[j], need[j])) continue;
      if (!uncovered) uncovered = j;
      cfg.w_bounds[j] = interval_hull(cfg.w_bounds[j], need[j]);
    }
    if (w_bounds_out) *w_bounds_out = cfg.w_bounds;
    if (!uncovered) return cert;
    if (iter >= max_refinements) {
      cert.verdict = Verdict::kUnsafe;
      cert.first_collision = Collision{*uncovered, kUnclosedDisturbance};
      return cert;
    }
  }
}

std::string_view to_string(CycleAction action)
{
  return action == CycleAction::kExecute ? "execute" : "failsafe";
}

std::string_view to_string(OutcomeKind kind)
{
  switch (kind) {
    case OutcomeKind::kReachedGoal:
      return "reached_goal";
    case OutcomeKind::kCollided:
      return "collided";
    case OutcomeKind::kFailsafeStop:
      return "failsafe_stop";
    case OutcomeKind::kMaxCycles:
      return "max_cycles";
  }
  return "unknown";
}

int exit_code(OutcomeKind kind)
{
  switch (kind) {
    case OutcomeKind::kCollided:
      return 2;
    case OutcomeKind::kFailsafeStop:
      return 3;
    default:
      return 0;
  }
}

std::shared_ptr<const ReachTube> CycleRecord::final_tube() const
{
  if (repair) {
    if (repair->repaired) return repair->certificate.tube;
  }
  if (certificate) return certificate->tube;
  return nullptr;
}

double RunResult::path_length() const
{
  double len = 0.0;
  for (std::size_t i = 1; i < trajectory.size(); ++i) {
    const Vec2 d = trajectory[i].state.position() - trajectory[i - 1].state.position();
    len += std::sqrt(dot(d, d));
  }
  return len;
}

std::size_t RunResult::repairs_invoked() const
{
  return static_cast<std::size_t>(
    std::count_if(cycles.begin(), cycles.end(), [](const CycleRecord & c) { return c.repair.has_value(); }));
}

RunResult run(const Scenario & scenario, const RunOptions & options)
{
  const auto res = prepare_resources(scenario);
  return run(scenario, *res, options);
}

RunResult run(const Scenario & scenario, const PlannerResources & res, const RunOptions & options)
{
  scenario.validate();
  RunResult out;
  out.scenario = scenario.name;
  out.mode = options.mode.value_or(scenario.mode);
  out.seed = options.seed.value_or(scenario.seed);
  out.realization = options.realization.value_or(scenario.realization);

  const bool rax = out.mode == PlannerMode::kRax;
  const FrsTable & frs = rax ? res.plain : res.inflated;
  const VehicleLimits & lim = scenario.limits;
  DisturbanceSampler sampler(out.realization, out.seed);
  const auto times = verifier_times(lim.horizon(), scenario.verifier_dt);

  UnicycleState x = scenario.start;
  double t = 0.0;
  out.trajectory.push_back({t, x, {}});

  std::size_t obstacle = 0;
  auto finish = [&](OutcomeKind kind) {
    out.outcome = kind;
    out.end_time = t;
    return out;
  };
  if (collides(x, scenario, obstacle)) {
    out.collision = Collision{0, obstacle};
    return finish(OutcomeKind::kCollided);
  }
  if (at_goal(x, scenario)) return finish(OutcomeKind::kReachedGoal);

  // Executes `profile` over [tau0, tau1]; returns an outcome on termination.
  auto execute = [&](const CommandProfile & profile, double tau0, double tau1) -> std::optional<OutcomeKind> {
    const auto steps = std::llround((tau1 - tau0) / scenario.sim_dt);
    for (long long i = 0; i < steps; ++i) {
      const double tau = tau0 + static_cast<double>(i) * scenario.sim_dt;
      Vec2 w;
      x = hifi_step(x, tau, scenario.sim_dt, profile, scenario.patches, sampler, &w);
      out.trajectory.back().w = w;
      t = out.trajectory.back().t + scenario.sim_dt;
      out.trajectory.push_back({t, x, {}});
      if (collides(x, scenario, obstacle)) {
        out.collision = Collision{out.trajectory.size() - 1, obstacle};
        return OutcomeKind::kCollided;
      }
      if (at_goal(x, scenario)) return OutcomeKind::kReachedGoal;
    }
    return std::nullopt;
  };

  // A moving start counts as committed to holding its speed straight ahead.
  std::optional<CommandProfile> committed;
  if (x.v > 0.0) {
    committed = param_to_commands({0.0, std::clamp(2.0 * x.v / lim.v_max - 1.0, -1.0, 1.0)}, lim);
  }

  for (int c = 0; c < scenario.max_cycles; ++c) {
    CycleRecord rec;
    rec.index = static_cast<std::size_t>(c);
    rec.sample = out.trajectory.size() - 1;
    rec.t = t;
    rec.start = x;
    const auto cycle_start = Clock::now();
    const PlanState pose = plan_state_of(x);

    PlanningProblem problem;
    problem.pose = pose;
    problem.goal = scenario.goal;
    problem.obstacles = scenario.obstacles;
    problem.frs = &frs;
    problem.k_adm = admissible_params(scenario, out.mode, x);

    auto stage = Clock::now();
    const PreparedConstraints prepared = prepare_constraints(problem);
    rec.timings.constraint_setup = seconds_since(stage);

    stage = Clock::now();
    rec.plan = solve(problem, prepared);
    rec.timings.rtd_solve = seconds_since(stage);

    std::optional<TrajParam> chosen;
    if (rec.plan.feasible()) {
      const TrajParam k = *rec.plan.k_star;
      const CommandProfile profile = param_to_commands(k, lim);
      stage = Clock::now();
      const auto reference = plan_rollout(pose, profile, times);
      const auto measured = measure_disturbance(profile, pose, scenario.patches, res.plain, times);
      rec.timings.reference_rollout = seconds_since(stage);
      (void)reference;

      if (!rax) {
        chosen = k;
      } else {
        std::vector<Box2> w_bounds;
        stage = Clock::now();
        rec.certificate = verify_candidate(k, x, scenario, res.plain, &w_bounds);
        rec.timings.verify = seconds_since(stage);
        if (rec.certificate->safe()) {
          chosen = k;
        } else {
          stage = Clock::now();
          RepairContext ctx;
          ctx.cfg = scenario.repair;
          ctx.pose = pose;
          ctx.w_estimate = disturbance_estimate(w_bounds.empty() ? measured : w_bounds, *rec.certificate);
          ctx.verify = [&](const TrajParam & kk) { return verify_candidate(kk, x, scenario, res.plain); };
          ctx.resolve = [&](double buffer) {
            PlanningProblem tight = problem;
            tight.buffer = buffer;
            return solve(tight);
          };
          rec.repair = repair(k, *rec.certificate, ctx);
          rec.timings.repair_loop = seconds_since(stage);
          if (rec.repair->repaired) chosen = rec.repair->k_safe;
        }
      }
    }
    rec.timings.total = seconds_since(cycle_start);

    if (chosen) {
      rec.action = CycleAction::kExecute;
      rec.executed = chosen;
      out.cycles.push_back(rec);
      const CommandProfile profile = param_to_commands(*chosen, lim);
      if (auto done = execute(profile, 0.0, scenario.replan_period)) return finish(*done);
      committed = profile;
      continue;
    }

    rec.action = CycleAction::kFailsafe;
    out.cycles.push_back(rec);
    if (committed) {
      if (auto done = execute(*committed, scenario.replan_period, committed->horizon())) return finish(*done);
    }
    return finish(OutcomeKind::kFailsafeStop);
  }
  return finish(OutcomeKind::kMaxCycles);
}

std::vector<BenchRow> bench(const Scenario & scenario, int trials, const RunOptions & options)
{
  if (trials < 1) throw std::invalid_argument("bench needs at least one trial");
  const auto res = prepare_resources(scenario);
  const std::uint64_t base = options.seed.value_or(scenario.seed);
  (void)run(scenario, *res, options);  // warm-up, untimed

  constexpr std::size_t kStages = 6;
  std::vector<std::array<double, kStages>> per_trial;
  for (int i = 0; i < trials; ++i) {
    RunOptions o = options;
    o.seed = base + static_cast<std::uint64_t>(i);
    const RunResult r = run(scenario, *res, o);
    std::array<double, kStages> sum{};
    for (const auto & c : r.cycles) {
      const auto & tm = c.timings;
      const std::array<double, kStages> v{
        tm.constraint_setup, tm.rtd_solve, tm.reference_rollout, tm.verify, tm.repair_loop, tm.total};
      for (std::size_t s = 0; s < kStages; ++s) sum[s] += v[s];
    }
    const double n = r.cycles.empty() ? 1.0 : static_cast<double>(r.cycles.size());
    for (double & s : sum) s /= n;
    per_trial.push_back(sum);
  }

  static const std::array<const char *, kStages> names{
    "constraint setup", "RTD solve", "reference rollout", "verify", "repair loop", "total cycle"};
  std::vector<BenchRow> rows;
  for (std::size_t s = 0; s < kStages; ++s) {
    double mean = 0.0;
    for (const auto & p : per_trial) mean += p[s];
    mean /= static_cast<double>(per_trial.size());
    double var = 0.0;
    for (const auto & p : per_trial) var += (p[s] - mean) * (p[s] - mean);
    const double std = per_trial.size() > 1 ? std::sqrt(var / static_cast<double>(per_trial.size() - 1)) : 0.0;
    rows.push_back({names[s], mean, std});
  }
  return rows;
}

std::string format_bench_table(std::span<const BenchRow> rows)
{
  std::string out = fmt::format("{:<20} {:>12} {:>12}\n", "stage", "mean [ms]", "std [ms]");
  for (const auto & r : rows) out += fmt::format("{:<20} {:>12.4f} {:>12.4f}\n", r.name, r.mean * 1e3, r.std * 1e3);
  return out;
}

}  // namespace reachplan
