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

#include <benchmark/benchmark.h>

#include <vector>

#include "reachplan/frs.hpp"
#include "reachplan/geometry.hpp"
#include "reachplan/planner.hpp"
#include "reachplan/scenario.hpp"
#include "reachplan/verifier.hpp"

namespace reachplan
{
namespace
{

void BM_IntervalSinCos(benchmark::State & state)
{
  Interval s;
  Interval c;
  double lo = -3.0;
  for (auto _ : state) {
    interval_sincos(Interval(lo, lo + 0.7), s, c);
    benchmark::DoNotOptimize(s);
    benchmark::DoNotOptimize(c);
    lo = lo > 3.0 ? -3.0 : lo + 0.01;
  }
}
BENCHMARK(BM_IntervalSinCos);

void BM_BoxPolygonIntersect(benchmark::State & state)
{
  const ConvexPolygon poly = rotated_rectangle({1.0, 0.5}, 1.0, 0.4, 0.6);
  const Box2 box = Box2::from_bounds({0.2, 0.1}, {0.9, 0.4});
  for (auto _ : state) benchmark::DoNotOptimize(box_polygon_intersect(box, poly));
}
BENCHMARK(BM_BoxPolygonIntersect);

void BM_PropagateTube(benchmark::State & state)
{
  const CommandProfile p = param_to_commands({0.3, 0.5}, VehicleLimits{});
  UncertaintyConfig cfg;
  cfg.w_bounds = {Box2::from_bounds({-0.1, -0.1}, {0.1, 0.1})};
  const UnicycleState x0{0.0, 0.0, 0.0, 1.0};
  for (auto _ : state) benchmark::DoNotOptimize(propagate_tube(x0, cfg, p, 0.01));
}
BENCHMARK(BM_PropagateTube);

void BM_VerifyTube(benchmark::State & state)
{
  const CommandProfile p = param_to_commands({0.3, 0.5}, VehicleLimits{});
  UncertaintyConfig cfg;
  const UnicycleState x0{0.0, 0.0, 0.0, 1.0};
  const std::vector<ConvexPolygon> obstacles{rotated_rectangle({3.0, -1.0}, 0.5, 0.5, 0.3)};
  for (auto _ : state) benchmark::DoNotOptimize(verify_tube(x0, cfg, p, 0.01, obstacles, 0.2));
}
BENCHMARK(BM_VerifyTube);

void BM_Solve(benchmark::State & state)
{
  static const FrsTable frs = build_frs(VehicleLimits{}, 41, 0.025, 0.2);
  PlanningProblem problem;
  problem.frs = &frs;
  problem.pose = {0.0, 0.0, 0.0};
  problem.goal = {5.0, 1.0};
  problem.obstacles = {rotated_rectangle({1.5, 0.0}, 0.4, 0.4, 0.2), rotated_rectangle({1.0, 1.2}, 0.6, 0.3, 0.0)};
  for (auto _ : state) benchmark::DoNotOptimize(solve(problem));
}
BENCHMARK(BM_Solve)->Unit(benchmark::kMicrosecond);

void BM_BuildFrs(benchmark::State & state)
{
  for (auto _ : state) benchmark::DoNotOptimize(build_frs(VehicleLimits{}, static_cast<int>(state.range(0)), 0.025, 0.2));
}
BENCHMARK(BM_BuildFrs)->Arg(11)->Arg(41)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace reachplan

BENCHMARK_MAIN();
