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

#include <cstdint>
#include <exception>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "reachplan/frs.hpp"
#include "reachplan/harness.hpp"
#include "reachplan/plot.hpp"
#include "reachplan/scenario.hpp"
#include "reachplan/trace.hpp"

namespace
{

constexpr int kConfigError = 4;

std::optional<reachplan::PlannerMode> parse_mode(const std::string & s)
{
  if (s.empty()) return std::nullopt;
  if (s == "standard") return reachplan::PlannerMode::kStandard;
  if (s == "rax") return reachplan::PlannerMode::kRax;
  throw reachplan::ScenarioError("unknown mode '" + s + "'");
}

std::optional<reachplan::DisturbanceRealization> parse_realization(const std::string & s)
{
  if (s.empty()) return std::nullopt;
  if (s == "random") return reachplan::DisturbanceRealization::kRandom;
  if (s == "worst_case") return reachplan::DisturbanceRealization::kWorstCase;
  if (s == "zero") return reachplan::DisturbanceRealization::kZero;
  throw reachplan::ScenarioError("unknown realization '" + s + "'");
}

}  // namespace

int main(int argc, char ** argv)
{
  CLI::App app{"reachplan: reachability-based planning with runtime verification and repair"};
  app.require_subcommand(1);

  // frs build
  auto * frs_cmd = app.add_subcommand("frs", "Offline forward reachable set tools");
  frs_cmd->require_subcommand(1);
  auto * frs_build = frs_cmd->add_subcommand("build", "Build the non-inflated FRS table and write it to disk");
  std::string frs_scenario;
  std::string frs_out = "frs.bin";
  frs_build->add_option("--scenario", frs_scenario, "Take limits and grid settings from a scenario file");
  frs_build->add_option("--out", frs_out, "Output path")->capture_default_str();

  // run
  auto * run_cmd = app.add_subcommand("run", "Closed-loop simulation of a scenario");
  std::string run_scenario;
  std::string run_mode;
  std::string run_realization;
  std::optional<std::uint64_t> run_seed;
  std::string run_trace;
  std::string run_plot;
  run_cmd->add_option("scenario", run_scenario, "Scenario file")->required();
  run_cmd->add_option("--mode", run_mode, "standard | rax")->check(CLI::IsMember({"standard", "rax"}));
  run_cmd->add_option("--seed", run_seed, "Disturbance seed");
  run_cmd->add_option("--realization", run_realization, "random | worst_case | zero")
    ->check(CLI::IsMember({"random", "worst_case", "zero"}));
  run_cmd->add_option("--trace", run_trace, "Write an NDJSON trace");
  run_cmd->add_option("--plot", run_plot, "Write an SVG plot");

  // bench
  auto * bench_cmd = app.add_subcommand("bench", "Per-stage cycle timing");
  std::string bench_scenario;
  std::string bench_mode;
  std::string bench_out;
  int bench_trials = 20;
  bench_cmd->add_option("scenario", bench_scenario, "Scenario file")->required();
  bench_cmd->add_option("--trials", bench_trials, "Number of seeded trials")->check(CLI::PositiveNumber)
    ->capture_default_str();
  bench_cmd->add_option("--mode", bench_mode, "standard | rax")->check(CLI::IsMember({"standard", "rax"}));
  bench_cmd->add_option("--out", bench_out, "Also write the table to this file");

  // verify-only
  auto * verify_cmd = app.add_subcommand("verify-only", "Certify one parameter from the scenario start");
  std::string verify_scenario;
  std::vector<double> verify_k;
  verify_cmd->add_option("scenario", verify_scenario, "Scenario file")->required();
  verify_cmd->add_option("--k", verify_k, "K1,K2")->delimiter(',')->expected(2)->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (frs_build->parsed()) {
      reachplan::Scenario s;
      if (!frs_scenario.empty()) s = reachplan::load_scenario(frs_scenario);
      const auto frs = reachplan::build_frs(s.limits, s.frs.n_k, s.frs.dt, s.robot_radius);
      reachplan::write_frs(frs, frs_out);
      std::cout << "wrote " << frs.cell_count() << " cells x " << frs.time_count() << " times to " << frs_out
                << "\n";
      return 0;
    }
    if (run_cmd->parsed()) {
      const auto s = reachplan::load_scenario(run_scenario);
      reachplan::RunOptions o;
      o.mode = parse_mode(run_mode);
      o.seed = run_seed;
      o.realization = parse_realization(run_realization);
      const auto r = reachplan::run(s, o);
      if (!run_trace.empty()) reachplan::emit_trace(r, run_trace);
      if (!run_plot.empty()) reachplan::emit_plot(r, s, run_plot);
      std::cout << "outcome: " << reachplan::to_string(r.outcome) << "\n"
                << "cycles: " << r.cycles.size() << "\n"
                << "repairs: " << r.repairs_invoked() << "\n"
                << "path_length: " << r.path_length() << "\n"
                << "end_time: " << r.end_time << "\n";
      if (r.collision) {
        std::cout << "collision: sample " << r.collision->time_index << " obstacle " << r.collision->obstacle
                  << "\n";
      }
      return reachplan::exit_code(r.outcome);
    }
    if (bench_cmd->parsed()) {
      const auto s = reachplan::load_scenario(bench_scenario);
      reachplan::RunOptions o;
      o.mode = parse_mode(bench_mode);
      const auto rows = reachplan::bench(s, bench_trials, o);
      const std::string table = reachplan::format_bench_table(rows);
      std::cout << table;
      if (!bench_out.empty()) {
        std::ofstream out(bench_out);
        if (!out) throw std::runtime_error("cannot open " + bench_out);
        out << table;
      }
      return 0;
    }
    if (verify_cmd->parsed()) {
      const auto s = reachplan::load_scenario(verify_scenario);
      const auto res = reachplan::prepare_resources(s);
      const reachplan::TrajParam k{verify_k[0], verify_k[1]};
      if (!k.valid()) throw reachplan::ScenarioError("k must lie in [-1, 1]^2");
      const auto cert = reachplan::verify_candidate(k, s.start, s, res->plain);
      std::cout << "verdict: " << (cert.safe() ? "safe" : "unsafe") << "\n";
      if (cert.first_collision) {
        std::cout << "first collision: index " << cert.first_collision->time_index << " obstacle "
                  << cert.first_collision->obstacle << "\n";
      }
      return cert.safe() ? 0 : 2;
    }
  } catch (const reachplan::ScenarioError & e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const std::invalid_argument & e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const std::exception & e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
