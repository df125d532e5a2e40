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

#include "reachplan/trace.hpp"

#include <fstream>
#include <sstream>
#include <utility>

#include "json.hpp"

namespace reachplan
{
namespace
{

using Json = nlohmann::ordered_json;

Json state_json(const UnicycleState & s) { return Json::array({s.x, s.y, s.h, s.v}); }
Json param_json(const std::optional<TrajParam> & k)
{
  return k ? Json::array({k->k1, k->k2}) : Json(nullptr);
}
Json collision_json(const std::optional<Collision> & c)
{
  return c ? Json::array({c->time_index, c->obstacle}) : Json(nullptr);
}

UnicycleState state_of(const Json & j)
{
  if (!j.is_array() || j.size() != 4) throw TraceError("state must have 4 entries");
  return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>(), j[3].get<double>()};
}
std::optional<TrajParam> param_of(const Json & j)
{
  if (j.is_null()) return std::nullopt;
  if (!j.is_array() || j.size() != 2) throw TraceError("parameter must have 2 entries");
  return TrajParam{j[0].get<double>(), j[1].get<double>()};
}
std::optional<Collision> collision_of(const Json & j)
{
  if (j.is_null()) return std::nullopt;
  if (!j.is_array() || j.size() != 2) throw TraceError("collision must have 2 entries");
  return Collision{j[0].get<std::size_t>(), j[1].get<std::size_t>()};
}

Json header_json(const TraceHeader & h)
{
  Json j;
  j["record"] = "header";
  j["schema"] = "reachplan.trace";
  j["schema_version"] = h.schema_version;
  j["scenario"] = h.scenario;
  j["mode"] = h.mode;
  j["seed"] = h.seed;
  j["realization"] = h.realization;
  j["outcome"] = h.outcome;
  j["end_time"] = h.end_time;
  j["collision"] = collision_json(h.collision);
  j["path_length"] = h.path_length;
  j["steps"] = h.steps;
  j["cycles"] = h.cycles;
  return j;
}

Json step_json(const TraceStep & s)
{
  Json j;
  j["record"] = "step";
  j["i"] = s.i;
  j["t"] = s.t;
  j["state"] = state_json(s.state);
  j["w"] = Json::array({s.w.x, s.w.y});
  return j;
}

Json cycle_json(const TraceCycle & c)
{
  Json j;
  j["record"] = "cycle";
  j["index"] = c.index;
  j["t"] = c.t;
  j["start"] = state_json(c.start);
  j["k_star"] = param_json(c.k_star);
  j["cost"] = c.cost;
  j["evaluations"] = c.evaluations;
  j["verdict"] = c.verdict ? Json(*c.verdict) : Json(nullptr);
  j["collision"] = collision_json(c.collision);
  j["repaired"] = c.repaired ? Json(*c.repaired) : Json(nullptr);
  Json attempts = Json::array();
  for (const auto & a : c.attempts) {
    attempts.push_back(Json{{"action", a.action}, {"parameter", a.parameter}, {"k", param_json(a.k)}, {"safe", a.safe}});
  }
  j["attempts"] = std::move(attempts);
  j["action"] = c.action;
  j["executed"] = param_json(c.executed);
  Json tube = Json::array();
  for (const auto & b : c.tube) tube.push_back(Json::array({b[0].lo, b[0].hi, b[1].lo, b[1].hi}));
  j["tube"] = std::move(tube);
  return j;
}

TraceHeader header_of(const Json & j)
{
  if (j.value("record", "") != "header" || j.value("schema", "") != "reachplan.trace") {
    throw TraceError("first line is not a trace header");
  }
  TraceHeader h;
  h.schema_version = j.at("schema_version").get<int>();
  if (h.schema_version != kTraceSchemaVersion) {
    throw TraceError("unsupported trace schema version " + std::to_string(h.schema_version));
  }
  h.scenario = j.at("scenario").get<std::string>();
  h.mode = j.at("mode").get<std::string>();
  h.seed = j.at("seed").get<std::uint64_t>();
  h.realization = j.at("realization").get<std::string>();
  h.outcome = j.at("outcome").get<std::string>();
  h.end_time = j.at("end_time").get<double>();
  h.collision = collision_of(j.at("collision"));
  h.path_length = j.at("path_length").get<double>();
  h.steps = j.at("steps").get<std::size_t>();
  h.cycles = j.at("cycles").get<std::size_t>();
  return h;
}

TraceStep step_of(const Json & j)
{
  TraceStep s;
  s.i = j.at("i").get<std::size_t>();
  s.t = j.at("t").get<double>();
  s.state = state_of(j.at("state"));
  const Json & w = j.at("w");
  if (!w.is_array() || w.size() != 2) throw TraceError("w must have 2 entries");
  s.w = {w[0].get<double>(), w[1].get<double>()};
  return s;
}

TraceCycle cycle_of(const Json & j)
{
  TraceCycle c;
  c.index = j.at("index").get<std::size_t>();
  c.t = j.at("t").get<double>();
  c.start = state_of(j.at("start"));
  c.k_star = param_of(j.at("k_star"));
  c.cost = j.at("cost").get<double>();
  c.evaluations = j.at("evaluations").get<int>();
  if (!j.at("verdict").is_null()) c.verdict = j.at("verdict").get<std::string>();
  c.collision = collision_of(j.at("collision"));
  if (!j.at("repaired").is_null()) c.repaired = j.at("repaired").get<bool>();
  for (const Json & a : j.at("attempts")) {
    c.attempts.push_back(
      {a.at("action").get<std::string>(), a.at("parameter").get<double>(), param_of(a.at("k")), a.at("safe").get<bool>()});
  }
  c.action = j.at("action").get<std::string>();
  c.executed = param_of(j.at("executed"));
  for (const Json & b : j.at("tube")) {
    if (!b.is_array() || b.size() != 4) throw TraceError("tube boxes must have 4 entries");
    c.tube.push_back(Box2::from_bounds({b[0].get<double>(), b[2].get<double>()}, {b[1].get<double>(), b[3].get<double>()}));
  }
  return c;
}

TraceCycle cycle_from(const CycleRecord & r)
{
  TraceCycle c;
  c.index = r.index;
  c.t = r.t;
  c.start = r.start;
  c.k_star = r.plan.k_star;
  c.cost = r.plan.cost;
  c.evaluations = r.plan.evaluations;
  if (r.certificate) {
    c.verdict = r.certificate->safe() ? "safe" : "unsafe";
    c.collision = r.certificate->first_collision;
  }
  if (r.repair) {
    c.repaired = r.repair->repaired;
    for (const auto & a : r.repair->attempts) {
      c.attempts.push_back({std::string(to_string(a.action)), a.parameter, a.k, a.safe});
    }
  }
  c.action = std::string(to_string(r.action));
  c.executed = r.executed;
  if (const auto tube = r.final_tube()) c.tube = tube->position_boxes;
  return c;
}

}  // namespace

TraceDocument make_trace(const RunResult & result)
{
  TraceDocument doc;
  TraceHeader & h = doc.header;
  h.scenario = result.scenario;
  h.mode = std::string(to_string(result.mode));
  h.seed = result.seed;
  h.realization = std::string(to_string(result.realization));
  h.outcome = std::string(to_string(result.outcome));
  h.end_time = result.end_time;
  h.collision = result.collision;
  h.path_length = result.path_length();
  h.steps = result.trajectory.size();
  h.cycles = result.cycles.size();

  std::size_t next_cycle = 0;
  for (std::size_t i = 0; i < result.trajectory.size(); ++i) {
    const auto & s = result.trajectory[i];
    doc.records.emplace_back(TraceStep{i, s.t, s.state, s.w});
    while (next_cycle < result.cycles.size() && result.cycles[next_cycle].sample <= i) {
      doc.records.emplace_back(cycle_from(result.cycles[next_cycle++]));
    }
  }
  while (next_cycle < result.cycles.size()) doc.records.emplace_back(cycle_from(result.cycles[next_cycle++]));
  return doc;
}

std::string serialize_trace(const TraceDocument & doc)
{
  std::string out = header_json(doc.header).dump() + "\n";
  for (const auto & r : doc.records) {
    const Json j = std::holds_alternative<TraceStep>(r) ? step_json(std::get<TraceStep>(r))
                                                        : cycle_json(std::get<TraceCycle>(r));
    out += j.dump();
    out += '\n';
  }
  return out;
}

TraceDocument parse_trace(const std::string & text)
{
  std::istringstream in(text);
  std::string line;
  TraceDocument doc;
  bool have_header = false;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      const Json j = Json::parse(line);
      if (!have_header) {
        doc.header = header_of(j);
        have_header = true;
        continue;
      }
      const std::string kind = j.at("record").get<std::string>();
      if (kind == "step") {
        doc.records.emplace_back(step_of(j));
      } else if (kind == "cycle") {
        doc.records.emplace_back(cycle_of(j));
      } else {
        throw TraceError("unknown record type '" + kind + "'");
      }
    } catch (const Json::exception & e) {
      throw TraceError("line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  if (!have_header) throw TraceError("empty trace");
  return doc;
}

void write_trace(const TraceDocument & doc, const std::filesystem::path & path)
{
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open trace file " + path.string());
  out << serialize_trace(doc);
  if (!out) throw std::runtime_error("failed writing trace file " + path.string());
}

TraceDocument read_trace(const std::filesystem::path & path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open trace file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_trace(ss.str());
}

void emit_trace(const RunResult & result, const std::filesystem::path & path)
{
  write_trace(make_trace(result), path);
}

}  // namespace reachplan
