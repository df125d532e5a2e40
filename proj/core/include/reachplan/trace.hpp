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

#ifndef REACHPLAN__TRACE_HPP_
#define REACHPLAN__TRACE_HPP_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "reachplan/harness.hpp"

namespace reachplan
{

inline constexpr int kTraceSchemaVersion = 1;

struct TraceHeader
{
  int schema_version = kTraceSchemaVersion;
  std::string scenario;
  std::string mode;
  std::uint64_t seed = 0;
  std::string realization;
  std::string outcome;
  double end_time = 0.0;
  std::optional<Collision> collision;
  double path_length = 0.0;
  std::size_t steps = 0;
  std::size_t cycles = 0;

  friend bool operator==(const TraceHeader &, const TraceHeader &) = default;
};

struct TraceStep
{
  std::size_t i = 0;
  double t = 0.0;
  UnicycleState state;
  Vec2 w;

  friend bool operator==(const TraceStep &, const TraceStep &) = default;
};

struct TraceAttempt
{
  std::string action;
  double parameter = 0.0;
  std::optional<TrajParam> k;
  bool safe = false;

  friend bool operator==(const TraceAttempt &, const TraceAttempt &) = default;
};

struct TraceCycle
{
  std::size_t index = 0;
  double t = 0.0;
  UnicycleState start;
  std::optional<TrajParam> k_star;
  double cost = 0.0;
  int evaluations = 0;
  std::optional<std::string> verdict;
  std::optional<Collision> collision;
  std::optional<bool> repaired;  // empty when repair was not invoked
  std::vector<TraceAttempt> attempts;
  std::string action;
  std::optional<TrajParam> executed;
  std::vector<Box2> tube;  // position boxes of the final verified candidate

  friend bool operator==(const TraceCycle &, const TraceCycle &) = default;
};

using TraceRecord = std::variant<TraceStep, TraceCycle>;

/// Newline-delimited JSON: one header line, then cycle and step records in
/// time order. Wall-clock timings are left out so traces are reproducible.
struct TraceDocument
{
  TraceHeader header;
  std::vector<TraceRecord> records;

  friend bool operator==(const TraceDocument &, const TraceDocument &) = default;
};

class TraceError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

TraceDocument make_trace(const RunResult & result);

std::string serialize_trace(const TraceDocument & doc);
/// Throws TraceError on malformed input or an unsupported schema version.
TraceDocument parse_trace(const std::string & text);

void write_trace(const TraceDocument & doc, const std::filesystem::path & path);
TraceDocument read_trace(const std::filesystem::path & path);

/// make_trace followed by write_trace.
void emit_trace(const RunResult & result, const std::filesystem::path & path);

}  // namespace reachplan

#endif  // REACHPLAN__TRACE_HPP_
