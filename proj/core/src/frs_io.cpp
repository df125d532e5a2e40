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

#include <array>
#include <cstring>
#include <fstream>
#include <stdexcept>
#include <string>
#include <system_error>

#include "reachplan/frs.hpp"

namespace reachplan
{
namespace
{

constexpr std::array<char, 8> kMagic{'R', 'P', 'F', 'R', 'S', '0', '0', '1'};

class Writer
{
public:
  explicit Writer(const std::filesystem::path & path) : out_(path, std::ios::binary | std::ios::trunc)
  {
    if (!out_) throw std::runtime_error("cannot open FRS cache for writing: " + path.string());
  }

  template <class T>
  void put(const T & value)
  {
    out_.write(reinterpret_cast<const char *>(&value), sizeof(T));
  }

  void finish(const std::filesystem::path & path)
  {
    out_.flush();
    if (!out_) throw std::runtime_error("failed writing FRS cache: " + path.string());
  }

private:
  std::ofstream out_;
};

class Reader
{
public:
  explicit Reader(const std::filesystem::path & path) : in_(path, std::ios::binary), path_(path)
  {
    if (!in_) throw std::runtime_error("cannot open FRS cache: " + path.string());
  }

  template <class T>
  T get()
  {
    T value{};
    in_.read(reinterpret_cast<char *>(&value), sizeof(T));
    if (!in_) throw std::runtime_error("truncated FRS cache: " + path_.string());
    return value;
  }

  bool at_end() { return in_.peek() == std::char_traits<char>::eof(); }

private:
  std::ifstream in_;
  std::filesystem::path path_;
};

}  // namespace

void write_frs(const FrsTable & frs, const std::filesystem::path & path)
{
  Writer w(path);
  for (char c : kMagic) w.put(c);
  w.put(frs.config_hash());
  const VehicleLimits & lim = frs.limits();
  for (double v : {lim.v_max, lim.w_max, lim.a_max, lim.k_a, lim.t_plan, lim.t_stop}) w.put(v);
  w.put(static_cast<std::int32_t>(frs.n_k()));
  w.put(frs.dt());
  w.put(frs.robot_radius());
  w.put(static_cast<std::uint64_t>(frs.time_count()));
  w.put(static_cast<std::uint8_t>(frs.inflated() ? 1 : 0));
  for (const Box2 & b : frs.raw_footprints()) {
    w.put(b[0].lo);
    w.put(b[0].hi);
    w.put(b[1].lo);
    w.put(b[1].hi);
  }
  for (double g : frs.inflation()) w.put(g);
  w.finish(path);
}

FrsTable read_frs(const std::filesystem::path & path)
{
  Reader r(path);
  for (char expected : kMagic) {
    if (r.get<char>() != expected) throw std::runtime_error("not an FRS cache file: " + path.string());
  }
  const auto hash = r.get<std::uint64_t>();
  VehicleLimits lim;
  lim.v_max = r.get<double>();
  lim.w_max = r.get<double>();
  lim.a_max = r.get<double>();
  lim.k_a = r.get<double>();
  lim.t_plan = r.get<double>();
  lim.t_stop = r.get<double>();
  const auto n_k = r.get<std::int32_t>();
  const auto dt = r.get<double>();
  const auto radius = r.get<double>();
  const auto time_count = r.get<std::uint64_t>();
  const auto inflated = r.get<std::uint8_t>();
  if (hash != frs_config_hash(lim, n_k, dt, radius)) {
    throw std::runtime_error("FRS cache header hash mismatch: " + path.string());
  }
  if (n_k < 3 || n_k > 100000) throw std::runtime_error("FRS cache has invalid grid size");
  const std::size_t total = static_cast<std::size_t>(n_k) * n_k * time_count;
  std::vector<Box2> footprints(total);
  for (auto & b : footprints) {
    b[0].lo = r.get<double>();
    b[0].hi = r.get<double>();
    b[1].lo = r.get<double>();
    b[1].hi = r.get<double>();
  }
  FrsTable table(lim, n_k, dt, radius, std::move(footprints));
  if (table.time_count() != time_count) throw std::runtime_error("FRS cache time grid mismatch");
  if (inflated != 0) {
    std::vector<double> inflation(total);
    for (auto & g : inflation) g = r.get<double>();
    table = table.with_inflation(std::move(inflation));
  }
  if (!r.at_end()) throw std::runtime_error("trailing bytes in FRS cache: " + path.string());
  return table;
}

FrsTable load_or_build_frs(
  const std::filesystem::path & path, const VehicleLimits & limits, int n_k, double dt,
  double robot_radius)
{
  std::error_code ec;
  if (std::filesystem::exists(path, ec)) {
    try {
      FrsTable cached = read_frs(path);
      if (cached.config_hash() == frs_config_hash(limits, n_k, dt, robot_radius) && !cached.inflated()) {
        return cached;
      }
    } catch (const std::runtime_error &) {
      // Stale or corrupt cache; rebuild below.
    }
  }
  FrsTable table = build_frs(limits, n_k, dt, robot_radius);
  write_frs(table, path);
  return table;
}

}  // namespace reachplan
