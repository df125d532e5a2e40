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

#include "reachplan/plot.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace reachplan
{
namespace
{

constexpr double kScale = 100.0;  // px per m
constexpr double kMargin = 0.5;   // m

struct Frame
{
  double x_lo = std::numeric_limits<double>::infinity();
  double y_lo = std::numeric_limits<double>::infinity();
  double x_hi = -std::numeric_limits<double>::infinity();
  double y_hi = -std::numeric_limits<double>::infinity();

  void add(Vec2 p)
  {
    x_lo = std::min(x_lo, p.x);
    y_lo = std::min(y_lo, p.y);
    x_hi = std::max(x_hi, p.x);
    y_hi = std::max(y_hi, p.y);
  }
  // World to pixel, y up.
  double px(double x) const { return (x - x_lo + kMargin) * kScale; }
  double py(double y) const { return (y_hi - y + kMargin) * kScale; }
  double width() const { return (x_hi - x_lo + 2.0 * kMargin) * kScale; }
  double height() const { return (y_hi - y_lo + 2.0 * kMargin) * kScale; }
};

std::string points(const Frame & f, const std::vector<Vec2> & pts)
{
  std::string out;
  for (const Vec2 & p : pts) out += fmt::format("{:.4f},{:.4f} ", f.px(p.x), f.py(p.y));
  if (!out.empty()) out.pop_back();
  return out;
}

std::vector<Vec2> star(Vec2 c, double r_out, double r_in)
{
  std::vector<Vec2> pts;
  for (int i = 0; i < 10; ++i) {
    const double a = std::numbers::pi / 2.0 + i * std::numbers::pi / 5.0;
    const double r = i % 2 == 0 ? r_out : r_in;
    pts.push_back({c.x + r * std::cos(a), c.y + r * std::sin(a)});
  }
  return pts;
}

std::string xml_escape(const std::string & in)
{
  std::string out;
  for (char ch : in) {
    switch (ch) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += ch;
    }
  }
  return out;
}

}  // namespace

std::string render_svg(const RunResult & result, const Scenario & scenario)
{
  Frame f;
  for (const auto & o : scenario.obstacles) {
    for (const Vec2 & v : o.vertices()) f.add(v);
  }
  for (const auto & p : scenario.patches) {
    for (const Vec2 & v : p.region.vertices()) f.add(v);
  }
  for (const auto & s : result.trajectory) f.add(s.state.position());
  f.add(scenario.start.position());
  f.add(scenario.goal);
  for (const auto & c : result.cycles) {
    if (const auto tube = c.final_tube()) {
      for (const Box2 & b : tube->position_boxes) {
        f.add({b[0].lo, b[1].lo});
        f.add({b[0].hi, b[1].hi});
      }
    }
  }

  std::string svg = fmt::format(
    "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
    "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{0:.1f}\" height=\"{1:.1f}\" viewBox=\"0 0 {0:.1f} {1:.1f}\">\n",
    f.width(), f.height());
  svg += "<style>.obstacle{fill:#555;stroke:#222}.patch{fill:#6a9fd8;fill-opacity:0.25;stroke:#6a9fd8}"
         ".tube-box{fill:none;stroke:#d8893a;stroke-opacity:0.35;stroke-width:0.5}"
         ".trajectory{fill:none;stroke:#1b7f3a;stroke-width:2}.start{fill:#fff;stroke:#000;stroke-width:1.5}"
         ".goal{fill:#f2c200;stroke:#8a6d00}.repair{fill:#c0392b}.label{font:10px sans-serif;fill:#c0392b}</style>\n";
  svg += fmt::format("<title>{} ({}, seed {}): {}</title>\n", xml_escape(scenario.name), to_string(result.mode),
                     result.seed, to_string(result.outcome));

  svg += "<g id=\"patches\">\n";
  for (const auto & p : scenario.patches) {
    svg += fmt::format("<polygon class=\"patch\" points=\"{}\"/>\n", points(f, p.region.vertices()));
  }
  svg += "</g>\n<g id=\"obstacles\">\n";
  for (const auto & o : scenario.obstacles) {
    svg += fmt::format("<polygon class=\"obstacle\" points=\"{}\"/>\n", points(f, o.vertices()));
  }
  svg += "</g>\n<g id=\"tubes\">\n";
  for (const auto & c : result.cycles) {
    const auto tube = c.final_tube();
    if (!tube) continue;
    for (const Box2 & b : tube->position_boxes) {
      svg += fmt::format(
        "<rect class=\"tube-box\" data-cycle=\"{}\" x=\"{:.4f}\" y=\"{:.4f}\" width=\"{:.4f}\" height=\"{:.4f}\"/>\n",
        c.index, f.px(b[0].lo), f.py(b[1].hi), b[0].width() * kScale, b[1].width() * kScale);
    }
  }
  svg += "</g>\n";

  std::vector<Vec2> path;
  for (const auto & s : result.trajectory) path.push_back(s.state.position());
  svg += fmt::format("<polyline class=\"trajectory\" points=\"{}\"/>\n", points(f, path));
  svg += fmt::format(
    "<circle class=\"start\" cx=\"{:.4f}\" cy=\"{:.4f}\" r=\"{:.4f}\"/>\n", f.px(scenario.start.x),
    f.py(scenario.start.y), scenario.robot_radius * kScale);
  svg += fmt::format("<polygon class=\"goal\" points=\"{}\"/>\n", points(f, star(scenario.goal, 0.2, 0.08)));

  svg += "<g id=\"repairs\">\n";
  for (const auto & c : result.cycles) {
    if (!c.repair) continue;
    const std::string label = c.repair->repaired && !c.repair->attempts.empty()
                                ? std::string(to_string(c.repair->attempts.back().action))
                                : std::string("exhausted");
    svg += fmt::format(
      "<circle class=\"repair\" cx=\"{:.4f}\" cy=\"{:.4f}\" r=\"4\"/>"
      "<text class=\"label\" x=\"{:.4f}\" y=\"{:.4f}\">cycle {}: {}</text>\n",
      f.px(c.start.x), f.py(c.start.y), f.px(c.start.x) + 6.0, f.py(c.start.y) - 6.0, c.index, label);
  }
  svg += "</g>\n</svg>\n";
  return svg;
}

void emit_plot(const RunResult & result, const Scenario & scenario, const std::filesystem::path & path)
{
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open plot file " + path.string());
  out << render_svg(result, scenario);
  if (!out) throw std::runtime_error("failed writing plot file " + path.string());
}

}  // namespace reachplan
