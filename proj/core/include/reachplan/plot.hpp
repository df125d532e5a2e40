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

#ifndef REACHPLAN__PLOT_HPP_
#define REACHPLAN__PLOT_HPP_

#include <filesystem>
#include <string>

#include "reachplan/harness.hpp"
#include "reachplan/scenario.hpp"

namespace reachplan
{

/// Self-contained SVG of a run: obstacles (class "obstacle"), disturbance
/// patches ("patch"), start circle ("start"), goal star ("goal"), the executed
/// trajectory ("trajectory"), one rect per tube position box ("tube-box") and
/// a marker per cycle that invoked repair ("repair").
std::string render_svg(const RunResult & result, const Scenario & scenario);

void emit_plot(const RunResult & result, const Scenario & scenario, const std::filesystem::path & path);

}  // namespace reachplan

#endif  // REACHPLAN__PLOT_HPP_
