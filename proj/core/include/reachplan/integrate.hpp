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

#ifndef REACHPLAN__INTEGRATE_HPP_
#define REACHPLAN__INTEGRATE_HPP_

#include <array>
#include <cmath>
#include <cstddef>

namespace reachplan
{

/// Classic fixed-step RK4. The per-component update order is fixed so that
/// any two fields that agree bitwise produce bitwise-identical steps; the
/// verifier's degenerate-tube exactness relies on this. The last stage is
/// evaluated just inside the step, so a field with a jump at the step end
/// contributes its left limit and a step never sees the next segment.
template <std::size_t N, class Field>
std::array<double, N> rk4_step(const std::array<double, N> & x, double t, double dt, Field && f)
{
  const double half = 0.5 * dt;
  std::array<double, N> stage{};

  const std::array<double, N> k1 = f(t, x);
  for (std::size_t i = 0; i < N; ++i) stage[i] = x[i] + half * k1[i];
  const std::array<double, N> k2 = f(t + half, stage);
  for (std::size_t i = 0; i < N; ++i) stage[i] = x[i] + half * k2[i];
  const std::array<double, N> k3 = f(t + half, stage);
  for (std::size_t i = 0; i < N; ++i) stage[i] = x[i] + dt * k3[i];
  const std::array<double, N> k4 = f(std::nextafter(t + dt, t), stage);

  std::array<double, N> out{};
  const double sixth = dt / 6.0;
  for (std::size_t i = 0; i < N; ++i) {
    out[i] = x[i] + sixth * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  }
  return out;
}

}  // namespace reachplan

#endif  // REACHPLAN__INTEGRATE_HPP_
