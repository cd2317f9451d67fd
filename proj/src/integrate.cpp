// Copyright 2026 The esc-lab Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "esclab/integrate.hpp"

#include <algorithm>
#include <cmath>

#include "esclab/signals.hpp"

namespace esclab {

Trajectory integrate_fixed(const OdeRhs& rhs, Vector state0, double t0, double t1, double h,
                           std::size_t record_stride, ClampRange clamp, std::string label) {
  if (!(t1 > t0)) throw InvalidArgument("integration needs t1 > t0");
  if (!(h > 0.0)) throw InvalidArgument("integration step must be positive");
  if (record_stride < 1) throw InvalidArgument("record stride must be at least 1");
  const std::size_t dim = state0.size();
  if (clamp.end > dim || clamp.begin > clamp.end) throw InvalidArgument("clamp range outside the state");

  const auto steps = static_cast<std::size_t>(std::max(1.0, std::round((t1 - t0) / h)));
  const double dt = (t1 - t0) / static_cast<double>(steps);

  Trajectory traj;
  traj.step = dt;
  traj.steps = steps;
  traj.label = std::move(label);
  traj.times.reserve(steps / record_stride + 2);
  traj.states.reserve(steps / record_stride + 2);

  Vector x = std::move(state0);
  for (std::size_t i = clamp.begin; i < clamp.end; ++i) x[i] = std::max(x[i], 0.0);
  traj.times.push_back(t0);
  traj.states.push_back(x);

  Vector k1(dim), k2(dim), k3(dim), k4(dim), tmp(dim);
  for (std::size_t s = 0; s < steps; ++s) {
    const double t = t0 + static_cast<double>(s) * dt;
    rhs(t, x, k1);
    for (std::size_t i = 0; i < dim; ++i) tmp[i] = x[i] + 0.5 * dt * k1[i];
    rhs(t + 0.5 * dt, tmp, k2);
    for (std::size_t i = 0; i < dim; ++i) tmp[i] = x[i] + 0.5 * dt * k2[i];
    rhs(t + 0.5 * dt, tmp, k3);
    for (std::size_t i = 0; i < dim; ++i) tmp[i] = x[i] + dt * k3[i];
    rhs(t + dt, tmp, k4);
    for (std::size_t i = 0; i < dim; ++i) {
      x[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
    for (std::size_t i = clamp.begin; i < clamp.end; ++i) {
      if (x[i] < 0.0) {
        x[i] = 0.0;
        ++traj.clamp_events;
      }
    }
    const bool last = s + 1 == steps;
    const double t_next = last ? t1 : t0 + static_cast<double>(s + 1) * dt;
    if (!std::all_of(x.begin(), x.end(), [](double v) { return std::isfinite(v); })) {
      throw IntegrationError(t_next, x);
    }
    if ((s + 1) % record_stride == 0 || last) {
      traj.times.push_back(t_next);
      traj.states.push_back(x);
    }
  }
  return traj;
}

double dither_step_limit(const DitherConfig& dither) noexcept {
  return dither.period() / (40.0 * dither.max_rate());
}

}  // namespace esclab
