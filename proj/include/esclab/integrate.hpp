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

#ifndef ESCLAB_INTEGRATE_HPP
#define ESCLAB_INTEGRATE_HPP

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "esclab/error.hpp"

namespace esclab {

class DitherConfig;

/// dx/dt = f(t, x). Implementations write into `dxdt` and must not resize it.
using OdeRhs = std::function<void(double t, std::span<const double> x, std::span<double> dxdt)>;

/// Half-open index range [begin, end) of state components kept nonnegative.
struct ClampRange {
  std::size_t begin = 0;
  std::size_t end = 0;
};

struct Trajectory {
  Vector times;
  std::vector<Vector> states;
  double step = 0.0;              // effective uniform step
  std::size_t steps = 0;          // RK4 steps taken
  std::size_t clamp_events = 0;   // components lifted back to zero
  std::string label;

  std::size_t size() const noexcept { return times.size(); }
  const Vector& back() const { return states.back(); }
};

/// Classical fixed-step RK4 on [t0, t1].
///
/// The step count is round((t1 - t0) / h) and the step actually used is
/// (t1 - t0) / steps, so the final sample sits exactly on t1. States are
/// recorded every `record_stride` steps plus at the end. Components in `clamp`
/// are reset to max(x, 0) after every step. A non-finite state aborts with
/// IntegrationError.
Trajectory integrate_fixed(const OdeRhs& rhs, Vector state0, double t0, double t1, double h,
                           std::size_t record_stride = 1, ClampRange clamp = {},
                           std::string label = {});

/// Largest step giving at least 40 samples per period of the fastest dither
/// channel: T / (40 r_max).
double dither_step_limit(const DitherConfig& dither) noexcept;

}  // namespace esclab

#endif  // ESCLAB_INTEGRATE_HPP
