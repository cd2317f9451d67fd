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

#ifndef ESCLAB_DYNAMICS_HPP
#define ESCLAB_DYNAMICS_HPP

#include <span>

#include "esclab/cost.hpp"
#include "esclab/integrate.hpp"
#include "esclab/signals.hpp"

namespace esclab {

/// Gains of the RMSprop extremum seeking loop.
struct EscParams {
  double k = 1.0;        // adaptation gain
  double epsilon = 0.05; // regularizer in the denominator
  Vector omega_l;        // per-channel low-pass gain of the squared-gradient filter
  double omega_xi = 1.0; // washout low-pass gain

  /// Same low-pass gain on every one of n channels.
  static EscParams uniform(std::size_t n, double k, double epsilon, double omega_l, double omega_xi);

  /// Throws InvalidArgument / DimensionError unless all gains are positive and
  /// omega_l has n entries.
  void validate(std::size_t n) const;
};

/// Closed-loop state (theta_hat, v_hat, xi).
///
/// Flattened as [theta_hat_1..n, v_hat_1..n, xi] everywhere a plain vector is
/// used (integrator, CSV output).
struct EscState {
  Vector theta_hat;
  Vector v_hat;
  double xi = 0.0;

  std::size_t dim() const noexcept { return theta_hat.size(); }
  Vector flatten() const;
  static EscState unflatten(std::span<const double> x, std::size_t n);
};

/// Index helpers for the flattened layout.
struct StateLayout {
  std::size_t n;
  std::size_t size() const noexcept { return 2 * n + 1; }
  std::size_t theta(std::size_t i) const noexcept { return i; }
  std::size_t v(std::size_t i) const noexcept { return n + i; }
  std::size_t xi() const noexcept { return 2 * n; }
  ClampRange v_range() const noexcept { return {n, 2 * n}; }
};

/// g_i = m_i(t) (J(theta_hat + s(t)) - xi).
Vector grad_estimate(double t, std::span<const double> theta_hat, double xi, const CostFunction& cost,
                     const DitherConfig& dither);

/// Time derivative of the RMSprop loop. Rejects negative v_hat.
EscState rmspesc_rhs(double t, const EscState& state, const EscParams& params, const CostFunction& cost,
                     const DitherConfig& dither);

struct GescDerivative {
  Vector theta_hat;
  double xi = 0.0;
};

/// Plain gradient ESC with the same washout filter: d theta_i/dt = -k g_i.
GescDerivative gesc_rhs(double t, std::span<const double> theta_hat, double xi, const EscParams& params,
                        const CostFunction& cost, const DitherConfig& dither);

/// Flattened right-hand sides for integrate_fixed. The RMSprop system takes
/// sqrt(max(v, 0)); the GESC system keeps v_hat frozen (zero derivative) so
/// both share the same state layout. Each returned system owns scratch
/// buffers, so give every concurrent integration its own copy.
OdeRhs make_rmspesc_system(EscParams params, CostFunction cost, DitherConfig dither);
OdeRhs make_gesc_system(EscParams params, CostFunction cost, DitherConfig dither);

}  // namespace esclab

#endif  // ESCLAB_DYNAMICS_HPP
