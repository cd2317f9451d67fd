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

#ifndef ESCLAB_AVERAGING_HPP
#define ESCLAB_AVERAGING_HPP

#include <cstddef>
#include <span>
#include <vector>

#include "esclab/cost.hpp"
#include "esclab/dynamics.hpp"
#include "esclab/integrate.hpp"
#include "esclab/kernels.hpp"
#include "esclab/signals.hpp"

namespace esclab {

/// One-period averages of the loop signals at a frozen (theta_bar, xi_bar).
struct AverageMaps {
  double j_bar = 0.0;  // < J(theta + s) >
  Vector g_bar;        // < m_i J(theta + s) >; independent of xi
  Vector g2_bar;       // < (m_i (J(theta + s) - xi))^2 >
  std::size_t nodes = 0;
};

/// 256 * r_max nodes.
std::size_t default_quadrature_nodes(const DitherConfig& dither) noexcept;

/// Composite trapezoid over [0, T) with `nodes` uniform nodes (nodes >= 8 r_max;
/// 0 selects the default).
AverageMaps avg_maps(const CostFunction& cost, const DitherConfig& dither, std::span<const double> theta_bar,
                     double xi_bar, std::size_t nodes);
AverageMaps avg_maps(const CostFunction& cost, const QuadratureNodes& q, std::span<const double> theta_bar,
                     double xi_bar);

/// Right-hand side of the averaged loop. Rejects negative v_bar.
EscState average_rhs(const EscState& state, const EscParams& params, const CostFunction& cost,
                     const DitherConfig& dither, std::size_t nodes);

/// Flattened averaged system for integrate_fixed (uses sqrt(max(v, 0))).
OdeRhs make_average_system(EscParams params, CostFunction cost, const DitherConfig& dither, std::size_t nodes);

struct Equilibrium {
  Vector theta_star;
  double xi_star = 0.0;
  Vector v_star;
  double grad_norm = 0.0;      // ||g_bar(theta_star)|| at exit
  std::size_t iterations = 0;

  std::size_t dim() const noexcept { return theta_star.size(); }
  EscState as_state() const { return EscState{theta_star, v_star, xi_star}; }
};

struct EquilibriumOptions {
  double tol = 1e-10;
  std::size_t max_iterations = 100000;
  std::size_t nodes = 0;  // 0: default_quadrature_nodes
};

/// theta* from damped descent along -g_bar with backtracking (factor 0.5)
/// on J_bar, stopping when ||g_bar|| <= tol; then xi* = J_bar(theta*) and
/// v*_i = g2_bar_i(theta*, xi*). Throws ConvergenceError on exhaustion.
Equilibrium equilibrium(const CostFunction& cost, const DitherConfig& dither, std::span<const double> theta_init,
                        const EquilibriumOptions& options = {});

/// Averaged state relative to the equilibrium.
struct ErrorState {
  Vector theta_err;
  Vector v_err;
  double xi_err = 0.0;
};

ErrorState to_error_coords(const EscState& state, const Equilibrium& eq);
EscState from_error_coords(const ErrorState& err, const Equilibrium& eq);

struct SweepRow {
  double a0 = 0.0;
  double grad_error = 0.0;  // ||g_bar(theta_bar) - grad J(theta_bar)||
  double v_star_max = 0.0;  // max_i v*_i
};

/// Shrinks the dither (ratios a_i / a0 fixed) through `a0_list` and reports
/// the averaged gradient error and the equilibrium v*. Rows run in parallel.
/// Equilibria start from the known minimizer when the cost has one, else
/// from theta_bar.
std::vector<SweepRow> convergence_sweep(const CostFunction& cost, const DitherConfig& dither,
                                        std::span<const double> theta_bar, std::span<const double> a0_list,
                                        std::size_t nodes = 0);

struct AveragingGap {
  Trajectory full;
  Trajectory average;
  double sup_theta_gap = 0.0;  // max over samples and channels of |theta_hat - theta_bar|
};

/// Integrates the full RMSprop loop and its average from the same initial
/// state with the same step (default dither_step_limit) and compares theta.
AveragingGap averaging_gap(const EscParams& params, const CostFunction& cost, const DitherConfig& dither,
                           const EscState& initial, double t_end, double h = 0.0, std::size_t nodes = 0);

}  // namespace esclab

#endif  // ESCLAB_AVERAGING_HPP
