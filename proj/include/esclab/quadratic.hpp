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

#ifndef ESCLAB_QUADRATIC_HPP
#define ESCLAB_QUADRATIC_HPP

#include <array>
#include <vector>

#include "esclab/cost.hpp"
#include "esclab/dynamics.hpp"
#include "esclab/signals.hpp"

namespace esclab {

/// Scalar quadratic J(theta) = J* + H theta^2 / 2 probed with a single
/// sinusoid of amplitude a. Over one period the measured output is
/// b0 + b1 sin(wt) + b2 cos(2wt).
struct QuadraticModel {
  double curvature = 1.0;  // H > 0
  double j_opt = 0.0;      // J*
  double amplitude = 0.1;  // a != 0

  void validate() const;
  CostFunction cost() const;
  DitherConfig dither(double omega, int rate = 1) const;
};

struct FourierCoeffs {
  double b0 = 0.0;
  double b1 = 0.0;
  double b2 = 0.0;
};

FourierCoeffs fourier_coeffs(const QuadraticModel& model, double theta_hat);

struct QuadraticAverages {
  double g_bar = 0.0;
  double g2_bar = 0.0;
};

/// g_bar = H theta; g2_bar from the Fourier coefficients.
QuadraticAverages quad_avg_maps(const QuadraticModel& model, double theta_bar, double xi_bar);

/// Equilibrium (theta* = 0, xi* = b0(0), v* = a^2 H^2 / 16).
struct QuadraticEquilibrium {
  double theta_star = 0.0;
  double xi_star = 0.0;
  double v_star = 0.0;
};

QuadraticEquilibrium quad_equilibrium(const QuadraticModel& model);

/// Linearization of the averaged loop at its equilibrium, rows and columns
/// ordered (theta_err, xi_err, v_err).
struct JacobianReport {
  std::array<std::array<double, 3>, 3> matrix{};
  std::array<double, 3> eigenvalues{};
  bool hurwitz = false;
  double steep_limit = 0.0;  // parameter eigenvalue as H -> infinity: -4k/|a|
  double flat_slope = 0.0;   // parameter eigenvalue ~ flat_slope * H as H -> 0: -k/epsilon
};

/// Scalar linearization; uses params.omega_l[0].
JacobianReport quad_jacobian(const QuadraticModel& model, const EscParams& params);

/// Diagonal-H multivariate case: one scalar report per channel, with
/// curvature[i], amplitude[i] and omega_l[i].
std::vector<JacobianReport> quad_jacobian_diagonal(const Vector& curvature, const Vector& amplitudes,
                                                   const EscParams& params);

}  // namespace esclab

#endif  // ESCLAB_QUADRATIC_HPP
