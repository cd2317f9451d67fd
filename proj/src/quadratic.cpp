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

#include "esclab/quadratic.hpp"

#include <algorithm>
#include <cmath>

namespace esclab {

void QuadraticModel::validate() const {
  if (!(curvature > 0.0)) throw InvalidArgument("quadratic curvature H must be positive");
  if (amplitude == 0.0 || !std::isfinite(amplitude)) throw InvalidArgument("dither amplitude must be nonzero");
}

CostFunction QuadraticModel::cost() const {
  validate();
  return builtin::quadratic({curvature}, j_opt);
}

DitherConfig QuadraticModel::dither(double omega, int rate) const {
  validate();
  return DitherConfig({amplitude}, {rate}, omega);
}

FourierCoeffs fourier_coeffs(const QuadraticModel& model, double theta_hat) {
  model.validate();
  const double h = model.curvature;
  const double a = model.amplitude;
  return {model.j_opt + 0.5 * h * theta_hat * theta_hat + 0.25 * a * a * h, a * h * theta_hat, -0.25 * a * a * h};
}

QuadraticAverages quad_avg_maps(const QuadraticModel& model, double theta_bar, double xi_bar) {
  const auto b = fourier_coeffs(model, theta_bar);
  const double a = model.amplitude;
  const double dc = b.b0 - 0.5 * b.b2 - xi_bar;
  const double g2 = (4.0 / (a * a)) *
                    (0.5 * dc * dc + 1.5 * std::pow(0.5 * b.b1, 2) + 0.5 * std::pow(0.5 * b.b2, 2));
  return {model.curvature * theta_bar, g2};
}

QuadraticEquilibrium quad_equilibrium(const QuadraticModel& model) {
  const auto b = fourier_coeffs(model, 0.0);
  const double a = model.amplitude;
  return {0.0, b.b0, b.b2 * b.b2 / (a * a)};
}

JacobianReport quad_jacobian(const QuadraticModel& model, const EscParams& params) {
  model.validate();
  params.validate(params.omega_l.size());
  if (params.omega_l.empty()) throw InvalidArgument("omega_l needs at least one entry");
  const double h = model.curvature;
  const double abs_a = std::abs(model.amplitude);
  const double wl = params.omega_l[0];

  JacobianReport r;
  r.matrix[0][0] = -params.k * h / (0.25 * abs_a * h + params.epsilon);
  r.matrix[1][1] = -params.omega_xi;
  r.matrix[2][1] = -0.5 * wl * h;
  r.matrix[2][2] = -wl;
  for (std::size_t i = 0; i < 3; ++i) r.eigenvalues[i] = r.matrix[i][i];
  r.hurwitz = std::all_of(r.eigenvalues.begin(), r.eigenvalues.end(), [](double l) { return l < 0.0; });
  r.steep_limit = -4.0 * params.k / abs_a;
  r.flat_slope = -params.k / params.epsilon;
  return r;
}

std::vector<JacobianReport> quad_jacobian_diagonal(const Vector& curvature, const Vector& amplitudes,
                                                   const EscParams& params) {
  const std::size_t n = curvature.size();
  if (amplitudes.size() != n) throw DimensionError("amplitudes", n, amplitudes.size());
  params.validate(n);
  std::vector<JacobianReport> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    EscParams channel = params;
    channel.omega_l = {params.omega_l[i]};
    out.push_back(quad_jacobian({curvature[i], 0.0, amplitudes[i]}, channel));
  }
  return out;
}

}  // namespace esclab
