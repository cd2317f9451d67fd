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

#include <cmath>
#include <random>

#include "doctest.h"
#include "esclab/averaging.hpp"
#include "esclab/quadratic.hpp"
#include "oracles.hpp"

using esclab::EscParams;
using esclab::EscState;
using esclab::QuadraticModel;
using esclab::Vector;

namespace {

const EscParams kGains = EscParams::uniform(1, 1.0, 0.05, 0.25, 1.0);

// Central-difference Jacobian of the averaged loop in (theta, xi, v) order.
std::array<std::array<double, 3>, 3> numeric_jacobian(const QuadraticModel& model, const EscParams& params) {
  const auto cost = model.cost();
  const auto dither = model.dither(10.0);
  const auto eq = esclab::equilibrium(cost, dither, Vector{0.0});
  const double base[3] = {eq.theta_star[0], eq.xi_star, eq.v_star[0]};
  auto rhs = [&](const double x[3]) {
    const EscState d = esclab::average_rhs(EscState{{x[0]}, {x[2]}, x[1]}, params, cost, dither, 256);
    return std::array<double, 3>{d.theta_hat[0], d.xi, d.v_hat[0]};
  };
  std::array<std::array<double, 3>, 3> jac{};
  for (int c = 0; c < 3; ++c) {
    const double h = 1e-6 * std::max(1.0, std::abs(base[c]));
    double up[3] = {base[0], base[1], base[2]}, down[3] = {base[0], base[1], base[2]};
    up[c] += h;
    down[c] -= h;
    const auto fu = rhs(up), fd = rhs(down);
    for (int r = 0; r < 3; ++r) jac[r][c] = (fu[r] - fd[r]) / (2 * h);
  }
  return jac;
}

}  // namespace

TEST_CASE("Fourier coefficients sample values") {
  const QuadraticModel m{1.0, 3.0, 0.2};
  const auto c = esclab::fourier_coeffs(m, 1.0);
  CHECK(c.b0 == doctest::Approx(3.51).epsilon(1e-14));
  CHECK(c.b1 == doctest::Approx(0.2).epsilon(1e-14));
  CHECK(c.b2 == doctest::Approx(-0.01).epsilon(1e-14));
  CHECK(esclab::fourier_coeffs(m, 0.0).b1 == 0.0);
}

TEST_CASE("Fourier coefficients agree with a direct DFT") {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> uh(0.1, 10.0), ua(0.01, 0.5), ut(-3.0, 3.0);
  for (int k = 0; k < 50; ++k) {
    const QuadraticModel m{uh(rng), ut(rng), ua(rng)};
    const double theta = ut(rng);
    const auto c = esclab::fourier_coeffs(m, theta);
    const auto ref = oracle::dft([&](double tau) {
      const double x = theta + m.amplitude * std::sin(tau);
      return m.j_opt + 0.5 * m.curvature * x * x;
    });
    CHECK(c.b0 == doctest::Approx(ref.c0).epsilon(1e-12));
    CHECK(c.b1 == doctest::Approx(ref.c1).epsilon(1e-10).scale(1.0));
    CHECK(c.b2 == doctest::Approx(ref.c2).epsilon(1e-10).scale(1.0));
  }
}

TEST_CASE("closed-form averages sample values") {
  CHECK(esclab::quad_avg_maps(QuadraticModel{1.0, 3.0, 0.2}, 1.5, 0.0).g_bar == doctest::Approx(1.5));
  const auto at_eq = esclab::quad_avg_maps(QuadraticModel{1.0, 3.0, 0.2}, 0.0, 3.01);
  CHECK(at_eq.g2_bar == doctest::Approx(0.0025).epsilon(1e-13));
}

TEST_CASE("closed-form averages match numerical quadrature") {
  std::mt19937_64 rng(32);
  std::uniform_real_distribution<double> uh(0.1, 10.0), ua(0.01, 0.5), ut(-3.0, 3.0), ux(-5.0, 5.0);
  for (int k = 0; k < 50; ++k) {
    const QuadraticModel m{uh(rng), 0.0, ua(rng)};
    const double theta = ut(rng), xi = ux(rng);
    const auto closed = esclab::quad_avg_maps(m, theta, xi);
    const auto numeric = esclab::avg_maps(m.cost(), m.dither(10.0), Vector{theta}, xi, 256);
    CHECK(std::abs(numeric.g_bar[0] - closed.g_bar) <= 1e-10 * std::max(1.0, std::abs(closed.g_bar)));
    CHECK(std::abs(numeric.g2_bar[0] - closed.g2_bar) <= 1e-10 * std::max(1.0, std::abs(closed.g2_bar)));
    CHECK(std::abs(numeric.j_bar - esclab::fourier_coeffs(m, theta).b0) <= 1e-10 * std::max(1.0, numeric.j_bar));
  }
}

TEST_CASE("closed-form equilibrium") {
  const auto eq = esclab::quad_equilibrium(QuadraticModel{1.0, 3.0, 0.2});
  CHECK(eq.theta_star == 0.0);
  CHECK(eq.xi_star == doctest::Approx(3.01).epsilon(1e-15));
  CHECK(eq.v_star == doctest::Approx(0.0025).epsilon(1e-15));
}

TEST_CASE("Jacobian sample values") {
  const auto r = esclab::quad_jacobian(QuadraticModel{4.0, 0.0, 0.02}, kGains);
  CHECK(r.eigenvalues[0] == doctest::Approx(-4.0 / 0.07).epsilon(1e-12));
  CHECK(r.eigenvalues[0] == doctest::Approx(-57.142857).epsilon(1e-8));
  CHECK(r.eigenvalues[1] == doctest::Approx(-1.0));
  CHECK(r.eigenvalues[2] == doctest::Approx(-0.25));
  CHECK(r.matrix[2][1] == doctest::Approx(-0.5));
  CHECK(r.hurwitz);
  CHECK(r.steep_limit == doctest::Approx(-200.0));
  CHECK(r.flat_slope == doctest::Approx(-20.0));
}

TEST_CASE("Jacobian matches central differences of the averaged loop") {
  for (double h : {0.5, 1.0, 4.0, 20.0}) {
    for (double a : {0.02, 0.2}) {
      const QuadraticModel m{h, 3.0, a};
      const auto closed = esclab::quad_jacobian(m, kGains).matrix;
      const auto numeric = numeric_jacobian(m, kGains);
      for (int r = 0; r < 3; ++r) {
        for (int c = 0; c < 3; ++c) CHECK(std::abs(closed[r][c] - numeric[r][c]) <= 1e-6);
      }
    }
  }
}

TEST_CASE("Hurwitz across curvature scales and the (1,1) entry is monotone and bounded") {
  double prev = 0.0;
  for (double h : {1e-3, 1e-2, 1e-1, 1.0, 10.0, 1e2, 1e3, 1e4}) {
    const auto r = esclab::quad_jacobian(QuadraticModel{h, 0.0, 0.02}, kGains);
    CHECK(r.hurwitz);
    for (double e : r.eigenvalues) CHECK(e < 0.0);
    CHECK(r.matrix[0][0] < prev);
    CHECK(r.matrix[0][0] >= -200.0);
    prev = r.matrix[0][0];
  }
  const auto steep = esclab::quad_jacobian(QuadraticModel{1e4, 0.0, 0.02}, kGains);
  CHECK(std::abs(steep.matrix[0][0] / -200.0 - 1.0) <= 0.05);
  const auto flat = esclab::quad_jacobian(QuadraticModel{1e-3, 0.0, 0.02}, kGains);
  CHECK(std::abs(flat.matrix[0][0] / (-20.0 * 1e-3) - 1.0) <= 0.01);
}

TEST_CASE("diagonal multivariate case is one scalar report per channel") {
  auto p = EscParams::uniform(2, 1.0, 0.05, 0.25, 1.0);
  p.omega_l = {0.25, 0.5};
  const auto reports = esclab::quad_jacobian_diagonal({4.0, 1.0}, {0.02, 0.2}, p);
  REQUIRE(reports.size() == 2);
  CHECK(reports[0].eigenvalues[0] == doctest::Approx(-57.142857).epsilon(1e-8));
  CHECK(reports[1].eigenvalues[2] == doctest::Approx(-0.5));
  CHECK(reports[1].matrix[0][0] == doctest::Approx(-1.0 / (0.05 + 0.05)));
}

TEST_CASE("invalid models are rejected") {
  CHECK_THROWS_AS(QuadraticModel({0.0, 0.0, 0.1}).validate(), esclab::InvalidArgument);
  CHECK_THROWS_AS(QuadraticModel({1.0, 0.0, 0.0}).validate(), esclab::InvalidArgument);
}
