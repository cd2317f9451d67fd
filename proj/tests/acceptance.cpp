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

// Acceptance runner: one PASS/FAIL line per criterion, nonzero exit on any FAIL.
// Tolerances and runtime budgets are fixed here on purpose.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "esclab/averaging.hpp"
#include "esclab/cost.hpp"
#include "esclab/dynamics.hpp"
#include "esclab/integrate.hpp"
#include "esclab/lyapunov.hpp"
#include "esclab/quadratic.hpp"
#include "esclab/signals.hpp"

using namespace esclab;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0, double d = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c, d);
  return buf;
}

// Reference closed-loop settings shared by the quartic runs.
EscParams reference_gains() { return EscParams::uniform(1, 1.0, 0.05, 0.25, 1.0); }
DitherConfig reference_dither(double omega = 10.0) { return DitherConfig({0.02}, {1}, omega); }

Outcome closed_forms() {
  std::mt19937_64 rng(20260418);
  std::uniform_real_distribution<double> H(0.1, 10.0), A(0.01, 0.5), T(-3.0, 3.0), X(-5.0, 5.0), J(-2.0, 2.0);
  double worst = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    QuadraticModel m;
    m.curvature = H(rng);
    m.amplitude = A(rng);
    m.j_opt = J(rng);
    const double theta = T(rng), xi = X(rng);
    const AverageMaps num = avg_maps(m.cost(), m.dither(10.0), std::vector<double>{theta}, xi, 256);
    const FourierCoeffs b = fourier_coeffs(m, theta);
    const QuadraticAverages exact = quad_avg_maps(m, theta, xi);
    const auto rel = [](double x, double ref) { return std::abs(x - ref) / std::abs(ref); };
    worst = std::max({worst, rel(num.j_bar, b.b0), rel(num.g_bar[0], m.curvature * theta),
                      rel(num.g_bar[0], exact.g_bar), rel(num.g2_bar[0], exact.g2_bar)});
  }
  return {worst <= 1e-9, fmt("max_rel_err=%.3e (limit 1e-9, 50 samples, N_q=256)", worst)};
}

Outcome quadratic_equilibrium() {
  QuadraticModel m;
  m.curvature = 1.0;
  m.j_opt = 3.0;
  m.amplitude = 0.2;
  const Equilibrium eq = equilibrium(m.cost(), m.dither(10.0), std::vector<double>{2.0});
  const double t = eq.theta_star[0], x = eq.xi_star, v = eq.v_star[0];
  const bool ok = std::abs(t) <= 1e-9 && std::abs(x - 3.01) <= 1e-9 && std::abs(v - 0.0025) <= 1e-9;
  return {ok, fmt("theta*=%.3e xi*=%.12f v*=%.12f (tol 1e-9)", t, x, v)};
}

// Central-difference Jacobian of the averaged field in (theta, xi, v) order.
std::array<std::array<double, 3>, 3> fd_jacobian(const QuadraticModel& m, const EscParams& p) {
  const CostFunction cost = m.cost();
  const DitherConfig dither = m.dither(10.0);
  const QuadraticEquilibrium e = quad_equilibrium(m);
  const std::array<double, 3> x0{e.theta_star, e.xi_star, e.v_star};
  const std::array<double, 3> step{1e-5, 1e-5, std::min(1e-6, 1e-2 * e.v_star)};
  const auto field = [&](const std::array<double, 3>& x) {
    const EscState d = average_rhs(EscState{{x[0]}, {x[2]}, x[1]}, p, cost, dither, 256);
    return std::array<double, 3>{d.theta_hat[0], d.xi, d.v_hat[0]};
  };
  std::array<std::array<double, 3>, 3> jac{};
  for (int c = 0; c < 3; ++c) {
    auto hi = x0, lo = x0;
    hi[c] += step[c];
    lo[c] -= step[c];
    const auto fh = field(hi), fl = field(lo);
    for (int r = 0; r < 3; ++r) jac[r][c] = (fh[r] - fl[r]) / (2.0 * step[c]);
  }
  return jac;
}

Outcome jacobian() {
  const EscParams p = reference_gains();
  double worst = 0.0;
  const std::array<std::array<double, 3>, 4> cases{{{4.0, 0.0, 0.02}, {1.0, 3.0, 0.2}, {0.3, -1.0, 0.1}, {7.5, 2.0, 0.05}}};
  for (const auto& [h, j, a] : cases) {
    QuadraticModel m;
    m.curvature = h;
    m.j_opt = j;
    m.amplitude = a;
    const auto exact = quad_jacobian(m, p).matrix;
    const auto fd = fd_jacobian(m, p);
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c < 3; ++c) worst = std::max(worst, std::abs(exact[r][c] - fd[r][c]));
  }
  QuadraticModel steep;
  steep.curvature = 1e4;
  steep.amplitude = 0.02;
  QuadraticModel flat = steep;
  flat.curvature = 1e-3;
  const double e_steep = quad_jacobian(steep, p).matrix[0][0];
  const double e_flat = quad_jacobian(flat, p).matrix[0][0];
  const double flat_ref = -(p.k / p.epsilon) * flat.curvature;
  const bool ok = worst <= 1e-6 && std::abs(e_steep + 200.0) <= 0.05 * 200.0 &&
                  std::abs(e_flat - flat_ref) <= 0.01 * std::abs(flat_ref);
  return {ok, fmt("fd_max_abs_err=%.3e (limit 1e-6) J11(H=1e4)=%.4f (-200+-5%%) J11(H=1e-3)=%.6g vs %.6g (+-1%%)",
                  worst, e_steep, e_flat, flat_ref)};
}

Outcome small_dither_rates() {
  const CostFunction cost = builtin::quartic();
  const std::vector<double> a0{0.08, 0.04, 0.02, 0.01};
  const std::vector<double> theta{2.0};
  const auto rows = convergence_sweep(cost, reference_dither(), theta, a0);
  bool ok = rows.size() == a0.size();
  double lo = 1e300, hi = -1e300, oracle_gap = 0.0;
  for (std::size_t i = 0; ok && i < rows.size(); ++i) {
    const double oracle = a0[i] * a0[i] * theta[0] / 8.0;
    oracle_gap = std::max(oracle_gap, std::abs(rows[i].grad_error - oracle) / oracle);
    if (i == 0) continue;
    const double ratio = rows[i - 1].grad_error / rows[i].grad_error;
    lo = std::min(lo, ratio);
    hi = std::max(hi, ratio);
    ok = ok && ratio >= 3.8 && ratio <= 4.2 && rows[i].v_star_max < rows[i - 1].v_star_max;
  }
  const double v_last = rows.empty() ? 1.0 : rows.back().v_star_max;
  ok = ok && v_last < 1e-10 && oracle_gap <= 1e-6;
  return {ok, fmt("ratios in [%.4f, %.4f] (limit [3.8,4.2]) rel_gap_to_a2theta/8=%.2e v*(0.01)=%.3e (<1e-10)", lo, hi,
                  oracle_gap, v_last)};
}

Outcome averaging_validity() {
  const EscState x0{{2.0}, {0.81}, 0.0};
  std::vector<double> gaps;
  for (double omega : {10.0, 20.0, 40.0}) {
    gaps.push_back(averaging_gap(reference_gains(), builtin::quartic(), reference_dither(omega), x0, 100.0)
                       .sup_theta_gap);
  }
  const bool ok = gaps[1] < gaps[0] && gaps[2] < gaps[1];
  return {ok, fmt("sup gaps omega=10,20,40: %.4f %.4f %.4f (strictly decreasing)", gaps[0], gaps[1], gaps[2])};
}

double max_rate(const OdeRhs& rhs, const Trajectory& tr, double t_max) {
  std::vector<double> d(tr.states.front().size());
  double peak = 0.0;
  for (std::size_t j = 0; j < tr.size() && tr.times[j] <= t_max + 1e-12; ++j) {
    rhs(tr.times[j], tr.states[j], d);
    peak = std::max(peak, std::abs(d[0]));
  }
  return peak;
}

Outcome quartic_reproduction() {
  const CostFunction cost = builtin::quartic();
  const DitherConfig dither = reference_dither();
  const EscParams p = reference_gains();
  const double h = dither_step_limit(dither);
  const double y0 = cost(std::vector<double>{2.0 + dither.value(0.0)[0]});
  const OdeRhs rms = make_rmspesc_system(p, cost, dither);
  const StateLayout layout{1};
  bool ok = true;
  std::string finals;
  double rms_peak = 0.0;
  for (double xi0 : {0.0, y0, 2.0 * y0}) {
    const Trajectory tr = integrate_fixed(rms, {2.0, 0.81, xi0}, 0.0, 100.0, h, 1, layout.v_range());
    const double end = std::abs(tr.back()[0]);
    ok = ok && end < 0.3 && end < 2.0 / 4.0;
    finals += fmt("%.4f ", end);
    if (xi0 == 0.0) rms_peak = max_rate(rms, tr, 5.0);
  }
  const OdeRhs gesc = make_gesc_system(p, cost, dither);
  const Trajectory g = integrate_fixed(gesc, {2.0, 0.81, 0.0}, 0.0, 5.0, h, 1, layout.v_range());
  const double gesc_peak = max_rate(gesc, g, 5.0);
  ok = ok && rms_peak < gesc_peak;
  return {ok, "|theta(100)| = " + finals + "(limit 0.3, 0.5)" +
                  fmt(" max|dtheta/dt| on [0,5]: rmspesc=%.4f gesc=%.4f", rms_peak, gesc_peak)};
}

struct DescentCase {
  std::string name;
  CostFunction cost;
  DitherConfig dither;
};

std::vector<DescentCase> descent_cases() {
  QuadraticModel m;
  m.curvature = 1.0;
  m.j_opt = 3.0;
  m.amplitude = 0.2;
  return {{"quadratic", m.cost(), m.dither(10.0)}, {"quartic", builtin::quartic(), reference_dither()}};
}

bool radii_monotone(const DescentCase& c, const Equilibrium& eq, double c_max) {
  RadiusSolver solver(c.cost, c.dither, eq);
  std::vector<double> levels;
  for (int i = 0; i < 10; ++i) levels.push_back(c_max * std::pow(10.0, -3.0 + 3.0 * i / 9.0));
  const double xi_top = 2.0 * solver.r_xi(levels.back());
  std::vector<double> xi_levels;
  for (int i = 0; i < 10; ++i) xi_levels.push_back(xi_top * (i + 1) / 10.0);
  double prev = -1.0;
  for (double lv : levels) {
    const double r = solver.r_xi(lv);
    if (r < 0.0 || r < prev) return false;
    prev = r;
  }
  std::vector<std::vector<double>> rv(levels.size(), std::vector<double>(xi_levels.size()));
  for (std::size_t i = 0; i < levels.size(); ++i)
    for (std::size_t j = 0; j < xi_levels.size(); ++j) rv[i][j] = solver.r_v(0, levels[i], xi_levels[j]);
  for (std::size_t i = 0; i < levels.size(); ++i) {
    for (std::size_t j = 0; j < xi_levels.size(); ++j) {
      if (rv[i][j] < 0.0) return false;
      if (i > 0 && rv[i][j] < rv[i - 1][j]) return false;
      if (j > 0 && rv[i][j] < rv[i][j - 1]) return false;
    }
  }
  return true;
}

void lyapunov_criteria(Outcome& descent, Outcome& bounds) {
  descent.pass = bounds.pass = true;
  for (const auto& c : descent_cases()) {
    const Equilibrium eq = equilibrium(c.cost, c.dither, std::vector<double>{0.0});
    const OdeRhs avg_rhs = make_average_system(reference_gains(), c.cost, c.dither, 0);
    const Trajectory avg = integrate_fixed(avg_rhs, {2.0, 0.81, 0.0}, 0.0, 100.0, dither_step_limit(c.dither), 16,
                                           StateLayout{1}.v_range());
    const DescentReport d = monitor_descent(avg, c.cost, c.dither, eq);
    const double c0 = v_theta(c.cost, eq.theta_star, std::vector<double>{2.0 - eq.theta_star[0]});
    const bool mono = radii_monotone(c, eq, c0);
    descent.pass = descent.pass && d.pass && mono;
    descent.detail += c.name + ": descent " + (d.pass ? "PASS" : "FAIL") +
                      fmt(" V0=%.6g Vend=%.3e", d.values.front(), d.values.back());
    descent.detail += std::string(" radii ") + (mono ? "monotone" : "NOT monotone") + "; ";

    const FilterBoundReport b = check_filter_bounds(avg, c.cost, c.dither, eq);
    bounds.pass = bounds.pass && b.pass;
    bounds.detail += c.name + fmt(": max|xi_e|=%.4g <= %.4g, max|v_e|=%.4g <= %.4g; ", b.max_xi_err, b.xi_bound,
                                  b.max_v_err[0], b.v_bounds[0]);
  }
}

Outcome rk4_order() {
  const OdeRhs decay = [](double, std::span<const double> x, std::span<double> d) { d[0] = -x[0]; };
  std::vector<double> err;
  for (double h : {0.2, 0.1, 0.05}) {
    const Trajectory tr = integrate_fixed(decay, {1.0}, 0.0, 2.0, h);
    err.push_back(std::abs(tr.back()[0] - std::exp(-2.0)));
  }
  const double r1 = err[0] / err[1], r2 = err[1] / err[2];
  const bool ok = r1 >= 14.0 && r1 <= 18.0 && r2 >= 14.0 && r2 <= 18.0;
  return {ok, fmt("error ratios %.4f %.4f (limit [14,18])", r1, r2)};
}

struct Timed {
  Outcome outcome;
  double seconds = 0.0;
};

Timed timed(const std::function<Outcome()>& f) {
  const auto start = std::chrono::steady_clock::now();
  Outcome o = f();
  return {o, std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count()};
}

}  // namespace

int main() {
  bool all = true;
  const auto report = [&all](int id, const Timed& r, double budget) {
    const bool ok = r.outcome.pass && r.seconds < budget;
    all = all && ok;
    std::printf("criterion %d: %s %s [%.2fs, budget %.0fs]\n", id, ok ? "PASS" : "FAIL", r.outcome.detail.c_str(),
                r.seconds, budget);
    std::fflush(stdout);
  };
  report(1, timed(closed_forms), 5.0);
  report(2, timed(quadratic_equilibrium), 1.0);
  report(3, timed(jacobian), 5.0);
  report(4, timed(small_dither_rates), 30.0);
  report(5, timed(averaging_validity), 60.0);
  report(6, timed(quartic_reproduction), 60.0);
  Outcome bounds;
  const Timed descent = timed([&bounds] {
    Outcome d;
    lyapunov_criteria(d, bounds);
    return d;
  });
  report(7, descent, 120.0);
  report(8, Timed{bounds, 0.0}, 120.0);
  report(9, timed(rk4_order), 1.0);
  return all ? 0 : 1;
}
