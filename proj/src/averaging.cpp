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

#include "esclab/averaging.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <exception>
#include <omp.h>
#include <string>

namespace esclab {

namespace {

double norm(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

void check_dims(const CostFunction& cost, const DitherConfig& dither, std::size_t n) {
  if (cost.dim() != n) throw DimensionError("cost dimension", n, cost.dim());
  if (dither.dim() != n) throw DimensionError("dither dimension", n, dither.dim());
}

std::size_t resolve_nodes(const DitherConfig& dither, std::size_t nodes) {
  return nodes == 0 ? default_quadrature_nodes(dither) : nodes;
}

}  // namespace

std::size_t default_quadrature_nodes(const DitherConfig& dither) noexcept {
  return 256 * static_cast<std::size_t>(dither.max_rate());
}

AverageMaps avg_maps(const CostFunction& cost, const QuadratureNodes& q, std::span<const double> theta_bar,
                     double xi_bar) {
  const std::size_t n = q.dim();
  if (theta_bar.size() != n) throw DimensionError("theta_bar", n, theta_bar.size());
  if (cost.dim() != n) throw DimensionError("cost dimension", n, cost.dim());

  AverageMaps out{0.0, Vector(n, 0.0), Vector(n, 0.0), q.size()};
  Vector probe(n);
  for (std::size_t j = 0; j < q.size(); ++j) {
    const auto s = q.dither(j);
    const auto m = q.demod(j);
    for (std::size_t i = 0; i < n; ++i) probe[i] = theta_bar[i] + s[i];
    const double y = cost.value_unchecked(probe);
    out.j_bar += y;
    for (std::size_t i = 0; i < n; ++i) {
      out.g_bar[i] += m[i] * y;
      const double g = m[i] * (y - xi_bar);
      out.g2_bar[i] += g * g;
    }
  }
  const double inv = 1.0 / static_cast<double>(q.size());
  out.j_bar *= inv;
  for (std::size_t i = 0; i < n; ++i) {
    out.g_bar[i] *= inv;
    out.g2_bar[i] *= inv;
  }
  return out;
}

AverageMaps avg_maps(const CostFunction& cost, const DitherConfig& dither, std::span<const double> theta_bar,
                     double xi_bar, std::size_t nodes) {
  check_dims(cost, dither, theta_bar.size());
  return avg_maps(cost, QuadratureNodes(dither, resolve_nodes(dither, nodes)), theta_bar, xi_bar);
}

EscState average_rhs(const EscState& state, const EscParams& params, const CostFunction& cost,
                     const DitherConfig& dither, std::size_t nodes) {
  const std::size_t n = state.dim();
  check_dims(cost, dither, n);
  if (state.v_hat.size() != n) throw DimensionError("v_bar", n, state.v_hat.size());
  params.validate(n);
  for (double v : state.v_hat) {
    if (v < 0.0) throw InvalidArgument("v_bar must be nonnegative");
  }
  const auto maps = avg_maps(cost, dither, state.theta_hat, state.xi, nodes);
  EscState d{Vector(n), Vector(n), params.omega_xi * (maps.j_bar - state.xi)};
  for (std::size_t i = 0; i < n; ++i) {
    d.theta_hat[i] = -params.k * maps.g_bar[i] / (std::sqrt(state.v_hat[i]) + params.epsilon);
    d.v_hat[i] = params.omega_l[i] * (maps.g2_bar[i] - state.v_hat[i]);
  }
  return d;
}

OdeRhs make_average_system(EscParams params, CostFunction cost, const DitherConfig& dither, std::size_t nodes) {
  const std::size_t n = cost.dim();
  check_dims(cost, dither, n);
  params.validate(n);
  QuadratureNodes q(dither, resolve_nodes(dither, nodes));
  return [params = std::move(params), cost = std::move(cost), q = std::move(q),
          layout = StateLayout{n}](double, std::span<const double> x, std::span<double> dx) {
    const double xi = x[layout.xi()];
    const auto maps = avg_maps(cost, q, x.first(layout.n), xi);
    for (std::size_t i = 0; i < layout.n; ++i) {
      const double v = x[layout.v(i)];
      dx[layout.theta(i)] = -params.k * maps.g_bar[i] / (std::sqrt(std::max(v, 0.0)) + params.epsilon);
      dx[layout.v(i)] = params.omega_l[i] * (maps.g2_bar[i] - v);
    }
    dx[layout.xi()] = params.omega_xi * (maps.j_bar - xi);
  };
}

Equilibrium equilibrium(const CostFunction& cost, const DitherConfig& dither, std::span<const double> theta_init,
                        const EquilibriumOptions& options) {
  const std::size_t n = theta_init.size();
  check_dims(cost, dither, n);
  if (!(options.tol > 0.0)) throw InvalidArgument("equilibrium tolerance must be positive");
  const QuadratureNodes q(dither, resolve_nodes(dither, options.nodes));

  constexpr double kArmijo = 1e-4;
  constexpr double kShrink = 0.5;
  constexpr double kMaxStep = 1e12;

  Vector theta(theta_init.begin(), theta_init.end());
  Vector trial(n);
  auto maps = avg_maps(cost, q, theta, 0.0);
  double step = 1.0;
  std::size_t it = 0;
  for (; norm(maps.g_bar) > options.tol; ++it) {
    if (it >= options.max_iterations) {
      char buf[128];
      std::snprintf(buf, sizeof buf, "equilibrium search stopped after %zu iterations with ||g_bar|| = %.3e", it,
                    norm(maps.g_bar));
      throw ConvergenceError(buf);
    }
    const double g2 = std::pow(norm(maps.g_bar), 2);
    step = std::min(2.0 * step, kMaxStep);
    bool accepted = false;
    while (step > 1e-300) {
      for (std::size_t i = 0; i < n; ++i) trial[i] = theta[i] - step * maps.g_bar[i];
      auto next = avg_maps(cost, q, trial, 0.0);
      // Once the predicted decrease is lost in the rounding of J_bar, the
      // Armijo test accepts noise; use ||g_bar|| as the merit instead.
      const bool flat = step * g2 <= 1e-11 * std::max(1.0, std::abs(maps.j_bar));
      const bool ok = flat ? norm(next.g_bar) < norm(maps.g_bar) : next.j_bar <= maps.j_bar - kArmijo * step * g2;
      if (std::isfinite(next.j_bar) && ok) {
        theta = trial;
        maps = std::move(next);
        accepted = true;
        break;
      }
      step *= kShrink;
    }
    if (!accepted) {
      throw ConvergenceError("equilibrium line search failed at ||g_bar|| = " + std::to_string(norm(maps.g_bar)) + " theta0=" + std::to_string(theta[0]) + " step=" + std::to_string(step));
    }
  }

  Equilibrium eq;
  eq.theta_star = theta;
  eq.xi_star = maps.j_bar;
  eq.v_star = avg_maps(cost, q, theta, eq.xi_star).g2_bar;
  eq.grad_norm = norm(maps.g_bar);
  eq.iterations = it;
  return eq;
}

ErrorState to_error_coords(const EscState& state, const Equilibrium& eq) {
  const std::size_t n = eq.dim();
  if (state.theta_hat.size() != n) throw DimensionError("theta_bar", n, state.theta_hat.size());
  if (state.v_hat.size() != n) throw DimensionError("v_bar", n, state.v_hat.size());
  ErrorState e{Vector(n), Vector(n), state.xi - eq.xi_star};
  for (std::size_t i = 0; i < n; ++i) {
    e.theta_err[i] = state.theta_hat[i] - eq.theta_star[i];
    e.v_err[i] = state.v_hat[i] - eq.v_star[i];
  }
  return e;
}

EscState from_error_coords(const ErrorState& err, const Equilibrium& eq) {
  const std::size_t n = eq.dim();
  if (err.theta_err.size() != n) throw DimensionError("theta_err", n, err.theta_err.size());
  if (err.v_err.size() != n) throw DimensionError("v_err", n, err.v_err.size());
  EscState s{Vector(n), Vector(n), err.xi_err + eq.xi_star};
  for (std::size_t i = 0; i < n; ++i) {
    s.theta_hat[i] = err.theta_err[i] + eq.theta_star[i];
    s.v_hat[i] = err.v_err[i] + eq.v_star[i];
  }
  return s;
}

std::vector<SweepRow> convergence_sweep(const CostFunction& cost, const DitherConfig& dither,
                                        std::span<const double> theta_bar, std::span<const double> a0_list,
                                        std::size_t nodes) {
  const std::size_t n = theta_bar.size();
  check_dims(cost, dither, n);
  for (std::size_t k = 0; k < a0_list.size(); ++k) {
    if (!(a0_list[k] > 0.0)) throw InvalidArgument("sweep amplitudes must be positive");
    if (k > 0 && !(a0_list[k] < a0_list[k - 1])) throw InvalidArgument("sweep amplitudes must be decreasing");
  }
  const Vector start = cost.minimizer().value_or(Vector(theta_bar.begin(), theta_bar.end()));
  const Vector exact = cost.gradient(theta_bar);

  std::vector<SweepRow> rows(a0_list.size());
  std::exception_ptr failure;
  const auto total = static_cast<long>(a0_list.size());
#pragma omp parallel for schedule(dynamic) num_threads(thread_limit() > 0 ? thread_limit() : omp_get_max_threads())
  for (long k = 0; k < total; ++k) {
    try {
      const auto idx = static_cast<std::size_t>(k);
      const DitherConfig scaled = dither.scaled(a0_list[idx]);
      const std::size_t q = resolve_nodes(scaled, nodes);
      const auto maps = avg_maps(cost, scaled, theta_bar, 0.0, q);
      double err = 0.0;
      for (std::size_t i = 0; i < n; ++i) err += std::pow(maps.g_bar[i] - exact[i], 2);
      const auto eq = equilibrium(cost, scaled, start, {.nodes = q});
      rows[idx] = {a0_list[idx], std::sqrt(err), *std::max_element(eq.v_star.begin(), eq.v_star.end())};
    } catch (...) {
#pragma omp critical(esclab_sweep_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return rows;
}

AveragingGap averaging_gap(const EscParams& params, const CostFunction& cost, const DitherConfig& dither,
                           const EscState& initial, double t_end, double h, std::size_t nodes) {
  const std::size_t n = initial.dim();
  check_dims(cost, dither, n);
  const double step = h > 0.0 ? h : dither_step_limit(dither);
  const StateLayout layout{n};
  AveragingGap out;
  out.full = integrate_fixed(make_rmspesc_system(params, cost, dither), initial.flatten(), 0.0, t_end, step, 1,
                             layout.v_range(), "rmspesc");
  out.average = integrate_fixed(make_average_system(params, cost, dither, nodes), initial.flatten(), 0.0, t_end,
                                step, 1, layout.v_range(), "average");
  for (std::size_t j = 0; j < out.full.size(); ++j) {
    for (std::size_t i = 0; i < n; ++i) {
      out.sup_theta_gap =
          std::max(out.sup_theta_gap, std::abs(out.full.states[j][i] - out.average.states[j][i]));
    }
  }
  return out;
}

}  // namespace esclab
