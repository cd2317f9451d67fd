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

#include "esclab/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace esclab {

EscParams EscParams::uniform(std::size_t n, double k, double epsilon, double omega_l, double omega_xi) {
  return EscParams{k, epsilon, Vector(n, omega_l), omega_xi};
}

void EscParams::validate(std::size_t n) const {
  if (!(k > 0.0)) throw InvalidArgument("gain k must be positive");
  if (!(epsilon > 0.0)) throw InvalidArgument("regularizer epsilon must be positive");
  if (omega_l.size() != n) throw DimensionError("omega_l", n, omega_l.size());
  for (double w : omega_l) {
    if (!(w > 0.0)) throw InvalidArgument("every omega_l must be positive");
  }
  if (!(omega_xi > 0.0)) throw InvalidArgument("washout gain omega_xi must be positive");
}

Vector EscState::flatten() const {
  Vector x;
  x.reserve(2 * theta_hat.size() + 1);
  x.insert(x.end(), theta_hat.begin(), theta_hat.end());
  x.insert(x.end(), v_hat.begin(), v_hat.end());
  x.push_back(xi);
  return x;
}

EscState EscState::unflatten(std::span<const double> x, std::size_t n) {
  if (x.size() != 2 * n + 1) throw DimensionError("flattened state", 2 * n + 1, x.size());
  return EscState{Vector(x.begin(), x.begin() + static_cast<long>(n)),
                  Vector(x.begin() + static_cast<long>(n), x.begin() + static_cast<long>(2 * n)), x[2 * n]};
}

namespace {

void check_dims(const CostFunction& cost, const DitherConfig& dither, std::size_t n) {
  if (cost.dim() != n) throw DimensionError("cost dimension", n, cost.dim());
  if (dither.dim() != n) throw DimensionError("dither dimension", n, dither.dim());
}

// Scratch buffers owned by one system closure.
struct Workspace {
  Vector s, m, probe, g;
  explicit Workspace(std::size_t n) : s(n), m(n), probe(n), g(n) {}

  // Fills g with the gradient estimate and returns the measured output y.
  double estimate(double t, std::span<const double> theta, double xi, const CostFunction& cost,
                  const DitherConfig& dither) {
    dither.value(t, s);
    dither.demod(t, m);
    for (std::size_t i = 0; i < s.size(); ++i) probe[i] = theta[i] + s[i];
    const double y = cost.value_unchecked(probe);
    for (std::size_t i = 0; i < s.size(); ++i) g[i] = m[i] * (y - xi);
    return y;
  }
};

}  // namespace

Vector grad_estimate(double t, std::span<const double> theta_hat, double xi, const CostFunction& cost,
                     const DitherConfig& dither) {
  check_dims(cost, dither, theta_hat.size());
  Workspace ws(theta_hat.size());
  ws.estimate(t, theta_hat, xi, cost, dither);
  return ws.g;
}

EscState rmspesc_rhs(double t, const EscState& state, const EscParams& params, const CostFunction& cost,
                     const DitherConfig& dither) {
  const std::size_t n = state.dim();
  check_dims(cost, dither, n);
  if (state.v_hat.size() != n) throw DimensionError("v_hat", n, state.v_hat.size());
  params.validate(n);
  for (double v : state.v_hat) {
    if (v < 0.0) throw InvalidArgument("v_hat must be nonnegative");
  }
  Workspace ws(n);
  const double y = ws.estimate(t, state.theta_hat, state.xi, cost, dither);
  EscState d{Vector(n), Vector(n), params.omega_xi * (y - state.xi)};
  for (std::size_t i = 0; i < n; ++i) {
    d.theta_hat[i] = -params.k * ws.g[i] / (std::sqrt(state.v_hat[i]) + params.epsilon);
    d.v_hat[i] = params.omega_l[i] * (ws.g[i] * ws.g[i] - state.v_hat[i]);
  }
  return d;
}

GescDerivative gesc_rhs(double t, std::span<const double> theta_hat, double xi, const EscParams& params,
                        const CostFunction& cost, const DitherConfig& dither) {
  const std::size_t n = theta_hat.size();
  check_dims(cost, dither, n);
  Workspace ws(n);
  const double y = ws.estimate(t, theta_hat, xi, cost, dither);
  GescDerivative d{Vector(n), params.omega_xi * (y - xi)};
  for (std::size_t i = 0; i < n; ++i) d.theta_hat[i] = -params.k * ws.g[i];
  return d;
}

OdeRhs make_rmspesc_system(EscParams params, CostFunction cost, DitherConfig dither) {
  const std::size_t n = cost.dim();
  check_dims(cost, dither, n);
  params.validate(n);
  return [params = std::move(params), cost = std::move(cost), dither = std::move(dither),
          ws = Workspace(n), layout = StateLayout{n}](double t, std::span<const double> x,
                                                      std::span<double> dx) mutable {
    const double xi = x[layout.xi()];
    const double y = ws.estimate(t, x.first(layout.n), xi, cost, dither);
    for (std::size_t i = 0; i < layout.n; ++i) {
      const double v = x[layout.v(i)];
      const double g = ws.g[i];
      dx[layout.theta(i)] = -params.k * g / (std::sqrt(std::max(v, 0.0)) + params.epsilon);
      dx[layout.v(i)] = params.omega_l[i] * (g * g - v);
    }
    dx[layout.xi()] = params.omega_xi * (y - xi);
  };
}

OdeRhs make_gesc_system(EscParams params, CostFunction cost, DitherConfig dither) {
  const std::size_t n = cost.dim();
  check_dims(cost, dither, n);
  params.validate(n);
  return [params = std::move(params), cost = std::move(cost), dither = std::move(dither),
          ws = Workspace(n), layout = StateLayout{n}](double t, std::span<const double> x,
                                                      std::span<double> dx) mutable {
    const double xi = x[layout.xi()];
    const double y = ws.estimate(t, x.first(layout.n), xi, cost, dither);
    for (std::size_t i = 0; i < layout.n; ++i) {
      dx[layout.theta(i)] = -params.k * ws.g[i];
      dx[layout.v(i)] = 0.0;
    }
    dx[layout.xi()] = params.omega_xi * (y - xi);
  };
}

}  // namespace esclab
