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

#include "esclab/lyapunov.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <string>

#include "grid.hpp"

namespace esclab {

namespace {

constexpr double kQuantumLog = 9.995003330835332e-04;  // log1p(1e-3)
constexpr std::size_t kMaxZoom = 400;
constexpr std::size_t kMaxGrow = 80;

MomentTable single_row_table(std::size_t n) {
  MomentTable t;
  t.n = n;
  t.count = 1;
  t.j_bar.assign(1, 0.0);
  t.g_bar.assign(n, 0.0);
  t.centered_sq.assign(n, 0.0);
  t.centered_lin.assign(n, 0.0);
  t.demod_sq.assign(n, 0.0);
  return t;
}

}  // namespace

double v_theta(const CostFunction& cost, std::span<const double> theta_star, std::span<const double> theta_err) {
  const std::size_t n = cost.dim();
  if (theta_star.size() != n) throw DimensionError("theta_star", n, theta_star.size());
  if (theta_err.size() != n) throw DimensionError("theta_err", n, theta_err.size());
  Vector x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = theta_star[i] + theta_err[i];
  return cost.value_unchecked(x) - cost.value_unchecked(theta_star);
}

RadiusSolver::RadiusSolver(CostFunction cost, DitherConfig dither, Equilibrium eq, LevelSpec spec, bool quantize)
    : cost_(std::move(cost)),
      dither_(std::move(dither)),
      eq_(std::move(eq)),
      spec_(std::move(spec)),
      quantize_(quantize),
      q_(dither_, spec_.nodes == 0 ? default_quadrature_nodes(dither_) : spec_.nodes) {
  const std::size_t n = cost_.dim();
  if (dither_.dim() != n) throw DimensionError("dither dimension", n, dither_.dim());
  if (eq_.dim() != n) throw DimensionError("equilibrium dimension", n, eq_.dim());
  if (spec_.points_per_axis < 3) throw InvalidArgument("radius search needs at least 3 points per axis");
  if (!spec_.box.lo.empty()) {
    spec_.box.validate();
    if (spec_.box.dim() != n) throw DimensionError("radius search box", n, spec_.box.dim());
  }
  j_star_ = cost_.value(eq_.theta_star);
  MomentTable t = single_row_table(n);
  point_moments(cost_, q_, eq_.theta_star, t, 0);
  j_bar_star_ = t.j_bar[0];
  g2_star_.resize(n);
  for (std::size_t i = 0; i < n; ++i) g2_star_[i] = t.g2_bar(0, i, eq_.xi_star);
  v_cache_.resize(n);
}

double RadiusSolver::v_theta(std::span<const double> theta_err) const {
  return esclab::v_theta(cost_, eq_.theta_star, theta_err);
}

double RadiusSolver::quantize_level(double c, long* key) const {
  const long k = static_cast<long>(std::ceil(std::log(c) / kQuantumLog));
  *key = k;
  return std::max(c, std::exp(static_cast<double>(k) * kQuantumLog));
}

double RadiusSolver::r_xi(double c_theta) {
  if (!(c_theta > 0.0)) return 0.0;
  const Query q{Target::washout, 0, 0.0};
  if (!quantize_) return search(c_theta, q);
  long key = 0;
  const double level = quantize_level(c_theta, &key);
  if (auto it = xi_cache_.find(key); it != xi_cache_.end()) return it->second;
  const double r = search(level, q);
  xi_cache_.emplace(key, r);
  return r;
}

double RadiusSolver::r_v(std::size_t channel, double c_theta, double c_xi) {
  if (channel >= cost_.dim()) throw InvalidArgument("channel out of range");
  c_theta = std::max(c_theta, 0.0);
  c_xi = std::max(c_xi, 0.0);
  if (c_theta == 0.0 && c_xi == 0.0) return 0.0;

  long key_theta = std::numeric_limits<long>::min();
  long key_xi = std::numeric_limits<long>::min();
  if (quantize_) {
    if (c_theta > 0.0) c_theta = quantize_level(c_theta, &key_theta);
    if (c_xi > 0.0) c_xi = quantize_level(c_xi, &key_xi);
    auto& cache = v_cache_[channel];
    if (auto it = cache.find({key_theta, key_xi}); it != cache.end()) return it->second;
  }

  // phi is feasible iff V_theta(phi) <= c_theta and r_xi(V_theta(phi)) <= c_xi;
  // r_xi is nondecreasing, so this is one sublevel set of V_theta.
  double level = c_theta;
  if (r_xi(c_theta) > c_xi) {
    double lo = 0.0;
    double hi = c_theta;
    for (int it = 0; it < 60; ++it) {
      const double mid = 0.5 * (lo + hi);
      (r_xi(mid) <= c_xi ? lo : hi) = mid;
    }
    level = lo;
  }
  const double r = search(level, Query{Target::squared_gradient, channel, c_xi});
  if (quantize_) v_cache_[channel].emplace(std::make_pair(key_theta, key_xi), r);
  return r;
}

double RadiusSolver::objective_from_row(const MomentTable& t, std::size_t row, const Query& q) const {
  if (q.target == Target::washout) return std::abs(t.j_bar[row] - j_bar_star_);
  // g2 as a function of d = J_bar - xi is convex quadratic; check both ends
  // of the admissible d-interval and the vertex.
  const std::size_t k = row * t.n + q.channel;
  const double s = t.centered_sq[k];
  const double l = t.centered_lin[k];
  const double c = t.demod_sq[k];
  const double g2_star = g2_star_[q.channel];
  const double d0 = t.j_bar[row] - eq_.xi_star;
  const auto deviation = [&](double d) { return std::abs(s + 2.0 * d * l + d * d * c - g2_star); };
  double best = std::max(deviation(d0 - q.c_xi), deviation(d0 + q.c_xi));
  const double vertex = -l / c;
  if (vertex > d0 - q.c_xi && vertex < d0 + q.c_xi) best = std::max(best, deviation(vertex));
  return best;
}

double RadiusSolver::objective(std::span<const double> phi, const Query& q) const {
  const std::size_t n = cost_.dim();
  Vector theta(n);
  for (std::size_t i = 0; i < n; ++i) theta[i] = eq_.theta_star[i] + phi[i];
  MomentTable t = single_row_table(n);
  point_moments(cost_, q_, theta, t, 0);
  return objective_from_row(t, 0, q);
}

Vector RadiusSolver::vtheta_batch(std::span<const double> phis) const {
  const std::size_t n = cost_.dim();
  Vector shifted(phis.begin(), phis.end());
  for (std::size_t p = 0; p < shifted.size(); ++p) shifted[p] += eq_.theta_star[p % n];
  Vector v = values_parallel(cost_, shifted);
  for (double& x : v) x -= j_star_;
  return v;
}

Vector RadiusSolver::candidates(const Box& box, std::vector<char>* on_boundary) const {
  const std::size_t n = cost_.dim();
  if (n <= 2) {
    const detail::Grid grid(box, spec_.points_per_axis);
    if (on_boundary) {
      on_boundary->resize(grid.count);
      for (std::size_t p = 0; p < grid.count; ++p) (*on_boundary)[p] = grid.on_boundary(p);
    }
    return grid.points();
  }
  // Uniform samples inside plus samples on each face.
  const std::size_t inner = spec_.points_per_axis * spec_.points_per_axis;
  const std::size_t per_face = spec_.points_per_axis;
  std::mt19937_64 rng(spec_.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Vector pts;
  std::vector<char> flags;
  pts.reserve((inner + 2 * n * per_face) * n);
  const auto draw = [&](std::size_t fixed_axis, double fixed_value, bool boundary) {
    for (std::size_t d = 0; d < n; ++d) {
      pts.push_back(d == fixed_axis ? fixed_value : box.lo[d] + (box.hi[d] - box.lo[d]) * unit(rng));
    }
    flags.push_back(boundary);
  };
  for (std::size_t p = 0; p < inner; ++p) draw(n, 0.0, false);
  for (std::size_t d = 0; d < n; ++d) {
    for (std::size_t p = 0; p < per_face; ++p) {
      draw(d, box.lo[d], true);
      draw(d, box.hi[d], true);
    }
  }
  if (on_boundary) *on_boundary = std::move(flags);
  return pts;
}

Box RadiusSolver::initial_box(double c) const {
  const std::size_t n = cost_.dim();
  const auto escapes = [&](const Box& box) {
    std::vector<char> boundary;
    const Vector pts = candidates(box, &boundary);
    const Vector v = vtheta_batch(pts);
    for (std::size_t p = 0; p < v.size(); ++p) {
      if (boundary[p] && v[p] <= c) return true;
    }
    return false;
  };
  if (!spec_.box.lo.empty()) {
    if (escapes(spec_.box)) {
      throw LevelSetError("sublevel set {V_theta <= " + std::to_string(c) + "} reaches the search box boundary");
    }
    return spec_.box;
  }
  double half = 1.0;
  for (std::size_t it = 0; it < kMaxGrow; ++it, half *= 2.0) {
    Box box = Box::symmetric(n, half);
    if (!escapes(box)) return box;
  }
  throw LevelSetError("sublevel set {V_theta <= " + std::to_string(c) + "} is unbounded within the search range");
}

double RadiusSolver::search(double c, const Query& q) {
  const std::size_t n = cost_.dim();
  const Vector origin(n, 0.0);
  double best = objective(origin, q);
  if (!(c > 0.0)) return best;

  // Zoom onto the bounding box of the feasible points until it stops shrinking.
  Box box = initial_box(c);
  Vector pts, vt;
  const double sample_cells = n <= 2 ? static_cast<double>(spec_.points_per_axis - 1)
                                     : static_cast<double>(spec_.points_per_axis);
  for (std::size_t it = 0; it < kMaxZoom; ++it) {
    pts = candidates(box, nullptr);
    vt = vtheta_batch(pts);
    Box feasible{origin, origin};
    for (std::size_t p = 0; p < vt.size(); ++p) {
      if (vt[p] > c) continue;
      for (std::size_t d = 0; d < n; ++d) {
        feasible.lo[d] = std::min(feasible.lo[d], pts[p * n + d]);
        feasible.hi[d] = std::max(feasible.hi[d], pts[p * n + d]);
      }
    }
    bool shrinks = false;
    Box next = box;
    for (std::size_t d = 0; d < n; ++d) {
      const double cell = (box.hi[d] - box.lo[d]) / sample_cells;
      next.lo[d] = std::max(box.lo[d], feasible.lo[d] - cell);
      next.hi[d] = std::min(box.hi[d], feasible.hi[d] + cell);
      if (next.hi[d] - next.lo[d] < 0.5 * (box.hi[d] - box.lo[d])) shrinks = true;
    }
    if (!shrinks) break;
    box = std::move(next);
  }

  std::vector<std::size_t> rows;
  for (std::size_t p = 0; p < vt.size(); ++p) {
    if (vt[p] <= c) rows.push_back(p);
  }
  Vector shifted(pts);
  for (std::size_t k = 0; k < shifted.size(); ++k) shifted[k] += eq_.theta_star[k % n];
  const MomentTable table = moments_subset_parallel(cost_, q_, shifted, rows);
  Vector best_phi = origin;
  for (std::size_t p : rows) {
    const double value = objective_from_row(table, p, q);
    if (value > best) {
      best = value;
      best_phi.assign(pts.begin() + static_cast<long>(p * n), pts.begin() + static_cast<long>((p + 1) * n));
    }
  }

  // Line refinement through the best point along each axis: locate the
  // feasible segment within one cell, then golden-section on it.
  const auto feasible_at = [&](Vector& phi) { return v_theta(phi) <= c; };
  for (std::size_t d = 0; d < n; ++d) {
    const double cell = (box.hi[d] - box.lo[d]) / sample_cells;
    Vector phi = best_phi;
    const double center = phi[d];
    const auto edge = [&](double outer) {
      phi[d] = outer;
      if (feasible_at(phi)) return outer;
      double in = center;
      double out = outer;
      for (int it = 0; it < 200 && in != out; ++it) {
        const double mid = 0.5 * (in + out);
        if (mid == in || mid == out) break;
        phi[d] = mid;
        (feasible_at(phi) ? in : out) = mid;
      }
      return in;
    };
    const double left = edge(std::max(box.lo[d], center - cell));
    const double right = edge(std::min(box.hi[d], center + cell));
    const auto eval = [&](double x) {
      phi[d] = x;
      return objective(phi, q);
    };
    double arg = center;
    double top = best;
    const auto consider = [&](double x, double value) {
      if (value > top) {
        top = value;
        arg = x;
      }
    };
    consider(left, eval(left));
    consider(right, eval(right));
    constexpr double kInvPhi = 0.6180339887498949;
    double a = left, b = right;
    double x1 = b - kInvPhi * (b - a), x2 = a + kInvPhi * (b - a);
    double f1 = eval(x1), f2 = eval(x2);
    for (std::size_t it = 0; it < spec_.refine_iterations && b - a > 0.0; ++it) {
      if (f1 < f2) {
        a = x1;
        x1 = x2;
        f1 = f2;
        x2 = a + kInvPhi * (b - a);
        f2 = eval(x2);
      } else {
        b = x2;
        x2 = x1;
        f2 = f1;
        x1 = b - kInvPhi * (b - a);
        f1 = eval(x1);
      }
    }
    consider(x1, f1);
    consider(x2, f2);
    if (top > best) {
      best = top;
      best_phi[d] = arg;
    }
  }
  return best;
}

LyapunovReport RadiusSolver::evaluate(const ErrorState& err) {
  const std::size_t n = cost_.dim();
  if (err.theta_err.size() != n) throw DimensionError("theta_err", n, err.theta_err.size());
  if (err.v_err.size() != n) throw DimensionError("v_err", n, err.v_err.size());
  LyapunovReport r;
  // theta* solves g_bar = 0, which can sit a rounding error off argmin J
  r.v_theta = std::max(0.0, v_theta(err.theta_err));
  r.r_xi = r_xi(r.v_theta);
  r.v_xi = std::max(r.r_xi, std::abs(err.xi_err));
  r.r_v.resize(n);
  r.v_v.resize(n);
  r.v_total = r.v_theta + r.v_xi;
  for (std::size_t i = 0; i < n; ++i) {
    r.r_v[i] = r_v(i, r.v_theta, r.v_xi);
    r.v_v[i] = std::max(r.r_v[i], std::abs(err.v_err[i]));
    r.v_total += r.v_v[i];
  }
  return r;
}

double radius_xi(const CostFunction& cost, const DitherConfig& dither, const Equilibrium& eq, double c_theta,
                 const LevelSpec& spec) {
  if (c_theta < 0.0) throw InvalidArgument("level c_theta must be nonnegative");
  RadiusSolver solver(cost, dither, eq, spec, false);
  return solver.r_xi(c_theta);
}

double radius_v(const CostFunction& cost, const DitherConfig& dither, const Equilibrium& eq, double c_theta,
                double c_xi, std::size_t channel, const LevelSpec& spec) {
  if (c_theta < 0.0 || c_xi < 0.0) throw InvalidArgument("levels must be nonnegative");
  RadiusSolver solver(cost, dither, eq, spec, false);
  return solver.r_v(channel, c_theta, c_xi);
}

LyapunovReport lyapunov_value(const ErrorState& err, const CostFunction& cost, const DitherConfig& dither,
                              const Equilibrium& eq, const LevelSpec& spec) {
  RadiusSolver solver(cost, dither, eq, spec, false);
  return solver.evaluate(err);
}

DescentReport monitor_descent(const Trajectory& avg, const CostFunction& cost, const DitherConfig& dither,
                              const Equilibrium& eq, const LevelSpec& spec, double tol) {
  const std::size_t n = cost.dim();
  RadiusSolver solver(cost, dither, eq, spec, true);
  DescentReport report;
  report.times = avg.times;
  report.values.reserve(avg.size());
  report.terms.reserve(avg.size());
  for (const Vector& x : avg.states) {
    auto terms = solver.evaluate(to_error_coords(EscState::unflatten(x, n), eq));
    report.values.push_back(terms.v_total);
    report.terms.push_back(std::move(terms));
  }
  report.tol = tol >= 0.0 ? tol : (report.values.empty() ? 0.0 : 1e-6 * report.values.front()) + 1e-12;
  for (std::size_t j = 1; j < report.values.size(); ++j) {
    if (report.values[j] > report.values[j - 1] + report.tol) {
      report.pass = false;
      report.first_violation = j;
      break;
    }
  }
  return report;
}

FilterBoundReport check_filter_bounds(const Trajectory& avg, const CostFunction& cost, const DitherConfig& dither,
                                      const Equilibrium& eq, const LevelSpec& spec, double tol) {
  const std::size_t n = cost.dim();
  FilterBoundReport report;
  report.tol = tol;
  report.v_bounds.assign(n, 0.0);
  report.max_v_err.assign(n, 0.0);
  if (avg.states.empty()) return report;

  RadiusSolver solver(cost, dither, eq, spec, false);
  const ErrorState e0 = to_error_coords(EscState::unflatten(avg.states.front(), n), eq);
  const double level = std::max(0.0, solver.v_theta(e0.theta_err));
  report.xi_bound = std::max(std::abs(e0.xi_err), solver.r_xi(level));
  for (std::size_t i = 0; i < n; ++i) {
    report.v_bounds[i] = std::max(std::abs(e0.v_err[i]), solver.r_v(i, level, report.xi_bound));
  }
  for (const Vector& x : avg.states) {
    const ErrorState e = to_error_coords(EscState::unflatten(x, n), eq);
    report.max_xi_err = std::max(report.max_xi_err, std::abs(e.xi_err));
    for (std::size_t i = 0; i < n; ++i) report.max_v_err[i] = std::max(report.max_v_err[i], std::abs(e.v_err[i]));
  }
  report.pass = report.max_xi_err <= report.xi_bound + tol;
  for (std::size_t i = 0; i < n; ++i) report.pass = report.pass && report.max_v_err[i] <= report.v_bounds[i] + tol;
  return report;
}

std::size_t sublevel_components(const CostFunction& cost, std::span<const double> theta_star, double c,
                                const Box& box, std::size_t points_per_axis) {
  box.validate();
  const std::size_t n = cost.dim();
  if (box.dim() != n) throw DimensionError("sublevel box", n, box.dim());
  if (theta_star.size() != n) throw DimensionError("theta_star", n, theta_star.size());
  const detail::Grid grid(box, points_per_axis);
  Vector pts = grid.points();
  for (std::size_t p = 0; p < pts.size(); ++p) pts[p] += theta_star[p % n];
  const Vector values = values_parallel(cost, pts);
  const double j_star = cost.value(theta_star);

  std::vector<char> inside(grid.count);
  for (std::size_t p = 0; p < grid.count; ++p) inside[p] = values[p] - j_star <= c;
  detail::Clusters clusters(grid.count);
  std::vector<std::size_t> idx(n);
  for (std::size_t p = 0; p < grid.count; ++p) {
    if (!inside[p]) continue;
    grid.unravel(p, idx);
    for (std::size_t d = 0; d < n; ++d) {
      if (idx[d] + 1 >= points_per_axis) continue;
      ++idx[d];
      const std::size_t q = grid.ravel(idx);
      --idx[d];
      if (inside[q]) clusters.unite(p, q);
    }
  }
  std::size_t components = 0;
  for (std::size_t p = 0; p < grid.count; ++p) {
    if (inside[p] && clusters.find(p) == p) ++components;
  }
  return components;
}

}  // namespace esclab
