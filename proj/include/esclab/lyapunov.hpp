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

#ifndef ESCLAB_LYAPUNOV_HPP
#define ESCLAB_LYAPUNOV_HPP

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "esclab/averaging.hpp"
#include "esclab/cost.hpp"
#include "esclab/integrate.hpp"
#include "esclab/kernels.hpp"
#include "esclab/signals.hpp"

namespace esclab {

/// Search settings for the bounding-ball radii.
///
/// The box is in error coordinates (phi = theta - theta*). An empty box is
/// sized automatically to contain each requested sublevel set; a supplied box
/// that the sublevel set reaches raises LevelSetError.
struct LevelSpec {
  Box box;
  std::size_t points_per_axis = 401;
  std::size_t nodes = 0;             // quadrature nodes; 0 = default
  std::size_t refine_iterations = 80;
  std::uint64_t seed = 0x5eed;       // sampling fallback for n > 2
};

/// V_theta(phi) = J(theta* + phi) - J(theta*).
double v_theta(const CostFunction& cost, std::span<const double> theta_star, std::span<const double> theta_err);

struct LyapunovReport {
  double v_theta = 0.0;
  double r_xi = 0.0;
  double v_xi = 0.0;  // max(r_xi, |xi_err|)
  Vector r_v;
  Vector v_v;         // max(r_v_i, |v_err_i|)
  double v_total = 0.0;
};

/// Bounding-ball radii around one equilibrium.
///
///   r_xi(c)          = max |J_bar(theta*+phi) - J_bar(theta*)|       over V_theta(phi) <= c
///   r_v_i(c, c_xi)   = max |g2_bar_i(theta*+phi, xi*+eta) - v*_i|    over V_theta(phi) <= c,
///                                                                    max(r_xi(V_theta(phi)), |eta|) <= c_xi
///
/// phi is searched on a grid (n <= 2) or by uniform sampling (n > 2,
/// approximate), followed by a line refinement through the best point. The
/// eta maximization is exact: g2_bar is a quadratic in xi.
///
/// With `quantize` set, levels are rounded up to a geometric grid of ratio
/// 1 + 1e-3 and results are memoized. Rounding up keeps the cached radii
/// monotone and never below the exact value. Not thread-safe; use one solver
/// per monitoring run.
class RadiusSolver {
 public:
  RadiusSolver(CostFunction cost, DitherConfig dither, Equilibrium eq, LevelSpec spec = {}, bool quantize = true);

  double r_xi(double c_theta);
  double r_v(std::size_t channel, double c_theta, double c_xi);
  LyapunovReport evaluate(const ErrorState& err);

  double v_theta(std::span<const double> theta_err) const;
  const Equilibrium& equilibrium() const noexcept { return eq_; }
  /// J_bar(theta*) and g2_bar(theta*, xi*) as seen by the radius objectives.
  double j_bar_star() const noexcept { return j_bar_star_; }
  double g2_star(std::size_t channel) const { return g2_star_.at(channel); }

 private:
  enum class Target { washout, squared_gradient };
  struct Query {
    Target target;
    std::size_t channel;
    double c_xi;
  };

  double quantize_level(double c, long* key) const;
  double search(double c_theta, const Query& q);
  double objective(std::span<const double> phi, const Query& q) const;
  double objective_from_row(const MomentTable& t, std::size_t row, const Query& q) const;
  Box initial_box(double c) const;
  Vector candidates(const Box& box, std::vector<char>* on_boundary) const;
  Vector vtheta_batch(std::span<const double> phis) const;

  CostFunction cost_;
  DitherConfig dither_;
  Equilibrium eq_;
  LevelSpec spec_;
  bool quantize_;
  QuadratureNodes q_;
  double j_star_ = 0.0;       // J(theta*)
  double j_bar_star_ = 0.0;   // J_bar(theta*)
  Vector g2_star_;
  std::map<long, double> xi_cache_;
  std::vector<std::map<std::pair<long, long>, double>> v_cache_;
};

/// Uncached single evaluations.
double radius_xi(const CostFunction& cost, const DitherConfig& dither, const Equilibrium& eq, double c_theta,
                 const LevelSpec& spec = {});
double radius_v(const CostFunction& cost, const DitherConfig& dither, const Equilibrium& eq, double c_theta,
                double c_xi, std::size_t channel, const LevelSpec& spec = {});

/// V = V_theta + max(r_xi(V_theta), |xi_err|) + sum_i max(r_v_i(V_theta, V_xi), |v_err_i|).
LyapunovReport lyapunov_value(const ErrorState& err, const CostFunction& cost, const DitherConfig& dither,
                              const Equilibrium& eq, const LevelSpec& spec = {});

struct DescentReport {
  Vector times;
  Vector values;
  std::vector<LyapunovReport> terms;
  double tol = 0.0;
  bool pass = true;
  std::optional<std::size_t> first_violation;  // index j with V(t_j) > V(t_{j-1}) + tol
};

/// Evaluates V along an averaged trajectory (flattened states) and checks
/// V(t_{j+1}) <= V(t_j) + tol. A negative tol selects 1e-6 V(0) + 1e-12.
DescentReport monitor_descent(const Trajectory& avg, const CostFunction& cost, const DitherConfig& dither,
                              const Equilibrium& eq, const LevelSpec& spec = {}, double tol = -1.0);

struct FilterBoundReport {
  double xi_bound = 0.0;       // max(|xi_err(0)|, r_xi(V_theta(0)))
  double max_xi_err = 0.0;
  Vector v_bounds;             // max(|v_err_i(0)|, r_v_i(V_theta(0), V_xi(0)))
  Vector max_v_err;
  double tol = 0.0;
  bool pass = true;
};

/// Checks that the filter errors stay inside the balls set by the initial
/// state, using exact (unquantized) radii.
FilterBoundReport check_filter_bounds(const Trajectory& avg, const CostFunction& cost, const DitherConfig& dither,
                                      const Equilibrium& eq, const LevelSpec& spec = {}, double tol = 1e-6);

/// Face-connected components of the grid sublevel set {phi in box : V_theta(phi) <= c}.
std::size_t sublevel_components(const CostFunction& cost, std::span<const double> theta_star, double c,
                                const Box& box, std::size_t points_per_axis);

}  // namespace esclab

#endif  // ESCLAB_LYAPUNOV_HPP
