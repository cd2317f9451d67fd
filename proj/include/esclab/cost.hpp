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

#ifndef ESCLAB_COST_HPP
#define ESCLAB_COST_HPP

#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "esclab/error.hpp"

namespace esclab {

/// Scalar cost J(theta) on R^n with an optional analytic gradient, an optional
/// known minimizer and an optional expression rendering.
///
/// Values are immutable once built; evaluation is pure and safe to call from
/// several threads.
class CostFunction {
 public:
  using Evaluator = std::function<double(std::span<const double>)>;
  using GradientFn = std::function<void(std::span<const double>, std::span<double>)>;

  CostFunction(std::size_t n, Evaluator evaluator, std::string label = "custom");

  std::size_t dim() const noexcept { return n_; }
  const std::string& label() const noexcept { return label_; }

  /// J(theta). Throws DimensionError on a length mismatch.
  double value(std::span<const double> theta) const;
  double operator()(std::span<const double> theta) const { return value(theta); }

  /// Hot-path evaluation; the caller guarantees theta.size() == dim().
  double value_unchecked(std::span<const double> theta) const { return evaluator_(theta); }

  /// Analytic gradient when available, central differences otherwise.
  Vector gradient(std::span<const double> theta) const;
  void gradient(std::span<const double> theta, std::span<double> out) const;

  bool has_analytic_gradient() const noexcept { return static_cast<bool>(gradient_); }
  const std::optional<Vector>& minimizer() const noexcept { return minimizer_; }
  /// Expression text in the parser grammar, when the cost has one.
  const std::optional<std::string>& expression() const noexcept { return expression_; }

  CostFunction with_gradient(GradientFn gradient) const;
  CostFunction with_minimizer(Vector theta_star) const;
  CostFunction with_expression(std::string text) const;

 private:
  std::size_t n_;
  Evaluator evaluator_;
  GradientFn gradient_;
  std::optional<Vector> minimizer_;
  std::optional<std::string> expression_;
  std::string label_;
};

/// Central difference with step 1e-5 * (1 + |theta_i|) per component.
void fd_gradient(const CostFunction& cost, std::span<const double> theta, std::span<double> out);
Vector fd_gradient(const CostFunction& cost, std::span<const double> theta);

double fd_step(double theta_i) noexcept;

namespace builtin {

/// J* + 1/2 sum_i H_i (theta_i - shift_i)^2. An empty shift means zero.
CostFunction quadratic(Vector curvature, double j_opt = 0.0, Vector shift = {});

/// J* + 1/2 (theta - shift)^T H (theta - shift) for a symmetric positive
/// definite H given row-major as n x n.
CostFunction quadratic_full(std::size_t n, Vector hessian, double j_opt = 0.0, Vector shift = {});

/// theta^4 / 24.
CostFunction quartic();

/// sum_i (theta_i - shift_i)^4 / 24.
CostFunction shifted_quartic(Vector shift);

}  // namespace builtin

/// Parse a cost expression over theta1..thetaN. Gradients fall back to
/// central differences. See docs/expression_grammar.md.
CostFunction parse_cost(std::string_view expr, std::size_t n);

// ---------------------------------------------------------------------------
// Heuristic checks of the standing assumptions on J.

/// Axis-aligned box [lo_i, hi_i].
struct Box {
  Vector lo;
  Vector hi;

  std::size_t dim() const noexcept { return lo.size(); }
  static Box symmetric(std::size_t n, double half_width);
  static Box around(std::span<const double> center, double half_width);
  /// Throws InvalidArgument unless every hi_i > lo_i.
  void validate() const;
};

enum class Verdict { pass, fail, indeterminate };

const char* to_string(Verdict v) noexcept;

struct AssumptionCheck {
  Verdict verdict = Verdict::indeterminate;
  std::optional<Vector> witness;  // always set when verdict == fail
  std::string note;
};

struct AssumptionReport {
  AssumptionCheck continuity;         // J is C^1
  AssumptionCheck unique_minimum;     // one strict global minimizer
  AssumptionCheck unique_stationary;  // grad J = 0 only at the minimizer
  AssumptionCheck radial_growth;      // radially unbounded (heuristic)
  Box box;
  std::size_t grid_n = 0;

  bool all_pass() const noexcept;
};

/// Grid-based spot checks of the four cost assumptions on `box` with
/// `grid_n` nodes per axis. None of these prove anything globally.
AssumptionReport check_assumptions(const CostFunction& cost, const Box& box, std::size_t grid_n);

}  // namespace esclab

#endif  // ESCLAB_COST_HPP
