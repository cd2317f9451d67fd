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

#include "esclab/cost.hpp"

#include <cmath>
#include <cstdio>
#include <string>
#include <utility>

#include "esclab/expression.hpp"

namespace esclab {

namespace {

void require_dim(const char* what, std::size_t expected, std::size_t got) {
  if (expected != got) throw DimensionError(what, expected, got);
}

std::string number_text(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

// "(thetaI - c)" or "thetaI" when c == 0; negative shifts render as "+ |c|".
std::string offset_text(std::size_t i, double c) {
  const std::string var = "theta" + std::to_string(i + 1);
  if (c == 0.0) return var;
  if (c < 0.0) return "(" + var + " + " + number_text(-c) + ")";
  return "(" + var + " - " + number_text(c) + ")";
}

Vector zero_if_empty(Vector shift, std::size_t n) {
  if (shift.empty()) return Vector(n, 0.0);
  require_dim("shift", n, shift.size());
  return shift;
}

}  // namespace

CostFunction::CostFunction(std::size_t n, Evaluator evaluator, std::string label)
    : n_(n), evaluator_(std::move(evaluator)), label_(std::move(label)) {
  if (n_ == 0) throw InvalidArgument("cost dimension must be at least 1");
  if (!evaluator_) throw InvalidArgument("cost evaluator is empty");
}

double CostFunction::value(std::span<const double> theta) const {
  require_dim("cost argument", n_, theta.size());
  return evaluator_(theta);
}

void CostFunction::gradient(std::span<const double> theta, std::span<double> out) const {
  require_dim("gradient argument", n_, theta.size());
  require_dim("gradient output", n_, out.size());
  if (gradient_) {
    gradient_(theta, out);
  } else {
    fd_gradient(*this, theta, out);
  }
}

Vector CostFunction::gradient(std::span<const double> theta) const {
  Vector out(n_);
  gradient(theta, out);
  return out;
}

CostFunction CostFunction::with_gradient(GradientFn gradient) const {
  CostFunction c = *this;
  c.gradient_ = std::move(gradient);
  return c;
}

CostFunction CostFunction::with_minimizer(Vector theta_star) const {
  require_dim("minimizer", n_, theta_star.size());
  CostFunction c = *this;
  c.minimizer_ = std::move(theta_star);
  return c;
}

CostFunction CostFunction::with_expression(std::string text) const {
  CostFunction c = *this;
  c.expression_ = std::move(text);
  return c;
}

double fd_step(double theta_i) noexcept { return 1e-5 * (1.0 + std::abs(theta_i)); }

void fd_gradient(const CostFunction& cost, std::span<const double> theta, std::span<double> out) {
  require_dim("gradient argument", cost.dim(), theta.size());
  require_dim("gradient output", cost.dim(), out.size());
  Vector x(theta.begin(), theta.end());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double h = fd_step(theta[i]);
    x[i] = theta[i] + h;
    const double up = cost.value_unchecked(x);
    x[i] = theta[i] - h;
    const double down = cost.value_unchecked(x);
    x[i] = theta[i];
    out[i] = (up - down) / (2.0 * h);
  }
}

Vector fd_gradient(const CostFunction& cost, std::span<const double> theta) {
  Vector out(cost.dim());
  fd_gradient(cost, theta, out);
  return out;
}

namespace builtin {

CostFunction quadratic(Vector curvature, double j_opt, Vector shift) {
  const std::size_t n = curvature.size();
  if (n == 0) throw InvalidArgument("quadratic needs at least one curvature");
  for (double h : curvature) {
    if (!(h > 0.0)) throw InvalidArgument("quadratic curvature must be positive");
  }
  shift = zero_if_empty(std::move(shift), n);

  std::string text = number_text(j_opt);
  for (std::size_t i = 0; i < n; ++i) {
    text += " + 0.5*" + number_text(curvature[i]) + "*" + offset_text(i, shift[i]) + "^2";
  }

  CostFunction cost(
      n,
      [h = curvature, c = shift, j_opt](std::span<const double> x) {
        double sum = 0.0;
        for (std::size_t i = 0; i < h.size(); ++i) {
          const double d = x[i] - c[i];
          sum += 0.5 * h[i] * d * d;
        }
        return j_opt + sum;
      },
      "quadratic");
  return cost
      .with_gradient([h = curvature, c = shift](std::span<const double> x, std::span<double> g) {
        for (std::size_t i = 0; i < h.size(); ++i) g[i] = h[i] * (x[i] - c[i]);
      })
      .with_minimizer(shift)
      .with_expression(std::move(text));
}

CostFunction quadratic_full(std::size_t n, Vector hessian, double j_opt, Vector shift) {
  if (n == 0) throw InvalidArgument("quadratic needs n >= 1");
  require_dim("hessian", n * n, hessian.size());
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      if (hessian[i * n + j] != hessian[j * n + i]) {
        throw InvalidArgument("quadratic hessian must be symmetric");
      }
    }
  }
  // Cholesky as the positive-definiteness test.
  Vector l(n * n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    double d = hessian[j * n + j];
    for (std::size_t k = 0; k < j; ++k) d -= l[j * n + k] * l[j * n + k];
    if (!(d > 0.0)) throw InvalidArgument("quadratic hessian must be positive definite");
    l[j * n + j] = std::sqrt(d);
    for (std::size_t i = j + 1; i < n; ++i) {
      double s = hessian[i * n + j];
      for (std::size_t k = 0; k < j; ++k) s -= l[i * n + k] * l[j * n + k];
      l[i * n + j] = s / l[j * n + j];
    }
  }
  shift = zero_if_empty(std::move(shift), n);

  std::string text = number_text(j_opt);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      text += " + 0.5*" + number_text(hessian[i * n + j]) + "*" + offset_text(i, shift[i]) + "*" +
              offset_text(j, shift[j]);
    }
  }

  CostFunction cost(
      n,
      [hs = hessian, c = shift, j_opt, n](std::span<const double> x) {
        double sum = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
          for (std::size_t j = 0; j < n; ++j) {
            sum += 0.5 * hs[i * n + j] * (x[i] - c[i]) * (x[j] - c[j]);
          }
        }
        return j_opt + sum;
      },
      "quadratic");
  return cost
      .with_gradient([hs = hessian, c = shift, n](std::span<const double> x, std::span<double> g) {
        for (std::size_t i = 0; i < n; ++i) {
          double s = 0.0;
          for (std::size_t j = 0; j < n; ++j) s += hs[i * n + j] * (x[j] - c[j]);
          g[i] = s;
        }
      })
      .with_minimizer(shift)
      .with_expression(std::move(text));
}

CostFunction quartic() { return shifted_quartic({0.0}); }

CostFunction shifted_quartic(Vector shift) {
  const std::size_t n = shift.size();
  if (n == 0) throw InvalidArgument("quartic needs at least one coordinate");
  std::string text;
  for (std::size_t i = 0; i < n; ++i) {
    if (i) text += " + ";
    text += offset_text(i, shift[i]) + "^4 / 24";
  }
  CostFunction cost(
      n,
      [c = shift](std::span<const double> x) {
        double sum = 0.0;
        for (std::size_t i = 0; i < c.size(); ++i) {
          const double d = x[i] - c[i];
          sum += d * d * d * d / 24;
        }
        return sum;
      },
      "quartic");
  return cost
      .with_gradient([c = shift](std::span<const double> x, std::span<double> g) {
        for (std::size_t i = 0; i < c.size(); ++i) {
          const double d = x[i] - c[i];
          g[i] = d * d * d / 6.0;
        }
      })
      .with_minimizer(shift)
      .with_expression(std::move(text));
}

}  // namespace builtin

CostFunction parse_cost(std::string_view expr, std::size_t n) {
  auto compiled = std::make_shared<const Expression>(Expression::parse(expr, n));
  CostFunction cost(
      n, [e = compiled](std::span<const double> x) { return e->evaluate(x); }, "expression");
  return cost.with_expression(std::string(expr));
}

Box Box::symmetric(std::size_t n, double half_width) {
  return Box{Vector(n, -half_width), Vector(n, half_width)};
}

Box Box::around(std::span<const double> center, double half_width) {
  Box b{Vector(center.begin(), center.end()), Vector(center.begin(), center.end())};
  for (std::size_t i = 0; i < b.lo.size(); ++i) {
    b.lo[i] -= half_width;
    b.hi[i] += half_width;
  }
  return b;
}

void Box::validate() const {
  if (lo.empty() || lo.size() != hi.size()) throw InvalidArgument("box bounds must be non-empty and of equal length");
  for (std::size_t i = 0; i < lo.size(); ++i) {
    if (!(hi[i] > lo[i]) || !std::isfinite(lo[i]) || !std::isfinite(hi[i])) {
      throw InvalidArgument("box has zero volume along axis " + std::to_string(i + 1));
    }
  }
}

const char* to_string(Verdict v) noexcept {
  switch (v) {
    case Verdict::pass:
      return "pass";
    case Verdict::fail:
      return "fail";
    case Verdict::indeterminate:
      return "indeterminate";
  }
  return "?";
}

bool AssumptionReport::all_pass() const noexcept {
  return continuity.verdict == Verdict::pass && unique_minimum.verdict == Verdict::pass &&
         unique_stationary.verdict == Verdict::pass && radial_growth.verdict == Verdict::pass;
}

}  // namespace esclab
