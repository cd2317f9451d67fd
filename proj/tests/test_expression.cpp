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
#include <string>

#include "doctest.h"
#include "esclab/cost.hpp"
#include "esclab/expression.hpp"

using esclab::ParseErrc;
using esclab::ParseError;
using esclab::Vector;

namespace {

struct Failure {
  ParseErrc code;
  std::size_t position;
};

Failure parse_failure(const std::string& text, std::size_t n) {
  try {
    esclab::parse_cost(text, n);
  } catch (const ParseError& e) {
    return {e.code(), e.position()};
  }
  FAIL("expected ParseError for: " << text);
  return {};
}

double eval(const std::string& text, Vector x) { return esclab::parse_cost(text, x.size())(x); }

}  // namespace

TEST_CASE("sample expressions") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  const auto quartic = esclab::parse_cost("theta1^4 / 24", 1);
  const auto quadratic = esclab::parse_cost("3 + 0.5*theta1^2", 1);
  for (int i = 0; i < 50; ++i) {
    const double x = u(rng);
    CHECK(quartic(Vector{x}) == doctest::Approx(x * x * x * x / 24.0).epsilon(1e-14));
    CHECK(quadratic(Vector{x}) == doctest::Approx(3.0 + 0.5 * x * x).epsilon(1e-14));
  }
  CHECK(quartic(Vector{2.0}) == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  CHECK(quadratic(Vector{1.0}) == 3.5);
}

TEST_CASE("precedence and associativity") {
  CHECK(eval("2^3^2", {0.0}) == 512.0);
  CHECK(eval("-2^2", {0.0}) == -4.0);
  CHECK(eval("(-2)^2", {0.0}) == 4.0);
  CHECK(eval("1 - 2 - 3", {0.0}) == -4.0);
  CHECK(eval("8 / 4 / 2", {0.0}) == 1.0);
  CHECK(eval("1 + 2 * 3", {0.0}) == 7.0);
  CHECK(eval("2^-1", {0.0}) == 0.5);
  CHECK(eval("--theta1", {5.0}) == 5.0);
  CHECK(eval("theta2 * theta1 - theta3", {2.0, 3.0, 1.0}) == 5.0);
  CHECK(eval("1.5e1 + .5", {0.0}) == 15.5);
  CHECK(eval("theta1^0.5", {4.0}) == doctest::Approx(2.0));
}

TEST_CASE("errors report kind and 1-based position") {
  auto f = parse_failure("theta1 + (", 1);
  CHECK(f.code == ParseErrc::syntax);
  CHECK(f.position == 11);

  f = parse_failure("theta1 + x", 1);
  CHECK(f.code == ParseErrc::unknown_identifier);
  CHECK(f.position == 10);

  f = parse_failure("theta1 + theta2", 1);
  CHECK(f.code == ParseErrc::wrong_arity);
  CHECK(f.position == 10);

  CHECK(parse_failure("theta0", 2).code == ParseErrc::wrong_arity);
  CHECK(parse_failure("exp(theta1)", 1).code == ParseErrc::unknown_identifier);
  CHECK(parse_failure("theta1(2)", 1).code == ParseErrc::syntax);
  CHECK(parse_failure("", 1).code == ParseErrc::syntax);
  CHECK(parse_failure("1 +* 2", 1).code == ParseErrc::syntax);
  CHECK(parse_failure("(1 + 2", 1).position == 7);
  CHECK(parse_failure("1 2", 1).position == 3);
}

TEST_CASE("error message includes the position") {
  try {
    esclab::parse_cost("theta1 + (", 1);
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("position 11") != std::string::npos);
  }
}

TEST_CASE("parsed costs use finite-difference gradients") {
  const auto c = esclab::parse_cost("theta1^2 * theta2", 2);
  CHECK_FALSE(c.has_analytic_gradient());
  const Vector g = c.gradient(Vector{1.5, -2.0});
  CHECK(g[0] == doctest::Approx(2 * 1.5 * -2.0).epsilon(1e-8));
  CHECK(g[1] == doctest::Approx(1.5 * 1.5).epsilon(1e-8));
  CHECK(c.expression().value() == "theta1^2 * theta2");
}
