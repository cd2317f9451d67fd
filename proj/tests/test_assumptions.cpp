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

#include "doctest.h"
#include "esclab/cost.hpp"

using esclab::Box;
using esclab::CostFunction;
using esclab::Vector;
using esclab::Verdict;

namespace {

CostFunction double_well() {
  return CostFunction(1, [](std::span<const double> x) { return std::pow(x[0], 4) / 4.0 - x[0] * x[0] / 2.0; },
                      "double-well");
}

// Stationary points of a scalar function from sign changes of its central
// difference derivative on a fine grid.
std::vector<double> stationary_points(const CostFunction& f, double lo, double hi, std::size_t n) {
  std::vector<double> out;
  auto d = [&](double x) { return (f(Vector{x + 1e-6}) - f(Vector{x - 1e-6})) / 2e-6; };
  double prev = d(lo);
  for (std::size_t k = 1; k < n; ++k) {
    const double x = lo + (hi - lo) * k / (n - 1);
    const double cur = d(x);
    if (prev == 0.0 || (prev < 0.0) != (cur < 0.0)) out.push_back(x);
    prev = cur;
  }
  return out;
}

double nearest(const std::vector<double>& pts, double x) {
  double best = INFINITY;
  for (double p : pts) best = std::min(best, std::abs(p - x));
  return best;
}

}  // namespace

TEST_CASE("convex quadratic passes every check") {
  const auto r = esclab::check_assumptions(esclab::builtin::quadratic({1.0}), Box::symmetric(1, 5.0), 101);
  CHECK(r.continuity.verdict == Verdict::pass);
  CHECK(r.unique_minimum.verdict == Verdict::pass);
  CHECK(r.unique_stationary.verdict == Verdict::pass);
  CHECK(r.radial_growth.verdict == Verdict::pass);
  CHECK(r.all_pass());
}

TEST_CASE("good builtin families pass A1-A3 and do not fail A4") {
  const std::vector<std::pair<CostFunction, Box>> cases = {
      {esclab::builtin::quadratic({0.01}), Box::symmetric(1, 4.0)},
      {esclab::builtin::quadratic({100.0}, 2.0, {0.3}), Box::symmetric(1, 4.0)},
      {esclab::builtin::quartic(), Box::symmetric(1, 3.0)},
      {esclab::builtin::quadratic({1.0, 4.0}, 0.0, {0.5, -0.25}), Box::symmetric(2, 3.0)},
      {esclab::builtin::quadratic_full(2, {2.0, 0.9, 0.9, 1.0}), Box::symmetric(2, 3.0)},
      {esclab::builtin::shifted_quartic({0.2, -0.1}), Box::symmetric(2, 2.0)},
  };
  for (const auto& [cost, box] : cases) {
    const auto r = esclab::check_assumptions(cost, box, cost.dim() == 1 ? 201 : 41);
    CHECK(r.continuity.verdict == Verdict::pass);
    CHECK(r.unique_minimum.verdict == Verdict::pass);
    CHECK(r.unique_stationary.verdict == Verdict::pass);
    CHECK(r.radial_growth.verdict != Verdict::fail);
  }
}

TEST_CASE("double well fails uniqueness with a witness at the other well") {
  const auto cost = double_well();
  const auto stationary = stationary_points(cost, -3.0, 3.0, 6001);
  REQUIRE(stationary.size() == 3);
  const double h = 6.0 / 200.0;

  const auto r = esclab::check_assumptions(cost, Box::symmetric(1, 3.0), 201);
  CHECK(r.unique_minimum.verdict == Verdict::fail);
  REQUIRE(r.unique_minimum.witness.has_value());
  CHECK(std::abs(std::abs((*r.unique_minimum.witness)[0]) - 1.0) <= h);

  CHECK(r.unique_stationary.verdict == Verdict::fail);
  REQUIRE(r.unique_stationary.witness.has_value());
  CHECK(nearest(stationary, (*r.unique_stationary.witness)[0]) <= h);
}

TEST_CASE("bounded cost has no radial growth") {
  const CostFunction bounded(1, [](std::span<const double> x) { return 1.0 - std::exp(-x[0] * x[0]); });
  const auto r = esclab::check_assumptions(bounded, Box::symmetric(1, 10.0), 201);
  CHECK(r.radial_growth.verdict != Verdict::pass);
  CHECK_FALSE(r.all_pass());
}

TEST_CASE("a kink on a grid node is reported as non-differentiable") {
  const CostFunction kink(1, [](std::span<const double> x) { return std::abs(x[0]); });
  const auto r = esclab::check_assumptions(kink, Box::symmetric(1, 2.0), 201);
  CHECK(r.continuity.verdict == Verdict::fail);
}

TEST_CASE("a box without volume is rejected") {
  CHECK_THROWS_AS(esclab::check_assumptions(esclab::builtin::quartic(), Box{{1.0}, {1.0}}, 11),
                  esclab::InvalidArgument);
}
