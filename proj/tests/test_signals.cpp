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
#include <numbers>
#include <random>

#include "doctest.h"
#include "esclab/averaging.hpp"
#include "esclab/signals.hpp"
#include "oracles.hpp"

using esclab::DitherConfig;
using esclab::DitherErrc;
using esclab::DitherError;

namespace {

DitherErrc code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const DitherError& e) {
    return e.code();
  }
  FAIL("expected DitherError");
  return DitherErrc::size_mismatch;
}

}  // namespace

TEST_CASE("single channel config derives period and a0") {
  const DitherConfig d({0.02}, {1}, 10.0);
  CHECK(d.dim() == 1);
  CHECK(d.period() == doctest::Approx(2.0 * std::numbers::pi / 10.0).epsilon(1e-15));
  CHECK(d.a0() == doctest::Approx(0.02).epsilon(1e-15));
  CHECK(d.max_rate() == 1);
}

TEST_CASE("a0 is the euclidean norm of the amplitudes") {
  const DitherConfig d({0.3, -0.4}, {1, 3}, 2.0);
  CHECK(d.a0() == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(d.max_rate() == 3);
}

TEST_CASE("invalid configs are rejected with distinct codes") {
  CHECK(code_of([] { DitherConfig({0.1, 0.1}, {1, 1}, 1.0); }) == DitherErrc::duplicate_rate);
  CHECK(code_of([] { DitherConfig({0.0}, {1}, 1.0); }) == DitherErrc::zero_amplitude);
  CHECK(code_of([] { DitherConfig({0.1}, {0}, 1.0); }) == DitherErrc::nonpositive_rate);
  CHECK(code_of([] { DitherConfig({0.1}, {-2}, 1.0); }) == DitherErrc::nonpositive_rate);
  CHECK(code_of([] { DitherConfig({0.1}, {1}, 0.0); }) == DitherErrc::nonpositive_omega);
  CHECK(code_of([] { DitherConfig({0.1}, {1}, -3.0); }) == DitherErrc::nonpositive_omega);
  CHECK(code_of([] { DitherConfig({0.1, 0.2}, {1}, 1.0); }) == DitherErrc::size_mismatch);
  CHECK(code_of([] { DitherConfig({}, {}, 1.0); }) == DitherErrc::size_mismatch);
}

TEST_CASE("dither and demodulation sample values") {
  const DitherConfig d({0.02}, {1}, 10.0);
  CHECK(d.value(0.0)[0] == 0.0);
  CHECK(d.demod(0.0)[0] == 0.0);
  CHECK(d.value(std::numbers::pi / 20.0)[0] == doctest::Approx(0.02).epsilon(1e-14));
  CHECK(d.demod(std::numbers::pi / 20.0)[0] == doctest::Approx(100.0).epsilon(1e-14));
}

TEST_CASE("dither is T-periodic at grid points") {
  const DitherConfig d({0.1, -0.05, 0.2}, {1, 2, 5}, 7.0);
  const double T = d.period();
  for (int k = 0; k < 200; ++k) {
    const double t = 0.013 * k;
    const auto a = d.value(t), b = d.value(t + T);
    const auto ma = d.demod(t), mb = d.demod(t + T);
    for (std::size_t i = 0; i < 3; ++i) {
      CHECK(std::abs(a[i] - b[i]) <= 1e-14);
      CHECK(std::abs(ma[i] - mb[i]) <= 1e-12 * (1.0 + std::abs(ma[i])));
    }
  }
}

TEST_CASE("demodulation identity and washout rejection hold under the module quadrature") {
  const DitherConfig d({0.1, 0.03, 0.5}, {1, 2, 4}, 3.0);
  const esclab::QuadratureNodes q(d, esclab::default_quadrature_nodes(d));
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = 0; j < 3; ++j) {
      long double acc = 0;
      for (std::size_t k = 0; k < q.size(); ++k) acc += q.demod(k)[i] * q.dither(k)[j];
      const double mean = static_cast<double>(acc / q.size());
      CHECK(std::abs(mean - (i == j ? 1.0 : 0.0)) <= 1e-10);
    }
    for (double c : {1.0, -37.5, 1e3}) {
      long double acc = 0;
      for (std::size_t k = 0; k < q.size(); ++k) acc += q.demod(k)[i] * c;
      CHECK(std::abs(static_cast<double>(acc / q.size())) <= 1e-12 * std::max(1.0, std::abs(c)));
    }
  }
}

TEST_CASE("demodulation identity agrees with a midpoint oracle") {
  const DitherConfig d({0.2, 0.07}, {2, 3}, 5.0);
  for (std::size_t i = 0; i < 2; ++i) {
    for (std::size_t j = 0; j < 2; ++j) {
      const long double mean = oracle::periodic_mean(
          [&](long double t) {
            return d.demod(static_cast<double>(t))[i] * d.value(static_cast<double>(t))[j];
          },
          d.period(), 4096);
      CHECK(std::abs(static_cast<double>(mean) - (i == j ? 1.0 : 0.0)) <= 1e-10);
    }
  }
}

TEST_CASE("scaled keeps amplitude ratios") {
  const DitherConfig d({0.3, 0.4}, {1, 2}, 1.0);
  const DitherConfig s = d.scaled(0.05);
  CHECK(s.a0() == doctest::Approx(0.05).epsilon(1e-14));
  CHECK(s.amplitudes()[0] / s.amplitudes()[1] == doctest::Approx(0.75).epsilon(1e-14));
  CHECK(d.with_omega(4.0).period() == doctest::Approx(std::numbers::pi / 2).epsilon(1e-15));
}
