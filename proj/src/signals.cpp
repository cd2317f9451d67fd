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

#include "esclab/signals.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <string>

namespace esclab {

DitherConfig::DitherConfig(Vector amplitudes, std::vector<int> rates, double omega)
    : amplitudes_(std::move(amplitudes)), rates_(std::move(rates)), omega_(omega) {
  if (amplitudes_.empty() || amplitudes_.size() != rates_.size()) {
    throw DitherError(DitherErrc::size_mismatch,
                      "dither needs n >= 1 amplitudes and as many rates");
  }
  for (std::size_t i = 0; i < amplitudes_.size(); ++i) {
    if (amplitudes_[i] == 0.0 || !std::isfinite(amplitudes_[i])) {
      throw DitherError(DitherErrc::zero_amplitude,
                        "dither amplitude " + std::to_string(i + 1) + " must be nonzero and finite");
    }
    if (rates_[i] < 1) {
      throw DitherError(DitherErrc::nonpositive_rate,
                        "dither rate " + std::to_string(i + 1) + " must be a positive integer");
    }
  }
  if (std::set<int>(rates_.begin(), rates_.end()).size() != rates_.size()) {
    throw DitherError(DitherErrc::duplicate_rate, "dither rates must be pairwise distinct");
  }
  if (!(omega_ > 0.0) || !std::isfinite(omega_)) {
    throw DitherError(DitherErrc::nonpositive_omega, "dither omega must be positive and finite");
  }
  period_ = 2.0 * std::numbers::pi / omega_;
  double sq = 0.0;
  for (double a : amplitudes_) sq += a * a;
  a0_ = std::sqrt(sq);
  max_rate_ = *std::max_element(rates_.begin(), rates_.end());
}

void DitherConfig::value(double t, std::span<double> out) const {
  for (std::size_t i = 0; i < amplitudes_.size(); ++i) {
    out[i] = amplitudes_[i] * std::sin(omega_ * rates_[i] * t);
  }
}

Vector DitherConfig::value(double t) const {
  Vector out(dim());
  value(t, out);
  return out;
}

void DitherConfig::demod(double t, std::span<double> out) const {
  for (std::size_t i = 0; i < amplitudes_.size(); ++i) {
    out[i] = (2.0 / amplitudes_[i]) * std::sin(omega_ * rates_[i] * t);
  }
}

Vector DitherConfig::demod(double t) const {
  Vector out(dim());
  demod(t, out);
  return out;
}

DitherConfig DitherConfig::scaled(double a0_new) const {
  if (!(a0_new > 0.0)) {
    throw DitherError(DitherErrc::zero_amplitude, "scaled dither needs a0 > 0");
  }
  Vector a = amplitudes_;
  const double ratio = a0_new / a0_;
  for (double& x : a) x *= ratio;
  return DitherConfig(std::move(a), rates_, omega_);
}

DitherConfig DitherConfig::with_omega(double omega) const {
  return DitherConfig(amplitudes_, rates_, omega);
}

}  // namespace esclab
