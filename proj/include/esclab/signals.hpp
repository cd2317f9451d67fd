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

#ifndef ESCLAB_SIGNALS_HPP
#define ESCLAB_SIGNALS_HPP

#include <span>
#include <vector>

#include "esclab/error.hpp"

namespace esclab {

/// Sinusoidal dither s_i(t) = a_i sin(omega r_i t) and the matching
/// demodulation m_i(t) = (2 / a_i) sin(omega r_i t).
///
/// Rates are distinct positive integers so that the channels are orthogonal
/// over one period T = 2 pi / omega. The overall amplitude
/// a0 = sqrt(sum a_i^2) is derived; use scaled() to change it while keeping
/// the ratios a_i / a0.
class DitherConfig {
 public:
  DitherConfig(Vector amplitudes, std::vector<int> rates, double omega);

  std::size_t dim() const noexcept { return amplitudes_.size(); }
  const Vector& amplitudes() const noexcept { return amplitudes_; }
  const std::vector<int>& rates() const noexcept { return rates_; }
  double omega() const noexcept { return omega_; }
  double period() const noexcept { return period_; }
  double a0() const noexcept { return a0_; }
  int max_rate() const noexcept { return max_rate_; }

  void value(double t, std::span<double> out) const;
  Vector value(double t) const;

  void demod(double t, std::span<double> out) const;
  Vector demod(double t) const;

  /// Same rates and frequency, amplitudes rescaled so that a0() == a0_new.
  DitherConfig scaled(double a0_new) const;

  /// Same amplitudes and rates at a different base frequency.
  DitherConfig with_omega(double omega) const;

 private:
  Vector amplitudes_;
  std::vector<int> rates_;
  double omega_;
  double period_;
  double a0_;
  int max_rate_;
};

}  // namespace esclab

#endif  // ESCLAB_SIGNALS_HPP
