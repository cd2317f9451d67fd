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

#ifndef ESCLAB_KERNELS_HPP
#define ESCLAB_KERNELS_HPP

// Batched one-period quadrature over many parameter points. The serial
// versions are the reference; the OpenMP versions must agree with them bit
// for bit (each point is reduced in the same order by one thread).

#include <cstddef>
#include <span>

#include "esclab/cost.hpp"
#include "esclab/signals.hpp"

namespace esclab {

/// Per-point one-period averages needed by the average maps, for `count`
/// points of dimension n. With c = J_bar (centered output):
///
///   g_bar_i          = < m_i J >
///   g2_bar_i(xi)     = < m_i^2 (J - xi)^2 >
///                    = centered_sq_i + 2 d centered_lin_i + d^2 demod_sq_i,
///   where d = J_bar - xi, centered_sq_i = < m_i^2 (J - c)^2 >,
///   centered_lin_i = < m_i^2 (J - c) >, demod_sq_i = < m_i^2 >.
///
/// Centering keeps the xi-expansion well conditioned when J_bar >> g2_bar.
struct MomentTable {
  std::size_t n = 0;
  std::size_t count = 0;
  Vector j_bar;           // count
  Vector g_bar;           // count * n
  Vector centered_sq;     // count * n
  Vector centered_lin;    // count * n
  Vector demod_sq;        // count * n

  double g2_bar(std::size_t point, std::size_t channel, double xi) const noexcept;
};

/// Precomputed dither and demodulation samples on the N_q uniform nodes of
/// [0, T).
class QuadratureNodes {
 public:
  QuadratureNodes(const DitherConfig& dither, std::size_t nodes);

  std::size_t size() const noexcept { return nodes_; }
  std::size_t dim() const noexcept { return n_; }
  std::span<const double> dither(std::size_t node) const { return {s_.data() + node * n_, n_}; }
  std::span<const double> demod(std::size_t node) const { return {m_.data() + node * n_, n_}; }

 private:
  std::size_t nodes_;
  std::size_t n_;
  Vector s_;
  Vector m_;
};

/// Moments at one point, written into row `row` of `table`.
void point_moments(const CostFunction& cost, const QuadratureNodes& q, std::span<const double> theta,
                   MomentTable& table, std::size_t row);

/// `points` is row-major count x n.
MomentTable moments_serial(const CostFunction& cost, const QuadratureNodes& q,
                           std::span<const double> points);
MomentTable moments_parallel(const CostFunction& cost, const QuadratureNodes& q,
                             std::span<const double> points);

/// Same as above on a subset of rows (indices into `points`); rows not
/// listed are left zero.
MomentTable moments_subset_parallel(const CostFunction& cost, const QuadratureNodes& q,
                                    std::span<const double> points, std::span<const std::size_t> rows);

/// Cost values at every point.
Vector values_serial(const CostFunction& cost, std::span<const double> points);
Vector values_parallel(const CostFunction& cost, std::span<const double> points);

/// Thread cap honoured by the parallel kernels (0 = OpenMP default).
void set_thread_limit(int threads) noexcept;
int thread_limit() noexcept;

}  // namespace esclab

#endif  // ESCLAB_KERNELS_HPP
