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

#include "esclab/kernels.hpp"

#include <atomic>
#include <cmath>
#include <omp.h>

namespace esclab {

namespace {

std::atomic<int> g_thread_limit{0};

int threads_for(std::size_t work) {
  int t = g_thread_limit.load(std::memory_order_relaxed);
  if (t <= 0) t = omp_get_max_threads();
  if (work < 2) t = 1;
  return t;
}

MomentTable make_table(std::size_t n, std::size_t count) {
  MomentTable t;
  t.n = n;
  t.count = count;
  t.j_bar.assign(count, 0.0);
  t.g_bar.assign(count * n, 0.0);
  t.centered_sq.assign(count * n, 0.0);
  t.centered_lin.assign(count * n, 0.0);
  t.demod_sq.assign(count * n, 0.0);
  return t;
}

std::size_t point_count(std::span<const double> points, std::size_t n) {
  if (points.size() % n != 0) throw DimensionError("point batch", n, points.size() % n);
  return points.size() / n;
}

}  // namespace

double MomentTable::g2_bar(std::size_t point, std::size_t channel, double xi) const noexcept {
  const std::size_t k = point * n + channel;
  const double d = j_bar[point] - xi;
  return centered_sq[k] + 2.0 * d * centered_lin[k] + d * d * demod_sq[k];
}

QuadratureNodes::QuadratureNodes(const DitherConfig& dither, std::size_t nodes)
    : nodes_(nodes), n_(dither.dim()), s_(nodes * n_), m_(nodes * n_) {
  if (nodes_ < 8 * static_cast<std::size_t>(dither.max_rate())) {
    throw InvalidArgument("quadrature needs at least 8 * r_max nodes");
  }
  const double h = dither.period() / static_cast<double>(nodes_);
  for (std::size_t j = 0; j < nodes_; ++j) {
    const double t = h * static_cast<double>(j);
    dither.value(t, std::span<double>(s_.data() + j * n_, n_));
    dither.demod(t, std::span<double>(m_.data() + j * n_, n_));
  }
}

void point_moments(const CostFunction& cost, const QuadratureNodes& q, std::span<const double> theta,
                   MomentTable& table, std::size_t row) {
  const std::size_t n = q.dim();
  const std::size_t nodes = q.size();
  // Two passes: J values first, then centered sums.
  thread_local Vector y;
  thread_local Vector probe;
  y.resize(nodes);
  probe.resize(n);
  double j_sum = 0.0;
  for (std::size_t j = 0; j < nodes; ++j) {
    const auto s = q.dither(j);
    for (std::size_t i = 0; i < n; ++i) probe[i] = theta[i] + s[i];
    y[j] = cost.value_unchecked(probe);
    j_sum += y[j];
  }
  const double inv = 1.0 / static_cast<double>(nodes);
  const double j_bar = j_sum * inv;
  table.j_bar[row] = j_bar;
  for (std::size_t i = 0; i < n; ++i) {
    double g = 0.0, sq = 0.0, lin = 0.0, m2 = 0.0;
    for (std::size_t j = 0; j < nodes; ++j) {
      const double m = q.demod(j)[i];
      const double r = y[j] - j_bar;
      const double mm = m * m;
      g += m * y[j];
      sq += mm * r * r;
      lin += mm * r;
      m2 += mm;
    }
    const std::size_t k = row * n + i;
    table.g_bar[k] = g * inv;
    table.centered_sq[k] = sq * inv;
    table.centered_lin[k] = lin * inv;
    table.demod_sq[k] = m2 * inv;
  }
}

MomentTable moments_serial(const CostFunction& cost, const QuadratureNodes& q,
                           std::span<const double> points) {
  const std::size_t n = q.dim();
  const std::size_t count = point_count(points, n);
  MomentTable table = make_table(n, count);
  for (std::size_t p = 0; p < count; ++p) point_moments(cost, q, points.subspan(p * n, n), table, p);
  return table;
}

MomentTable moments_parallel(const CostFunction& cost, const QuadratureNodes& q,
                             std::span<const double> points) {
  const std::size_t n = q.dim();
  const std::size_t count = point_count(points, n);
  MomentTable table = make_table(n, count);
  const auto total = static_cast<long>(count);
#pragma omp parallel for schedule(static) num_threads(threads_for(count))
  for (long p = 0; p < total; ++p) {
    const auto row = static_cast<std::size_t>(p);
    point_moments(cost, q, points.subspan(row * n, n), table, row);
  }
  return table;
}

MomentTable moments_subset_parallel(const CostFunction& cost, const QuadratureNodes& q,
                                    std::span<const double> points, std::span<const std::size_t> rows) {
  const std::size_t n = q.dim();
  const std::size_t count = point_count(points, n);
  MomentTable table = make_table(n, count);
  const auto total = static_cast<long>(rows.size());
#pragma omp parallel for schedule(static) num_threads(threads_for(rows.size()))
  for (long k = 0; k < total; ++k) {
    const std::size_t row = rows[static_cast<std::size_t>(k)];
    point_moments(cost, q, points.subspan(row * n, n), table, row);
  }
  return table;
}

Vector values_serial(const CostFunction& cost, std::span<const double> points) {
  const std::size_t n = cost.dim();
  const std::size_t count = point_count(points, n);
  Vector out(count);
  for (std::size_t p = 0; p < count; ++p) out[p] = cost.value_unchecked(points.subspan(p * n, n));
  return out;
}

Vector values_parallel(const CostFunction& cost, std::span<const double> points) {
  const std::size_t n = cost.dim();
  const std::size_t count = point_count(points, n);
  Vector out(count);
  const auto total = static_cast<long>(count);
#pragma omp parallel for schedule(static) num_threads(threads_for(count))
  for (long p = 0; p < total; ++p) {
    const auto row = static_cast<std::size_t>(p);
    out[row] = cost.value_unchecked(points.subspan(row * n, n));
  }
  return out;
}

void set_thread_limit(int threads) noexcept { g_thread_limit.store(threads, std::memory_order_relaxed); }

int thread_limit() noexcept { return g_thread_limit.load(std::memory_order_relaxed); }

}  // namespace esclab
