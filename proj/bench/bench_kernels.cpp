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

// Serial reference vs OpenMP moment and value kernels on a 2-D grid.

#include <benchmark/benchmark.h>

#include "esclab/cost.hpp"
#include "esclab/kernels.hpp"
#include "esclab/signals.hpp"

namespace {

esclab::Vector grid_points(std::size_t per_axis) {
  esclab::Vector pts;
  pts.reserve(2 * per_axis * per_axis);
  for (std::size_t i = 0; i < per_axis; ++i) {
    for (std::size_t j = 0; j < per_axis; ++j) {
      pts.push_back(-2.0 + 4.0 * static_cast<double>(i) / static_cast<double>(per_axis - 1));
      pts.push_back(-2.0 + 4.0 * static_cast<double>(j) / static_cast<double>(per_axis - 1));
    }
  }
  return pts;
}

const esclab::CostFunction& cost() {
  static const esclab::CostFunction c = esclab::parse_cost("theta1^4/24 + (theta2 - 0.5)^2 + 0.1*theta1*theta2", 2);
  return c;
}

const esclab::QuadratureNodes& nodes() {
  static const esclab::DitherConfig d({0.05, 0.05}, {1, 2}, 10.0);
  static const esclab::QuadratureNodes q(d, 512);
  return q;
}

void BM_MomentsSerial(benchmark::State& state) {
  const auto pts = grid_points(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(esclab::moments_serial(cost(), nodes(), pts));
  state.SetItemsProcessed(state.iterations() * static_cast<long>(pts.size() / 2));
}

void BM_MomentsParallel(benchmark::State& state) {
  const auto pts = grid_points(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(esclab::moments_parallel(cost(), nodes(), pts));
  state.SetItemsProcessed(state.iterations() * static_cast<long>(pts.size() / 2));
}

void BM_ValuesSerial(benchmark::State& state) {
  const auto pts = grid_points(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(esclab::values_serial(cost(), pts));
  state.SetItemsProcessed(state.iterations() * static_cast<long>(pts.size() / 2));
}

void BM_ValuesParallel(benchmark::State& state) {
  const auto pts = grid_points(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(esclab::values_parallel(cost(), pts));
  state.SetItemsProcessed(state.iterations() * static_cast<long>(pts.size() / 2));
}

}  // namespace

BENCHMARK(BM_MomentsSerial)->Arg(16)->Arg(64)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_MomentsParallel)->Arg(16)->Arg(64)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ValuesSerial)->Arg(128)->Arg(512)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_ValuesParallel)->Arg(128)->Arg(512)->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();
