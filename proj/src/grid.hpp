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

#ifndef ESCLAB_SRC_GRID_HPP
#define ESCLAB_SRC_GRID_HPP

// Internal helpers shared by the grid searches.

#include <cstddef>
#include <numeric>
#include <span>
#include <vector>

#include "esclab/cost.hpp"

namespace esclab::detail {

/// Row-major tensor grid over a box; axis 0 varies slowest.
struct Grid {
  static constexpr std::size_t kMaxNodes = 4'000'000;

  Box box;
  std::size_t per_axis;
  std::size_t n;
  std::size_t count;

  Grid(Box b, std::size_t m) : box(std::move(b)), per_axis(m), n(box.dim()), count(1) {
    for (std::size_t i = 0; i < n; ++i) {
      if (count > kMaxNodes / per_axis) throw InvalidArgument("grid too large");
      count *= per_axis;
    }
  }

  void unravel(std::size_t flat, std::span<std::size_t> idx) const {
    for (std::size_t d = n; d-- > 0;) {
      idx[d] = flat % per_axis;
      flat /= per_axis;
    }
  }

  std::size_t ravel(std::span<const std::size_t> idx) const {
    std::size_t flat = 0;
    for (std::size_t d = 0; d < n; ++d) flat = flat * per_axis + idx[d];
    return flat;
  }

  double coord(std::size_t axis, std::size_t k) const {
    return box.lo[axis] +
           (box.hi[axis] - box.lo[axis]) * static_cast<double>(k) / static_cast<double>(per_axis - 1);
  }

  double spacing(std::size_t axis) const {
    return (box.hi[axis] - box.lo[axis]) / static_cast<double>(per_axis - 1);
  }

  Vector point(std::size_t flat) const {
    std::vector<std::size_t> idx(n);
    unravel(flat, idx);
    Vector x(n);
    for (std::size_t d = 0; d < n; ++d) x[d] = coord(d, idx[d]);
    return x;
  }

  bool on_boundary(std::size_t flat) const {
    for (std::size_t d = 0; d < n; ++d) {
      const std::size_t k = flat % per_axis;
      flat /= per_axis;
      if (k == 0 || k + 1 == per_axis) return true;
    }
    return false;
  }

  /// All nodes, row-major count x n.
  Vector points() const {
    Vector out(count * n);
    std::vector<std::size_t> idx(n);
    for (std::size_t p = 0; p < count; ++p) {
      unravel(p, idx);
      for (std::size_t d = 0; d < n; ++d) out[p * n + d] = coord(d, idx[d]);
    }
    return out;
  }
};

/// Union-find over flat indices.
class Clusters {
 public:
  explicit Clusters(std::size_t size) : parent_(size) { std::iota(parent_.begin(), parent_.end(), 0); }
  std::size_t find(std::size_t x) {
    while (parent_[x] != x) x = parent_[x] = parent_[parent_[x]];
    return x;
  }
  void unite(std::size_t a, std::size_t b) { parent_[find(a)] = find(b); }

 private:
  std::vector<std::size_t> parent_;
};

}  // namespace esclab::detail

#endif  // ESCLAB_SRC_GRID_HPP
