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

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "esclab/cost.hpp"
#include "grid.hpp"

namespace esclab {

namespace {

using detail::Clusters;
using detail::Grid;

AssumptionCheck check_continuity(const CostFunction& cost, const Grid& grid, const Vector& values) {
  AssumptionCheck out{Verdict::pass, std::nullopt, "one-sided difference quotients agree"};
  Vector x(grid.n);
  for (std::size_t p = 0; p < grid.count; ++p) {
    x = grid.point(p);
    if (!std::isfinite(values[p])) {
      return {Verdict::fail, x, "non-finite cost value"};
    }
    for (std::size_t i = 0; i < grid.n; ++i) {
      const double xi = x[i];
      const double h = 1e-6 * (1.0 + std::abs(xi));
      x[i] = xi + h;
      const double up = cost.value_unchecked(x);
      x[i] = xi - h;
      const double down = cost.value_unchecked(x);
      x[i] = xi;
      const double forward = (up - values[p]) / h;
      const double backward = (values[p] - down) / h;
      if (!std::isfinite(forward) || !std::isfinite(backward) ||
          std::abs(forward - backward) > 1e-2 * (1.0 + std::abs(forward) + std::abs(backward))) {
        return {Verdict::fail, x, "gradient jumps along axis " + std::to_string(i + 1)};
      }
    }
  }
  return out;
}

struct MinimumScan {
  AssumptionCheck check;
  std::size_t global_node = 0;
};

MinimumScan check_unique_minimum(const Grid& grid, const Vector& values) {
  const std::size_t m = grid.per_axis;
  std::vector<std::size_t> idx(grid.n), nb(grid.n);
  const std::size_t global =
      static_cast<std::size_t>(std::min_element(values.begin(), values.end()) - values.begin());

  std::vector<char> is_min(grid.count, 0);
  for (std::size_t p = 0; p < grid.count; ++p) {
    grid.unravel(p, idx);
    const bool interior =
        std::all_of(idx.begin(), idx.end(), [m](std::size_t k) { return k > 0 && k + 1 < m; });
    if (!interior) continue;
    bool local = true;
    for (std::size_t d = 0; d < grid.n && local; ++d) {
      for (int step : {-1, 1}) {
        nb = idx;
        nb[d] = static_cast<std::size_t>(static_cast<long>(idx[d]) + step);
        if (values[grid.ravel(nb)] < values[p]) {
          local = false;
          break;
        }
      }
    }
    is_min[p] = local;
  }

  Clusters clusters(grid.count);
  for (std::size_t p = 0; p < grid.count; ++p) {
    if (!is_min[p]) continue;
    grid.unravel(p, idx);
    for (std::size_t d = 0; d < grid.n; ++d) {
      if (idx[d] + 1 >= m) continue;
      nb = idx;
      ++nb[d];
      const std::size_t q = grid.ravel(nb);
      if (is_min[q]) clusters.unite(p, q);
    }
  }

  std::vector<std::size_t> roots;
  for (std::size_t p = 0; p < grid.count; ++p) {
    if (is_min[p]) roots.push_back(clusters.find(p));
  }
  std::sort(roots.begin(), roots.end());
  roots.erase(std::unique(roots.begin(), roots.end()), roots.end());

  MinimumScan scan;
  scan.global_node = global;
  if (!is_min[global]) {
    scan.check = {Verdict::indeterminate, std::nullopt,
                  "grid minimum lies on the box boundary; minimizer may be outside the box"};
    return scan;
  }
  if (roots.size() == 1) {
    scan.check = {Verdict::pass, std::nullopt, "single local-minimum cluster on grid"};
    return scan;
  }
  // Witness: the best node of the lowest competing cluster.
  const std::size_t global_root = clusters.find(global);
  std::size_t witness = grid.count;
  for (std::size_t p = 0; p < grid.count; ++p) {
    if (!is_min[p] || clusters.find(p) == global_root) continue;
    if (witness == grid.count || values[p] < values[witness]) witness = p;
  }
  scan.check = {Verdict::fail, grid.point(witness),
                std::to_string(roots.size()) + " separate local-minimum clusters on grid"};
  return scan;
}

AssumptionCheck check_unique_stationary(const CostFunction& cost, const Grid& grid,
                                        const Vector& values, std::size_t global_node) {
  const std::size_t n = grid.n;
  const std::size_t m = grid.per_axis;
  std::vector<Vector> grads(grid.count);
  for (std::size_t p = 0; p < grid.count; ++p) grads[p] = cost.gradient(grid.point(p));

  // Cells are indexed by their lower corner.
  const std::size_t corners = std::size_t{1} << n;
  std::vector<std::size_t> idx(n), corner(n);
  std::vector<char> candidate(grid.count, 0);
  for (std::size_t p = 0; p < grid.count; ++p) {
    grid.unravel(p, idx);
    if (std::any_of(idx.begin(), idx.end(), [m](std::size_t k) { return k + 1 >= m; })) continue;
    bool brackets_zero = true;
    for (std::size_t j = 0; j < n && brackets_zero; ++j) {
      double lo = std::numeric_limits<double>::infinity();
      double hi = -lo;
      for (std::size_t c = 0; c < corners; ++c) {
        for (std::size_t d = 0; d < n; ++d) corner[d] = idx[d] + ((c >> d) & 1u);
        const double g = grads[grid.ravel(corner)][j];
        lo = std::min(lo, g);
        hi = std::max(hi, g);
      }
      brackets_zero = lo <= 0.0 && hi >= 0.0;
    }
    candidate[p] = brackets_zero;
  }

  // Merge cells that touch, including diagonally.
  Clusters clusters(grid.count);
  std::size_t stencil = 1;
  for (std::size_t d = 0; d < n; ++d) stencil *= 3;
  for (std::size_t p = 0; p < grid.count; ++p) {
    if (!candidate[p]) continue;
    grid.unravel(p, idx);
    for (std::size_t s = 0; s < stencil; ++s) {
      std::size_t code = s;
      bool inside = true;
      for (std::size_t d = 0; d < n; ++d) {
        const long off = static_cast<long>(code % 3) - 1;
        code /= 3;
        const long k = static_cast<long>(idx[d]) + off;
        if (k < 0 || k + 1 >= static_cast<long>(m)) inside = false;
        corner[d] = static_cast<std::size_t>(std::max(k, 0L));
      }
      if (!inside) continue;
      const std::size_t q = grid.ravel(corner);
      if (q != p && candidate[q]) clusters.unite(p, q);
    }
  }

  // Lowest corner value per cluster; the global cluster owns a cell touching the grid minimum.
  std::vector<std::size_t> best_node(grid.count, grid.count);
  std::vector<char> touches_global(grid.count, 0);
  std::size_t cluster_count = 0;
  for (std::size_t p = 0; p < grid.count; ++p) {
    if (!candidate[p]) continue;
    const std::size_t root = clusters.find(p);
    if (best_node[root] == grid.count) ++cluster_count;
    grid.unravel(p, idx);
    for (std::size_t c = 0; c < corners; ++c) {
      for (std::size_t d = 0; d < n; ++d) corner[d] = idx[d] + ((c >> d) & 1u);
      const std::size_t node = grid.ravel(corner);
      if (node == global_node) touches_global[root] = 1;
      if (best_node[root] == grid.count || values[node] < values[best_node[root]]) best_node[root] = node;
    }
  }

  if (cluster_count == 0) {
    return {Verdict::indeterminate, std::nullopt, "no stationary cell found in the box"};
  }
  if (cluster_count == 1) {
    return {Verdict::pass, std::nullopt, "single stationary region on grid"};
  }
  std::size_t witness = grid.count;
  for (std::size_t r = 0; r < grid.count; ++r) {
    if (best_node[r] == grid.count || touches_global[r]) continue;
    if (witness == grid.count || values[best_node[r]] < values[witness]) witness = best_node[r];
  }
  if (witness == grid.count) {
    // every cluster touches the minimum node; pick any non-first cluster
    for (std::size_t r = 0; r < grid.count; ++r) {
      if (best_node[r] != grid.count && best_node[r] != global_node) {
        witness = best_node[r];
        break;
      }
    }
  }
  return {Verdict::fail, grid.point(witness),
          std::to_string(cluster_count) + " separate stationary regions on grid"};
}

AssumptionCheck check_radial_growth(const CostFunction& cost, const Grid& grid, const Vector& center) {
  const std::size_t n = grid.n;
  const std::size_t m = grid.per_axis;
  const double j_center = cost.value(center);
  std::vector<std::size_t> idx(n);

  std::vector<std::size_t> boundary;
  for (std::size_t p = 0; p < grid.count; ++p) {
    grid.unravel(p, idx);
    if (std::any_of(idx.begin(), idx.end(), [m](std::size_t k) { return k == 0 || k + 1 == m; })) {
      boundary.push_back(p);
    }
  }
  const std::size_t stride = std::max<std::size_t>(1, boundary.size() / 256);

  AssumptionCheck out{Verdict::pass, std::nullopt, "cost still rising at every sampled boundary ray"};
  for (std::size_t b = 0; b < boundary.size(); b += stride) {
    const Vector x = grid.point(boundary[b]);
    Vector u(n);
    double dist = 0.0;
    for (std::size_t d = 0; d < n; ++d) {
      u[d] = x[d] - center[d];
      dist += u[d] * u[d];
    }
    dist = std::sqrt(dist);
    if (dist == 0.0) continue;
    const Vector g = cost.gradient(x);
    double slope = 0.0;
    for (std::size_t d = 0; d < n; ++d) slope += g[d] * u[d] / dist;
    const double rise = cost.value(x) - j_center;
    if (!(rise > 0.0) || slope < 0.0) {
      return {Verdict::fail, x, "cost does not grow toward the box boundary"};
    }
    if (slope * dist < 1e-3 * rise && out.verdict == Verdict::pass) {
      out = {Verdict::indeterminate, x, "cost flattens out at the box boundary"};
    }
  }
  return out;
}

}  // namespace

AssumptionReport check_assumptions(const CostFunction& cost, const Box& box, std::size_t grid_n) {
  box.validate();
  if (box.dim() != cost.dim()) throw DimensionError("assumption box", cost.dim(), box.dim());
  if (grid_n < 3) throw InvalidArgument("assumption grid needs at least 3 nodes per axis");

  const Grid grid(box, grid_n);
  Vector values(grid.count);
  for (std::size_t p = 0; p < grid.count; ++p) values[p] = cost.value(grid.point(p));

  AssumptionReport report;
  report.box = box;
  report.grid_n = grid_n;
  report.continuity = check_continuity(cost, grid, values);
  auto scan = check_unique_minimum(grid, values);
  report.unique_minimum = scan.check;
  report.unique_stationary = check_unique_stationary(cost, grid, values, scan.global_node);
  const Vector center = cost.minimizer().value_or(grid.point(scan.global_node));
  report.radial_growth = check_radial_growth(cost, grid, center);
  return report;
}

}  // namespace esclab
