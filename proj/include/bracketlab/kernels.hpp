#pragma once
// Grid-scale kernels. Every kernel has a serial reference path (Exec::serial)
// and an OpenMP path (Exec::parallel). Reductions are row-chunked so results
// do not depend on the thread count.

#include <cstddef>
#include <span>
#include <vector>

#include "bracketlab/geometry.hpp"

namespace bracketlab::kernels {

// out[flat] = fn(point, flat) for every grid point.
// F: double(std::span<const double> point, std::size_t flat)
template <class F>
void map_grid(const GridSpec& grid, std::span<double> out, Exec exec, F&& fn) {
  const auto n = static_cast<std::ptrdiff_t>(grid.size());
  if (exec == Exec::serial) {
    double pt[kMaxDim];
    for (std::ptrdiff_t k = 0; k < n; ++k) {
      grid.point_at(static_cast<std::size_t>(k), std::span(pt, grid.axes.size()));
      out[k] = fn(Point(pt, grid.axes.size()), static_cast<std::size_t>(k));
    }
    return;
  }
#pragma omp parallel
  {
    double pt[kMaxDim];
#pragma omp for schedule(static)
    for (std::ptrdiff_t k = 0; k < n; ++k) {
      grid.point_at(static_cast<std::size_t>(k), std::span(pt, grid.axes.size()));
      out[k] = fn(Point(pt, grid.axes.size()), static_cast<std::size_t>(k));
    }
  }
}

double reduce_max_abs(std::span<const double> v, Exec exec);

// sum over the grid of v[flat] * prod_k axis_weights[k][i_k]; deterministic:
// one partial sum per leading-axis slice, combined in index order
double weighted_sum(const GridSpec& grid, std::span<const double> v,
                    const std::vector<std::vector<double>>& axis_weights,
                    Exec exec);

// derivative of `in` along `axis`; stencil rows selected per edge offset
void apply_stencil(const GridSpec& grid, std::span<const double> in,
                   std::span<double> out, int axis, int order, Exec exec);

}  // namespace bracketlab::kernels
