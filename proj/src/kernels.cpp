#include "bracketlab/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace bracketlab::kernels {

double reduce_max_abs(std::span<const double> v, Exec exec) {
  const auto n = static_cast<std::ptrdiff_t>(v.size());
  double m = 0.0;
  if (exec == Exec::serial) {
    for (std::ptrdiff_t k = 0; k < n; ++k) m = std::max(m, std::abs(v[k]));
    return m;
  }
#pragma omp parallel for reduction(max : m) schedule(static)
  for (std::ptrdiff_t k = 0; k < n; ++k) m = std::max(m, std::abs(v[k]));
  return m;
}

double weighted_sum(const GridSpec& grid, std::span<const double> v,
                    const std::vector<std::vector<double>>& axis_weights,
                    Exec exec) {
  const auto strides = grid.strides();
  const int d = grid.dim();
  const auto n0 = static_cast<std::ptrdiff_t>(grid.axes[0].points);
  const std::size_t slice = strides[0];
  std::vector<double> partial(n0, 0.0);

  auto slice_sum = [&](std::ptrdiff_t i0) {
    // Kahan within a slice; identical arithmetic order in both exec modes
    double s = 0.0, comp = 0.0;
    const std::size_t base = static_cast<std::size_t>(i0) * slice;
    for (std::size_t off = 0; off < slice; ++off) {
      double w = axis_weights[0][i0];
      std::size_t rem = off;
      for (int k = d - 1; k >= 1; --k) {
        const auto pk = static_cast<std::size_t>(grid.axes[k].points);
        w *= axis_weights[k][rem % pk];
        rem /= pk;
      }
      const double term = w * v[base + off] - comp;
      const double t = s + term;
      comp = (t - s) - term;
      s = t;
    }
    return s;
  };

  if (exec == Exec::serial) {
    for (std::ptrdiff_t i0 = 0; i0 < n0; ++i0) partial[i0] = slice_sum(i0);
  } else {
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i0 = 0; i0 < n0; ++i0) partial[i0] = slice_sum(i0);
  }
  double s = 0.0, comp = 0.0;
  for (std::ptrdiff_t i0 = 0; i0 < n0; ++i0) {
    const double term = partial[i0] - comp;
    const double t = s + term;
    comp = (t - s) - term;
    s = t;
  }
  return s;
}

namespace {

// Order-4 interior stencil: 7-point spread-optimized central difference.
// a1,a2 follow from the order conditions so the formal order is exact.
constexpr double kA3 = 0.02651995;
constexpr double kA2 = -1.0 / 12.0 - 4.0 * kA3;
constexpr double kA1 = 2.0 / 3.0 + 5.0 * kA3;

struct StencilRow {
  int offsets[8];
  double coefs[8];
  int n;
};

// rows indexed by distance from the low edge (interior row last);
// mirrored with negated coefficients near the high edge
struct StencilSet {
  std::vector<StencilRow> edge;  // edge[k] used at index k from the boundary
  StencilRow interior;
  int reach;  // half-width of the interior row
};

const StencilSet& stencil_set(int order) {
  static const StencilSet order2{
      {{{0, 1, 2}, {-1.5, 2.0, -0.5}, 3}},
      {{-1, 1}, {-0.5, 0.5}, 2},
      1};
  static const StencilSet order4{
      {{{0, 1, 2, 3, 4}, {-25.0 / 12, 48.0 / 12, -36.0 / 12, 16.0 / 12, -3.0 / 12}, 5},
       {{-1, 0, 1, 2, 3}, {-3.0 / 12, -10.0 / 12, 18.0 / 12, -6.0 / 12, 1.0 / 12}, 5},
       {{-2, -1, 1, 2}, {1.0 / 12, -8.0 / 12, 8.0 / 12, -1.0 / 12}, 4}},
      {{-3, -2, -1, 1, 2, 3}, {-kA3, -kA2, -kA1, kA1, kA2, kA3}, 6},
      3};
  return order == 2 ? order2 : order4;
}

}  // namespace

void apply_stencil(const GridSpec& grid, std::span<const double> in,
                   std::span<double> out, int axis, int order, Exec exec) {
  const auto& set = stencil_set(order);
  const auto& a = grid.axes[axis];
  const int P = a.points;
  const bool periodic = a.periodic;
  const int need = periodic ? 2 * set.reach + 1 : set.edge.front().n;
  if (P < need)
    throw std::invalid_argument("axis too short for requested stencil order");
  const double inv_h = 1.0 / a.step();
  const auto stride = static_cast<std::ptrdiff_t>(grid.strides()[axis]);
  const auto n = static_cast<std::ptrdiff_t>(grid.size());

  auto one = [&](std::ptrdiff_t flat) {
    const int i = static_cast<int>((flat / stride) % P);
    const StencilRow* row = &set.interior;
    bool mirror = false;
    if (!periodic) {
      if (i < static_cast<int>(set.edge.size())) {
        row = &set.edge[i];
      } else if (P - 1 - i < static_cast<int>(set.edge.size())) {
        row = &set.edge[P - 1 - i];
        mirror = true;
      }
    }
    double s = 0.0;
    for (int t = 0; t < row->n; ++t) {
      int j = mirror ? i - row->offsets[t] : i + row->offsets[t];
      if (periodic) j = (j % P + P) % P;
      const double c = mirror ? -row->coefs[t] : row->coefs[t];
      s += c * in[flat + static_cast<std::ptrdiff_t>(j - i) * stride];
    }
    return s * inv_h;
  };

  if (exec == Exec::serial) {
    for (std::ptrdiff_t k = 0; k < n; ++k) out[k] = one(k);
    return;
  }
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t k = 0; k < n; ++k) out[k] = one(k);
}

}  // namespace bracketlab::kernels
