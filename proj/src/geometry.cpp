#include "bracketlab/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <utility>

#include "bracketlab/kernels.hpp"

namespace bracketlab {

SmoothFn smooth_constant(double c) {
  SmoothFn f;
  f.value = [c](Point) { return c; };
  f.gradient = [](Point x, std::span<double> g) {
    std::fill(g.begin(), g.begin() + x.size(), 0.0);
  };
  return f;
}

SmoothFn smooth_combination(std::vector<std::pair<double, SmoothFn>> terms) {
  bool all_grad = std::all_of(terms.begin(), terms.end(), [](const auto& t) {
    return t.second.has_gradient();
  });
  auto shared = std::make_shared<std::vector<std::pair<double, SmoothFn>>>(
      std::move(terms));
  SmoothFn f;
  f.value = [shared](Point x) {
    double s = 0.0;
    for (const auto& [c, t] : *shared) s += c * t.value(x);
    return s;
  };
  if (all_grad) {
    f.gradient = [shared](Point x, std::span<double> g) {
      double tmp[kMaxDim];
      std::fill(g.begin(), g.begin() + x.size(), 0.0);
      for (const auto& [c, t] : *shared) {
        t.gradient(x, std::span(tmp, x.size()));
        for (std::size_t i = 0; i < x.size(); ++i) g[i] += c * tmp[i];
      }
    };
  }
  return f;
}

SmoothFn smooth_product(SmoothFn a, SmoothFn b) {
  auto pa = std::make_shared<SmoothFn>(std::move(a));
  auto pb = std::make_shared<SmoothFn>(std::move(b));
  SmoothFn f;
  f.value = [pa, pb](Point x) { return pa->value(x) * pb->value(x); };
  if (pa->has_gradient() && pb->has_gradient()) {
    f.gradient = [pa, pb](Point x, std::span<double> g) {
      double ga[kMaxDim], gb[kMaxDim];
      pa->gradient(x, std::span(ga, x.size()));
      pb->gradient(x, std::span(gb, x.size()));
      const double va = pa->value(x), vb = pb->value(x);
      for (std::size_t i = 0; i < x.size(); ++i) g[i] = va * gb[i] + vb * ga[i];
    };
  }
  return f;
}

SmoothFn smooth_bracket(const Chart& chart, SmoothFn F, SmoothFn G) {
  if (!F.has_gradient() || !G.has_gradient()) {
    throw std::invalid_argument(
        "smooth_bracket needs analytic gradients on both arguments");
  }
  auto pf = std::make_shared<SmoothFn>(std::move(F));
  auto pg = std::make_shared<SmoothFn>(std::move(G));
  auto pc = std::make_shared<Chart>(chart);
  SmoothFn out;
  out.value = [pf, pg, pc](Point x) {
    double gf[kMaxDim], gg[kMaxDim];
    pf->gradient(x, std::span(gf, x.size()));
    pg->gradient(x, std::span(gg, x.size()));
    return pc->bracket_from_gradients(x, std::span<const double>(gf, x.size()),
                                      std::span<const double>(gg, x.size()));
  };
  return out;
}

std::string to_string(ChartKind kind) {
  switch (kind) {
    case ChartKind::cartesian: return "cartesian";
    case ChartKind::polar_r2: return "polar_r2";
    case ChartKind::cylinder_s1: return "cylinder_s1";
    case ChartKind::symplectization_s1xU: return "symplectization_s1xU";
  }
  throw std::invalid_argument("unknown chart kind");
}

ChartKind chart_kind_from_string(const std::string& name) {
  if (name == "cartesian") return ChartKind::cartesian;
  if (name == "polar_r2") return ChartKind::polar_r2;
  if (name == "cylinder_s1") return ChartKind::cylinder_s1;
  if (name == "symplectization_s1xU") return ChartKind::symplectization_s1xU;
  throw std::invalid_argument("unknown chart kind: " + name);
}

double Chart::block_coef(const PairBlock& b, Point x) const {
  switch (b.coef) {
    case PairBlock::Coef::unit: return 1.0;
    case PairBlock::Coef::inv_coord0: return 1.0 / x[0];
    case PairBlock::Coef::exp_neg_coord0: return std::exp(-x[0]);
  }
  return 0.0;
}

void Chart::poisson_matrix(Point x, std::span<double> out) const {
  std::fill(out.begin(), out.begin() + dim * dim, 0.0);
  for (const auto& b : blocks) {
    const double c = block_coef(b, x);
    out[b.i * dim + b.j] = c;
    out[b.j * dim + b.i] = -c;
  }
}

void Chart::apply_poisson(Point x, std::span<const double> grad,
                          std::span<double> out) const {
  std::fill(out.begin(), out.begin() + dim, 0.0);
  for (const auto& b : blocks) {
    const double c = block_coef(b, x);
    out[b.i] += c * grad[b.j];
    out[b.j] -= c * grad[b.i];
  }
}

double Chart::bracket_from_gradients(Point x, std::span<const double> dF,
                                     std::span<const double> dG) const {
  double s = 0.0;
  for (const auto& b : blocks)
    s += block_coef(b, x) * (dF[b.i] * dG[b.j] - dF[b.j] * dG[b.i]);
  return s;
}

Chart make_chart(ChartKind kind, int pairs) {
  Chart c;
  c.kind = kind;
  switch (kind) {
    case ChartKind::cartesian: {
      if (pairs < 1) throw std::invalid_argument("cartesian chart needs pairs >= 1");
      c.dim = 2 * pairs;
      for (int m = 0; m < pairs; ++m) {
        const std::string suffix = pairs == 1 ? "" : std::to_string(m + 1);
        c.names.push_back("q" + suffix);
        c.names.push_back("p" + suffix);
        c.blocks.push_back({2 * m, 2 * m + 1, PairBlock::Coef::unit});
      }
      break;
    }
    case ChartKind::polar_r2:
      c.dim = 2;
      c.names = {"r", "theta"};
      c.blocks = {{0, 1, PairBlock::Coef::inv_coord0}};
      break;
    case ChartKind::cylinder_s1:
      c.dim = 2;
      c.names = {"s", "theta"};
      c.blocks = {{0, 1, PairBlock::Coef::exp_neg_coord0}};
      break;
    case ChartKind::symplectization_s1xU: {
      if (pairs < 1)
        throw std::invalid_argument("symplectization needs transverse pairs >= 1");
      c.dim = 2 + 2 * pairs;
      c.names = {"s", "theta"};
      c.blocks = {{0, 1, PairBlock::Coef::exp_neg_coord0}};
      for (int m = 0; m < 2 * pairs; ++m) c.names.push_back("x" + std::to_string(m + 1));
      for (int m = 0; m < pairs; ++m)
        c.blocks.push_back({2 + 2 * m, 3 + 2 * m, PairBlock::Coef::unit});
      break;
    }
  }
  if (c.dim > kMaxDim) throw std::invalid_argument("chart dimension too large");
  return c;
}

std::size_t GridSpec::size() const {
  std::size_t n = 1;
  for (const auto& a : axes) n *= static_cast<std::size_t>(a.points);
  return n;
}

std::vector<std::size_t> GridSpec::strides() const {
  std::vector<std::size_t> s(axes.size(), 1);
  for (int k = dim() - 2; k >= 0; --k)
    s[k] = s[k + 1] * static_cast<std::size_t>(axes[k + 1].points);
  return s;
}

void GridSpec::point_at(std::size_t flat, std::span<double> out) const {
  for (int k = dim() - 1; k >= 0; --k) {
    const auto p = static_cast<std::size_t>(axes[k].points);
    out[k] = axes[k].coord(static_cast<int>(flat % p));
    flat /= p;
  }
}

void GridSpec::validate() const {
  if (axes.empty() || dim() > kMaxDim)
    throw std::invalid_argument("grid must have between 1 and 16 axes");
  for (const auto& a : axes) {
    if (a.points < 4) throw std::invalid_argument("grid axis needs >= 4 points");
    if (!(a.lo < a.hi)) throw std::invalid_argument("grid axis needs lo < hi");
  }
}

void validate_grid(const Chart& chart, const GridSpec& grid) {
  grid.validate();
  if (grid.dim() != chart.dim)
    throw std::invalid_argument("grid dimension does not match chart");
  if (chart.kind == ChartKind::polar_r2 && grid.axes[0].lo <= 0.0)
    throw std::invalid_argument("polar grid must keep r > 0");
}

GridField sample_field(const Chart& chart, const GridSpec& grid,
                       const SmoothFn& fn, Exec exec) {
  validate_grid(chart, grid);
  GridField f{chart, grid, std::vector<double>(grid.size()), fn};
  kernels::map_grid(grid, f.samples, exec,
                    [&fn](Point x, std::size_t) { return fn.value(x); });
  for (std::size_t k = 0; k < f.samples.size(); ++k)
    if (!std::isfinite(f.samples[k]))
      throw std::domain_error("non-finite sample at flat index " + std::to_string(k));
  return f;
}

GridField partial_derivative(const GridField& f, int axis, int order,
                             Exec exec) {
  if (axis < 0 || axis >= f.grid.dim())
    throw std::invalid_argument("derivative axis out of range");
  if (order != 2 && order != 4)
    throw std::invalid_argument("stencil order must be 2 or 4");
  GridField out{f.chart, f.grid, std::vector<double>(f.samples.size()), std::nullopt};
  kernels::apply_stencil(f.grid, f.samples, out.samples, axis, order, exec);
  return out;
}

namespace {

GridField bracket_exact(const GridField& F, const GridField& G, Exec exec) {
  const Chart chart = F.chart;
  const SmoothFn f = *F.analytic, g = *G.analytic;
  SmoothFn combo;
  combo.value = [chart, f, g](Point x) {
    double df[kMaxDim], dg[kMaxDim];
    f.gradient(x, std::span(df, x.size()));
    g.gradient(x, std::span(dg, x.size()));
    return chart.bracket_from_gradients(x, std::span<const double>(df, x.size()),
                                        std::span<const double>(dg, x.size()));
  };
  // no closed-form second derivatives: the result carries value only
  GridField out{F.chart, F.grid, std::vector<double>(F.samples.size()), combo};
  kernels::map_grid(F.grid, out.samples, exec,
                    [&combo](Point x, std::size_t) { return combo.value(x); });
  return out;
}

GridField bracket_fd(const GridField& F, const GridField& G, int order,
                     Exec exec) {
  const int d = F.grid.dim();
  std::vector<GridField> dF(d), dG(d);
  for (int k = 0; k < d; ++k) {
    dF[k] = partial_derivative(F, k, order, exec);
    dG[k] = partial_derivative(G, k, order, exec);
  }
  GridField out{F.chart, F.grid, std::vector<double>(F.samples.size()), std::nullopt};
  const Chart& chart = F.chart;
  kernels::map_grid(F.grid, out.samples, exec, [&](Point x, std::size_t flat) {
    double s = 0.0;
    for (const auto& b : chart.blocks)
      s += chart.block_coef(b, x) * (dF[b.i].samples[flat] * dG[b.j].samples[flat] -
                                     dF[b.j].samples[flat] * dG[b.i].samples[flat]);
    return s;
  });
  return out;
}

bool same_grid(const GridSpec& a, const GridSpec& b) {
  if (a.axes.size() != b.axes.size()) return false;
  for (std::size_t k = 0; k < a.axes.size(); ++k) {
    const auto &x = a.axes[k], &y = b.axes[k];
    if (x.lo != y.lo || x.hi != y.hi || x.points != y.points ||
        x.periodic != y.periodic)
      return false;
  }
  return true;
}

}  // namespace

GridField poisson_bracket(const GridField& F, const GridField& G,
                          const BracketOptions& opt) {
  if (F.chart.kind != G.chart.kind || F.chart.dim != G.chart.dim)
    throw std::invalid_argument("bracket arguments live on different charts");
  if (!same_grid(F.grid, G.grid))
    throw std::invalid_argument("bracket arguments live on different grids");
  const bool exact = opt.mode == BracketOptions::Mode::automatic &&
                     F.analytic && F.analytic->has_gradient() && G.analytic &&
                     G.analytic->has_gradient();
  return exact ? bracket_exact(F, G, opt.exec)
               : bracket_fd(F, G, opt.fd_order, opt.exec);
}

double c0_norm(const GridField& f, Exec exec) {
  return kernels::reduce_max_abs(f.samples, exec);
}

QuadratureResult integrate(const GridField& f, Exec exec) {
  const auto& grid = f.grid;
  std::vector<std::vector<double>> weights(grid.axes.size());
  for (std::size_t k = 0; k < grid.axes.size(); ++k) {
    const auto& a = grid.axes[k];
    weights[k].assign(a.points, a.step());
    if (!a.periodic) {
      weights[k].front() *= 0.5;
      weights[k].back() *= 0.5;
    }
  }
  QuadratureResult res;
  res.value = kernels::weighted_sum(grid, f.samples, weights, exec);

  // largest sample magnitude on any non-periodic boundary face
  const auto strides = grid.strides();
  double boundary = 0.0;
  for (int k = 0; k < grid.dim(); ++k) {
    if (grid.axes[k].periodic) continue;
    const auto pk = static_cast<std::size_t>(grid.axes[k].points);
    for (std::size_t flat = 0; flat < f.samples.size(); ++flat) {
      const std::size_t ik = (flat / strides[k]) % pk;
      if (ik == 0 || ik + 1 == pk)
        boundary = std::max(boundary, std::abs(f.samples[flat]));
    }
  }
  res.boundary_max_abs = boundary;
  res.boundary_leak = boundary > 1e-9 * c0_norm(f, exec);
  return res;
}

double bump_value(double u) {
  const double w = 1.0 - u * u;
  if (w <= 0.0) return 0.0;
  return std::exp(1.0 - 1.0 / w);
}

double bump_slope_ratio(double u) {
  const double w = 1.0 - u * u;
  if (w <= 0.0) return 0.0;
  return -2.0 * bump_value(u) / (w * w);
}

double bump_derivative(double u) { return u * bump_slope_ratio(u); }

SmoothFn subspace_bump(std::vector<int> coords, std::vector<double> center,
                       double radius) {
  if (radius <= 0.0) throw std::invalid_argument("bump radius must be positive");
  if (coords.size() != center.size())
    throw std::invalid_argument("bump coords/center size mismatch");
  auto ix = std::make_shared<std::vector<int>>(std::move(coords));
  auto c = std::make_shared<std::vector<double>>(std::move(center));
  const double R = radius;
  SmoothFn f;
  f.value = [ix, c, R](Point x) {
    double u2 = 0.0;
    for (std::size_t i = 0; i < c->size(); ++i) {
      const double d = (x[(*ix)[i]] - (*c)[i]) / R;
      u2 += d * d;
    }
    return bump_value(std::sqrt(u2));
  };
  f.gradient = [ix, c, R](Point x, std::span<double> g) {
    double u2 = 0.0;
    for (std::size_t i = 0; i < c->size(); ++i) {
      const double d = (x[(*ix)[i]] - (*c)[i]) / R;
      u2 += d * d;
    }
    const double ratio = bump_slope_ratio(std::sqrt(u2)) / (R * R);
    std::fill(g.begin(), g.begin() + x.size(), 0.0);
    for (std::size_t i = 0; i < c->size(); ++i)
      g[(*ix)[i]] = ratio * (x[(*ix)[i]] - (*c)[i]);
  };
  return f;
}

SmoothFn radial_bump(std::vector<double> center, double radius) {
  std::vector<int> coords(center.size());
  for (std::size_t i = 0; i < coords.size(); ++i) coords[i] = static_cast<int>(i);
  return subspace_bump(std::move(coords), std::move(center), radius);
}

SmoothFn coordinate_bump(int coord, double center, double radius) {
  if (radius <= 0.0) throw std::invalid_argument("bump radius must be positive");
  SmoothFn f;
  f.value = [coord, center, radius](Point x) {
    return bump_value((x[coord] - center) / radius);
  };
  f.gradient = [coord, center, radius](Point x, std::span<double> g) {
    std::fill(g.begin(), g.begin() + x.size(), 0.0);
    g[coord] = bump_derivative((x[coord] - center) / radius) / radius;
  };
  return f;
}

}  // namespace bracketlab
