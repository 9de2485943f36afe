#include "bracketlab/flows.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <limits>
#include <random>
#include <utility>

namespace bracketlab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool all_finite(const double* v, int d) {
  for (int i = 0; i < d; ++i) {
    if (!std::isfinite(v[i])) return false;
  }
  return true;
}

double norm_inf(const double* v, int d) {
  double m = 0.0;
  for (int i = 0; i < d; ++i) m = std::max(m, std::abs(v[i]));
  return m;
}

void fd_gradient(const SmoothFn& fn, Point x, double h, std::span<double> out) {
  double buf[kMaxDim];
  const int d = static_cast<int>(x.size());
  std::copy(x.begin(), x.end(), buf);
  for (int i = 0; i < d; ++i) {
    const double xi = buf[i];
    buf[i] = xi + h;
    const double fp = fn.value(Point(buf, x.size()));
    buf[i] = xi - h;
    const double fm = fn.value(Point(buf, x.size()));
    buf[i] = xi;
    out[i] = (fp - fm) / (2.0 * h);
  }
}

// classical 4th-order step; false when any evaluation went non-finite
bool rk4_step(const HamiltonianField& H, const double* y, int d, double h,
              double* out) {
  double k1[kMaxDim], k2[kMaxDim], k3[kMaxDim], k4[kMaxDim], tmp[kMaxDim];
  const auto eval = [&](const double* at, double* k) {
    H.velocity(Point(at, static_cast<std::size_t>(d)),
               std::span<double>(k, static_cast<std::size_t>(d)));
    return all_finite(k, d);
  };
  if (!eval(y, k1)) return false;
  for (int i = 0; i < d; ++i) tmp[i] = y[i] + 0.5 * h * k1[i];
  if (!eval(tmp, k2)) return false;
  for (int i = 0; i < d; ++i) tmp[i] = y[i] + 0.5 * h * k2[i];
  if (!eval(tmp, k3)) return false;
  for (int i = 0; i < d; ++i) tmp[i] = y[i] + h * k3[i];
  if (!eval(tmp, k4)) return false;
  for (int i = 0; i < d; ++i) {
    out[i] = y[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  }
  return all_finite(out, d);
}

// shared adaptive driver; records into traj when non-null
std::vector<double> advance_core(const HamiltonianField& H, Point start,
                                 double t, const StepControl& ctrl,
                                 Trajectory* traj) {
  const int d = H.chart.dim;
  if (static_cast<int>(start.size()) != d) {
    throw std::invalid_argument("flow start has wrong dimension");
  }
  const EscapeRegion region =
      ctrl.escape ? *ctrl.escape : default_escape(H.chart);

  double y[kMaxDim];
  std::copy(start.begin(), start.end(), y);
  if (!region.contains(Point(y, static_cast<std::size_t>(d)))) {
    throw FlowEscape(std::vector<double>(y, y + d), 0.0);
  }

  const double T = std::abs(t);
  const double tdir = t < 0.0 ? -1.0 : 1.0;
  const double tscale = std::max(1.0, T);
  const auto record = [&](double elapsed) {
    if (!traj) return;
    traj->times.push_back(tdir * elapsed);
    traj->states.emplace_back(y, y + d);
    traj->energies.push_back(H.value(Point(y, static_cast<std::size_t>(d))));
  };
  record(0.0);
  if (T == 0.0) return std::vector<double>(y, y + d);

  double elapsed = 0.0;
  double h = std::min(std::max(ctrl.init_step, 1e-12), T);
  int steps = 0;
  double full[kMaxDim], half[kMaxDim], two[kMaxDim];
  while (T - elapsed > 1e-15 * tscale) {
    if (++steps > ctrl.max_steps) {
      throw std::runtime_error("flow exceeded the step budget");
    }
    h = std::min(h, T - elapsed);
    if (h < 1e-14 * tscale) {
      throw std::runtime_error("flow step size underflow");
    }
    const bool ok = rk4_step(H, y, d, tdir * h, full) &&
                    rk4_step(H, y, d, tdir * 0.5 * h, half) &&
                    rk4_step(H, half, d, tdir * 0.5 * h, two);
    double err = kInf;
    if (ok) {
      err = 0.0;
      for (int i = 0; i < d; ++i) {
        err = std::max(err, std::abs(two[i] - full[i]));
      }
      err /= 15.0;
    }
    const double tol_here = ctrl.tol * (h / tscale) * (1.0 + norm_inf(y, d));
    if (ok && err <= tol_here) {
      elapsed += h;
      std::copy(two, two + d, y);
      if (!region.contains(Point(y, static_cast<std::size_t>(d)))) {
        throw FlowEscape(std::vector<double>(y, y + d), tdir * elapsed);
      }
      record(elapsed);
      const double fac =
          err > 0.0 ? 0.9 * std::pow(tol_here / err, 0.25) : 4.0;
      h *= std::clamp(fac, 0.2, 4.0);
    } else {
      const double fac =
          ok && err > 0.0 ? 0.9 * std::pow(tol_here / err, 0.25) : 0.25;
      h *= std::clamp(fac, 0.1, 0.7);
    }
  }
  return std::vector<double>(y, y + d);
}

}  // namespace

void HamiltonianField::gradient_at(Point x, std::span<double> out) const {
  if (fn.has_gradient()) {
    fn.gradient(x, out);
    return;
  }
  fd_gradient(fn, x, fd_step, out);
}

void HamiltonianField::velocity(Point x, std::span<double> out) const {
  double g[kMaxDim];
  gradient_at(x, std::span<double>(g, x.size()));
  chart.apply_poisson(x, std::span<const double>(g, x.size()), out);
}

HamiltonianField make_hamiltonian(Chart chart, SmoothFn fn, double fd_step,
                                  const GradientCheckOptions& check) {
  if (!fn.value) throw std::invalid_argument("hamiltonian needs a value");
  HamiltonianField H{std::move(chart), std::move(fn), fd_step};
  if (!check.enabled || !H.fn.has_gradient()) return H;

  const int d = H.chart.dim;
  std::vector<std::pair<double, double>> box(static_cast<std::size_t>(d));
  constexpr double kTwoPi = 6.283185307179586476925286766559;
  switch (H.chart.kind) {
    case ChartKind::cartesian:
      for (auto& b : box) b = {-2.0, 2.0};
      break;
    case ChartKind::polar_r2:
      box[0] = {0.2, 2.5};
      box[1] = {0.0, kTwoPi};
      break;
    case ChartKind::cylinder_s1:
      box[0] = {-2.0, 2.0};
      box[1] = {0.0, kTwoPi};
      break;
    case ChartKind::symplectization_s1xU:
      box[0] = {-2.0, 2.0};
      box[1] = {0.0, kTwoPi};
      for (std::size_t i = 2; i < box.size(); ++i) box[i] = {-1.0, 1.0};
      break;
  }

  std::mt19937_64 rng(check.seed);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  double pt[kMaxDim], ga[kMaxDim], gn[kMaxDim];
  for (int p = 0; p < check.probes; ++p) {
    for (int i = 0; i < d; ++i) {
      pt[i] = box[i].first + u01(rng) * (box[i].second - box[i].first);
    }
    const Point x(pt, static_cast<std::size_t>(d));
    H.fn.gradient(x, std::span<double>(ga, static_cast<std::size_t>(d)));
    fd_gradient(H.fn, x, H.fd_step,
                std::span<double>(gn, static_cast<std::size_t>(d)));
    for (int i = 0; i < d; ++i) {
      if (std::abs(ga[i] - gn[i]) >
          check.tolerance * (1.0 + std::abs(ga[i]))) {
        throw std::invalid_argument(
            "analytic gradient disagrees with finite differences");
      }
    }
  }
  return H;
}

std::vector<double> symplectic_gradient(const HamiltonianField& H, Point x) {
  std::vector<double> out(x.size());
  H.velocity(x, out);
  return out;
}

bool EscapeRegion::contains(Point x) const {
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] >= lo[i] && x[i] <= hi[i])) return false;
  }
  return true;
}

EscapeRegion default_escape(const Chart& chart) {
  EscapeRegion r;
  const auto d = static_cast<std::size_t>(chart.dim);
  r.lo.assign(d, -kInf);
  r.hi.assign(d, kInf);
  switch (chart.kind) {
    case ChartKind::cartesian:
      for (std::size_t i = 0; i < d; ++i) {
        r.lo[i] = -50.0;
        r.hi[i] = 50.0;
      }
      break;
    case ChartKind::polar_r2:
      r.lo[0] = 0.01;
      r.hi[0] = 50.0;
      break;
    case ChartKind::cylinder_s1:
      r.lo[0] = -12.0;
      r.hi[0] = 12.0;
      break;
    case ChartKind::symplectization_s1xU:
      r.lo[0] = -12.0;
      r.hi[0] = 12.0;
      for (std::size_t i = 2; i < d; ++i) {
        r.lo[i] = -50.0;
        r.hi[i] = 50.0;
      }
      break;
  }
  return r;
}

FlowEscape::FlowEscape(std::vector<double> state_, double time_)
    : std::runtime_error("trajectory left the integration region"),
      state(std::move(state_)),
      time(time_) {}

Trajectory advance_flow(const HamiltonianField& H, Point start, double t,
                        const StepControl& ctrl) {
  Trajectory traj;
  advance_core(H, start, t, ctrl, &traj);
  return traj;
}

std::vector<double> flow_endpoint(const HamiltonianField& H, Point start,
                                  double t, const StepControl& ctrl) {
  return advance_core(H, start, t, ctrl, nullptr);
}

std::vector<double> fixed_step_endpoint(const HamiltonianField& H, Point start,
                                        double t, int n_steps) {
  const int d = H.chart.dim;
  if (static_cast<int>(start.size()) != d) {
    throw std::invalid_argument("flow start has wrong dimension");
  }
  if (n_steps < 1) throw std::invalid_argument("n_steps must be positive");
  double y[kMaxDim], next[kMaxDim];
  std::copy(start.begin(), start.end(), y);
  const double h = t / n_steps;
  for (int s = 0; s < n_steps; ++s) {
    if (!rk4_step(H, y, d, h, next)) {
      throw std::runtime_error("fixed-step flow went non-finite");
    }
    std::copy(next, next + d, y);
  }
  return std::vector<double>(y, y + d);
}

GridField pullback(const SmoothFn& F, const HamiltonianField& H, double t,
                   const GridSpec& grid, const StepControl& ctrl, Exec exec) {
  grid.validate();
  validate_grid(H.chart, grid);
  const std::size_t n = grid.size();
  const auto d = static_cast<std::size_t>(grid.dim());
  std::vector<double> samples(n, 0.0);

  const auto one = [&](std::size_t flat, double* pt) {
    grid.point_at(flat, std::span<double>(pt, d));
    const auto y = flow_endpoint(H, Point(pt, d), t, ctrl);
    const double v = F.value(y);
    if (!std::isfinite(v)) {
      throw std::domain_error("pullback sample is not finite");
    }
    return v;
  };

  if (exec == Exec::serial) {
    double pt[kMaxDim];
    for (std::size_t i = 0; i < n; ++i) samples[i] = one(i, pt);
  } else {
    std::atomic<bool> failed{false};
    std::exception_ptr eptr = nullptr;
#ifdef _OPENMP
#pragma omp parallel
#endif
    {
      double pt[kMaxDim];
#ifdef _OPENMP
#pragma omp for schedule(dynamic, 64)
#endif
      for (long long i = 0; i < static_cast<long long>(n); ++i) {
        if (failed.load(std::memory_order_relaxed)) continue;
        try {
          samples[static_cast<std::size_t>(i)] =
              one(static_cast<std::size_t>(i), pt);
        } catch (...) {
#ifdef _OPENMP
#pragma omp critical(bracketlab_pullback_err)
#endif
          {
            if (!eptr) eptr = std::current_exception();
          }
          failed.store(true, std::memory_order_relaxed);
        }
      }
    }
    if (eptr) std::rethrow_exception(eptr);
  }
  return GridField{H.chart, grid, std::move(samples), std::nullopt};
}

std::vector<double> conjugated_flow(const HamiltonianField& f,
                                    const HamiltonianField& g, double s,
                                    double t, Point start,
                                    const StepControl& ctrl) {
  auto y = flow_endpoint(g, start, s, ctrl);
  y = flow_endpoint(f, y, t, ctrl);
  return flow_endpoint(g, y, -s, ctrl);
}

HamiltonianField pullback_hamiltonian(const HamiltonianField& f,
                                      const HamiltonianField& g, double s,
                                      int n_steps) {
  SmoothFn fn;
  fn.value = [f, g, s, n_steps](Point x) {
    const auto y = fixed_step_endpoint(g, x, s, n_steps);
    return f.value(y);
  };
  return HamiltonianField{f.chart, std::move(fn), 1e-5};
}

std::vector<double> commutator_flow(const HamiltonianField& A,
                                    const HamiltonianField& B, double s,
                                    double t, Point start,
                                    const HamiltonianField* C,
                                    const StepControl& ctrl) {
  auto y = flow_endpoint(B, start, -s, ctrl);
  y = flow_endpoint(A, y, -t, ctrl);
  y = flow_endpoint(B, y, s, ctrl);
  y = flow_endpoint(A, y, t, ctrl);
  if (C != nullptr) y = flow_endpoint(*C, y, -t * s, ctrl);
  return y;
}

std::vector<double> advance_separable(
    const std::function<void(Point, std::span<double>)>& dT_dp,
    const std::function<void(Point, std::span<double>)>& dV_dq, Point start,
    double t, int n_steps) {
  const auto d = start.size();
  if (d % 2 != 0 || d == 0 || d > kMaxDim) {
    throw std::invalid_argument("separable flow needs an interleaved (q,p) "
                                "point of even dimension");
  }
  if (n_steps < 1) throw std::invalid_argument("n_steps must be positive");
  double y[kMaxDim], g[kMaxDim];
  std::copy(start.begin(), start.end(), y);
  const double h = t / n_steps;
  const Point yv(y, d);
  const std::span<double> gv(g, d);
  // kick: p -= dt * dV/dq
  const auto kick = [&](double dt) {
    dV_dq(yv, gv);
    for (std::size_t i = 0; i < d; i += 2) y[i + 1] -= dt * g[i];
  };
  // drift: q += dt * dT/dp
  const auto drift = [&](double dt) {
    dT_dp(yv, gv);
    for (std::size_t i = 0; i < d; i += 2) y[i] += dt * g[i + 1];
  };
  for (int s = 0; s < n_steps; ++s) {
    kick(0.5 * h);
    drift(h);
    kick(0.5 * h);
  }
  if (!all_finite(y, static_cast<int>(d))) {
    throw std::runtime_error("separable flow went non-finite");
  }
  return std::vector<double>(y, y + d);
}

HamiltonianField AffineHamiltonian::total() const {
  if (chart.kind != ChartKind::cartesian) {
    throw std::invalid_argument("affine hamiltonians live on cartesian charts");
  }
  if (static_cast<int>(linear.size()) != chart.dim) {
    throw std::invalid_argument("linear covector has wrong dimension");
  }
  SmoothFn fn;
  const std::vector<double> l = linear;
  const double c = constant;
  if (compact) {
    const SmoothFn inner = compact->fn;
    fn.value = [inner, l, c](Point x) {
      double v = inner.value(x) + c;
      for (std::size_t i = 0; i < l.size(); ++i) v += l[i] * x[i];
      return v;
    };
    if (inner.has_gradient()) {
      fn.gradient = [inner, l](Point x, std::span<double> out) {
        inner.gradient(x, out);
        for (std::size_t i = 0; i < l.size(); ++i) out[i] += l[i];
      };
    }
  } else {
    fn.value = [l, c](Point x) {
      double v = c;
      for (std::size_t i = 0; i < l.size(); ++i) v += l[i] * x[i];
      return v;
    };
    fn.gradient = [l](Point, std::span<double> out) {
      std::copy(l.begin(), l.end(), out.begin());
    };
  }
  const double step = compact ? compact->fd_step : 1e-5;
  return HamiltonianField{chart, std::move(fn), step};
}

bool AffineHamiltonian::pure_affine() const { return !compact.has_value(); }

std::vector<double> AffineHamiltonian::affine_displacement(double t) const {
  const auto d = static_cast<std::size_t>(chart.dim);
  if (linear.size() != d) {
    throw std::invalid_argument("linear covector has wrong dimension");
  }
  std::vector<double> zero(d, 0.0), out(d, 0.0);
  chart.apply_poisson(zero, linear, out);
  for (auto& v : out) v *= t;
  return out;
}

std::vector<double> affine_flow(const AffineHamiltonian& H, Point start,
                                double t, const StepControl& ctrl,
                                int split_steps_per_unit_time) {
  const auto d = static_cast<std::size_t>(H.chart.dim);
  if (start.size() != d) {
    throw std::invalid_argument("flow start has wrong dimension");
  }
  const bool has_linear =
      std::any_of(H.linear.begin(), H.linear.end(),
                  [](double v) { return v != 0.0; });
  if (H.pure_affine()) {
    const auto disp = H.affine_displacement(t);
    std::vector<double> y(start.begin(), start.end());
    for (std::size_t i = 0; i < d; ++i) y[i] += disp[i];
    return y;
  }
  if (!has_linear) return flow_endpoint(*H.compact, start, t, ctrl);

  const EscapeRegion region =
      ctrl.escape ? *ctrl.escape : default_escape(H.chart);
  const int n = std::max(
      1, static_cast<int>(
             std::ceil(std::abs(t) * std::max(1, split_steps_per_unit_time))));
  const double h = t / n;
  const auto half = H.affine_displacement(0.5 * h);
  std::vector<double> y(start.begin(), start.end());
  for (int s = 0; s < n; ++s) {
    for (std::size_t i = 0; i < d; ++i) y[i] += half[i];
    y = flow_endpoint(*H.compact, y, h, ctrl);
    for (std::size_t i = 0; i < d; ++i) y[i] += half[i];
    if (!region.contains(y)) {
      throw FlowEscape(y, (s + 1) * h);
    }
  }
  return y;
}

namespace {

double line_objective(const std::vector<double>& r, const std::vector<double>& y,
                      double a, double b) {
  double s = 0.0, c = 0.0;
  for (std::size_t i = 0; i < r.size(); ++i) {
    const double e = a * r[i] + b - y[i];
    const double term = e * e - c;
    const double t = s + term;
    c = (t - s) - term;
    s = t;
  }
  return s;
}

double worst_violation(const std::vector<double>& r,
                       const std::vector<double>& y, double a, double b) {
  double v = -kInf;
  for (std::size_t i = 0; i < r.size(); ++i) {
    v = std::max(v, y[i] - (a * r[i] + b));
  }
  return v;
}

void ls_line(const std::vector<double>& r, const std::vector<double>& y,
             double& a, double& b) {
  const auto n = static_cast<double>(r.size());
  double sr = 0.0, sy = 0.0, srr = 0.0, sry = 0.0;
  for (std::size_t i = 0; i < r.size(); ++i) {
    sr += r[i];
    sy += y[i];
    srr += r[i] * r[i];
    sry += r[i] * y[i];
  }
  const double det = n * srr - sr * sr;
  a = det != 0.0 ? (n * sry - sr * sy) / det : 0.0;
  b = (sy - a * sr) / n;
}

// minimal-squared-excess line lying on or above every sample. The optimum is
// the unconstrained fit when feasible, else touches the upper hull at a
// vertex (clamped tangent) or along an edge; all candidates are enumerated.
void dominating_line(const std::vector<double>& r, const std::vector<double>& y,
                     double& a_out, double& b_out) {
  const std::size_t n = r.size();
  double scale = 1.0;
  for (double v : y) scale = std::max(scale, std::abs(v));
  const double feas_tol = 1e-9 * scale;

  std::vector<std::pair<double, double>> cand;
  double a0, b0;
  ls_line(r, y, a0, b0);
  cand.emplace_back(a0, b0);

  // upper hull, points already sorted by increasing r
  std::vector<std::size_t> hull;
  for (std::size_t i = 0; i < n; ++i) {
    while (hull.size() >= 2) {
      const std::size_t p = hull[hull.size() - 2], q = hull.back();
      const double cross = (r[q] - r[p]) * (y[i] - y[p]) -
                           (y[q] - y[p]) * (r[i] - r[p]);
      if (cross >= 0.0) {
        hull.pop_back();
      } else {
        break;
      }
    }
    hull.push_back(i);
  }

  for (std::size_t k = 0; k + 1 < hull.size(); ++k) {
    const std::size_t p = hull[k], q = hull[k + 1];
    const double a = (y[q] - y[p]) / (r[q] - r[p]);
    cand.emplace_back(a, y[p] - a * r[p]);
  }
  for (std::size_t k = 0; k < hull.size(); ++k) {
    const std::size_t v = hull[k];
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      num += (r[i] - r[v]) * (y[i] - y[v]);
      den += (r[i] - r[v]) * (r[i] - r[v]);
    }
    if (den == 0.0) continue;
    double a = num / den;
    const double lo = k + 1 < hull.size()
                          ? (y[hull[k + 1]] - y[v]) / (r[hull[k + 1]] - r[v])
                          : -kInf;
    const double hi =
        k > 0 ? (y[v] - y[hull[k - 1]]) / (r[v] - r[hull[k - 1]]) : kInf;
    a = std::clamp(a, lo, hi);
    cand.emplace_back(a, y[v] - a * r[v]);
  }

  double best = kInf;
  a_out = 0.0;
  b_out = *std::max_element(y.begin(), y.end());
  for (const auto& [a, b] : cand) {
    if (!std::isfinite(a) || !std::isfinite(b)) continue;
    if (worst_violation(r, y, a, b) > feas_tol) continue;
    const double obj = line_objective(r, y, a, b);
    if (obj < best) {
      best = obj;
      a_out = a;
      b_out = b;
    }
  }
  // lift so the line dominates exactly
  const double v = worst_violation(r, y, a_out, b_out);
  if (v > 0.0) b_out += v;
}

}  // namespace

GrowthCertificate linear_growth_bound(const VectorFieldFn& field,
                                      const Chart& chart,
                                      const GrowthRegion& region) {
  if (region.n_r < 4 || region.n_angle < 4 || region.r_lo <= 0.0 ||
      region.r_hi <= region.r_lo) {
    throw std::invalid_argument("invalid growth region");
  }
  const bool polar = chart.kind == ChartKind::polar_r2;
  if (!polar && !(chart.kind == ChartKind::cartesian && chart.dim == 2)) {
    throw std::invalid_argument(
        "growth bound supports polar and 2d cartesian charts");
  }

  constexpr double kTwoPi = 6.283185307179586476925286766559;
  std::vector<double> radii(static_cast<std::size_t>(region.n_r));
  std::vector<double> peak(static_cast<std::size_t>(region.n_r), 0.0);
  double pt[2], vel[2];
  for (int k = 0; k < region.n_r; ++k) {
    const double rad =
        region.r_lo + k * (region.r_hi - region.r_lo) / (region.n_r - 1);
    radii[static_cast<std::size_t>(k)] = rad;
    double m = 0.0;
    for (int j = 0; j < region.n_angle; ++j) {
      const double th = kTwoPi * j / region.n_angle;
      if (polar) {
        pt[0] = rad;
        pt[1] = th;
      } else {
        pt[0] = rad * std::cos(th);
        pt[1] = rad * std::sin(th);
      }
      field(Point(pt, 2), std::span<double>(vel, 2));
      const double norm = std::hypot(vel[0], vel[1]);
      if (!std::isfinite(norm)) {
        throw std::domain_error("vector field is not finite on the region");
      }
      m = std::max(m, norm);
    }
    peak[static_cast<std::size_t>(k)] = m;
  }

  GrowthCertificate cert;
  dominating_line(radii, peak, cert.a, cert.b);
  cert.max_residual = worst_violation(radii, peak, cert.a, cert.b);

  // restrict to the inner half of the annulus and compare slopes
  const double mid = 0.5 * (region.r_lo + region.r_hi);
  std::vector<double> rh, yh;
  for (std::size_t i = 0; i < radii.size(); ++i) {
    if (radii[i] <= mid) {
      rh.push_back(radii[i]);
      yh.push_back(peak[i]);
    }
  }
  double ah = cert.a, bh = cert.b;
  if (rh.size() >= 2) dominating_line(rh, yh, ah, bh);
  const double denom = std::max(std::abs(ah), 1e-9);
  cert.slope_ratio = cert.a / denom;
  cert.superlinear = cert.slope_ratio >= 1.5;
  cert.certified = !cert.superlinear && cert.max_residual <= 0.0;
  return cert;
}

GrowthCertificate linear_growth_bound(const HamiltonianField& H,
                                      const GrowthRegion& region) {
  const VectorFieldFn field = [&H](Point x, std::span<double> out) {
    H.velocity(x, out);
  };
  return linear_growth_bound(field, H.chart, region);
}

}  // namespace bracketlab
