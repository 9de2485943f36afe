#include "bracketlab/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <stdexcept>

#include "bracketlab/kernels.hpp"

namespace bracketlab {

namespace {

void require_same_grid(const GridField& a, const GridField& b) {
  if (a.chart.kind != b.chart.kind || a.chart.dim != b.chart.dim ||
      a.grid.axes.size() != b.grid.axes.size()) {
    throw std::invalid_argument("fields live on different grids");
  }
  for (std::size_t k = 0; k < a.grid.axes.size(); ++k) {
    const Axis &x = a.grid.axes[k], &y = b.grid.axes[k];
    if (x.lo != y.lo || x.hi != y.hi || x.points != y.points ||
        x.periodic != y.periodic) {
      throw std::invalid_argument("fields live on different grids");
    }
  }
}

// largest |sample| on the faces of the non-periodic axes
double face_max_abs(const GridSpec& grid, std::span<const double> v) {
  const auto strides = grid.strides();
  double worst = 0.0;
  for (std::size_t flat = 0; flat < v.size(); ++flat) {
    for (std::size_t a = 0; a < grid.axes.size(); ++a) {
      const Axis& ax = grid.axes[a];
      if (ax.periodic) continue;
      const int idx = static_cast<int>(flat / strides[a]) % ax.points;
      if (idx == 0 || idx == ax.points - 1) {
        worst = std::max(worst, std::abs(v[flat]));
        break;
      }
    }
  }
  return worst;
}

GridField product_field(const GridField& a, std::span<const double> w) {
  GridField out{a.chart, a.grid, a.samples, std::nullopt};
  for (std::size_t m = 0; m < out.samples.size(); ++m) out.samples[m] *= w[m];
  return out;
}

SmoothFn cosine_in_q(int n) {
  SmoothFn f;
  f.value = [n](Point x) { return std::cos(n * x[0]); };
  f.gradient = [n](Point x, std::span<double> g) {
    for (auto& c : g) c = 0.0;
    g[0] = -n * std::sin(n * x[0]);
  };
  return f;
}

// chi(p) cos(nq) / sqrt(n) with the default unit-radius profile
SmoothFn oscillatory_pair_member(int n, bool sine) {
  const double rn = std::sqrt(static_cast<double>(n));
  SmoothFn f;
  f.value = [n, rn, sine](Point x) {
    const double a = n * x[0];
    return bump_value(x[1]) * (sine ? std::sin(a) : std::cos(a)) / rn;
  };
  f.gradient = [n, rn, sine](Point x, std::span<double> g) {
    const double a = n * x[0];
    const double c = std::cos(a), s = std::sin(a);
    g[0] = rn * bump_value(x[1]) * (sine ? c : -s);
    g[1] = bump_derivative(x[1]) * (sine ? s : c) / rn;
  };
  return f;
}

}  // namespace

ConvergenceTable run_convergence(const GalleryEntry& entry,
                                 const std::vector<int>& n_set) {
  const GalleryEntry e = with_n_set(entry, n_set);
  const PseudoRepresentation& rep = e.rep;
  const int d = rep.algebra.dim();

  ConvergenceTable table;
  table.entry = e.name;
  table.basis_labels = rep.algebra.labels();

  std::vector<std::vector<double>> basis(static_cast<std::size_t>(d));
  for (int i = 0; i < d; ++i) {
    basis[static_cast<std::size_t>(i)].assign(static_cast<std::size_t>(d), 0.0);
    basis[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)] = 1.0;
  }

  std::vector<GridField> limit_fields;
  if (rep.limit_images) {
    for (int i = 0; i < d; ++i) {
      limit_fields.push_back(
          sample_field(rep.chart, rep.grid,
                       rho_limit(rep, basis[static_cast<std::size_t>(i)]).fn));
    }
  }

  for (const int n : rep.n_set) {
    ConvergenceRow row;
    row.n = n;
    for (int i = 0; i < d; ++i) {
      const auto& x = basis[static_cast<std::size_t>(i)];
      const auto fn = rho(rep, n, x);
      const auto on_grid = sample_field(rep.chart, rep.grid, fn.fn);
      double gap = 0.0;
      if (rep.limit_images) {
        const auto& lim = limit_fields[static_cast<std::size_t>(i)];
        std::vector<double> diff(on_grid.samples.size());
        for (std::size_t m = 0; m < diff.size(); ++m) {
          diff[m] = on_grid.samples[m] - lim.samples[m];
        }
        gap = kernels::reduce_max_abs(diff, Exec::parallel);
      }
      row.image_gaps.push_back(gap);
      row.decay_measured.push_back(
          c0_norm(sample_field(rep.chart, e.decay_grid, fn.fn)));
    }
    row.defect_norm = defect_norm(rep, n).defect_norm_estimate;
    const auto F = sample_field(rep.chart, rep.grid,
                                rep.images_at(n)[0].fn);
    const auto G = sample_field(rep.chart, rep.grid,
                                rep.images_at(n)[1].fn);
    row.bracket_c0 = c0_norm(poisson_bracket(F, G));
    table.rows.push_back(std::move(row));
  }

  if (rep.limit_images && d >= 2) {
    table.limit = limit_representation_check(rep, basis[0], basis[1]);
  }
  return table;
}

double distribution_pairing(const GridField& F, const GridField& G,
                            const SmoothFn& phi) {
  require_same_grid(F, G);
  if (F.chart.kind != ChartKind::cartesian || F.chart.dim != 2) {
    throw std::invalid_argument(
        "distributional pairing is defined on the two-dimensional cartesian "
        "chart");
  }
  const auto phi_s = sample_field(F.chart, F.grid, phi);
  const double leak = face_max_abs(F.grid, phi_s.samples);
  if (leak > 1e-12 * std::max(1.0, c0_norm(phi_s))) {
    throw std::domain_error("test function support leaks off the grid");
  }

  const auto dFdq = partial_derivative(F, 0, 4);
  const auto dFdp = partial_derivative(F, 1, 4);
  const auto A = product_field(dFdp, phi_s.samples);
  const auto B = product_field(dFdq, phi_s.samples);
  const auto dAdq = partial_derivative(A, 0, 4);
  const auto dBdp = partial_derivative(B, 1, 4);

  GridField integrand{F.chart, F.grid, std::vector<double>(F.samples.size()),
                      std::nullopt};
  for (std::size_t m = 0; m < integrand.samples.size(); ++m) {
    integrand.samples[m] = G.samples[m] * (dAdq.samples[m] - dBdp.samples[m]);
  }
  return integrate(integrand).value;
}

double direct_pairing(const GridField& F, const GridField& G,
                      const SmoothFn& phi) {
  require_same_grid(F, G);
  const auto phi_s = sample_field(F.chart, F.grid, phi);
  BracketOptions opt;
  opt.fd_order = 4;
  const auto br = poisson_bracket(F, G, opt);
  const auto integrand = product_field(br, phi_s.samples);
  return integrate(integrand).value;
}

PairingFamily conforming_family() {
  PairingFamily fam;
  fam.name = "conforming_c2";
  const SmoothFn F_base = radial_bump({-0.25, 0.15}, 0.85);
  const SmoothFn G_base =
      smooth_combination({{0.9, radial_bump({0.3, -0.1}, 0.8)}});
  // offset from G_base's center so the correction's bracket against G_base
  // pairs to a value well away from zero and the 1/n term stays visible
  const SmoothFn bump_f = radial_bump({-0.3, 0.4}, 0.6);
  const SmoothFn bump_g = radial_bump({-0.1, -0.2}, 0.75);
  fam.F = [F_base, bump_f](int n) {
    return smooth_combination({{1.0, F_base}, {1.2 / n, bump_f}});
  };
  fam.G = [G_base, bump_g](int n) {
    const double amp = 0.25 / std::sqrt(static_cast<double>(n));
    return smooth_combination(
        {{1.0, G_base}, {amp, smooth_product(cosine_in_q(n), bump_g)}});
  };
  fam.F_limit = F_base;
  fam.G_limit = G_base;
  fam.conforming = true;
  return fam;
}

PairingFamily remark2_family() {
  PairingFamily fam;
  fam.name = "remark2_oscillatory";
  fam.F = [](int n) { return oscillatory_pair_member(n, false); };
  fam.G = [](int n) { return oscillatory_pair_member(n, true); };
  fam.F_limit = smooth_constant(0.0);
  fam.G_limit = smooth_constant(0.0);
  fam.conforming = false;
  return fam;
}

PairingFamily prop7_family() {
  PairingFamily fam;
  fam.name = "prop7_double";
  const SmoothFn F_base = radial_bump({-0.25, 0.15}, 0.85);
  const SmoothFn G_base =
      smooth_combination({{0.9, radial_bump({0.3, -0.1}, 0.8)}});
  const SmoothFn bump_f =
      smooth_combination({{1.1, radial_bump({0.15, 0.25}, 0.7)}});
  const SmoothFn bump_g =
      smooth_combination({{0.9, radial_bump({-0.05, -0.15}, 0.75)}});
  fam.F = [F_base, bump_f](int p) {
    return smooth_combination({{1.0, F_base}, {1.0 / p, bump_f}});
  };
  fam.G = [G_base, bump_g](int q) {
    return smooth_combination({{1.0, G_base}, {1.0 / q, bump_g}});
  };
  fam.F_limit = F_base;
  fam.G_limit = G_base;
  fam.conforming = true;
  return fam;
}

SmoothFn default_pairing_test_function() { return radial_bump({0.0, 0.4}, 0.5); }

GridSpec default_pairing_grid() {
  return GridSpec{{{-1.6, 1.6, 512, false}, {-1.6, 1.6, 512, false}}};
}

Prop6Table prop6_experiment(const PairingFamily& family, const SmoothFn& phi,
                            const GridSpec& grid,
                            const std::vector<int>& n_set) {
  if (n_set.empty()) throw std::invalid_argument("empty index set");
  const Chart chart = make_chart(ChartKind::cartesian);
  Prop6Table table;
  table.family = family.name;

  const auto F_lim = sample_field(chart, grid, family.F_limit);
  const auto G_lim = sample_field(chart, grid, family.G_limit);
  table.pairing_limit = distribution_pairing(F_lim, G_lim, phi);

  for (const int n : n_set) {
    Prop6Row row;
    row.n = n;
    const auto Fn = sample_field(chart, grid, family.F(n));
    const auto Gn = sample_field(chart, grid, family.G(n));
    row.pairing_n = distribution_pairing(Fn, Gn, phi);
    row.pairing_limit = table.pairing_limit;
    row.error = std::abs(row.pairing_n - table.pairing_limit);
    table.rows.push_back(row);
  }

  const double first = table.rows.front().error;
  const double last = table.rows.back().error;
  table.error_decreasing = last <= 0.5 * first + 1e-12;
  if (family.conforming) {
    table.verdict = table.error_decreasing
                        ? "hypotheses hold, pairing errors decrease"
                        : "hypotheses hold, convergence not observed";
  } else {
    table.verdict = table.error_decreasing
                        ? "hypothesis violated, errors decreased anyway"
                        : "hypothesis violated, no convergence";
  }
  return table;
}

Prop7Table prop7_experiment(const PairingFamily& family, const SmoothFn& H,
                            const SmoothFn& phi, const GridSpec& grid,
                            const std::vector<int>& p_set,
                            const std::vector<int>& q_set) {
  if (p_set.empty() || q_set.empty()) {
    throw std::invalid_argument("empty index set");
  }
  const Chart chart = make_chart(ChartKind::cartesian);
  Prop7Table table;

  const auto H_s = sample_field(chart, grid, H);
  const auto phi_s = sample_field(chart, grid, phi);
  const double target = integrate(product_field(H_s, phi_s.samples)).value;

  std::vector<GridField> G_fields;
  for (const int q : q_set) {
    G_fields.push_back(sample_field(chart, grid, family.G(q)));
  }
  for (const int p : p_set) {
    const auto Fp = sample_field(chart, grid, family.F(p));
    for (std::size_t j = 0; j < q_set.size(); ++j) {
      Prop7Row row;
      row.p = p;
      row.q = q_set[j];
      row.error = std::abs(distribution_pairing(Fp, G_fields[j], phi) - target);
      table.rows.push_back(row);
    }
  }

  double sum_ez = 0.0, sum_zz = 0.0;
  for (const auto& row : table.rows) {
    const double z = 1.0 / row.p + 1.0 / row.q;
    sum_ez += row.error * z;
    sum_zz += z * z;
    table.max_error = std::max(table.max_error, row.error);
  }
  table.fit_c = sum_zz > 0.0 ? sum_ez / sum_zz : 0.0;
  double excess = -std::numeric_limits<double>::infinity();
  for (const auto& row : table.rows) {
    excess = std::max(excess,
                      row.error - table.fit_c * (1.0 / row.p + 1.0 / row.q));
  }
  table.fit_excess = excess;

  // errors must die out toward the large-index corner unless H mismatches
  const double corner = table.rows.back().error;
  table.mismatch_detected = corner > 1e-3 && corner > 0.25 * table.max_error;
  return table;
}

SymplecticReport symplectic_check(const MapFn& map, int pairs,
                                  const GridSpec& grid, int fd_order) {
  if (pairs < 1 || 2 * pairs > kMaxDim) {
    throw std::invalid_argument("unsupported pair count");
  }
  const Chart chart = make_chart(ChartKind::cartesian, pairs);
  validate_grid(chart, grid);
  const int dim = chart.dim;
  const std::size_t size = grid.size();

  SymplecticReport rpt;
  rpt.pairs = pairs;

  // coordinate functions of the map, sampled
  std::vector<GridField> coords(
      static_cast<std::size_t>(dim),
      GridField{chart, grid, std::vector<double>(size), std::nullopt});
  {
    double pt[kMaxDim], out[kMaxDim];
    for (std::size_t flat = 0; flat < size; ++flat) {
      grid.point_at(flat, std::span(pt, static_cast<std::size_t>(dim)));
      map(Point(pt, static_cast<std::size_t>(dim)),
          std::span(out, static_cast<std::size_t>(dim)));
      for (int c = 0; c < dim; ++c) {
        if (!std::isfinite(out[c])) {
          throw std::domain_error("map produced a non-finite coordinate");
        }
        coords[static_cast<std::size_t>(c)].samples[flat] = out[c];
      }
    }
  }

  // all first partials, then pointwise bracket tables
  std::vector<std::vector<GridField>> d(static_cast<std::size_t>(dim));
  for (int c = 0; c < dim; ++c) {
    for (int a = 0; a < dim; ++a) {
      d[static_cast<std::size_t>(c)].push_back(
          partial_derivative(coords[static_cast<std::size_t>(c)], a, fd_order));
    }
  }

  const auto bracket_c0_of = [&](int ca, int cb, double shift) {
    const auto& da = d[static_cast<std::size_t>(ca)];
    const auto& db = d[static_cast<std::size_t>(cb)];
    double worst = 0.0;
    for (std::size_t flat = 0; flat < size; ++flat) {
      double v = 0.0;
      for (int k = 0; k < pairs; ++k) {
        const std::size_t q = static_cast<std::size_t>(2 * k);
        const std::size_t p = q + 1;
        v += da[q].samples[flat] * db[p].samples[flat] -
             da[p].samples[flat] * db[q].samples[flat];
      }
      worst = std::max(worst, std::abs(v - shift));
    }
    return worst;
  };

  rpt.ff.assign(static_cast<std::size_t>(pairs * pairs), 0.0);
  rpt.gg.assign(static_cast<std::size_t>(pairs * pairs), 0.0);
  rpt.fg_minus_delta.assign(static_cast<std::size_t>(pairs * pairs), 0.0);
  for (int i = 0; i < pairs; ++i) {
    for (int j = 0; j < pairs; ++j) {
      const std::size_t at = static_cast<std::size_t>(i * pairs + j);
      rpt.ff[at] = bracket_c0_of(2 * i, 2 * j, 0.0);
      rpt.gg[at] = bracket_c0_of(2 * i + 1, 2 * j + 1, 0.0);
      rpt.fg_minus_delta[at] =
          bracket_c0_of(2 * i, 2 * j + 1, i == j ? 1.0 : 0.0);
      rpt.max_residual = std::max(
          {rpt.max_residual, rpt.ff[at], rpt.gg[at], rpt.fg_minus_delta[at]});
    }
  }

  // Jacobian degeneracy scan (partial-pivot elimination on a stack matrix)
  double min_det = std::numeric_limits<double>::infinity();
  for (std::size_t flat = 0; flat < size; ++flat) {
    double m[kMaxDim][kMaxDim];
    for (int c = 0; c < dim; ++c) {
      for (int a = 0; a < dim; ++a) {
        m[c][a] = d[static_cast<std::size_t>(c)][static_cast<std::size_t>(a)]
                      .samples[flat];
      }
    }
    double det = 1.0;
    for (int col = 0; col < dim && det != 0.0; ++col) {
      int piv = col;
      for (int r = col + 1; r < dim; ++r) {
        if (std::abs(m[r][col]) > std::abs(m[piv][col])) piv = r;
      }
      if (m[piv][col] == 0.0) {
        det = 0.0;
        break;
      }
      if (piv != col) {
        for (int a = 0; a < dim; ++a) std::swap(m[piv][a], m[col][a]);
        det = -det;
      }
      det *= m[col][col];
      for (int r = col + 1; r < dim; ++r) {
        const double f = m[r][col] / m[col][col];
        for (int a = col; a < dim; ++a) m[r][a] -= f * m[col][a];
      }
    }
    min_det = std::min(min_det, std::abs(det));
  }
  rpt.degenerate_jacobian = min_det < 1e-8;
  return rpt;
}

MapFn builtin_map(const std::string& name, int pairs) {
  if (name == "identity") {
    return [](Point x, std::span<double> out) {
      for (std::size_t i = 0; i < x.size(); ++i) out[i] = x[i];
    };
  }
  if (name == "shear") {
    return [](Point x, std::span<double> out) {
      for (std::size_t k = 0; 2 * k + 1 < x.size(); ++k) {
        out[2 * k] = x[2 * k] + x[2 * k + 1];
        out[2 * k + 1] = x[2 * k + 1];
      }
    };
  }
  if (name == "double_scale") {
    return [](Point x, std::span<double> out) {
      for (std::size_t i = 0; i < x.size(); ++i) out[i] = 2.0 * x[i];
    };
  }
  (void)pairs;
  throw std::invalid_argument("unknown map: " + name);
}

namespace {

int steps_for(double span, int per_unit) {
  return std::max(1, static_cast<int>(std::ceil(std::abs(span) * per_unit)));
}

// sigma-quadrature generator of the commutator family at outer time tau:
// integral over [0,s] of {H,K} evaluated along the K-flow after the H-flow
double quadrature_hamiltonian(const HamiltonianField& Ht,
                              const HamiltonianField& Kt, double s, double tau,
                              Point z, const AffineCommutatorOptions& opt) {
  const std::size_t dim = z.size();
  std::vector<double> p =
      fixed_step_endpoint(Ht, z, tau, steps_for(tau, opt.inner_steps));

  const int nodes = 2 * opt.sigma_panels;
  const double ds = s / nodes;
  double gh[kMaxDim], gk[kMaxDim];
  const auto integrand = [&](Point at) {
    Ht.gradient_at(at, std::span(gh, dim));
    Kt.gradient_at(at, std::span(gk, dim));
    return Ht.chart.bracket_from_gradients(
        at, std::span<const double>(gh, dim), std::span<const double>(gk, dim));
  };

  double acc = integrand(Point(p.data(), dim));
  for (int k = 1; k <= nodes; ++k) {
    p = fixed_step_endpoint(Kt, Point(p.data(), dim), ds, 1);
    const double w = k == nodes ? 1.0 : (k % 2 == 1 ? 4.0 : 2.0);
    acc += w * integrand(Point(p.data(), dim));
  }
  return acc * ds / 3.0;
}

std::vector<double> generator_driven_endpoint(
    const HamiltonianField& Ht, const HamiltonianField& Kt, double s, double t,
    Point start, const AffineCommutatorOptions& opt) {
  const std::size_t dim = start.size();
  std::vector<double> z(start.begin(), start.end());

  const auto velocity = [&](double tau, std::span<const double> at,
                            std::span<double> out) {
    double grad[kMaxDim], probe[kMaxDim];
    for (std::size_t i = 0; i < dim; ++i) probe[i] = at[i];
    for (std::size_t i = 0; i < dim; ++i) {
      const double h = opt.fd_step;
      probe[i] = at[i] + h;
      const double wp =
          quadrature_hamiltonian(Ht, Kt, s, tau, Point(probe, dim), opt);
      probe[i] = at[i] - h;
      const double wm =
          quadrature_hamiltonian(Ht, Kt, s, tau, Point(probe, dim), opt);
      probe[i] = at[i];
      grad[i] = (wp - wm) / (2.0 * h);
    }
    Ht.chart.apply_poisson(Point(at.data(), dim),
                           std::span<const double>(grad, dim), out);
  };

  const double h = t / opt.tau_steps;
  std::vector<double> k1(dim), k2(dim), k3(dim), k4(dim), tmp(dim);
  for (int step = 0; step < opt.tau_steps; ++step) {
    const double tau = step * h;
    velocity(tau, z, k1);
    for (std::size_t i = 0; i < dim; ++i) tmp[i] = z[i] + 0.5 * h * k1[i];
    velocity(tau + 0.5 * h, tmp, k2);
    for (std::size_t i = 0; i < dim; ++i) tmp[i] = z[i] + 0.5 * h * k2[i];
    velocity(tau + 0.5 * h, tmp, k3);
    for (std::size_t i = 0; i < dim; ++i) tmp[i] = z[i] + h * k3[i];
    velocity(tau + h, tmp, k4);
    for (std::size_t i = 0; i < dim; ++i) {
      z[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
      if (!std::isfinite(z[i])) {
        throw std::domain_error("generator-driven state became non-finite");
      }
    }
  }
  return z;
}

double declared_support_violation(const AffineHamiltonian& A,
                                  const GridSpec& grid) {
  if (!A.compact || !std::isfinite(A.support_radius)) return 0.0;
  double worst = 0.0;
  double pt[kMaxDim];
  const std::size_t dim = grid.axes.size();
  for (std::size_t flat = 0; flat < grid.size(); ++flat) {
    grid.point_at(flat, std::span(pt, dim));
    double box = 0.0;
    for (std::size_t i = 0; i < dim; ++i) box = std::max(box, std::abs(pt[i]));
    if (box > A.support_radius) {
      worst = std::max(worst, std::abs(A.compact->value(Point(pt, dim))));
    }
  }
  return worst;
}

}  // namespace

AffineCommutatorReport affine_commutator_check(
    const AffineHamiltonian& H, const AffineHamiltonian& K, double s, double t,
    const GridSpec& grid, const AffineHamiltonian* G,
    const AffineCommutatorOptions& opt) {
  if (H.chart.kind != ChartKind::cartesian ||
      K.chart.kind != ChartKind::cartesian || H.chart.dim != K.chart.dim) {
    throw std::invalid_argument(
        "commutator check needs matching cartesian charts");
  }
  validate_grid(H.chart, grid);
  const std::size_t dim = static_cast<std::size_t>(H.chart.dim);
  const std::size_t size = grid.size();

  AffineCommutatorReport rpt;
  rpt.grid_points = size;
  rpt.support_violation = std::max(declared_support_violation(H, grid),
                                   declared_support_violation(K, grid));

  const HamiltonianField Ht = H.total();
  const HamiltonianField Kt = K.total();

  if (G != nullptr) {
    rpt.has_combo = true;
    const HamiltonianField Gt = G->total();
    double pt[kMaxDim], gh[kMaxDim], gk[kMaxDim];
    for (std::size_t flat = 0; flat < size; ++flat) {
      grid.point_at(flat, std::span(pt, dim));
      Ht.gradient_at(Point(pt, dim), std::span(gh, dim));
      Kt.gradient_at(Point(pt, dim), std::span(gk, dim));
      const double br = Ht.chart.bracket_from_gradients(
          Point(pt, dim), std::span<const double>(gh, dim),
          std::span<const double>(gk, dim));
      rpt.combo_residual = std::max(
          rpt.combo_residual, std::abs(br - Gt.value(Point(pt, dim))));
    }
  }

  std::vector<double> disc(size, 0.0);
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  const auto one_point = [&](std::size_t flat) {
    double pt[kMaxDim];
    grid.point_at(flat, std::span(pt, dim));
    auto y = affine_flow(K, Point(pt, dim), s, opt.flow,
                         opt.split_steps_per_unit_time);
    y = affine_flow(H, Point(y.data(), dim), t, opt.flow,
                    opt.split_steps_per_unit_time);
    y = affine_flow(K, Point(y.data(), dim), -s, opt.flow,
                    opt.split_steps_per_unit_time);
    y = affine_flow(H, Point(y.data(), dim), -t, opt.flow,
                    opt.split_steps_per_unit_time);
    const auto z =
        generator_driven_endpoint(Ht, Kt, s, t, Point(pt, dim), opt);
    double worst = 0.0;
    for (std::size_t i = 0; i < dim; ++i) {
      worst = std::max(worst, std::abs(y[i] - z[i]));
    }
    disc[flat] = worst;
  };

#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t flat = 0; flat < static_cast<std::ptrdiff_t>(size);
       ++flat) {
    if (failed.load(std::memory_order_relaxed)) continue;
    try {
      one_point(static_cast<std::size_t>(flat));
    } catch (...) {
#pragma omp critical(bracketlab_commutator_err)
      {
        if (!failed.exchange(true)) error = std::current_exception();
      }
    }
  }
#else
  for (std::size_t flat = 0; flat < size; ++flat) one_point(flat);
#endif
  if (failed.load()) std::rethrow_exception(error);

  rpt.max_discrepancy = kernels::reduce_max_abs(disc, Exec::serial);
  return rpt;
}

AffineCommutatorCase affine_commutator_case(const std::string& name) {
  const Chart chart = make_chart(ChartKind::cartesian);
  AffineCommutatorCase c;
  c.H.chart = chart;
  c.K.chart = chart;
  if (name == "translation") {
    c.H.linear = {1.0, 0.0};
    c.K.linear = {0.0, 1.0};
    AffineHamiltonian G;
    G.chart = chart;
    G.linear = {0.0, 0.0};
    G.constant = 1.0;  // {q, p} exactly
    c.G = G;
    c.grid = GridSpec{{{-1.0, 1.0, 4, false}, {-1.0, 1.0, 4, false}}};
    c.tolerance = 1e-8;
    return c;
  }
  if (name == "disjoint") {
    c.H.compact = HamiltonianField{chart, radial_bump({-0.8, 0.0}, 0.5)};
    c.H.linear = {0.0, 0.0};
    c.H.support_radius = 1.3;
    c.K.compact = HamiltonianField{
        chart, smooth_combination({{0.9, radial_bump({0.8, 0.0}, 0.5)}})};
    c.K.linear = {0.0, 0.0};
    c.K.support_radius = 1.3;
    c.grid = GridSpec{{{-1.2, 1.2, 4, false}, {-1.2, 1.2, 4, false}}};
    c.tolerance = 1e-6;
    return c;
  }
  if (name == "generic") {
    c.H.compact = HamiltonianField{chart, radial_bump({-0.2, 0.1}, 0.8)};
    c.H.linear = {0.4, 0.0};
    c.H.constant = 0.1;
    c.H.support_radius = 1.1;
    c.K.compact = HamiltonianField{
        chart, smooth_combination({{0.8, radial_bump({0.3, -0.15}, 0.7)}})};
    c.K.linear = {-0.2, 0.3};
    c.K.support_radius = 1.1;
    c.grid = GridSpec{{{-1.0, 1.0, 4, false}, {-1.0, 1.0, 4, false}}};
    c.tolerance = 2e-4;
    c.options.split_steps_per_unit_time = 256;
    c.options.inner_steps = 256;
    // the generator's time derivatives through the bump compositions carry a
    // large constant, so the outer integration needs the finest budget here
    c.options.tau_steps = 128;
    // wide enough that gradient noise from the quadrature stays below the
    // central-difference truncation error
    c.options.fd_step = 3e-4;
    return c;
  }
  throw std::invalid_argument("unknown commutator case: " + name);
}

}  // namespace bracketlab
