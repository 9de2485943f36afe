#include "bracketlab/gallery.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

#include "bracketlab/golden.hpp"

namespace bracketlab {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

// r cos(n theta) / sqrt(n) and the sin partner on the polar chart
SmoothFn polar_image(int n, bool sine) {
  const double rn = std::sqrt(static_cast<double>(n));
  SmoothFn fn;
  fn.value = [n, rn, sine](Point x) {
    const double a = n * x[1];
    return x[0] * (sine ? std::sin(a) : std::cos(a)) / rn;
  };
  fn.gradient = [n, rn, sine](Point x, std::span<double> out) {
    const double a = n * x[1];
    const double c = std::cos(a), s = std::sin(a);
    out[0] = (sine ? s : c) / rn;
    out[1] = rn * x[0] * (sine ? c : -s);
  };
  return fn;
}

// chi(p) cos(n q) / sqrt(n) and the sin partner on the cartesian chart
SmoothFn oscillatory_image(int n, bool sine, const ChiParams& chi) {
  const double rn = std::sqrt(static_cast<double>(n));
  const double c0 = chi.center, rad = chi.radius;
  SmoothFn fn;
  fn.value = [n, rn, sine, c0, rad](Point x) {
    const double a = n * x[0];
    const double u = (x[1] - c0) / rad;
    return bump_value(u) * (sine ? std::sin(a) : std::cos(a)) / rn;
  };
  fn.gradient = [n, rn, sine, c0, rad](Point x, std::span<double> out) {
    const double a = n * x[0];
    const double c = std::cos(a), s = std::sin(a);
    const double u = (x[1] - c0) / rad;
    const double b = bump_value(u);
    out[0] = rn * b * (sine ? c : -s);
    out[1] = bump_derivative(u) / rad * (sine ? s : c) / rn;
  };
  return fn;
}

// e^{s/2} cos(n theta) / sqrt(n) and the sin partner on the cylinder chart
SmoothFn cylinder_image(int n, bool sine) {
  const double rn = std::sqrt(static_cast<double>(n));
  SmoothFn fn;
  fn.value = [n, rn, sine](Point x) {
    const double a = n * x[1];
    return std::exp(0.5 * x[0]) * (sine ? std::sin(a) : std::cos(a)) / rn;
  };
  fn.gradient = [n, rn, sine](Point x, std::span<double> out) {
    const double e = std::exp(0.5 * x[0]);
    const double a = n * x[1];
    const double c = std::cos(a), s = std::sin(a);
    out[0] = 0.5 * e * (sine ? s : c) / rn;
    out[1] = rn * e * (sine ? c : -s);
  };
  return fn;
}

// e^{s/2} cos(n theta) chi(|x|) / sqrt(n) on the symplectization chart
SmoothFn transverse_image(int n, bool sine, double chi_radius) {
  const double rn = std::sqrt(static_cast<double>(n));
  const double R = chi_radius;
  SmoothFn fn;
  fn.value = [n, rn, sine, R](Point x) {
    const double a = n * x[1];
    const double u = std::hypot(x[2], x[3]) / R;
    return std::exp(0.5 * x[0]) * bump_value(u) * (sine ? std::sin(a) : std::cos(a)) / rn;
  };
  fn.gradient = [n, rn, sine, R](Point x, std::span<double> out) {
    const double e = std::exp(0.5 * x[0]);
    const double a = n * x[1];
    const double c = std::cos(a), s = std::sin(a);
    const double u = std::hypot(x[2], x[3]) / R;
    const double b = bump_value(u);
    const double trig = sine ? s : c;
    const double dtrig = sine ? c : -s;
    out[0] = 0.5 * e * b * trig / rn;
    out[1] = rn * e * b * dtrig;
    // d/dx_i bump(|x|/R) = (x_i / R^2) * slope_ratio(|x|/R)
    const double ratio = bump_slope_ratio(u) / (R * R);
    out[2] = e * trig / rn * x[2] * ratio;
    out[3] = e * trig / rn * x[3] * ratio;
  };
  return fn;
}

// kappa chi(|x|)^2 in the transverse coordinates
SmoothFn transverse_center(double kappa, double chi_radius) {
  const double R = chi_radius;
  SmoothFn fn;
  fn.value = [kappa, R](Point x) {
    const double b = bump_value(std::hypot(x[2], x[3]) / R);
    return kappa * b * b;
  };
  fn.gradient = [kappa, R](Point x, std::span<double> out) {
    const double u = std::hypot(x[2], x[3]) / R;
    const double b = bump_value(u);
    const double ratio = bump_slope_ratio(u) / (R * R);
    out[0] = 0.0;
    out[1] = 0.0;
    out[2] = 2.0 * kappa * b * ratio * x[2];
    out[3] = 2.0 * kappa * b * ratio * x[3];
  };
  return fn;
}

// 1 for r <= edge, smooth fall to 0 by 2 * edge
SmoothFn radial_plateau(double edge) {
  SmoothFn fn;
  fn.value = [edge](Point x) {
    const double u = (x[0] - edge) / edge;
    if (u <= 0.0) return 1.0;
    if (u >= 1.0) return 0.0;
    return bump_value(u);
  };
  fn.gradient = [edge](Point x, std::span<double> out) {
    for (auto& v : out) v = 0.0;
    const double u = (x[0] - edge) / edge;
    if (u > 0.0 && u < 1.0) out[0] = bump_derivative(u) / edge;
  };
  return fn;
}

GridSpec grid2(Axis a, Axis b) { return GridSpec{{a, b}}; }

NormedLieAlgebra heisenberg_fgh() {
  NormedLieAlgebra alg(3, {"f", "g", "h"});
  alg.set_structure(0, 1, 2, 1.0);
  alg.validate();
  return alg;
}

HamiltonianField checked(const Chart& chart, SmoothFn fn) {
  return make_hamiltonian(chart, std::move(fn));
}

GalleryEntry make_polar() {
  GalleryEntry e;
  e.name = "polterovich_polar";
  e.rep.algebra = heisenberg_fgh();
  e.rep.chart = make_chart(ChartKind::polar_r2);
  e.rep.grid = grid2({0.05, 2.0, 256, false}, {0.0, kTwoPi, 512, true});
  e.rep.n_set = {1, 4, 16, 64};
  e.image_builder = [chart = e.rep.chart](int n) {
    return std::vector<HamiltonianField>{
        checked(chart, polar_image(n, false)),
        checked(chart, polar_image(n, true)),
        checked(chart, smooth_constant(1.0))};
  };
  for (const int n : e.rep.n_set) e.rep.basis_images[n] = e.image_builder(n);
  e.rep.limit_images = {{checked(e.rep.chart, smooth_constant(0.0)),
                         checked(e.rep.chart, smooth_constant(0.0)),
                         checked(e.rep.chart, smooth_constant(1.0))}};
  e.decay_grid = grid2({0.05, 1.0, 96, false}, {0.0, kTwoPi, 512, true});
  // theta offset keeps every start point a safe conserved distance from the
  // rays along which trajectories dive toward the chart singularity
  const double off = kTwoPi / 128.0;
  e.flow_grid = grid2({0.4, 2.0, 12, false}, {off, off + kTwoPi, 64, true});
  e.flow_time = 1.0;
  e.series_order = 2;
  e.lemma3_n_set = {1, 4, 16};
  e.expected.bracket_is_constant = true;
  e.expected.bracket_constant = 1.0;
  e.expected.bracket_c0 = 1.0;
  e.expected.decay_scale = 1.0;
  e.expected.defect_vanishes = true;
  e.chi.radius = 0.0;  // no bump in this entry
  return e;
}

GalleryEntry make_remark2() {
  GalleryEntry e;
  e.name = "remark2_cartesian";
  // the defect of this pair concentrates on a single basis pair; the
  // sum-coefficient norm makes the sampled sup land exactly there
  e.rep.algebra =
      NormedLieAlgebra(2, {"f", "g"}, CoefficientNorm::sum_coefficient);
  e.rep.algebra.validate();
  e.rep.chart = make_chart(ChartKind::cartesian);
  e.rep.grid = grid2({0.0, kTwoPi, 256, true}, {-1.25, 1.25, 256, false});
  e.rep.n_set = {1, 4, 16, 64};
  e.chi = ChiParams{0.0, 1.0};
  e.image_builder = [chart = e.rep.chart, chi = e.chi](int n) {
    return std::vector<HamiltonianField>{
        checked(chart, oscillatory_image(n, false, chi)),
        checked(chart, oscillatory_image(n, true, chi))};
  };
  for (const int n : e.rep.n_set) e.rep.basis_images[n] = e.image_builder(n);
  e.rep.limit_images = {{checked(e.rep.chart, smooth_constant(0.0)),
                         checked(e.rep.chart, smooth_constant(0.0))}};
  e.decay_grid = e.rep.grid;
  e.flow_grid = grid2({-1.5, 1.5, 12, false}, {-1.25, 1.25, 12, false});
  e.flow_time = 0.5;
  e.series_order = 2;
  e.lemma3_n_set = {1, 4, 16};
  const auto& golden = builtin_golden();
  e.expected.bracket_is_constant = false;
  e.expected.bracket_c0 = golden.chi_chiprime_max;
  e.expected.decay_scale = 1.0;
  e.expected.defect_vanishes = false;
  e.expected.defect_constant = golden.chi_chiprime_max;
  return e;
}

GalleryEntry make_cylinder() {
  GalleryEntry e;
  const auto& golden = builtin_golden();
  e.name = "cylinder_heisenberg";
  e.rep.algebra = heisenberg_fgh();
  e.rep.chart = make_chart(ChartKind::cylinder_s1);
  e.rep.grid = grid2({-2.0, 2.0, 256, false}, {0.0, kTwoPi, 512, true});
  e.rep.n_set = {1, 4, 16, 64};
  const double kappa = golden.kappa_cylinder;
  e.image_builder = [chart = e.rep.chart, kappa](int n) {
    return std::vector<HamiltonianField>{
        checked(chart, cylinder_image(n, false)),
        checked(chart, cylinder_image(n, true)),
        checked(chart, smooth_constant(kappa))};
  };
  for (const int n : e.rep.n_set) e.rep.basis_images[n] = e.image_builder(n);
  e.rep.limit_images = {{checked(e.rep.chart, smooth_constant(0.0)),
                         checked(e.rep.chart, smooth_constant(0.0)),
                         checked(e.rep.chart, smooth_constant(kappa))}};
  e.decay_grid = grid2({-3.0, 3.0, 128, false}, {0.0, kTwoPi, 512, true});
  const double off = kTwoPi / 128.0;
  e.flow_grid = grid2({-2.0, 2.0, 12, false}, {off, off + kTwoPi, 64, true});
  // zero-level trajectories reach the far end of the cylinder in time
  // 2 e^{s0/2} / sqrt(n); 0.1 stays well inside that for n <= 16
  e.flow_time = 0.1;
  e.series_order = 2;
  e.lemma3_n_set = {1, 4, 16};
  e.expected.bracket_is_constant = true;
  e.expected.bracket_constant = kappa;
  e.expected.bracket_c0 = kappa;
  e.expected.decay_scale = std::exp(1.5);
  e.expected.defect_vanishes = true;
  e.expected.has_quoted_constant = true;
  e.expected.quoted_constant = golden.kappa_quoted;
  e.chi.radius = 0.0;
  return e;
}

GalleryEntry make_symplectization() {
  GalleryEntry e;
  const auto& golden = builtin_golden();
  e.name = "symplectization_transverse";
  e.rep.algebra = heisenberg_fgh();
  e.rep.chart = make_chart(ChartKind::symplectization_s1xU, 1);
  e.rep.grid = GridSpec{{{-2.0, 2.0, 12, false},
                         {0.0, kTwoPi, 24, true},
                         {-1.2, 1.2, 11, false},
                         {-1.2, 1.2, 11, false}}};
  e.rep.n_set = {1, 4, 16, 64};
  e.chi = ChiParams{0.0, 1.0};
  const double kappa = golden.kappa_cylinder;
  e.image_builder = [chart = e.rep.chart, kappa, radius = e.chi.radius](int n) {
    return std::vector<HamiltonianField>{
        checked(chart, transverse_image(n, false, radius)),
        checked(chart, transverse_image(n, true, radius)),
        checked(chart, transverse_center(kappa, radius))};
  };
  for (const int n : e.rep.n_set) e.rep.basis_images[n] = e.image_builder(n);
  e.rep.limit_images = {
      {checked(e.rep.chart, smooth_constant(0.0)),
       checked(e.rep.chart, smooth_constant(0.0)),
       checked(e.rep.chart, transverse_center(kappa, e.chi.radius))}};
  e.decay_grid = GridSpec{{{-2.0, 2.0, 9, false},
                           {0.0, kTwoPi, 32, true},
                           {-1.2, 1.2, 11, false},
                           {-1.2, 1.2, 11, false}}};
  const double off = kTwoPi / 48.0;
  e.flow_grid = GridSpec{{{-2.0, 2.0, 6, false},
                          {off, off + kTwoPi, 24, true},
                          {-1.2, 1.2, 6, false},
                          {-1.2, 1.2, 6, false}}};
  e.flow_time = 0.08;
  e.series_order = 2;
  e.lemma3_n_set = {1, 4, 16};
  e.expected.bracket_is_constant = false;
  e.expected.bracket_c0 = kappa;  // chi(0) = 1 lies on the grid
  e.expected.decay_scale = std::exp(1.0);
  e.expected.defect_vanishes = true;
  e.expected.has_quoted_constant = true;
  e.expected.quoted_constant = golden.kappa_quoted;
  return e;
}

}  // namespace

std::vector<std::string> gallery_names() {
  return {"remark2_cartesian", "polterovich_polar", "cylinder_heisenberg",
          "symplectization_transverse"};
}

GalleryEntry gallery(const std::string& name) {
  if (name == "remark2_cartesian") return make_remark2();
  if (name == "polterovich_polar") return make_polar();
  if (name == "cylinder_heisenberg") return make_cylinder();
  if (name == "symplectization_transverse") return make_symplectization();
  throw std::invalid_argument("unknown gallery entry: " + name);
}

GalleryEntry with_truncated_h(const GalleryEntry& entry) {
  if (entry.rep.chart.kind != ChartKind::polar_r2 ||
      entry.rep.algebra.dim() != 3) {
    throw std::invalid_argument(
        "truncation variant needs the polar three-element entry");
  }
  GalleryEntry e = entry;
  e.name = entry.name + "_truncated";
  const auto truncate = [chart = e.rep.chart](std::vector<HamiltonianField> v,
                                              int n) {
    const double edge = std::sqrt(static_cast<double>(n));
    // no construction-time probe: the plateau has a curvature jump where the
    // fall-off splices on, which is fine everywhere derivatives are used
    v[2] = HamiltonianField{chart, radial_plateau(edge), 1e-5};
    return v;
  };
  for (const int n : e.rep.n_set) {
    e.rep.basis_images[n] = truncate(e.rep.basis_images[n], n);
  }
  if (entry.image_builder) {
    e.image_builder = [base = entry.image_builder, truncate](int n) {
      return truncate(base(n), n);
    };
  }
  return e;
}

GalleryEntry with_n_set(const GalleryEntry& entry, std::vector<int> n_set) {
  if (n_set.empty()) throw std::invalid_argument("empty index set");
  for (std::size_t i = 0; i + 1 < n_set.size(); ++i) {
    if (n_set[i] >= n_set[i + 1]) {
      throw std::invalid_argument("index set must be strictly increasing");
    }
  }
  if (n_set.front() < 1) throw std::invalid_argument("indices start at 1");
  GalleryEntry e = entry;
  for (const int n : n_set) {
    if (e.rep.basis_images.count(n)) continue;
    if (!e.image_builder) {
      throw std::invalid_argument("entry has no images for requested index");
    }
    e.rep.basis_images[n] = e.image_builder(n);
  }
  e.rep.n_set = std::move(n_set);
  return e;
}

}  // namespace bracketlab
