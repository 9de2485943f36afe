#pragma once
// Charts with antisymmetric bracket coefficients, uniform grids, sampled
// scalar fields, finite-difference derivatives and Poisson brackets.

#include <cmath>
#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace bracketlab {

using Point = std::span<const double>;

inline constexpr int kMaxDim = 16;

// Scalar field given in closed form; gradient is optional and, when present,
// must agree with central differencing of value (see HamiltonianField).
struct SmoothFn {
  std::function<double(Point)> value;
  std::function<void(Point, std::span<double>)> gradient;  // may be empty
  bool has_gradient() const { return static_cast<bool>(gradient); }
};

SmoothFn smooth_constant(double c);
// sum_i coeff_i * term_i; gradient present iff every term has one
SmoothFn smooth_combination(std::vector<std::pair<double, SmoothFn>> terms);
SmoothFn smooth_product(SmoothFn a, SmoothFn b);
// pointwise {F,G} in closed form; both arguments need analytic gradients
SmoothFn smooth_bracket(const struct Chart& chart, SmoothFn F, SmoothFn G);

enum class ChartKind { cartesian, polar_r2, cylinder_s1, symplectization_s1xU };

std::string to_string(ChartKind kind);
ChartKind chart_kind_from_string(const std::string& name);

// Bracket coefficient of one conjugate coordinate pair (i,j):
// {H,K} += coef(x) * (dH_i dK_j - dH_j dK_i).
struct PairBlock {
  int i = 0;
  int j = 1;
  enum class Coef { unit, inv_coord0, exp_neg_coord0 } coef = Coef::unit;
};

struct Chart {
  ChartKind kind = ChartKind::cartesian;
  int dim = 2;
  std::vector<std::string> names;
  std::vector<PairBlock> blocks;

  double block_coef(const PairBlock& b, Point x) const;
  // materialized Pi (row-major dim x dim), antisymmetric by construction
  void poisson_matrix(Point x, std::span<double> out) const;
  // X_H = Pi * grad, written to out
  void apply_poisson(Point x, std::span<const double> grad,
                     std::span<double> out) const;
  double bracket_from_gradients(Point x, std::span<const double> dF,
                                std::span<const double> dG) const;
};

// cartesian: pairs >= 1 -> dim 2*pairs, coordinates (q1,p1,...).
// polar_r2 (r,theta), cylinder_s1 (s,theta): pairs ignored (dim 2).
// symplectization_s1xU: (s,theta,x1,...,x_{2k}) with pairs = k >= 1.
Chart make_chart(ChartKind kind, int pairs = 1);

struct Axis {
  double lo = 0.0;
  double hi = 1.0;
  int points = 2;
  bool periodic = false;  // hi identified with lo; hi itself not sampled
  double step() const {
    return periodic ? (hi - lo) / points : (hi - lo) / (points - 1);
  }
  double coord(int i) const { return lo + i * step(); }
};

struct GridSpec {
  std::vector<Axis> axes;

  int dim() const { return static_cast<int>(axes.size()); }
  std::size_t size() const;
  // row-major, last axis fastest
  std::vector<std::size_t> strides() const;
  void point_at(std::size_t flat, std::span<double> out) const;
  void validate() const;  // >= 4 points per axis, lo < hi, dim <= kMaxDim
};

// chart-aware checks: dimension match; polar radial axis must start at r > 0
void validate_grid(const Chart& chart, const GridSpec& grid);

struct GridField {
  Chart chart;
  GridSpec grid;
  std::vector<double> samples;
  std::optional<SmoothFn> analytic;
};

enum class Exec { serial, parallel };

// evaluates fn on every grid point (parallel by default);
// throws std::domain_error on a non-finite sample
GridField sample_field(const Chart& chart, const GridSpec& grid,
                       const SmoothFn& fn, Exec exec = Exec::parallel);

// central differences along one axis: order 2 (3-point) or order 4
// (7-point spread-optimized interior); one-sided same-order rows at the
// edges of non-periodic axes. Result carries no closed form.
GridField partial_derivative(const GridField& f, int axis, int order = 2,
                             Exec exec = Exec::parallel);

struct BracketOptions {
  enum class Mode { automatic, force_fd } mode = Mode::automatic;
  int fd_order = 2;
  Exec exec = Exec::parallel;
};

// {F,G} on the common grid. Exact mode (analytic gradients of both fields)
// yields a field whose closed-form value is the pointwise contraction;
// otherwise falls back to finite differences of the samples.
GridField poisson_bracket(const GridField& F, const GridField& G,
                          const BracketOptions& opt = {});

double c0_norm(const GridField& f, Exec exec = Exec::parallel);

struct QuadratureResult {
  double value = 0.0;
  double boundary_max_abs = 0.0;  // largest |sample| on a non-periodic face
  bool boundary_leak = false;     // boundary_max_abs > 1e-9 * c0_norm
};

// tensor-product trapezoid rule; periodic axes use the uniform rule
QuadratureResult integrate(const GridField& f, Exec exec = Exec::parallel);

// C^infinity bump b(u) = exp(1 - 1/(1-u^2)) for |u|<1, else 0; b(0) = 1.
double bump_value(double u);
double bump_derivative(double u);
// b'(u)/u, finite at 0 (= -2 b(u) / (1-u^2)^2)
double bump_slope_ratio(double u);

// radial bump on the coordinates listed in coords:
// x -> b(|x[coords] - center| / radius)
SmoothFn subspace_bump(std::vector<int> coords, std::vector<double> center,
                       double radius);
// radial bump on the first center.size() coordinates
SmoothFn radial_bump(std::vector<double> center, double radius);
// bump in a single coordinate: x -> b((x[coord] - center) / radius)
SmoothFn coordinate_bump(int coord, double center, double radius);

}  // namespace bracketlab
