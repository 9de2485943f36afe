#pragma once
// Hamiltonian vector fields and flows: adaptive 4th-order integration with
// step doubling, grid pullbacks, conjugated and commutator flows, affine
// splitting, and radial linear-growth certificates.

#include <functional>
#include <limits>
#include <optional>
#include <stdexcept>
#include <vector>

#include "bracketlab/geometry.hpp"

namespace bracketlab {

struct GradientCheckOptions {
  bool enabled = true;
  int probes = 100;
  unsigned seed = 20260816u;
  double tolerance = 1e-6;  // scaled by (1 + |component|)
};

// Scalar Hamiltonian on a chart. When fn.gradient is absent, gradients fall
// back to central differences of fn.value with step fd_step.
struct HamiltonianField {
  Chart chart;
  SmoothFn fn;
  double fd_step = 1e-5;

  double value(Point x) const { return fn.value(x); }
  void gradient_at(Point x, std::span<double> out) const;
  // X_H = Pi * grad H
  void velocity(Point x, std::span<double> out) const;
};

// validates an analytic gradient against central differencing at random
// probe points inside a chart-appropriate box; throws on disagreement
HamiltonianField make_hamiltonian(Chart chart, SmoothFn fn,
                                  double fd_step = 1e-5,
                                  const GradientCheckOptions& check = {});

std::vector<double> symplectic_gradient(const HamiltonianField& H, Point x);

struct EscapeRegion {
  std::vector<double> lo, hi;
  bool contains(Point x) const;
};
// cartesian |x_i| <= 50; polar r in [0.01, 50]; cylinder-like |s| <= 12;
// angles unconstrained
EscapeRegion default_escape(const Chart& chart);

struct FlowEscape : std::runtime_error {
  FlowEscape(std::vector<double> state_, double time_);
  std::vector<double> state;
  double time;
};

struct StepControl {
  double tol = 1e-10;  // target error scale per unit time
  double init_step = 1e-2;
  int max_steps = 200000;
  std::optional<EscapeRegion> escape;  // chart default when absent
};

struct Trajectory {
  std::vector<double> times;
  std::vector<std::vector<double>> states;
  std::vector<double> energies;  // H at each accepted state
};

// adaptive classical 4th-order scheme, local error via step doubling;
// throws FlowEscape when an accepted state leaves the escape region and
// std::runtime_error on step-size underflow or step-count exhaustion
Trajectory advance_flow(const HamiltonianField& H, Point start, double t,
                        const StepControl& ctrl = {});

// endpoint-only variant used by grid-scale work
std::vector<double> flow_endpoint(const HamiltonianField& H, Point start,
                                  double t, const StepControl& ctrl = {});

// fixed-step classical 4th-order run; smooth in the initial condition, used
// where a flow endpoint is differentiated numerically
std::vector<double> fixed_step_endpoint(const HamiltonianField& H, Point start,
                                        double t, int n_steps);

// samples F(phi_H^t(x)) over the grid (no closed form on the result)
GridField pullback(const SmoothFn& F, const HamiltonianField& H, double t,
                   const GridSpec& grid, const StepControl& ctrl = {},
                   Exec exec = Exec::parallel);

// phi_g^{-s} . phi_f^t . phi_g^s applied to start
std::vector<double> conjugated_flow(const HamiltonianField& f,
                                    const HamiltonianField& g, double s,
                                    double t, Point start,
                                    const StepControl& ctrl = {});

// y -> f(phi_g^s(y)) as a Hamiltonian with value-only closed form
// (fixed-step flow inside, so numerical gradients stay smooth)
HamiltonianField pullback_hamiltonian(const HamiltonianField& f,
                                      const HamiltonianField& g, double s,
                                      int n_steps = 512);

// phi_A^t . phi_B^s . phi_A^{-t} . phi_B^{-s} applied to start;
// when C is present, phi_C^{-t*s} is prepended (applied last)
std::vector<double> commutator_flow(const HamiltonianField& A,
                                    const HamiltonianField& B, double s,
                                    double t, Point start,
                                    const HamiltonianField* C = nullptr,
                                    const StepControl& ctrl = {});

// fixed-step Strang splitting for separable cartesian H = T(p) + V(q);
// start is interleaved (q1,p1,...); gradients of T and V given directly
std::vector<double> advance_separable(
    const std::function<void(Point, std::span<double>)>& dT_dp,
    const std::function<void(Point, std::span<double>)>& dV_dq, Point start,
    double t, int n_steps);

// compactly supported part + linear covector + constant, on a cartesian chart
struct AffineHamiltonian {
  Chart chart;
  std::optional<HamiltonianField> compact;
  std::vector<double> linear;
  double constant = 0.0;
  // declared bound: compact part vanishes where any |x_i| exceeds this
  double support_radius = std::numeric_limits<double>::infinity();

  HamiltonianField total() const;
  bool pure_affine() const;
  // t * Pi * linear, the exact displacement of the affine part
  std::vector<double> affine_displacement(double t) const;
};

// exact affine translation Strang-composed with adaptive compact-part flow;
// exact (single adaptive run or closed form) when either part is absent
std::vector<double> affine_flow(const AffineHamiltonian& H, Point start,
                                double t, const StepControl& ctrl = {},
                                int split_steps_per_unit_time = 64);

struct GrowthRegion {
  double r_lo = 0.05;
  double r_hi = 10.0;
  int n_r = 96;
  int n_angle = 256;
};

struct GrowthCertificate {
  double a = 0.0;
  double b = 0.0;
  double max_residual = 0.0;  // max(||X|| - (a r + b)) over samples, <= 0
  double slope_ratio = 1.0;   // full-range slope / half-range slope
  bool superlinear = false;   // slope_ratio >= 1.5
  bool certified = false;     // dominating line found and growth is linear
};

using VectorFieldFn = std::function<void(Point, std::span<double>)>;

// dominating line ||X|| <= a r + b fitted by one-sided least squares over a
// radial annulus; r is the radial coordinate (polar-like charts) or |x|
// (cartesian with one pair)
GrowthCertificate linear_growth_bound(const VectorFieldFn& field,
                                      const Chart& chart,
                                      const GrowthRegion& region);
GrowthCertificate linear_growth_bound(const HamiltonianField& H,
                                      const GrowthRegion& region);

}  // namespace bracketlab
