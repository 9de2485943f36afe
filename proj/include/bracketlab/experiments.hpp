#pragma once
// Named experiments: convergence sweeps over the gallery, distributional
// bracket pairings and their convergence tables, symplecticity residuals of
// explicit maps, and the commutator-versus-generator comparison for
// affine-at-infinity Hamiltonians.

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "bracketlab/flows.hpp"
#include "bracketlab/gallery.hpp"
#include "bracketlab/geometry.hpp"

namespace bracketlab {

struct ConvergenceRow {
  int n = 0;
  std::vector<double> image_gaps;      // per basis element, on rep.grid
  std::vector<double> decay_measured;  // c0 norm per basis element, decay grid
  double defect_norm = 0.0;
  double bracket_c0 = 0.0;  // c0 norm of {rho(e0), rho(e1)}
};

struct ConvergenceTable {
  std::string entry;
  std::vector<std::string> basis_labels;
  std::vector<ConvergenceRow> rows;
  LimitCheckReport limit;
};

ConvergenceTable run_convergence(const GalleryEntry& entry,
                                 const std::vector<int>& n_set);

// <{F,G}, phi> by moving all derivatives off G: two fourth-order grid
// derivatives of F and one of the (derivative * phi) products, then
// quadrature. phi must be compactly supported inside the grid.
double distribution_pairing(const GridField& F, const GridField& G,
                            const SmoothFn& phi);
// quadrature of poisson_bracket(F,G) * phi, the cross-check side
double direct_pairing(const GridField& F, const GridField& G,
                      const SmoothFn& phi);

struct PairingFamily {
  std::string name;
  std::function<SmoothFn(int)> F, G;  // indexed members
  SmoothFn F_limit, G_limit;
  bool conforming = true;  // whether the advertised hypotheses hold
};

// smooth compact pair with a C2-convergent F column and a C0-only G column
PairingFamily conforming_family();
// oscillatory pair whose brackets do not converge to the limit bracket
PairingFamily remark2_family();
// doubly-usable smooth pair with 1/index corrections in both columns
PairingFamily prop7_family();
// default test function: radial bump at (0, 0.4), radius 0.5
SmoothFn default_pairing_test_function();
// default pairing grid, cartesian square
GridSpec default_pairing_grid();

struct Prop6Row {
  int n = 0;
  double pairing_n = 0.0;
  double pairing_limit = 0.0;
  double error = 0.0;
};

struct Prop6Table {
  std::string family;
  std::vector<Prop6Row> rows;
  double pairing_limit = 0.0;
  bool error_decreasing = false;  // last <= first / 2
  std::string verdict;
};

Prop6Table prop6_experiment(const PairingFamily& family, const SmoothFn& phi,
                            const GridSpec& grid,
                            const std::vector<int>& n_set);

struct Prop7Row {
  int p = 0;
  int q = 0;
  double error = 0.0;
};

struct Prop7Table {
  std::vector<Prop7Row> rows;
  double fit_c = 0.0;      // least-squares c in error <= c (1/p + 1/q)
  double fit_excess = 0.0; // max error - c (1/p + 1/q), <= 0 when the fit holds
  double max_error = 0.0;
  bool mismatch_detected = false;  // some error stayed above the floor
};

// |<{F_p, G_q}, phi> - <H, phi>| over the index rectangle; H plays the
// claimed double-limit of the brackets
Prop7Table prop7_experiment(const PairingFamily& family, const SmoothFn& H,
                            const SmoothFn& phi, const GridSpec& grid,
                            const std::vector<int>& p_set,
                            const std::vector<int>& q_set);

using MapFn = std::function<void(Point, std::span<double>)>;

struct SymplecticReport {
  int pairs = 1;
  double max_residual = 0.0;
  // row-major pairs x pairs blocks of c0 norms
  std::vector<double> ff, gg, fg_minus_delta;
  bool degenerate_jacobian = false;
};

// samples the map's coordinate functions on the grid and measures how far
// their pairwise brackets sit from the canonical table
SymplecticReport symplectic_check(const MapFn& map, int pairs,
                                  const GridSpec& grid, int fd_order = 4);

// identity | shear | double_scale
MapFn builtin_map(const std::string& name, int pairs = 1);

struct AffineCommutatorOptions {
  StepControl flow{};
  int split_steps_per_unit_time = 64;
  int sigma_panels = 64;   // Simpson panels for the generator quadrature
  int tau_steps = 32;      // fixed steps for the generator-driven flow
  int inner_steps = 64;    // fixed steps per unit time inside the generator
  double fd_step = 1e-5;   // gradient step on the generator
};

struct AffineCommutatorReport {
  double max_discrepancy = 0.0;   // commutator vs generator-driven endpoints
  double support_violation = 0.0; // compact samples outside declared radius
  bool has_combo = false;
  double combo_residual = 0.0;    // c0 norm of {H,K} - G when G is supplied
  std::size_t grid_points = 0;
};

AffineCommutatorReport affine_commutator_check(
    const AffineHamiltonian& H, const AffineHamiltonian& K, double s, double t,
    const GridSpec& grid, const AffineHamiltonian* G = nullptr,
    const AffineCommutatorOptions& opt = {});

// translation | disjoint | generic: pinned example inputs for the check
struct AffineCommutatorCase {
  AffineHamiltonian H, K;
  std::optional<AffineHamiltonian> G;
  double s = 0.3, t = 0.3;
  GridSpec grid;
  double tolerance = 1e-6;
  AffineCommutatorOptions options;
};
AffineCommutatorCase affine_commutator_case(const std::string& name);

}  // namespace bracketlab
