#pragma once
// Frozen reference constants with built-in regeneration oracles and a
// comparison gate. The compiled-in copy is what tests assert against; the
// JSON file ships alongside so the numbers are inspectable and recomputable.

#include <string>
#include <vector>

namespace bracketlab {

struct GoldenTable {
  // max |chi * chi'| for the default bump and where it is attained
  double chi_chiprime_max = 0.0;
  double chi_argmax = 0.0;
  // constant value of the cylinder pair bracket under the fixed orientation,
  // plus the externally quoted value recorded for comparison
  double kappa_cylinder = 0.0;
  double kappa_quoted = 0.0;
  // exp tail at x=1 truncated at N=10
  double tail_spot = 0.0;
  // |<bracket, phi>| for the oscillatory pair and the default test function
  double pairing_constant = 0.0;
  // integrals of the default bump in one and two dimensions
  double bump_integral_1d = 0.0;
  double bump_integral_2d = 0.0;
};

// compiled-in frozen values
const GoldenTable& builtin_golden();

// recompute every constant from scratch (dense scans, Richardson stencils,
// fine quadrature); deterministic. chi_radius rescales the cutoff profile
// wherever it enters (the max then scales like 1/radius)
GoldenTable computed_golden(double chi_radius);
GoldenTable computed_golden();

GoldenTable load_golden(const std::string& path);
void save_golden(const GoldenTable& table, const std::string& path,
                 double chi_radius = 1.0);

struct GoldenDiff {
  std::string name;
  double stored = 0.0;
  double computed = 0.0;
  double diff = 0.0;
};

// entries whose |stored - computed| exceeds the gate
std::vector<GoldenDiff> compare_golden(const GoldenTable& stored,
                                       const GoldenTable& computed,
                                       double gate = 1e-9);

}  // namespace bracketlab
