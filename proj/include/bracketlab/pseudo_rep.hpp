#pragma once
// Families of linear maps from a normed Lie algebra into Hamiltonians:
// defect fields and sampled defect norms, truncated adjoint series with
// remainder bounds, and the limit-bracket consistency check.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "bracketlab/flows.hpp"
#include "bracketlab/geometry.hpp"
#include "bracketlab/lie_algebra.hpp"

namespace bracketlab {

// basis_images[n][i] is the image of basis element i at family index n
struct PseudoRepresentation {
  NormedLieAlgebra algebra = heisenberg3();
  Chart chart;
  GridSpec grid;
  std::vector<int> n_set;
  std::map<int, std::vector<HamiltonianField>> basis_images;
  std::optional<std::vector<HamiltonianField>> limit_images;

  const std::vector<HamiltonianField>& images_at(int n) const;
};

// linear combination of the basis images at index n, in closed form
HamiltonianField rho(const PseudoRepresentation& rep, int n,
                     const std::vector<double>& x);
HamiltonianField rho_limit(const PseudoRepresentation& rep,
                           const std::vector<double>& x);

// {rho(f), rho(g)} - rho([f,g]) sampled on the family grid
GridField defect_field(const PseudoRepresentation& rep, int n,
                       const std::vector<double>& f,
                       const std::vector<double>& g,
                       const BracketOptions& opt = {});

struct DefectReport {
  int n = 0;
  double defect_norm_estimate = 0.0;  // sup over sampled unit pairs
  double rep_norm_estimate = 0.0;     // sup of ||rho(x)|| over unit x, this n
  double bracket_constant = 0.0;      // sampled C of the algebra
  double safety_factor = 2.0;         // multiplies C wherever C is used
  int sample_pairs = 0;
  std::vector<double> argmax_f, argmax_g;
  std::string f_label, g_label;
};

// sup estimated over all basis pairs plus seeded random unit pairs, using
// bilinearity so only the basis defect fields are ever sampled
DefectReport defect_norm(const PseudoRepresentation& rep, int n,
                         int random_pairs = 256, unsigned seed = 20260816u);

// sup of c0_norm(rho(x)) over sampled unit x at one family index
double rep_norm_estimate(const PseudoRepresentation& rep, int n,
                         int random_pairs = 256, unsigned seed = 20260816u);
// max of rep_norm_estimate over the configured n_set
double uniform_rep_norm(const PseudoRepresentation& rep,
                        int random_pairs = 256, unsigned seed = 20260816u);

// sum_{j=0..N} rho(ad(g)^j f) s^j / j! sampled on the family grid; exact for
// nilpotent algebras once N reaches the nilpotency degree
GridField ad_series(const PseudoRepresentation& rep, int n,
                    const std::vector<double>& f, const std::vector<double>& g,
                    double s, int N);

// sum_{j>=N} x^j / j! by compensated forward summation
double exp_tail_series(double x, int N);
// R * norm_f * sum_{j>=N} (s*C*norm_g)^j / j!
double tail_bound(double R, double C, double norm_f, double norm_g, double s,
                  int N);

struct Lemma3Options {
  double slack = 1.5;
  double atol = 1e-4;
  int random_pairs = 256;
  unsigned seed = 20260816u;
  StepControl flow{};
  Exec exec = Exec::parallel;
  // pullback and series are compared on this grid when set (the family grid
  // can be finer than a flow sweep needs); norms still use the family grid
  std::optional<GridSpec> flow_grid;
};

struct SeriesComparisonReport {
  int n = 0;
  double s = 0.0;
  int N = 0;
  double residual = 0.0;     // sup |rho(f) . flow  -  truncated series|
  double defect_part = 0.0;  // defect_norm * ||f|| * exp(s ||g||)
  double tail_part = 0.0;    // remainder from exact ad-power norms, j > N
  double bound = 0.0;        // defect_part + tail_part
  double tail_generic = 0.0;    // tail_bound with the safety-scaled C
  double bound_generic = 0.0;   // defect_part + tail_generic
  double rep_norm_uniform = 0.0;
  double slack = 1.5;
  double atol = 1e-4;
  bool pass = false;  // residual <= slack * bound + atol
  std::string f_label, g_label;
};

// compares the pulled-back image of f along the flow of rho(g) with the
// truncated adjoint series and both remainder bounds
SeriesComparisonReport lemma3_residual(const PseudoRepresentation& rep, int n,
                                       const std::vector<double>& f,
                                       const std::vector<double>& g, double s,
                                       int N, const Lemma3Options& opt = {});

struct LimitCheckReport {
  std::vector<int> n_values;
  std::vector<double> defect_norms;    // one per n
  std::vector<double> image_gaps;      // max_i ||rho_n(e_i) - rho(e_i)||
  bool image_gaps_nonincreasing = true;  // within 10% slack, diagnostic only
  double limit_residual = 0.0;  // ||{rho(f),rho(g)} - rho([f,g])|| at the limit
  bool defects_vanishing = false;
  std::string verdict;  // defects_vanish_and_limit_holds |
                        // defects_vanish_but_limit_bracket_fails |
                        // defects_do_not_vanish
  // "pseudo-representation" when the defects vanish, else the negation
  std::string classification;
};

LimitCheckReport limit_representation_check(const PseudoRepresentation& rep,
                                            const std::vector<double>& f,
                                            const std::vector<double>& g,
                                            double limit_tol = 1e-6,
                                            int random_pairs = 256,
                                            unsigned seed = 20260816u);

// basis label when x is a basis vector, otherwise a rendered combination
std::string element_label(const NormedLieAlgebra& algebra,
                          const std::vector<double>& x);

}  // namespace bracketlab
