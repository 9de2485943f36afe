#pragma once
// Finite-dimensional normed Lie algebras with dense structure constants,
// iterated adjoint actions, and sampled bracket-norm constants.

#include <string>
#include <vector>

namespace bracketlab {

enum class CoefficientNorm { max_coefficient, sum_coefficient };

std::string to_string(CoefficientNorm norm);
CoefficientNorm coefficient_norm_from_string(const std::string& name);

// [e_i, e_j] = sum_k c[i][j][k] e_k over a fixed basis
class NormedLieAlgebra {
 public:
  NormedLieAlgebra(int dim, std::vector<std::string> labels,
                   CoefficientNorm norm = CoefficientNorm::max_coefficient);

  int dim() const { return dim_; }
  const std::vector<std::string>& labels() const { return labels_; }
  CoefficientNorm norm_kind() const { return norm_; }

  void set_structure(int i, int j, int k, double value);  // also sets (j,i,k)
  double structure(int i, int j, int k) const;

  // antisymmetry and the Jacobi identity on basis triples, slack <= 1e-12
  void validate() const;

  std::vector<double> bracket(const std::vector<double>& x,
                              const std::vector<double>& y) const;
  double norm(const std::vector<double>& x) const;

  // v_0 = f, v_{j+1} = [v_j, g]; returns v_0..v_count
  std::vector<std::vector<double>> ad_powers(const std::vector<double>& f,
                                             const std::vector<double>& g,
                                             int count) const;

  // smallest sampled C with ||[x,y]|| <= C ||x|| ||y||: exact over basis
  // pairs, then random unit pairs from a fixed seed
  double bracket_norm_constant(int random_pairs = 10000,
                               unsigned seed = 971u) const;

  std::string to_json() const;
  static NormedLieAlgebra from_json(const std::string& text);

 private:
  int dim_;
  std::vector<std::string> labels_;
  CoefficientNorm norm_;
  std::vector<double> c_;  // dim^3, row-major (i,j,k)
};

// [X,Y] = Z on basis (X,Y,Z)
NormedLieAlgebra heisenberg3();
// free 2-step nilpotent algebra on n generators; dim n + n(n-1)/2
NormedLieAlgebra free_nilpotent2(int generators);
// zero bracket in dimension d
NormedLieAlgebra abelian(int d, CoefficientNorm norm =
                                    CoefficientNorm::max_coefficient);

}  // namespace bracketlab
