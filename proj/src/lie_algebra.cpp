#include "bracketlab/lie_algebra.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

#include <json.hpp>

namespace bracketlab {

std::string to_string(CoefficientNorm norm) {
  return norm == CoefficientNorm::max_coefficient ? "max_coefficient"
                                                  : "sum_coefficient";
}

CoefficientNorm coefficient_norm_from_string(const std::string& name) {
  if (name == "max_coefficient") return CoefficientNorm::max_coefficient;
  if (name == "sum_coefficient") return CoefficientNorm::sum_coefficient;
  throw std::invalid_argument("unknown coefficient norm: " + name);
}

NormedLieAlgebra::NormedLieAlgebra(int dim, std::vector<std::string> labels,
                                   CoefficientNorm norm)
    : dim_(dim), labels_(std::move(labels)), norm_(norm) {
  if (dim_ < 1 || dim_ > 64) {
    throw std::invalid_argument("algebra dimension out of range");
  }
  if (labels_.empty()) {
    for (int i = 0; i < dim_; ++i) labels_.push_back("e" + std::to_string(i + 1));
  }
  if (static_cast<int>(labels_.size()) != dim_) {
    throw std::invalid_argument("label count does not match dimension");
  }
  c_.assign(static_cast<std::size_t>(dim_) * dim_ * dim_, 0.0);
}

void NormedLieAlgebra::set_structure(int i, int j, int k, double value) {
  if (i < 0 || j < 0 || k < 0 || i >= dim_ || j >= dim_ || k >= dim_) {
    throw std::out_of_range("structure index out of range");
  }
  if (i == j && value != 0.0) {
    throw std::invalid_argument("[e_i,e_i] must vanish");
  }
  const auto d = static_cast<std::size_t>(dim_);
  c_[(static_cast<std::size_t>(i) * d + j) * d + k] = value;
  c_[(static_cast<std::size_t>(j) * d + i) * d + k] = -value;
}

double NormedLieAlgebra::structure(int i, int j, int k) const {
  const auto d = static_cast<std::size_t>(dim_);
  return c_[(static_cast<std::size_t>(i) * d + j) * d + k];
}

void NormedLieAlgebra::validate() const {
  constexpr double kSlack = 1e-12;
  for (int i = 0; i < dim_; ++i) {
    for (int j = 0; j < dim_; ++j) {
      for (int k = 0; k < dim_; ++k) {
        if (std::abs(structure(i, j, k) + structure(j, i, k)) > kSlack) {
          throw std::invalid_argument("structure constants not antisymmetric");
        }
      }
    }
  }
  // [[e_i,e_j],e_k] + [[e_j,e_k],e_i] + [[e_k,e_i],e_j] = 0
  for (int i = 0; i < dim_; ++i) {
    for (int j = i + 1; j < dim_; ++j) {
      for (int k = j + 1; k < dim_; ++k) {
        for (int m = 0; m < dim_; ++m) {
          double s = 0.0;
          for (int l = 0; l < dim_; ++l) {
            s += structure(i, j, l) * structure(l, k, m) +
                 structure(j, k, l) * structure(l, i, m) +
                 structure(k, i, l) * structure(l, j, m);
          }
          if (std::abs(s) > kSlack) {
            throw std::invalid_argument("Jacobi identity fails");
          }
        }
      }
    }
  }
}

std::vector<double> NormedLieAlgebra::bracket(
    const std::vector<double>& x, const std::vector<double>& y) const {
  if (static_cast<int>(x.size()) != dim_ ||
      static_cast<int>(y.size()) != dim_) {
    throw std::invalid_argument("vector dimension mismatch");
  }
  std::vector<double> out(static_cast<std::size_t>(dim_), 0.0);
  for (int i = 0; i < dim_; ++i) {
    if (x[static_cast<std::size_t>(i)] == 0.0) continue;
    for (int j = 0; j < dim_; ++j) {
      const double xy =
          x[static_cast<std::size_t>(i)] * y[static_cast<std::size_t>(j)];
      if (xy == 0.0) continue;
      for (int k = 0; k < dim_; ++k) {
        out[static_cast<std::size_t>(k)] += xy * structure(i, j, k);
      }
    }
  }
  return out;
}

double NormedLieAlgebra::norm(const std::vector<double>& x) const {
  if (static_cast<int>(x.size()) != dim_) {
    throw std::invalid_argument("vector dimension mismatch");
  }
  double m = 0.0;
  for (double v : x) {
    if (norm_ == CoefficientNorm::max_coefficient) {
      m = std::max(m, std::abs(v));
    } else {
      m += std::abs(v);
    }
  }
  return m;
}

std::vector<std::vector<double>> NormedLieAlgebra::ad_powers(
    const std::vector<double>& f, const std::vector<double>& g,
    int count) const {
  if (count < 0) throw std::invalid_argument("count must be non-negative");
  std::vector<std::vector<double>> out;
  out.reserve(static_cast<std::size_t>(count) + 1);
  out.push_back(f);
  for (int j = 0; j < count; ++j) out.push_back(bracket(out.back(), g));
  return out;
}

double NormedLieAlgebra::bracket_norm_constant(int random_pairs,
                                               unsigned seed) const {
  double c = 0.0;
  std::vector<double> x(static_cast<std::size_t>(dim_), 0.0);
  std::vector<double> y(static_cast<std::size_t>(dim_), 0.0);
  for (int i = 0; i < dim_; ++i) {
    x.assign(x.size(), 0.0);
    x[static_cast<std::size_t>(i)] = 1.0;
    for (int j = 0; j < dim_; ++j) {
      y.assign(y.size(), 0.0);
      y[static_cast<std::size_t>(j)] = 1.0;
      c = std::max(c, norm(bracket(x, y)));
    }
  }
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const auto draw_unit = [&](std::vector<double>& v) {
    double n;
    do {
      for (auto& e : v) e = gauss(rng);
      n = norm(v);
    } while (n < 1e-12);
    for (auto& e : v) e /= n;
  };
  for (int p = 0; p < random_pairs; ++p) {
    draw_unit(x);
    draw_unit(y);
    c = std::max(c, norm(bracket(x, y)));
  }
  return c;
}

std::string NormedLieAlgebra::to_json() const {
  nlohmann::ordered_json j;
  j["dim"] = dim_;
  j["labels"] = labels_;
  j["norm"] = to_string(norm_);
  auto& triples = j["brackets"] = nlohmann::ordered_json::array();
  for (int i = 0; i < dim_; ++i) {
    for (int jj = i + 1; jj < dim_; ++jj) {
      for (int k = 0; k < dim_; ++k) {
        const double v = structure(i, jj, k);
        if (v != 0.0) triples.push_back({i, jj, k, v});
      }
    }
  }
  return j.dump(2);
}

NormedLieAlgebra NormedLieAlgebra::from_json(const std::string& text) {
  const auto j = nlohmann::json::parse(text);
  const int dim = j.at("dim").get<int>();
  std::vector<std::string> labels;
  if (j.contains("labels")) {
    labels = j.at("labels").get<std::vector<std::string>>();
  }
  const CoefficientNorm norm =
      j.contains("norm")
          ? coefficient_norm_from_string(j.at("norm").get<std::string>())
          : CoefficientNorm::max_coefficient;
  NormedLieAlgebra alg(dim, std::move(labels), norm);
  for (const auto& t : j.at("brackets")) {
    if (!t.is_array() || t.size() != 4) {
      throw std::invalid_argument("bracket entries are [i, j, k, value]");
    }
    alg.set_structure(t[0].get<int>(), t[1].get<int>(), t[2].get<int>(),
                      t[3].get<double>());
  }
  alg.validate();
  return alg;
}

NormedLieAlgebra heisenberg3() {
  NormedLieAlgebra alg(3, {"X", "Y", "Z"});
  alg.set_structure(0, 1, 2, 1.0);
  alg.validate();
  return alg;
}

NormedLieAlgebra free_nilpotent2(int generators) {
  if (generators < 2) {
    throw std::invalid_argument("need at least two generators");
  }
  const int pairs = generators * (generators - 1) / 2;
  std::vector<std::string> labels;
  for (int i = 0; i < generators; ++i) {
    labels.push_back("g" + std::to_string(i + 1));
  }
  for (int i = 0; i < generators; ++i) {
    for (int j = i + 1; j < generators; ++j) {
      labels.push_back("z" + std::to_string(i + 1) + std::to_string(j + 1));
    }
  }
  NormedLieAlgebra alg(generators + pairs, std::move(labels));
  int next = generators;
  for (int i = 0; i < generators; ++i) {
    for (int j = i + 1; j < generators; ++j) {
      alg.set_structure(i, j, next++, 1.0);
    }
  }
  alg.validate();
  return alg;
}

NormedLieAlgebra abelian(int d, CoefficientNorm norm) {
  NormedLieAlgebra alg(d, {}, norm);
  alg.validate();
  return alg;
}

}  // namespace bracketlab
