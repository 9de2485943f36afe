#include "bracketlab/pseudo_rep.hpp"

#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>

#include "bracketlab/kernels.hpp"

namespace bracketlab {

namespace {

std::vector<double> basis_vector(int dim, int i) {
  std::vector<double> e(static_cast<std::size_t>(dim), 0.0);
  e[static_cast<std::size_t>(i)] = 1.0;
  return e;
}

// unit vector in the algebra norm, gaussian direction
void draw_unit(const NormedLieAlgebra& alg, std::mt19937_64& rng,
               std::vector<double>& v) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  double n = 0.0;
  do {
    for (auto& e : v) e = gauss(rng);
    n = alg.norm(v);
  } while (n < 1e-12);
  for (auto& e : v) e /= n;
}

// coefficient vector of sum_{j=0..N} ad(g)^j f s^j / j!
std::vector<double> series_vector(const NormedLieAlgebra& alg,
                                  const std::vector<double>& f,
                                  const std::vector<double>& g, double s,
                                  int N) {
  const auto powers = alg.ad_powers(f, g, N);
  std::vector<double> w(f.size(), 0.0);
  double coef = 1.0;
  for (int j = 0; j <= N; ++j) {
    if (j > 0) coef *= s / j;
    for (std::size_t i = 0; i < w.size(); ++i) {
      w[i] += coef * powers[static_cast<std::size_t>(j)][i];
    }
  }
  return w;
}

}  // namespace

const std::vector<HamiltonianField>& PseudoRepresentation::images_at(
    int n) const {
  const auto it = basis_images.find(n);
  if (it == basis_images.end()) {
    throw std::out_of_range("unknown family index " + std::to_string(n));
  }
  if (static_cast<int>(it->second.size()) != algebra.dim()) {
    throw std::invalid_argument("basis image count does not match algebra");
  }
  return it->second;
}

HamiltonianField rho(const PseudoRepresentation& rep, int n,
                     const std::vector<double>& x) {
  if (static_cast<int>(x.size()) != rep.algebra.dim()) {
    throw std::invalid_argument("element dimension mismatch");
  }
  const auto& images = rep.images_at(n);
  std::vector<std::pair<double, SmoothFn>> terms;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] != 0.0) terms.emplace_back(x[i], images[i].fn);
  }
  const double step = images.empty() ? 1e-5 : images[0].fd_step;
  return HamiltonianField{rep.chart, smooth_combination(std::move(terms)),
                          step};
}

HamiltonianField rho_limit(const PseudoRepresentation& rep,
                           const std::vector<double>& x) {
  if (!rep.limit_images) {
    throw std::invalid_argument("family has no limit images");
  }
  if (static_cast<int>(x.size()) != rep.algebra.dim() ||
      static_cast<int>(rep.limit_images->size()) != rep.algebra.dim()) {
    throw std::invalid_argument("element dimension mismatch");
  }
  std::vector<std::pair<double, SmoothFn>> terms;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] != 0.0) terms.emplace_back(x[i], (*rep.limit_images)[i].fn);
  }
  return HamiltonianField{rep.chart, smooth_combination(std::move(terms)),
                          1e-5};
}

GridField defect_field(const PseudoRepresentation& rep, int n,
                       const std::vector<double>& f,
                       const std::vector<double>& g,
                       const BracketOptions& opt) {
  const auto F = rho(rep, n, f);
  const auto G = rho(rep, n, g);
  const auto Fs = sample_field(rep.chart, rep.grid, F.fn, opt.exec);
  const auto Gs = sample_field(rep.chart, rep.grid, G.fn, opt.exec);
  GridField out = poisson_bracket(Fs, Gs, opt);
  const auto H = rho(rep, n, rep.algebra.bracket(f, g));
  const auto Hs = sample_field(rep.chart, rep.grid, H.fn, opt.exec);
  for (std::size_t i = 0; i < out.samples.size(); ++i) {
    out.samples[i] -= Hs.samples[i];
  }
  if (out.analytic) {
    out.analytic =
        smooth_combination({{1.0, *out.analytic}, {-1.0, H.fn}});
  }
  return out;
}

DefectReport defect_norm(const PseudoRepresentation& rep, int n,
                         int random_pairs, unsigned seed) {
  const int d = rep.algebra.dim();
  DefectReport rpt;
  rpt.n = n;
  rpt.sample_pairs = random_pairs;
  rpt.rep_norm_estimate = rep_norm_estimate(rep, n, random_pairs, seed);
  rpt.bracket_constant = rep.algebra.bracket_norm_constant();
  rpt.argmax_f = basis_vector(d, 0);
  rpt.argmax_g = basis_vector(d, d > 1 ? 1 : 0);

  // defect is bilinear and antisymmetric: every pair is a combination of the
  // basis defect fields with weights x_i y_j - x_j y_i
  std::vector<std::vector<double>> basis_defects;
  std::vector<std::pair<int, int>> pairs;
  for (int i = 0; i < d; ++i) {
    for (int j = i + 1; j < d; ++j) {
      basis_defects.push_back(
          defect_field(rep, n, basis_vector(d, i), basis_vector(d, j))
              .samples);
      pairs.emplace_back(i, j);
    }
  }
  if (basis_defects.empty()) {
    rpt.f_label = element_label(rep.algebra, rpt.argmax_f);
    rpt.g_label = element_label(rep.algebra, rpt.argmax_g);
    return rpt;
  }

  double best = -1.0;
  const auto consider = [&](const std::vector<double>& samples,
                            const std::vector<double>& x,
                            const std::vector<double>& y) {
    const double v = kernels::reduce_max_abs(samples, Exec::parallel);
    if (v > best) {
      best = v;
      rpt.argmax_f = x;
      rpt.argmax_g = y;
    }
  };

  for (std::size_t k = 0; k < pairs.size(); ++k) {
    consider(basis_defects[k], basis_vector(d, pairs[k].first),
             basis_vector(d, pairs[k].second));
  }

  std::mt19937_64 rng(seed);
  std::vector<double> x(static_cast<std::size_t>(d));
  std::vector<double> y(static_cast<std::size_t>(d));
  std::vector<double> combo(rep.grid.size());
  for (int p = 0; p < random_pairs; ++p) {
    draw_unit(rep.algebra, rng, x);
    draw_unit(rep.algebra, rng, y);
    std::fill(combo.begin(), combo.end(), 0.0);
    for (std::size_t k = 0; k < pairs.size(); ++k) {
      const auto [i, j] = pairs[k];
      const double w = x[static_cast<std::size_t>(i)] *
                           y[static_cast<std::size_t>(j)] -
                       x[static_cast<std::size_t>(j)] *
                           y[static_cast<std::size_t>(i)];
      if (w == 0.0) continue;
      const auto& src = basis_defects[k];
      for (std::size_t m = 0; m < combo.size(); ++m) combo[m] += w * src[m];
    }
    consider(combo, x, y);
  }

  rpt.defect_norm_estimate = std::max(best, 0.0);
  rpt.f_label = element_label(rep.algebra, rpt.argmax_f);
  rpt.g_label = element_label(rep.algebra, rpt.argmax_g);
  return rpt;
}

double rep_norm_estimate(const PseudoRepresentation& rep, int n,
                         int random_pairs, unsigned seed) {
  const int d = rep.algebra.dim();
  std::vector<std::vector<double>> images;
  for (int i = 0; i < d; ++i) {
    images.push_back(
        sample_field(rep.chart, rep.grid, rho(rep, n, basis_vector(d, i)).fn)
            .samples);
  }
  double best = 0.0;
  for (const auto& s : images) {
    best = std::max(best, kernels::reduce_max_abs(s, Exec::parallel));
  }
  std::mt19937_64 rng(seed);
  std::vector<double> x(static_cast<std::size_t>(d));
  std::vector<double> combo(rep.grid.size());
  for (int p = 0; p < random_pairs; ++p) {
    draw_unit(rep.algebra, rng, x);
    std::fill(combo.begin(), combo.end(), 0.0);
    for (int i = 0; i < d; ++i) {
      const double w = x[static_cast<std::size_t>(i)];
      if (w == 0.0) continue;
      const auto& src = images[static_cast<std::size_t>(i)];
      for (std::size_t m = 0; m < combo.size(); ++m) combo[m] += w * src[m];
    }
    best = std::max(best, kernels::reduce_max_abs(combo, Exec::parallel));
  }
  return best;
}

double uniform_rep_norm(const PseudoRepresentation& rep, int random_pairs,
                        unsigned seed) {
  double best = 0.0;
  for (const int n : rep.n_set) {
    best = std::max(best, rep_norm_estimate(rep, n, random_pairs, seed));
  }
  return best;
}

GridField ad_series(const PseudoRepresentation& rep, int n,
                    const std::vector<double>& f, const std::vector<double>& g,
                    double s, int N) {
  if (N < 0) throw std::invalid_argument("series order must be >= 0");
  const auto w = series_vector(rep.algebra, f, g, s, N);
  return sample_field(rep.chart, rep.grid, rho(rep, n, w).fn);
}

double exp_tail_series(double x, int N) {
  if (x < 0.0 || N < 0) {
    throw std::invalid_argument("tail series needs x >= 0, N >= 0");
  }
  if (x == 0.0) return N == 0 ? 1.0 : 0.0;
  // leading term x^N / N!
  double term = 1.0;
  for (int j = 1; j <= N; ++j) term *= x / j;
  double sum = 0.0, comp = 0.0;
  int j = N;
  while (true) {
    const double add = term - comp;
    const double next = sum + add;
    comp = (next - sum) - add;
    sum = next;
    ++j;
    term *= x / j;
    if (!std::isfinite(term)) return term;
    // past the peak j > x the terms decay geometrically
    if (j > x && term < sum * 1e-18 + 1e-300) break;
    if (j > N + 2000000) break;
  }
  return sum;
}

double tail_bound(double R, double C, double norm_f, double norm_g, double s,
                  int N) {
  if (R < 0.0 || C < 0.0 || norm_f < 0.0 || norm_g < 0.0 || s < 0.0 || N < 0) {
    throw std::invalid_argument("tail bound needs non-negative arguments");
  }
  if (R == 0.0 || norm_f == 0.0) return 0.0;
  return R * norm_f * exp_tail_series(s * C * norm_g, N);
}

SeriesComparisonReport lemma3_residual(const PseudoRepresentation& rep, int n,
                                       const std::vector<double>& f,
                                       const std::vector<double>& g, double s,
                                       int N, const Lemma3Options& opt) {
  if (N < 0) throw std::invalid_argument("series order must be >= 0");
  SeriesComparisonReport r;
  r.n = n;
  r.s = s;
  r.N = N;
  r.slack = opt.slack;
  r.atol = opt.atol;
  r.f_label = element_label(rep.algebra, f);
  r.g_label = element_label(rep.algebra, g);

  const GridSpec& fg = opt.flow_grid ? *opt.flow_grid : rep.grid;
  const auto F = rho(rep, n, f);
  const auto G = rho(rep, n, g);
  const auto pulled = pullback(F.fn, G, s, fg, opt.flow, opt.exec);
  const auto w = series_vector(rep.algebra, f, g, s, N);
  const auto series = sample_field(rep.chart, fg, rho(rep, n, w).fn, opt.exec);
  std::vector<double> diff(pulled.samples.size());
  for (std::size_t i = 0; i < diff.size(); ++i) {
    diff[i] = pulled.samples[i] - series.samples[i];
  }
  r.residual = kernels::reduce_max_abs(diff, opt.exec);

  const auto dn = defect_norm(rep, n, opt.random_pairs, opt.seed);
  const double nf = rep.algebra.norm(f);
  const double ng = rep.algebra.norm(g);
  const double sa = std::abs(s);
  r.defect_part = dn.defect_norm_estimate * nf * std::exp(sa * ng);

  const double R = uniform_rep_norm(rep, opt.random_pairs, opt.seed);
  r.rep_norm_uniform = R;
  const double Cw = dn.safety_factor * dn.bracket_constant;

  // exact ad-power norms up to order J, geometric envelope beyond
  constexpr int J = 31;
  const auto powers = rep.algebra.ad_powers(f, g, J);
  double tail = 0.0, comp = 0.0;
  double coef = 1.0;
  for (int j = 1; j <= J; ++j) {
    coef *= sa / j;
    if (j <= N) continue;
    const double add =
        R * rep.algebra.norm(powers[static_cast<std::size_t>(j)]) * coef -
        comp;
    const double next = tail + add;
    comp = (next - tail) - add;
    tail = next;
  }
  const double topnorm = rep.algebra.norm(powers[J]);
  if (topnorm > 0.0 && Cw * ng > 0.0) {
    tail += R * topnorm * std::pow(Cw * ng, -J) *
            exp_tail_series(sa * Cw * ng, J + 1);
  }
  r.tail_part = tail;
  r.bound = r.defect_part + r.tail_part;
  r.tail_generic = tail_bound(R, Cw, nf, ng, sa, N + 1);
  r.bound_generic = r.defect_part + r.tail_generic;
  r.pass = r.residual <= opt.slack * r.bound + opt.atol;
  return r;
}

LimitCheckReport limit_representation_check(const PseudoRepresentation& rep,
                                            const std::vector<double>& f,
                                            const std::vector<double>& g,
                                            double limit_tol, int random_pairs,
                                            unsigned seed) {
  if (!rep.limit_images) {
    throw std::invalid_argument("family has no limit images");
  }
  LimitCheckReport rpt;
  const int d = rep.algebra.dim();
  for (const int n : rep.n_set) {
    rpt.n_values.push_back(n);
    rpt.defect_norms.push_back(
        defect_norm(rep, n, random_pairs, seed).defect_norm_estimate);
    double gap = 0.0;
    for (int i = 0; i < d; ++i) {
      const auto e = basis_vector(d, i);
      const auto a = sample_field(rep.chart, rep.grid, rho(rep, n, e).fn);
      const auto b = sample_field(rep.chart, rep.grid, rho_limit(rep, e).fn);
      std::vector<double> diff(a.samples.size());
      for (std::size_t m = 0; m < diff.size(); ++m) {
        diff[m] = a.samples[m] - b.samples[m];
      }
      gap = std::max(gap, kernels::reduce_max_abs(diff, Exec::parallel));
    }
    rpt.image_gaps.push_back(gap);
  }
  for (std::size_t k = 0; k + 1 < rpt.image_gaps.size(); ++k) {
    if (rpt.image_gaps[k + 1] > 1.1 * rpt.image_gaps[k] + 1e-12) {
      rpt.image_gaps_nonincreasing = false;
    }
  }

  const auto F = rho_limit(rep, f);
  const auto G = rho_limit(rep, g);
  const auto Fs = sample_field(rep.chart, rep.grid, F.fn);
  const auto Gs = sample_field(rep.chart, rep.grid, G.fn);
  const auto B = poisson_bracket(Fs, Gs);
  const auto Hs =
      sample_field(rep.chart, rep.grid, rho_limit(rep, rep.algebra.bracket(f, g)).fn);
  std::vector<double> diff(B.samples.size());
  for (std::size_t m = 0; m < diff.size(); ++m) {
    diff[m] = B.samples[m] - Hs.samples[m];
  }
  rpt.limit_residual = kernels::reduce_max_abs(diff, Exec::parallel);

  if (!rpt.defect_norms.empty()) {
    const double first = rpt.defect_norms.front();
    const double last = rpt.defect_norms.back();
    rpt.defects_vanishing = rpt.defect_norms.size() == 1
                                ? last <= 1e-9
                                : last <= 0.5 * first + 1e-9;
  }
  rpt.classification = rpt.defects_vanishing ? "pseudo-representation"
                                              : "not a pseudo-representation";
  if (!rpt.defects_vanishing) {
    rpt.verdict = "defects_do_not_vanish";
  } else if (rpt.limit_residual > limit_tol) {
    rpt.verdict = "defects_vanish_but_limit_bracket_fails";
  } else {
    rpt.verdict = "defects_vanish_and_limit_holds";
  }
  return rpt;
}

std::string element_label(const NormedLieAlgebra& algebra,
                          const std::vector<double>& x) {
  int nonzero = 0;
  std::size_t last = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] != 0.0) {
      ++nonzero;
      last = i;
    }
  }
  if (nonzero == 0) return "0";
  if (nonzero == 1 && std::abs(x[last]) == 1.0) {
    return (x[last] < 0.0 ? "-" : "") + algebra.labels()[last];
  }
  std::ostringstream os;
  bool first = true;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] == 0.0) continue;
    if (!first && x[i] > 0.0) os << "+";
    first = false;
    if (x[i] == -1.0) {
      os << "-";
    } else if (x[i] != 1.0) {
      os << x[i] << "*";
    }
    os << algebra.labels()[i];
  }
  return os.str();
}

}  // namespace bracketlab
