#include "bracketlab/golden.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <stdexcept>
#include <vector>

#include <json.hpp>

#include "bracketlab/geometry.hpp"

namespace bracketlab {

namespace {

double kahan_sum(const std::vector<double>& terms) {
  double sum = 0.0, carry = 0.0;
  for (const double t : terms) {
    const double y = t - carry;
    const double u = sum + y;
    carry = (u - sum) - y;
    sum = u;
  }
  return sum;
}

// |chi * chi'| for the radius-R profile
double profile_product(double u, double R) {
  return std::abs(bump_value(u / R) * bump_derivative(u / R) / R);
}

// dense scan then bisection on a filtered derivative; the zero crossing is
// sharp even though the max itself is flat
void locate_profile_max(double R, double& max_out, double& argmax_out) {
  const int scan = 1000000;
  double best = 0.0;
  int best_i = 1;
  for (int i = 1; i < scan; ++i) {
    const double u = R * i / scan;
    const double v = profile_product(u, R);
    if (v > best) {
      best = v;
      best_i = i;
    }
  }
  const double h_scan = R / scan;
  const double fd = 1e-5 * R;
  const auto deriv = [&](double u) {
    return (profile_product(u + fd, R) - profile_product(u - fd, R)) /
           (2.0 * fd);
  };
  double lo = R * best_i / scan - 2.0 * h_scan;
  double hi = R * best_i / scan + 2.0 * h_scan;
  lo = std::max(lo, 4.0 * fd);
  hi = std::min(hi, R - 4.0 * fd);
  if (deriv(lo) <= 0.0 || deriv(hi) >= 0.0) {
    lo = std::max(R * best_i / scan - 64.0 * h_scan, 4.0 * fd);
    hi = std::min(R * best_i / scan + 64.0 * h_scan, R - 4.0 * fd);
  }
  for (int it = 0; it < 120; ++it) {
    const double mid = 0.5 * (lo + hi);
    (deriv(mid) > 0.0 ? lo : hi) = mid;
  }
  argmax_out = 0.5 * (lo + hi);
  max_out = std::max(best, profile_product(argmax_out, R));
}

// sixth-order Richardson ladder over central differences
double richardson_partial(const std::function<double(double, double)>& f,
                          double s, double th, bool in_s, double h) {
  const auto central = [&](double step) {
    return in_s ? (f(s + step, th) - f(s - step, th)) / (2.0 * step)
                : (f(s, th + step) - f(s, th - step)) / (2.0 * step);
  };
  const double d1a = central(h), d1b = central(h / 2), d1c = central(h / 4);
  const double d2a = (4.0 * d1b - d1a) / 3.0;
  const double d2b = (4.0 * d1c - d1b) / 3.0;
  return (16.0 * d2b - d2a) / 15.0;
}

double cylinder_constant_fd() {
  const Chart chart = make_chart(ChartKind::cylinder_s1);
  const auto f = [](double s, double th) {
    return std::exp(s / 2.0) * std::cos(th);
  };
  const auto g = [](double s, double th) {
    return std::exp(s / 2.0) * std::sin(th);
  };
  const double s = 0.3, th = 0.7, h = 0.02;
  const double grad_f[2] = {richardson_partial(f, s, th, true, h),
                            richardson_partial(f, s, th, false, h)};
  const double grad_g[2] = {richardson_partial(g, s, th, true, h),
                            richardson_partial(g, s, th, false, h)};
  const double x[2] = {s, th};
  return chart.bracket_from_gradients(Point(x, 2),
                                      std::span<const double>(grad_f, 2),
                                      std::span<const double>(grad_g, 2));
}

// e - sum_{j<10} 1/j! via backward summation of the tail itself
double tail_spot_backward() {
  long double acc = 0.0L;
  long double term = 1.0L;
  for (int j = 1; j <= 40; ++j) term /= j;  // 1/40!
  for (int j = 40; j >= 10; --j) {
    acc += term;
    term *= j;  // now 1/(j-1)!
  }
  return static_cast<double>(acc);
}

double pairing_quadrature(double R) {
  const SmoothFn phi = radial_bump({0.0, 0.4}, 0.5);
  const int nq = 4096, np = 4096;
  const double q_lo = -0.6, q_hi = 0.6, p_lo = -0.2, p_hi = 1.0;
  const double hq = (q_hi - q_lo) / nq, hp = (p_hi - p_lo) / np;
  std::vector<double> rows(static_cast<std::size_t>(np) + 1);
  std::vector<double> cells(static_cast<std::size_t>(nq) + 1);
  for (int j = 0; j <= np; ++j) {
    const double p = p_lo + j * hp;
    const double prof = bump_value(p / R) * bump_derivative(p / R) / R;
    const double wp = (j == 0 || j == np) ? 0.5 : 1.0;
    for (int i = 0; i <= nq; ++i) {
      const double q = q_lo + i * hq;
      const double wq = (i == 0 || i == nq) ? 0.5 : 1.0;
      const double pt[2] = {q, p};
      cells[static_cast<std::size_t>(i)] =
          wq * prof * phi.value(Point(pt, 2));
    }
    rows[static_cast<std::size_t>(j)] = wp * kahan_sum(cells);
  }
  return std::abs(kahan_sum(rows) * hq * hp);
}

// Simpson with Kahan accumulation on [lo, hi]
double simpson(const std::function<double(double)>& f, double lo, double hi,
               int intervals) {
  const double h = (hi - lo) / intervals;
  std::vector<double> terms(static_cast<std::size_t>(intervals) + 1);
  for (int i = 0; i <= intervals; ++i) {
    const double w =
        (i == 0 || i == intervals) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
    terms[static_cast<std::size_t>(i)] = w * f(lo + i * h);
  }
  return kahan_sum(terms) * h / 3.0;
}

}  // namespace

const GoldenTable& builtin_golden() {
  static const GoldenTable table = [] {
    GoldenTable t;
    t.chi_chiprime_max = 0.9557788247534759;
    t.chi_argmax = 0.5773502691896258;
    t.kappa_cylinder = 0.5;
    t.kappa_quoted = 2.0;
    t.tail_spot = 3.0288585299550138e-7;
    t.pairing_constant = 0.21579178337288689;
    t.bump_integral_1d = 1.2069003224378762;
    t.bump_integral_2d = 1.2681121611275961;
    return t;
  }();
  return table;
}

GoldenTable computed_golden(double chi_radius) {
  if (!(chi_radius > 0.0) || !std::isfinite(chi_radius)) {
    throw std::invalid_argument("chi radius must be positive");
  }
  GoldenTable t;
  locate_profile_max(chi_radius, t.chi_chiprime_max, t.chi_argmax);
  t.kappa_cylinder = cylinder_constant_fd();
  t.kappa_quoted = 2.0;  // recorded external figure, never recomputed
  t.tail_spot = tail_spot_backward();
  t.pairing_constant = pairing_quadrature(chi_radius);
  t.bump_integral_1d =
      simpson([](double u) { return bump_value(u); }, -1.0, 1.0, 200000);
  t.bump_integral_2d =
      2.0 * std::acos(-1.0) *
      simpson([](double r) { return r * bump_value(r); }, 0.0, 1.0, 200000);
  return t;
}

GoldenTable computed_golden() { return computed_golden(1.0); }

namespace {

using ordered_json = nlohmann::ordered_json;

struct Entry {
  const char* name;
  double GoldenTable::* field;
};

constexpr Entry kEntries[] = {
    {"chi_chiprime_max", &GoldenTable::chi_chiprime_max},
    {"chi_argmax", &GoldenTable::chi_argmax},
    {"kappa_cylinder", &GoldenTable::kappa_cylinder},
    {"kappa_quoted", &GoldenTable::kappa_quoted},
    {"tail_spot", &GoldenTable::tail_spot},
    {"pairing_constant", &GoldenTable::pairing_constant},
    {"bump_integral_1d", &GoldenTable::bump_integral_1d},
    {"bump_integral_2d", &GoldenTable::bump_integral_2d},
};

}  // namespace

GoldenTable load_golden(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open golden file: " + path);
  ordered_json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw std::runtime_error("golden file is not valid json: " +
                             std::string(e.what()));
  }
  if (!j.contains("values") || !j["values"].is_object()) {
    throw std::runtime_error("golden file has no values block");
  }
  GoldenTable t;
  for (const auto& e : kEntries) {
    if (!j["values"].contains(e.name)) {
      throw std::runtime_error(std::string("golden file misses ") + e.name);
    }
    t.*(e.field) = j["values"][e.name].get<double>();
  }
  return t;
}

void save_golden(const GoldenTable& table, const std::string& path,
                 double chi_radius) {
  ordered_json j;
  j["meta"] = {{"generator", "bracketlab golden"},
               {"format", 1},
               {"chi_radius", chi_radius},
               {"gate", 1e-9}};
  ordered_json values;
  for (const auto& e : kEntries) values[e.name] = table.*(e.field);
  j["values"] = values;
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write golden file: " + path);
  out << j.dump(2) << "\n";
}

std::vector<GoldenDiff> compare_golden(const GoldenTable& stored,
                                       const GoldenTable& computed,
                                       double gate) {
  std::vector<GoldenDiff> out;
  for (const auto& e : kEntries) {
    GoldenDiff d;
    d.name = e.name;
    d.stored = stored.*(e.field);
    d.computed = computed.*(e.field);
    d.diff = std::abs(d.stored - d.computed);
    if (d.diff > gate) out.push_back(d);
  }
  return out;
}

}  // namespace bracketlab
