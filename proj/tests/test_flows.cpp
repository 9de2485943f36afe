#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "bracketlab/flows.hpp"
#include "bracketlab/gallery.hpp"

using namespace bracketlab;

namespace {

const double kPi = std::acos(-1.0);

HamiltonianField oscillator() {
  const Chart cart = make_chart(ChartKind::cartesian);
  SmoothFn h;
  h.value = [](Point x) { return 0.5 * (x[0] * x[0] + x[1] * x[1]); };
  h.gradient = [](Point x, std::span<double> g) {
    g[0] = x[0];
    g[1] = x[1];
  };
  return make_hamiltonian(cart, h);
}

}  // namespace

TEST_CASE("oscillator returns after one period") {
  const auto H = oscillator();
  const double start[2] = {1.0, 0.0};
  const auto traj = advance_flow(H, Point(start, 2), 2.0 * kPi);
  const auto& end = traj.states.back();
  CHECK(std::abs(end[0] - 1.0) <= 1e-6);
  CHECK(std::abs(end[1]) <= 1e-6);
  double drift = 0.0;
  for (const double e : traj.energies) {
    drift = std::max(drift, std::abs(e - traj.energies.front()));
  }
  CHECK(drift <= 1e-9);
}

TEST_CASE("gradient probe rejects an inconsistent closed form") {
  const Chart cart = make_chart(ChartKind::cartesian);
  SmoothFn lying;
  lying.value = [](Point x) { return x[0] * x[0]; };
  lying.gradient = [](Point, std::span<double> g) {
    g[0] = 0.0;  // wrong on purpose
    g[1] = 0.0;
  };
  CHECK_THROWS_AS(make_hamiltonian(cart, lying), std::invalid_argument);
}

TEST_CASE("escape region stops runaway flows") {
  const Chart cart = make_chart(ChartKind::cartesian);
  SmoothFn h;
  h.value = [](Point x) { return x[1]; };  // free particle, q runs away
  h.gradient = [](Point, std::span<double> g) {
    g[0] = 0.0;
    g[1] = 1.0;
  };
  const auto H = make_hamiltonian(cart, h);
  const double start[2] = {0.0, 0.0};
  CHECK_THROWS_AS(advance_flow(H, Point(start, 2), 200.0), FlowEscape);
}

TEST_CASE("fixed step endpoint agrees with the adaptive one") {
  const auto H = oscillator();
  const double start[2] = {0.7, -0.4};
  const auto adaptive = flow_endpoint(H, Point(start, 2), 1.0);
  const auto fixed = fixed_step_endpoint(H, Point(start, 2), 1.0, 2000);
  CHECK(std::abs(adaptive[0] - fixed[0]) <= 1e-8);
  CHECK(std::abs(adaptive[1] - fixed[1]) <= 1e-8);
}

TEST_CASE("separable splitting matches the full integrator") {
  const auto H = oscillator();
  // gradients land in the slot of the coordinate they differentiate by
  const auto dT = [](Point x, std::span<double> g) { g[1] = x[1]; };
  const auto dV = [](Point x, std::span<double> g) { g[0] = x[0]; };
  const double start[2] = {0.3, 0.8};
  const auto split = advance_separable(dT, dV, Point(start, 2), 1.5, 20000);
  const auto full = flow_endpoint(H, Point(start, 2), 1.5);
  CHECK(std::abs(split[0] - full[0]) <= 1e-7);
  CHECK(std::abs(split[1] - full[1]) <= 1e-7);
}

TEST_CASE("conjugated flow matches the flow of the pulled-back function") {
  const GalleryEntry entry = gallery("polterovich_polar");
  const auto& f = entry.rep.images_at(4)[0];
  const auto& g = entry.rep.images_at(4)[1];
  const double s = 0.5, t = 0.5;
  const double start[2] = {1.1, 0.9};

  const auto direct = conjugated_flow(f, g, s, t, Point(start, 2));
  const auto pulled = pullback_hamiltonian(f, g, s);
  const auto via_pullback = flow_endpoint(pulled, Point(start, 2), t);
  CHECK(std::abs(direct[0] - via_pullback[0]) <= 1e-4);
  CHECK(std::abs(direct[1] - via_pullback[1]) <= 1e-4);
}

TEST_CASE("commutator flow of commuting functions is the identity") {
  const Chart cart = make_chart(ChartKind::cartesian);
  SmoothFn a;  // depends on q only
  a.value = [](Point x) { return std::sin(x[0]); };
  a.gradient = [](Point x, std::span<double> g) {
    g[0] = std::cos(x[0]);
    g[1] = 0.0;
  };
  SmoothFn b;
  b.value = [](Point x) { return 2.0 * std::sin(0.5 * x[0]); };
  b.gradient = [](Point x, std::span<double> g) {
    g[0] = std::cos(0.5 * x[0]);
    g[1] = 0.0;
  };
  const auto A = make_hamiltonian(cart, a);
  const auto B = make_hamiltonian(cart, b);
  const double start[2] = {0.4, -0.6};
  const auto end = commutator_flow(A, B, 0.7, 0.9, Point(start, 2));
  CHECK(std::abs(end[0] - start[0]) <= 1e-7);
  CHECK(std::abs(end[1] - start[1]) <= 1e-7);
}

TEST_CASE("affine flow is exact for pure affine data") {
  const Chart cart = make_chart(ChartKind::cartesian);
  AffineHamiltonian H;
  H.chart = cart;
  H.linear = {2.0, 0.0};
  H.constant = 3.0;
  CHECK(H.pure_affine());
  const double start[2] = {0.25, -0.5};
  const auto end = affine_flow(H, Point(start, 2), 0.8);
  const auto disp = H.affine_displacement(0.8);
  CHECK(std::abs(end[0] - (start[0] + disp[0])) <= 1e-14);
  CHECK(std::abs(end[1] - (start[1] + disp[1])) <= 1e-14);
  // H = 2q: X points along -2 dp or +2 dp depending on orientation; either
  // way the q component is untouched
  CHECK(disp[0] == 0.0);
  CHECK(std::abs(disp[1]) == doctest::Approx(1.6).epsilon(1e-15));
}

TEST_CASE("affine splitting approaches the adaptive flow") {
  const Chart cart = make_chart(ChartKind::cartesian);
  AffineHamiltonian H;
  H.chart = cart;
  H.compact = HamiltonianField{cart, radial_bump({-0.2, 0.1}, 0.8)};
  H.linear = {0.4, 0.0};
  H.constant = 0.1;
  H.support_radius = 1.1;
  const double start[2] = {0.2, -0.3};
  const auto split = affine_flow(H, Point(start, 2), 0.3, {}, 4096);
  const auto full = flow_endpoint(H.total(), Point(start, 2), 0.3);
  CHECK(std::abs(split[0] - full[0]) <= 1e-6);
  CHECK(std::abs(split[1] - full[1]) <= 1e-6);
}

TEST_CASE("growth certificate for the polar gradient field") {
  const GalleryEntry entry = gallery("polterovich_polar");
  const auto& F4 = entry.rep.images_at(4)[0];
  const VectorFieldFn grad = [&F4](Point x, std::span<double> out) {
    F4.gradient_at(x, out);
  };
  const auto cert =
      linear_growth_bound(grad, entry.rep.chart, GrowthRegion{});
  CHECK(cert.certified);
  CHECK_FALSE(cert.superlinear);
  CHECK(cert.a >= 1.9);
  CHECK(cert.a <= 2.05);
  CHECK(cert.b >= 0.3);
  CHECK(cert.b <= 0.5);
  CHECK(cert.max_residual <= 1e-9);
}

TEST_CASE("cubic growth is flagged as superlinear") {
  const Chart cart = make_chart(ChartKind::cartesian);
  const VectorFieldFn cubic = [](Point x, std::span<double> out) {
    const double r2 = x[0] * x[0] + x[1] * x[1];
    out[0] = r2 * x[0];
    out[1] = r2 * x[1];
  };
  const auto cert = linear_growth_bound(cubic, cart, GrowthRegion{});
  CHECK(cert.superlinear);
  CHECK_FALSE(cert.certified);
}

TEST_CASE("a bounded rotation field stays linear") {
  const Chart cart = make_chart(ChartKind::cartesian);
  const VectorFieldFn rotation = [](Point x, std::span<double> out) {
    out[0] = -x[1];
    out[1] = x[0];
  };
  const auto cert = linear_growth_bound(rotation, cart, GrowthRegion{});
  CHECK(cert.certified);
  CHECK_FALSE(cert.superlinear);
  CHECK(cert.a == doctest::Approx(1.0).epsilon(1e-6));
}
