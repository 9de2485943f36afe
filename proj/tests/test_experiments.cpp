#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "bracketlab/experiments.hpp"
#include "bracketlab/gallery.hpp"
#include "bracketlab/golden.hpp"

using namespace bracketlab;

namespace {

GridSpec square_grid(double half, int points) {
  return GridSpec{{Axis{-half, half, points}, Axis{-half, half, points}}};
}

}  // namespace

TEST_CASE("distribution pairing is linear in the first slot") {
  const Chart cart = make_chart(ChartKind::cartesian);
  const GridSpec grid = square_grid(1.6, 128);
  const SmoothFn f1 = radial_bump({-0.4, 0.1}, 0.9);
  const SmoothFn f2 = radial_bump({0.3, -0.2}, 0.7);
  const SmoothFn g = radial_bump({0.0, -0.1}, 1.1);
  const SmoothFn phi = default_pairing_test_function();

  const auto F1 = sample_field(cart, grid, f1);
  const auto F2 = sample_field(cart, grid, f2);
  const auto Fc =
      sample_field(cart, grid, smooth_combination({{2.0, f1}, {-0.5, f2}}));
  const auto G = sample_field(cart, grid, g);

  const double combined = distribution_pairing(Fc, G, phi);
  const double split = 2.0 * distribution_pairing(F1, G, phi) -
                       0.5 * distribution_pairing(F2, G, phi);
  CHECK(std::abs(combined - split) <= 1e-10);
}

TEST_CASE("distribution pairing rejects a leaking test function") {
  const Chart cart = make_chart(ChartKind::cartesian);
  const GridSpec grid = square_grid(1.6, 128);
  const auto F = sample_field(cart, grid, radial_bump({0.0, 0.0}, 0.8));
  const auto G = sample_field(cart, grid, radial_bump({0.2, 0.1}, 0.9));
  CHECK_THROWS_AS(distribution_pairing(F, G, radial_bump({0.0, 0.4}, 2.0)),
                  std::domain_error);
}

TEST_CASE("moved-derivative pairing agrees with direct quadrature") {
  const Chart cart = make_chart(ChartKind::cartesian);
  const GridSpec grid = default_pairing_grid();
  const SmoothFn phi = default_pairing_test_function();

  const std::vector<std::pair<SmoothFn, SmoothFn>> pairs = {
      {radial_bump({-0.3, 0.2}, 0.9), radial_bump({0.25, -0.1}, 0.8)},
      {smooth_product(radial_bump({-0.1, 0.0}, 1.2),
                      radial_bump({0.3, 0.25}, 0.9)),
       radial_bump({-0.1, -0.25}, 0.85)},
      {radial_bump({0.15, 0.3}, 1.0),
       smooth_combination({{1.0, radial_bump({-0.2, 0.0}, 0.9)},
                           {0.7, radial_bump({0.2, 0.1}, 0.7)}})}};
  for (const auto& [f, g] : pairs) {
    const auto F = sample_field(cart, grid, f);
    const auto G = sample_field(cart, grid, g);
    const double moved = distribution_pairing(F, G, phi);
    const double direct = direct_pairing(F, G, phi);
    CHECK(std::abs(moved - direct) <= 1e-5);
  }
}

TEST_CASE("pairing errors decrease for the conforming family") {
  const auto table =
      prop6_experiment(conforming_family(), default_pairing_test_function(),
                       default_pairing_grid(), {4, 16, 64});
  REQUIRE(table.rows.size() == 3);
  CHECK(table.error_decreasing);
  CHECK(table.verdict == "hypotheses hold, pairing errors decrease");
  CHECK(table.rows.front().error >= 2.0 * table.rows.back().error);
}

TEST_CASE("pairing errors stall for the oscillatory family") {
  const auto table =
      prop6_experiment(remark2_family(), default_pairing_test_function(),
                       default_pairing_grid(), {1, 4});
  REQUIRE(table.rows.size() == 2);
  CHECK_FALSE(table.error_decreasing);
  CHECK(table.verdict == "hypothesis violated, no convergence");
  const double frozen = builtin_golden().pairing_constant;
  for (const auto& row : table.rows) {
    CHECK(row.error >= 0.5 * frozen);
    CHECK(std::abs(row.error - frozen) <= 5e-3);
  }
  CHECK(std::abs(table.pairing_limit) <= 1e-9);
}

TEST_CASE("double-index table fits the advertised error shape") {
  const auto fam = prop7_family();
  const Chart cart = make_chart(ChartKind::cartesian);
  const SmoothFn H = smooth_bracket(cart, fam.F_limit, fam.G_limit);
  const std::vector<int> idx = {1, 2, 4, 8};
  const auto table =
      prop7_experiment(fam, H, default_pairing_test_function(),
                       default_pairing_grid(), idx, idx);
  REQUIRE(table.rows.size() == idx.size() * idx.size());
  CHECK(table.fit_c > 0.0);
  CHECK_FALSE(table.mismatch_detected);
  // deepest corner of the rectangle comes last and is the smallest error
  CHECK(table.rows.back().error <= table.max_error);
  CHECK(table.rows.back().p == 8);
  CHECK(table.rows.back().q == 8);
}

TEST_CASE("double-index table flags a wrong claimed limit") {
  const auto fam = prop7_family();
  const std::vector<int> idx = {1, 2, 4};
  const auto table =
      prop7_experiment(fam, smooth_constant(1.0),
                       default_pairing_test_function(), default_pairing_grid(),
                       idx, idx);
  CHECK(table.mismatch_detected);
  CHECK(table.max_error > 0.1);
}

TEST_CASE("an index-independent family pairs exactly") {
  const auto base = prop7_family();
  PairingFamily flat;
  flat.name = "flat";
  flat.F_limit = base.F_limit;
  flat.G_limit = base.G_limit;
  flat.F = [&](int) { return base.F_limit; };
  flat.G = [&](int) { return base.G_limit; };
  const Chart cart = make_chart(ChartKind::cartesian);
  const SmoothFn H = smooth_bracket(cart, flat.F_limit, flat.G_limit);
  const auto table =
      prop7_experiment(flat, H, default_pairing_test_function(),
                       default_pairing_grid(), {1, 2}, {1, 2});
  CHECK(table.max_error <= 1e-6);
  CHECK_FALSE(table.mismatch_detected);
}

TEST_CASE("symplectic residuals of the built-in maps") {
  const GridSpec grid = square_grid(1.0, 65);
  const auto identity = symplectic_check(builtin_map("identity"), 1, grid);
  CHECK(identity.max_residual <= 1e-12);
  CHECK_FALSE(identity.degenerate_jacobian);

  const auto shear = symplectic_check(builtin_map("shear"), 1, grid);
  CHECK(shear.max_residual <= 1e-12);

  const auto scale = symplectic_check(builtin_map("double_scale"), 1, grid);
  CHECK(std::abs(scale.max_residual - 3.0) <= 1e-10);

  const MapFn translate = [](Point x, std::span<double> out) {
    out[0] = x[0] + 0.3;
    out[1] = x[1] - 0.2;
  };
  const auto shifted = symplectic_check(translate, 1, grid);
  CHECK(shifted.max_residual <= 1e-12);
  REQUIRE(shifted.fg_minus_delta.size() == 1);
  REQUIRE(shifted.ff.size() == 1);
  REQUIRE(shifted.gg.size() == 1);
}

TEST_CASE("a folding map is reported as degenerate") {
  const GridSpec grid = square_grid(1.0, 65);
  const MapFn fold = [](Point x, std::span<double> out) {
    out[0] = x[0] * x[0];
    out[1] = x[1];
  };
  const auto rpt = symplectic_check(fold, 1, grid);
  CHECK(rpt.degenerate_jacobian);
  CHECK(rpt.max_residual > 0.1);
}

TEST_CASE("commuting translations have zero commutator discrepancy") {
  const auto c = affine_commutator_case("translation");
  const auto rpt = affine_commutator_check(
      c.H, c.K, c.s, c.t, c.grid, c.G ? &*c.G : nullptr, c.options);
  CHECK(rpt.max_discrepancy <= 1e-8);
  CHECK(rpt.support_violation <= 1e-12);
  CHECK(rpt.has_combo);
  CHECK(rpt.combo_residual <= 1e-10);
}

TEST_CASE("disjoint supports give a trivial commutator") {
  const auto c = affine_commutator_case("disjoint");
  const auto rpt = affine_commutator_check(
      c.H, c.K, c.s, c.t, c.grid, c.G ? &*c.G : nullptr, c.options);
  CHECK(rpt.max_discrepancy <= c.tolerance);
  CHECK(rpt.support_violation <= 1e-12);
}

TEST_CASE("generator-driven flow tracks a generic commutator") {
  const auto c = affine_commutator_case("generic");
  const auto rpt = affine_commutator_check(
      c.H, c.K, c.s, c.t, c.grid, c.G ? &*c.G : nullptr, c.options);
  CHECK(rpt.max_discrepancy <= c.tolerance);
  CHECK(rpt.support_violation <= 1e-12);
  CHECK(rpt.grid_points == c.grid.size());
}

TEST_CASE("convergence sweep over the polar entry") {
  const GalleryEntry entry = gallery("polterovich_polar");
  const auto table = run_convergence(entry, {1, 4});
  REQUIRE(table.rows.size() == 2);
  CHECK(table.basis_labels == std::vector<std::string>{"f", "g", "h"});
  for (const auto& row : table.rows) {
    CHECK(row.defect_norm <= 1e-12);
    CHECK(std::abs(row.bracket_c0 - entry.expected.bracket_constant) <= 5e-3);
    const double want = entry.expected.decay_scale / std::sqrt(row.n);
    CHECK(std::abs(row.decay_measured[0] - want) <= 1e-3 * want);
    CHECK(std::abs(row.decay_measured[1] - want) <= 1e-3 * want);
    CHECK(row.image_gaps.size() == 3);
  }
  CHECK(table.limit.verdict == "defects_vanish_but_limit_bracket_fails");
}

TEST_CASE("convergence sweep detects the stuck defect") {
  const GalleryEntry entry = gallery("remark2_cartesian");
  const auto table = run_convergence(entry, {1, 4});
  const double frozen = builtin_golden().chi_chiprime_max;
  for (const auto& row : table.rows) {
    CHECK(std::abs(row.defect_norm - frozen) <= 1e-3);
  }
  CHECK(table.limit.classification == "not a pseudo-representation");
}

TEST_CASE("truncating the central image hides the defect on the grid") {
  const GalleryEntry trunc = with_truncated_h(gallery("polterovich_polar"));
  const auto res =
      limit_representation_check(trunc.rep, {1.0, 0.0, 0.0}, {0.0, 1.0, 0.0});
  REQUIRE(res.defect_norms.size() >= 2);
  CHECK(res.defect_norms.front() >= 0.5);
  CHECK(res.defect_norms.back() <= 1e-9);
  CHECK(res.classification == "pseudo-representation");
  CHECK(res.verdict == "defects_vanish_but_limit_bracket_fails");
  CHECK(res.limit_residual > 0.5);
}

TEST_CASE("reindexing builds images on demand") {
  const GalleryEntry base = gallery("polterovich_polar");
  const GalleryEntry e8 = with_n_set(base, {8});
  REQUIRE(e8.rep.n_set == std::vector<int>{8});
  const auto& imgs = e8.rep.images_at(8);
  REQUIRE(imgs.size() == 3);
  const auto field = sample_field(e8.rep.chart, e8.decay_grid, imgs[0].fn);
  const double want = base.expected.decay_scale / std::sqrt(8.0);
  CHECK(std::abs(c0_norm(field) - want) <= 1e-3 * want);
}
