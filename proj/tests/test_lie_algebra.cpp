#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <stdexcept>
#include <vector>

#include "bracketlab/lie_algebra.hpp"

using namespace bracketlab;

TEST_CASE("heisenberg structure and validation") {
  const auto alg = heisenberg3();
  CHECK(alg.dim() == 3);
  CHECK(alg.labels()[0] == "X");
  CHECK_NOTHROW(alg.validate());

  const auto z = alg.bracket({1.0, 0.0, 0.0}, {0.0, 1.0, 0.0});
  CHECK(z[0] == 0.0);
  CHECK(z[1] == 0.0);
  CHECK(z[2] == 1.0);
  // the center kills everything
  const auto c = alg.bracket({0.0, 0.0, 1.0}, {0.4, -0.2, 0.9});
  CHECK(c[0] == 0.0);
  CHECK(c[1] == 0.0);
  CHECK(c[2] == 0.0);
}

TEST_CASE("validate rejects a broken jacobi identity") {
  NormedLieAlgebra bad(3, {"a", "b", "c"});
  bad.set_structure(0, 1, 2, 1.0);
  bad.set_structure(1, 2, 0, 1.0);
  bad.set_structure(2, 0, 0, 1.0);  // should be (2,0,1) for so(3)-like closure
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("coefficient norms") {
  const auto max_alg = abelian(3);
  CHECK(max_alg.norm({1.0, -2.0, 0.5}) == 2.0);
  const auto sum_alg = abelian(3, CoefficientNorm::sum_coefficient);
  CHECK(sum_alg.norm({1.0, -2.0, 0.5}) == 3.5);
  CHECK(to_string(CoefficientNorm::sum_coefficient) == "sum_coefficient");
  CHECK(coefficient_norm_from_string("max_coefficient") ==
        CoefficientNorm::max_coefficient);
  CHECK_THROWS_AS(coefficient_norm_from_string("nope"), std::invalid_argument);
}

TEST_CASE("ad powers terminate for nilpotent algebras") {
  const auto alg = heisenberg3();
  const std::vector<double> f{1.0, 0.0, 0.0}, g{0.0, 1.0, 0.0};
  const auto powers = alg.ad_powers(f, g, 4);
  REQUIRE(powers.size() == 5);
  CHECK(powers[0] == f);
  CHECK(powers[1] == std::vector<double>{0.0, 0.0, 1.0});
  for (std::size_t j = 2; j < powers.size(); ++j) {
    CHECK(alg.norm(powers[j]) == 0.0);
  }
}

TEST_CASE("bracket norm constant") {
  const auto alg = heisenberg3();
  const double c1 = alg.bracket_norm_constant();
  const double c2 = alg.bracket_norm_constant();
  CHECK(c1 == c2);  // seeded sampling is deterministic
  CHECK(c1 >= 1.0);
  CHECK(c1 <= 2.0 + 1e-12);

  CHECK(abelian(2).bracket_norm_constant() == 0.0);

  // two generators with one relation span a three-dimensional algebra
  const auto free2 = free_nilpotent2(2);
  CHECK(free2.dim() == 3);
  CHECK_NOTHROW(free2.validate());
}

TEST_CASE("json round trip preserves structure") {
  const auto alg = heisenberg3();
  const auto text = alg.to_json();
  const auto back = NormedLieAlgebra::from_json(text);
  CHECK(back.dim() == alg.dim());
  CHECK(back.labels() == alg.labels());
  CHECK(back.norm_kind() == alg.norm_kind());
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      for (int k = 0; k < 3; ++k) {
        CHECK(back.structure(i, j, k) == alg.structure(i, j, k));
      }
    }
  }
  CHECK_THROWS(NormedLieAlgebra::from_json("{not json"));
}
