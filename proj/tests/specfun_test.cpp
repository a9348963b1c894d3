#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>

#include "fraclab/specfun.hpp"

using namespace fraclab;
namespace nb = std::numbers;

TEST_CASE("gamma function accuracy on (0, 20)") {
  CHECK(gamma_fn(0.5) == doctest::Approx(std::sqrt(nb::pi)).epsilon(1e-13));
  CHECK(gamma_fn(1.0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(gamma_fn(1.5) == doctest::Approx(0.5 * std::sqrt(nb::pi)).epsilon(1e-13));
  CHECK(gamma_fn(5.0) == doctest::Approx(24.0).epsilon(1e-13));
  CHECK(gamma_fn(10.0) == doctest::Approx(362880.0).epsilon(1e-13));
  // reference values from the reflection/recursion identities
  CHECK(gamma_fn(0.1) == doctest::Approx(9.513507698668732).epsilon(1e-12));
  CHECK(gamma_fn(19.5) == doctest::Approx(2.772432298633372e16).epsilon(1e-12));
  CHECK_THROWS_AS(gamma_fn(0.0), std::invalid_argument);
  CHECK_THROWS_AS(gamma_fn(-1.0), std::invalid_argument);
}

TEST_CASE("sphere measures in low dimensions") {
  auto [s1, b1] = sphere_measures(1);
  CHECK(s1 == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(b1 == doctest::Approx(2.0).epsilon(1e-14));
  auto [s2, b2] = sphere_measures(2);
  CHECK(s2 == doctest::Approx(2.0 * nb::pi).epsilon(1e-14));
  CHECK(b2 == doctest::Approx(nb::pi).epsilon(1e-14));
  auto [s3, b3] = sphere_measures(3);
  CHECK(s3 == doctest::Approx(4.0 * nb::pi).epsilon(1e-14));
  CHECK(b3 == doctest::Approx(4.0 * nb::pi / 3.0).epsilon(1e-14));
  CHECK_THROWS_AS(sphere_measures(0), std::invalid_argument);
}

TEST_CASE("normalization constant") {
  CHECK(normalization_constant(1, 0.5) == doctest::Approx(1.0 / nb::pi).epsilon(1e-13));
  CHECK(normalization_constant(2, 0.5) ==
        doctest::Approx(1.0 / (2.0 * nb::pi)).epsilon(1e-13));
  for (int n : {1, 2, 3})
    for (double s : {0.1, 0.25, 0.5, 0.75, 0.9}) CHECK(normalization_constant(n, s) > 0.0);
  CHECK_THROWS_AS(normalization_constant(1, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(normalization_constant(1, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(normalization_constant(1, -0.3), std::invalid_argument);
}

TEST_CASE("tail constants") {
  CHECK(tail_constant(1, 0.5) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(weighted_tail_constant(3, 0.5, 1.0) == doctest::Approx(2.0 * nb::pi).epsilon(1e-14));
  CHECK(tail_constant(3, 0.5) == doctest::Approx(4.0 * nb::pi).epsilon(1e-14));
  for (int n : {1, 2, 3})
    for (double s : {0.25, 0.5, 0.75})
      CHECK(weighted_tail_constant(n, s, 0.0) == doctest::Approx(tail_constant(n, s)));
  CHECK_THROWS_AS(weighted_tail_constant(1, 0.5, -1.0), std::invalid_argument);
  CHECK_THROWS_AS(weighted_tail_constant(1, 0.25, -0.5), std::invalid_argument);
}

TEST_CASE("ball complement integral") {
  CHECK(ball_complement_integral(1, 0.5, 3.0, 0.0) == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
  for (int n : {1, 2, 3})
    for (double s : {0.25, 0.5, 0.75}) {
      CHECK(ball_complement_integral(n, s, 1.0, 0.0) ==
            doctest::Approx(tail_constant(n, s)).epsilon(1e-14));
      for (double q : {-0.2, 0.0, 1.0, 2.5}) {
        if (q <= -2.0 * s) continue;
        CHECK(ball_complement_integral(n, s, 1.0, q) ==
              doctest::Approx(weighted_tail_constant(n, s, q)).epsilon(1e-14));
        CHECK(ball_complement_integral(n, s, 2.0, q) <
              ball_complement_integral(n, s, 1.5, q));
      }
    }
  CHECK_THROWS_AS(ball_complement_integral(1, 0.5, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(ball_complement_integral(1, 0.5, -2.0), std::invalid_argument);
}

TEST_CASE("FracParams invariants") {
  for (int n : {1, 2, 3}) {
    for (double s : {0.25, 0.5, 0.75}) {
      auto p = FracParams::make(n, s);
      CHECK(p.c > 0.0);
      CHECK(p.gamma_tail * 2.0 * s == doctest::Approx(p.sphere_area).epsilon(1e-15));
      CHECK(p.ball_volume == doctest::Approx(p.sphere_area / n).epsilon(1e-15));
    }
  }
}

TEST_CASE("normalization constant varies smoothly across the sigma grid") {
  for (int n : {1, 2}) {
    double prev = normalization_constant(n, 0.1);
    for (int k = 2; k <= 9; ++k) {
      const double cur = normalization_constant(n, 0.1 * k);
      CHECK(std::abs(cur - prev) < 1.0 * std::max(1.0, std::abs(cur)));
      prev = cur;
    }
  }
}
