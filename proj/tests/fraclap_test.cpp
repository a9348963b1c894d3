#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "brute_oracle.hpp"
#include "fraclab/errors.hpp"
#include "fraclab/fraclap.hpp"
#include "fraclab/kernel_integrals.hpp"

using namespace fraclab;

namespace {

ScalarField poisson_profile_field(int dim) {
  return ScalarField::radial(dim,
                             PiecewiseRadialProfile([](double r) { return 1.0 / (1.0 + r * r); }),
                             TailDescriptor::bounded(1.0), SmoothWindow::everywhere(), true);
}

ScalarField indicator_ball_complement(int dim, double radius) {
  PiecewiseRadialProfile prof({radius}, {[](double) { return 0.0; }, [](double) { return 1.0; }});
  return ScalarField::radial(dim, prof, TailDescriptor::power_law(1.0, 0.0, radius),
                             SmoothWindow::ball(radius), true);
}

Vec random_point(std::mt19937& rng, int dim, double scale) {
  std::uniform_real_distribution<double> d(-scale, scale);
  Vec x(dim);
  for (int i = 0; i < dim; ++i) x[i] = d(rng);
  return x;
}

const double kPoissonExact[3] = {1.0, 0.48, -0.12};  // (1-x^2)/(1+x^2)^2 at {0, 0.5, 2}

}  // namespace

TEST_CASE("constant fields map to zero") {
  QuadConfig cfg;
  std::mt19937 rng(42);
  for (int n : {1, 2, 3}) {
    for (double s : {0.25, 0.5, 0.75}) {
      auto P = FracParams::make(n, s);
      auto u = ScalarField::constant(n, 7.0);
      for (int k = 0; k < 5; ++k) {
        Vec x = random_point(rng, n, 10.0);
        auto r = fraclap_pv(u, x, P, cfg);
        CHECK(std::abs(r.value) <= 1e-9);
      }
    }
  }
}

TEST_CASE("1d Poisson-kernel closed form") {
  // oracle identity: (-Delta)^{1/2} (1+x^2)^{-1} = (1-x^2)/(1+x^2)^2,
  // re-verified here against the independent brute-force sum
  auto P = FracParams::make(1, 0.5);
  auto u = poisson_profile_field(1);
  QuadConfig cfg;

  const double xs[3] = {0.0, 0.5, 2.0};
  for (int i = 0; i < 3; ++i) {
    auto r = fraclap_pv(u, Vec{xs[i]}, P, cfg);
    CHECK(r.value == doctest::Approx(kPoissonExact[i]).epsilon(1e-6));
  }

  const double bf = brute::fraclap_1d([](double y) { return 1.0 / (1.0 + y * y); }, 0.5,
                                      0.5, P.c);
  CHECK(bf == doctest::Approx(kPoissonExact[1]).epsilon(1e-6));
}

TEST_CASE("brute-force cross-check away from sigma = 1/2") {
  QuadConfig cfg;
  for (double s : {0.25, 0.75}) {
    auto P = FracParams::make(1, s);
    auto u = poisson_profile_field(1);
    for (double x : {0.0, 1.0}) {
      auto r = fraclap_pv(u, Vec{x}, P, cfg);
      const double bf =
          brute::fraclap_1d([](double y) { return 1.0 / (1.0 + y * y); }, x, s, P.c);
      CHECK(r.value == doctest::Approx(bf).epsilon(2e-5));
    }
  }
}

TEST_CASE("indicator of a ball complement at the origin") {
  QuadConfig cfg;
  for (int n : {1, 2}) {
    for (double s : {0.25, 0.5, 0.75}) {
      auto P = FracParams::make(n, s);
      auto u = indicator_ball_complement(n, 3.0);
      auto r = fraclap_pv(u, Vec::zero(n), P, cfg);
      const double expected = -P.c * P.gamma_tail * std::pow(3.0, -2.0 * s);
      CHECK(r.value == doctest::Approx(expected).epsilon(1e-10));
    }
  }
}

TEST_CASE("n=1 reduction matches the two-sided line integral form") {
  // the engine agrees with the hand-rolled symmetrized line integral
  // (near stretch plus exterior terms) on the closed-form oracle
  auto P = FracParams::make(1, 0.5);
  QuadConfig cfg;
  auto u = poisson_profile_field(1);
  for (double x : {0.0, 0.5}) {
    auto r = fraclap_pv(u, Vec{x}, P, cfg);
    const double line_form =
        brute::fraclap_1d([](double y) { return 1.0 / (1.0 + y * y); }, x, 0.5, P.c);
    CHECK(r.value == doctest::Approx(line_form).epsilon(1e-8));
  }
}

TEST_CASE("scaling identity") {
  QuadConfig cfg;
  const double mu = 1.7;
  for (int n : {1, 2}) {
    for (double s : {0.25, 0.5, 0.75}) {
      auto P = FracParams::make(n, s);
      auto u = poisson_profile_field(n);
      auto u_mu = u.dilated_argument(mu);
      for (double xr : {0.3, 1.1}) {
        Vec x = Vec::axis(n, 0, xr);
        Vec mx = Vec::axis(n, 0, mu * xr);
        auto lhs = fraclap_pv(u_mu, x, P, cfg);
        auto rhs = fraclap_pv(u, mx, P, cfg);
        CHECK(lhs.value ==
              doctest::Approx(std::pow(mu, 2.0 * s) * rhs.value).epsilon(1e-6));
      }
    }
  }
}

TEST_CASE("translation invariance") {
  QuadConfig cfg;
  for (int n : {1, 2}) {
    auto P = FracParams::make(n, 0.5);
    auto u = poisson_profile_field(n);
    Vec a = Vec::axis(n, 0, 0.8);
    auto ua = u.translated(a);
    for (double xr : {0.0, 0.6}) {
      Vec x = Vec::axis(n, 0, xr);
      auto lhs = fraclap_pv(ua, x + a, P, cfg);
      auto rhs = fraclap_pv(u, x, P, cfg);
      CHECK(lhs.value == doctest::Approx(rhs.value).epsilon(1e-6));
    }
  }
}

TEST_CASE("radial fast path agrees with the generic spherical path") {
  QuadConfig cfg;
  for (int n : {1, 2}) {
    auto P = FracParams::make(n, 0.5);
    auto u = poisson_profile_field(n);
    auto opaque = u.without_radial_info();
    for (double rr : {0.0, 1.0, 2.0}) {
      auto fast = radial_fraclap(u, rr, P, cfg);
      auto gen = fraclap_pv(opaque, Vec::axis(n, 0, rr), P, cfg);
      CHECK(fast.value == doctest::Approx(gen.value).epsilon(1e-6));
    }
  }
}

TEST_CASE("comparison principle on touching fields") {
  QuadConfig cfg;
  auto P = FracParams::make(1, 0.5);
  auto u = poisson_profile_field(1);
  // v = u + bump, bump >= 0 vanishing at the origin
  auto bump = [](double r) {
    auto eta = [](double t) {
      if (t <= 0.0) return 0.0;
      if (t >= 1.0) return 1.0;
      const double g1 = std::exp(-1.0 / t), g2 = std::exp(-1.0 / (1.0 - t));
      return g1 / (g1 + g2);
    };
    return eta(r - 1.0) * eta(3.0 - r);
  };
  PiecewiseRadialProfile pv({1.0, 2.0, 3.0},
                            {[](double r) { return 1.0 / (1.0 + r * r); },
                             [bump](double r) { return 1.0 / (1.0 + r * r) + bump(r); },
                             [bump](double r) { return 1.0 / (1.0 + r * r) + bump(r); },
                             [](double r) { return 1.0 / (1.0 + r * r); }});
  auto v = ScalarField::radial(1, pv, TailDescriptor::bounded(2.0),
                               SmoothWindow::everywhere(), true);
  auto fu = fraclap_pv(u, Vec{0.0}, P, cfg);
  auto fv = fraclap_pv(v, Vec{0.0}, P, cfg);
  CHECK(fu.value >= fv.value - 1e-9);
  CHECK(fu.value > fv.value);  // bump has positive mass
}

TEST_CASE("tail integral closed forms and monotonicity") {
  QuadConfig cfg;
  for (int n : {1, 2}) {
    for (double s : {0.25, 0.5, 0.75}) {
      auto P = FracParams::make(n, s);
      auto one = ScalarField::constant(n, 1.0);
      for (double R : {2.0, 5.0}) {
        const double v = tail_integral(one, Vec::zero(n), R, P, cfg);
        CHECK(v == doctest::Approx(P.c * P.gamma_tail * std::pow(R, -2.0 * s))
                       .epsilon(1e-10));
      }
      // power-law field beyond an onset radius
      const double q = 1.0;
      PiecewiseRadialProfile prof({1.0}, {[](double) { return 1.0; },
                                          [q](double r) { return std::pow(r, -q); }});
      auto u = ScalarField::radial(n, prof, TailDescriptor::power_law(1.0, q, 1.0),
                                   SmoothWindow::everywhere(), true);
      const double R = 4.0;
      const double v = tail_integral(u, Vec::zero(n), R, P, cfg);
      CHECK(v == doctest::Approx(P.c * weighted_tail_constant(n, s, q) *
                                 std::pow(R, -2.0 * s - q))
                     .epsilon(1e-10));

      // non-increasing in R and the two-sided comparison with the centered value
      Vec x = Vec::axis(n, 0, 1.0);
      double prev = tail_integral(u, x, 3.0, P, cfg);
      CHECK(prev >= 0.0);
      for (double R2 : {4.0, 6.0, 9.0}) {
        const double cur = tail_integral(u, x, R2, P, cfg);
        CHECK(cur <= prev + 1e-12);
        CHECK(cur >= 0.0);
        prev = cur;
      }
      for (double R2 : {3.0, 6.0}) {
        const double fx = tail_integral(u, x, R2, P, cfg);
        const double f0 = tail_integral(u, Vec::zero(n), R2, P, cfg);
        const double e = n + 2.0 * s;
        CHECK(fx >= std::pow(R2 / (R2 + 1.0), e) * f0 - 1e-10);
        CHECK(fx <= std::pow(R2 / (R2 - 1.0), e) * f0 + 1e-10);
      }
    }
  }
}

TEST_CASE("tail integral generic path matches the radial fast path") {
  QuadConfig cfg;
  auto P = FracParams::make(2, 0.5);
  auto u = poisson_profile_field(2);
  auto opq = u.without_radial_info();
  Vec x = Vec::axis(2, 0, 1.0);
  const double fast = tail_integral(u, x, 4.0, P, cfg);
  const double gen = tail_integral(opq, x, 4.0, P, cfg);
  CHECK(fast == doctest::Approx(gen).epsilon(1e-7));
}

TEST_CASE("error conditions") {
  QuadConfig cfg;
  auto P = FracParams::make(1, 0.5);
  auto ind = indicator_ball_complement(1, 3.0);
  CHECK_THROWS_AS(fraclap_pv(ind, Vec{3.0}, P, cfg), NonSmoothPoint);
  CHECK_THROWS_AS(fraclap_pv(ind, Vec{5.0}, P, cfg), NonSmoothPoint);

  auto bad = ScalarField::radial(1, PiecewiseRadialProfile([](double r) { return std::pow(1 + r, 0.4); }),
                                 TailDescriptor::power_law(1.0, -0.4, 1.0),
                                 SmoothWindow::everywhere(), true);
  CHECK_THROWS_AS(fraclap_pv(bad, Vec{0.0}, FracParams::make(1, 0.1), cfg), DivergentTail);

  CHECK_THROWS_AS(tail_integral(ind, Vec{4.0}, 4.0, P, cfg), PointOutsideBall);
  auto opq = poisson_profile_field(1).without_radial_info();
  CHECK_THROWS_AS(radial_fraclap(opq, 1.0, P, cfg), NotRadial);
}
