#include "fraclab/angular.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "fraclab/specfun.hpp"

namespace fraclab {

QuadResult polar_band_integral(const std::function<double(double)>& h, int n, double lo,
                               double hi, const std::vector<double>& split_angles,
                               const AngularOptions& opt) {
  if (n < 2) throw std::invalid_argument("polar_band_integral: requires n >= 2");
  if (!(lo < hi)) return {};
  const double equator = (n == 2) ? 2.0 : sphere_measures(n - 1).first;  // |S^{n-2}|, |S^0|=2

  std::vector<double> cuts{lo, hi};
  for (double a : split_angles)
    if (a > lo && a < hi) cuts.push_back(a);
  std::sort(cuts.begin(), cuts.end());

  DoublingOptions dopt;
  dopt.min_order = opt.min_order;
  dopt.max_order = opt.max_order;
  dopt.abs_tol = opt.abs_tol;
  dopt.rel_tol = opt.rel_tol;

  auto weighted = [&h, n](double th) {
    double w = 1.0;
    if (n == 3) w = std::sin(th);
    else if (n > 3) w = std::pow(std::sin(th), n - 2);
    return h(th) * w;
  };

  KahanSum v, e;
  for (size_t i = 0; i + 1 < cuts.size(); ++i) {
    auto r = integrate_doubling(weighted, cuts[i], cuts[i + 1], dopt);
    v.add(r.value);
    e.add(r.err);
  }
  return {equator * v.value(), equator * e.value()};
}

QuadResult polar_integral(const std::function<double(double)>& h, int n,
                          const std::vector<double>& split_angles,
                          const AngularOptions& opt) {
  return polar_band_integral(h, n, 0.0, std::numbers::pi, split_angles, opt);
}

QuadResult sphere_integral(const std::function<double(const Vec&)>& f, int n,
                           const AngularOptions& opt) {
  if (n == 1) {
    Vec plus{1.0}, minus{-1.0};
    return {f(plus) + f(minus), 0.0};
  }
  DoublingOptions dopt;
  dopt.min_order = opt.min_order;
  dopt.max_order = opt.max_order;
  dopt.abs_tol = opt.abs_tol;
  dopt.rel_tol = opt.rel_tol;

  if (n == 2) {
    auto g = [&f](double phi) { return f(Vec{std::cos(phi), std::sin(phi)}); };
    return integrate_doubling(g, 0.0, 2.0 * std::numbers::pi, dopt);
  }
  if (n == 3) {
    // product rule in (cos theta, phi); the inner doubling tolerance is
    // tightened so the outer gap dominates the estimate
    DoublingOptions inner = dopt;
    inner.abs_tol *= 0.1;
    inner.rel_tol *= 0.1;
    auto outer = [&](double c) {
      const double s = std::sqrt(std::max(0.0, 1.0 - c * c));
      auto g = [&f, c, s](double phi) {
        return f(Vec{c, s * std::cos(phi), s * std::sin(phi)});
      };
      return integrate_doubling(g, 0.0, 2.0 * std::numbers::pi, inner).value;
    };
    return integrate_doubling(outer, -1.0, 1.0, dopt);
  }
  throw std::invalid_argument("sphere_integral: supported for n <= 3");
}

}  // namespace fraclab
