#include "fraclab/specfun.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace fraclab {

double gamma_fn(double x) {
  if (!(x > 0.0)) throw std::invalid_argument("gamma_fn: argument must be positive");
  return std::tgamma(x);
}

std::pair<double, double> sphere_measures(int n) {
  if (n < 1) throw std::invalid_argument("sphere_measures: dimension must be >= 1");
  const double area = 2.0 * std::pow(std::numbers::pi, 0.5 * n) / gamma_fn(0.5 * n);
  return {area, area / n};
}

double normalization_constant(int n, double sigma) {
  if (n < 1) throw std::invalid_argument("normalization_constant: dimension must be >= 1");
  if (!(sigma > 0.0 && sigma < 1.0))
    throw std::invalid_argument("normalization_constant: sigma must lie in (0,1)");
  return std::pow(2.0, 2.0 * sigma) * sigma * gamma_fn(0.5 * (n + 2.0 * sigma)) /
         (std::pow(std::numbers::pi, 0.5 * n) * gamma_fn(1.0 - sigma));
}

double tail_constant(int n, double sigma) { return weighted_tail_constant(n, sigma, 0.0); }

double weighted_tail_constant(int n, double sigma, double q) {
  if (!(sigma > 0.0 && sigma < 1.0))
    throw std::invalid_argument("weighted_tail_constant: sigma must lie in (0,1)");
  if (!(q > -2.0 * sigma))
    throw std::invalid_argument("weighted_tail_constant: divergent, requires q > -2 sigma");
  return sphere_measures(n).first / (2.0 * sigma + q);
}

double ball_complement_integral(int n, double sigma, double r, double q) {
  if (!(r > 0.0)) throw std::invalid_argument("ball_complement_integral: radius must be positive");
  return weighted_tail_constant(n, sigma, q) * std::pow(r, -2.0 * sigma - q);
}

FracParams FracParams::make(int n, double sigma) {
  FracParams p;
  p.n = n;
  p.sigma = sigma;
  p.c = normalization_constant(n, sigma);
  auto [area, vol] = sphere_measures(n);
  p.sphere_area = area;
  p.ball_volume = vol;
  p.gamma_tail = area / (2.0 * sigma);
  return p;
}

}  // namespace fraclab
