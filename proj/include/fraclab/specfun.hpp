#pragma once

#include <utility>

namespace fraclab {

/// Gamma function on the positive real axis.
double gamma_fn(double x);

/// Surface measure of S^{n-1} and volume of the unit ball in R^n.
std::pair<double, double> sphere_measures(int n);

/// Normalization constant of the fractional Laplacian,
///   c_{n,sigma} = 2^{2 sigma} sigma Gamma((n + 2 sigma)/2) / (pi^{n/2} Gamma(1 - sigma)).
double normalization_constant(int n, double sigma);

/// Exact tail integral over the complement of the unit ball:
///   gamma_{n,sigma} = int_{|y|>=1} |y|^{-n-2 sigma} dy = |S^{n-1}| / (2 sigma).
double tail_constant(int n, double sigma);

/// Weighted variant with an extra power |y|^{-q}; requires q > -2 sigma.
double weighted_tail_constant(int n, double sigma, double q);

/// int_{|y|>=r} |y|^{-n-2 sigma-q} dy = |S^{n-1}| r^{-2 sigma-q} / (2 sigma + q).
double ball_complement_integral(int n, double sigma, double r, double q = 0.0);

/// Dimension, order and the derived constants used throughout.
struct FracParams {
  int n = 1;
  double sigma = 0.5;
  double c = 0.0;            // c_{n,sigma}
  double gamma_tail = 0.0;   // |S^{n-1}| / (2 sigma)
  double sphere_area = 0.0;  // |S^{n-1}|
  double ball_volume = 0.0;  // |B_1|

  static FracParams make(int n, double sigma);
};

}  // namespace fraclab
