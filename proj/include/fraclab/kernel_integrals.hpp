#pragma once

#include <limits>

#include "fraclab/field.hpp"
#include "fraclab/fraclap.hpp"
#include "fraclab/geometry.hpp"

namespace fraclab {

/// Radial integrand g(|y|) for kernel integrals int g(|y|) k(x-y) dy, where
/// k is the fractional kernel |z|^{-n-2 sigma} or one of its derivatives.
/// g must vanish outside [support_lo, support_hi]; an unbounded support
/// carries a decay hint g(r) ~ r^{-tail_exponent} valid beyond tail_onset
/// (exact when tail_exact_power, with the stated coefficient).
struct RadialWeight {
  PiecewiseRadialProfile profile;
  double support_lo = 0.0;
  double support_hi = std::numeric_limits<double>::infinity();
  double tail_exponent = 0.0;
  double tail_onset = 0.0;
  bool tail_exact_power = false;
  double tail_coeff = 0.0;

  static RadialWeight on_interval(PiecewiseRadialProfile g, double lo, double hi);
  static RadialWeight with_power_tail(PiecewiseRadialProfile g, double lo, double onset,
                                      double coeff, double exponent);
};

/// int g(|y|) |x-y|^{-n-2 sigma} dy. Requires |x| < support_lo (smooth kernel).
double kernel_integral(const RadialWeight& g, const Vec& x, const FracParams& params,
                       const QuadConfig& cfg, double* err_est = nullptr);

/// Gradient of z |-> int g(|y|) |z-y|^{-n-2 sigma} dy at z = x, by integrating
/// the analytically differentiated kernel.
Vec kernel_gradient_integral(const RadialWeight& g, const Vec& x, const FracParams& params,
                             const QuadConfig& cfg, double* err_est = nullptr);

/// Hessian of the same map; symmetric by construction (axial reduction).
SymMat kernel_hessian_integral(const RadialWeight& g, const Vec& x, const FracParams& params,
                               const QuadConfig& cfg, double* err_est = nullptr);

/// Single Hessian entry by direct spherical quadrature (no axial reduction,
/// no symmetry shortcuts). Diagnostic path; n <= 3.
double kernel_hessian_entry_direct(const RadialWeight& g, const Vec& x, int i, int j,
                                   const FracParams& params, const QuadConfig& cfg);

}  // namespace fraclab
