#pragma once

#include <optional>
#include <vector>

#include "fraclab/field.hpp"
#include "fraclab/fraclap.hpp"
#include "fraclab/geometry.hpp"

namespace fraclab {

/// Spherical difference average G(t) = int (u(x + t w) - u(x)) dw over the
/// unit sphere, with the difference taken inside the quadrature sum so that
/// locally constant fields produce exact zeros. Radial fields reduce to a
/// polar-angle rule with splits at breakpoint crossings; opaque fields go
/// through the generic sphere rule. An optional clip restricts the average
/// to directions with |x + t w| <= clip_radius (about the origin).
class SphericalDifferenceAverage {
public:
  SphericalDifferenceAverage(const ScalarField& u, const Vec& x, const QuadConfig& cfg);

  double operator()(double t) const { return diff_average(t, std::nullopt); }
  double clipped(double t, double clip_radius) const {
    return diff_average(t, clip_radius);
  }
  /// angular average of the field itself, int u(x + t w) dw
  double average(double t) const;

  double center_distance() const { return rho_; }
  double value_at_center() const { return ux_; }
  /// radii about x at which spheres touch field breakpoint spheres
  std::vector<double> t_breaks() const;

private:
  double diff_average(double t, std::optional<double> clip) const;
  std::vector<double> theta_splits(double t) const;

  const ScalarField& u_;
  Vec x_;
  int n_;
  double ux_ = 0.0;
  double rho_ = 0.0;       // |x - field center|
  double rho_origin_ = 0;  // |x| (for clipping about the origin)
  bool radial_ = false;
  bool centered_ = false;  // field center coincides with the origin
  int ang_min_order_, ang_max_order_;
  double ang_abs_tol_, ang_rel_tol_;
};

}  // namespace fraclab
