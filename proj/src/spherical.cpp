#include "fraclab/spherical.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "fraclab/angular.hpp"
#include "fraclab/specfun.hpp"

namespace fraclab {

SphericalDifferenceAverage::SphericalDifferenceAverage(const ScalarField& u, const Vec& x,
                                                       const QuadConfig& cfg)
    : u_(u),
      x_(x),
      n_(u.dim()),
      ang_min_order_(cfg.ang_min_order),
      ang_max_order_(cfg.ang_max_order),
      ang_abs_tol_(0.1 * cfg.abs_tol),
      ang_rel_tol_(0.1 * cfg.rel_tol) {
  ux_ = u(x);
  rho_origin_ = x.norm();
  if (u.is_radial()) {
    radial_ = true;
    rho_ = (x - u.center()).norm();
    centered_ = u.center().norm() == 0.0;
  }
}

std::vector<double> SphericalDifferenceAverage::t_breaks() const {
  std::vector<double> out;
  for (double b : u_.breakpoints()) {
    out.push_back(std::abs(b - rho_));
    out.push_back(b + rho_);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<double> SphericalDifferenceAverage::theta_splits(double t) const {
  std::vector<double> out;
  if (rho_ == 0.0 || t == 0.0) return out;
  for (double b : u_.breakpoints()) {
    const double d = rho_ - t;
    const double c2 = (b * b - d * d) / (4.0 * rho_ * t);
    if (c2 > 0.0 && c2 < 1.0) out.push_back(2.0 * std::acos(std::sqrt(c2)));
  }
  std::sort(out.begin(), out.end());
  return out;
}

double SphericalDifferenceAverage::diff_average(double t, std::optional<double> clip) const {
  AngularOptions aopt{ang_min_order_, ang_max_order_, ang_abs_tol_, ang_rel_tol_};

  if (radial_ && (centered_ || !clip)) {
    // polar reduction about the axis through x and the field center; when a
    // clip is present it shares that axis only for origin-centered fields
    const double gc = u_.profile_at(rho_);
    if (n_ == 1) {
      double sum = 0.0;
      const double tp = std::abs(rho_ + t), tm = std::abs(rho_ - t);
      // the two sphere points sit at center distance tp and tm; the clip is
      // about the origin, which coincides with the center here
      const bool keep_p = !clip || tp <= *clip;
      const bool keep_m = !clip || tm <= *clip;
      if (keep_p) sum += u_.profile_at(tp) - gc;
      if (keep_m) sum += u_.profile_at(tm) - gc;
      return sum;
    }
    if (rho_ == 0.0) {
      if (clip && t > *clip) return 0.0;
      return sphere_measures(n_).first * (u_.profile_at(t) - gc);
    }
    // polar angle measured from the inward axis: the center distance of
    // x + t w is dist(theta)^2 = (rho - t)^2 + 4 rho t sin^2(theta/2),
    // increasing in theta; the clip keeps the small-angle cap
    double hi = std::numbers::pi;
    if (clip) {
      const double c_min = (rho_ * rho_ + t * t - *clip * *clip) / (2.0 * rho_ * t);
      if (c_min >= 1.0) return 0.0;
      if (c_min > -1.0) hi = std::acos(c_min);
    }
    auto h = [&](double th) {
      const double s = std::sin(0.5 * th);
      const double d = rho_ - t;
      const double dist = std::sqrt(d * d + 4.0 * rho_ * t * s * s);
      return u_.profile_at(dist) - gc;
    };
    return polar_band_integral(h, n_, 0.0, hi, theta_splits(t), aopt).value;
  }

  // generic path (opaque fields, or clipped averages of shifted fields)
  auto f = [&](const Vec& w) {
    const Vec y = x_ + w * t;
    if (clip && y.norm() > *clip) return 0.0;
    return u_(y) - ux_;
  };
  return sphere_integral(f, n_, aopt).value;
}

double SphericalDifferenceAverage::average(double t) const {
  AngularOptions aopt{ang_min_order_, ang_max_order_, ang_abs_tol_, ang_rel_tol_};
  if (radial_) {
    if (n_ == 1)
      return u_.profile_at(std::abs(rho_ + t)) + u_.profile_at(std::abs(rho_ - t));
    if (rho_ == 0.0) return sphere_measures(n_).first * u_.profile_at(t);
    auto h = [&](double th) {
      const double s = std::sin(0.5 * th);
      const double d = rho_ - t;
      const double dist = std::sqrt(d * d + 4.0 * rho_ * t * s * s);
      return u_.profile_at(dist);
    };
    return polar_integral(h, n_, theta_splits(t), aopt).value;
  }
  auto f = [&](const Vec& w) { return u_(x_ + w * t); };
  return sphere_integral(f, n_, aopt).value;
}

}  // namespace fraclab
