#pragma once

#include <functional>
#include <vector>

#include "fraclab/geometry.hpp"
#include "fraclab/quad1d.hpp"

namespace fraclab {

struct AngularOptions {
  int min_order = 16;
  int max_order = 1024;
  double abs_tol = 1e-11;
  double rel_tol = 1e-9;
};

/// |S^{n-2}| * int_{lo}^{hi} h(theta) sin^{n-2}(theta) dtheta for n >= 2,
/// i.e. the surface integral over the polar cap/band of S^{n-1} of a function
/// of the polar angle only. Split angles mark known kinks of h.
QuadResult polar_band_integral(const std::function<double(double)>& h, int n, double lo,
                               double hi, const std::vector<double>& split_angles,
                               const AngularOptions& opt);

/// Full band [0, pi].
QuadResult polar_integral(const std::function<double(double)>& h, int n,
                          const std::vector<double>& split_angles,
                          const AngularOptions& opt);

/// int_{S^{n-1}} f(omega) domega for n in {1,2,3} (generic fields).
QuadResult sphere_integral(const std::function<double(const Vec&)>& f, int n,
                           const AngularOptions& opt);

}  // namespace fraclab
