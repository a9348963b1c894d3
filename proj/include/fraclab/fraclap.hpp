#pragma once

#include "fraclab/field.hpp"
#include "fraclab/geometry.hpp"
#include "fraclab/quad1d.hpp"
#include "fraclab/specfun.hpp"

namespace fraclab {

/// Knobs of the singular-integral evaluator.
struct QuadConfig {
  double near_radius = 0.5;  // delta of the symmetrized near-field ball
  double rel_tol = 1e-8;
  double abs_tol = 1e-9;
  int max_subdiv = 60;

  enum class FarPolicy { AnalyticTail, MappedQuadrature };
  FarPolicy far_policy = FarPolicy::AnalyticTail;

  int richardson_steps = 4;

  // angular rule: Gauss order doubling bounds
  int ang_min_order = 16;
  int ang_max_order = 1024;

  AdaptiveOptions adaptive() const {
    return {abs_tol, rel_tol, max_subdiv, true};
  }
};

struct EvalResult {
  double value = 0.0;
  double err_est = 0.0;
};

/// (-Delta)^sigma u(x) as the principal-value integral
///   c_{n,sigma} P.V. int (u(x) - u(y)) / |x-y|^{n+2 sigma} dy,
/// evaluated as symmetrized near field + adaptive mid field + tail policy.
EvalResult fraclap_pv(const ScalarField& u, const Vec& x, const FracParams& params,
                      const QuadConfig& cfg);

/// Fast path for radial fields: the value at any point with |x - center| = r.
EvalResult radial_fraclap(const ScalarField& u, double r, const FracParams& params,
                          const QuadConfig& cfg);

/// Tail mass c_{n,sigma} int_{|y| >= R} u(y) / |x-y|^{n+2 sigma} dy, |x| < R.
double tail_integral(const ScalarField& u, const Vec& x, double R,
                     const FracParams& params, const QuadConfig& cfg,
                     double* err_est = nullptr);

}  // namespace fraclab
