#pragma once

#include <functional>
#include <vector>

#include "fraclab/field.hpp"
#include "fraclab/fraclap.hpp"

namespace fraclab {

/// A sequence of nonnegative fields with its pointwise limit field.
struct FunctionSequence {
  std::function<ScalarField(int)> member;
  ScalarField limit_field;
};

/// The three-term split of the difference of the operators at x:
///   A: interior commutator over B_R, symmetrized near x
///   E: exterior mismatch, d(x) against the limit tail
///   F: tail mass of the sequence member
/// The identity A + E + F = op(u)(x) - op(u_i)(x) is re-derived numerically;
/// residual is its defect, tol_budget the summed tolerances of the
/// quadratures involved.
struct AEFDecomposition {
  double A = 0.0;
  double E = 0.0;
  double F = 0.0;
  double residual = 0.0;
  double err_est = 0.0;
  double tol_budget = 0.0;
};

AEFDecomposition aef_decompose(const FunctionSequence& seq, int i, const Vec& x, double R,
                               const FracParams& params, const QuadConfig& cfg);

struct BEstimateOptions {
  bool richardson_in_index = false;   // assume 1/i decay on a doubling grid
  bool richardson_in_radius = false;  // assume R^{-2 sigma} decay
  double cauchy_abs = 0.01;
  double cauchy_rel = 0.02;
};

/// Iterated-limit estimate of the leak constant: index limit first at each
/// radius, then the radius limit; the estimate is taken at x = 0 and
/// cross-checked at the other sample points.
struct BEstimate {
  double b = 0.0;
  std::vector<int> index_grid;
  std::vector<double> radius_grid;
  std::vector<double> x_sample_radii;
  std::vector<std::vector<double>> table;  // rows: radius, cols: index (x = 0)
  std::vector<double> x_checks;            // estimate at each sample point
  double x_spread = 0.0;                   // max |x_check - b|
  double cauchy_gap_index = 0.0;           // last index gap at the top radius
  double cauchy_gap_radius = 0.0;
  bool radius_converged = false;
};

BEstimate estimate_b(const FunctionSequence& seq, const std::vector<int>& index_grid,
                     const std::vector<double>& radius_grid,
                     const std::vector<double>& x_sample_radii, const FracParams& params,
                     const QuadConfig& cfg, const BEstimateOptions& opts = {});

/// Two-sided comparison of the tail mass at x against the centered one.
struct SandwichResult {
  bool ok = false;
  double F_x = 0.0;
  double F_0 = 0.0;
  double lower_bound = 0.0;
  double upper_bound = 0.0;
  double lower_margin = 0.0;
  double upper_margin = 0.0;
};

SandwichResult sandwich_check(const FunctionSequence& seq, int i, const Vec& x, double R,
                              const FracParams& params, const QuadConfig& cfg);

/// The constant field b^{1/p} solves the leak-limit equation: its operator
/// value vanishes and 0 - b = -(b^{1/p})^p.
struct ConstantSolutionResult {
  bool ok = false;
  double operator_value = 0.0;
  double identity_defect = 0.0;
};

ConstantSolutionResult constant_solution_check(double b, double p, const FracParams& params,
                                               const QuadConfig& cfg);

}  // namespace fraclab
