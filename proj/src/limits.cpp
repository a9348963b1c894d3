#include "fraclab/limits.hpp"

#include <algorithm>
#include <cmath>

#include "fraclab/errors.hpp"
#include "fraclab/kernel_integrals.hpp"
#include "fraclab/spherical.hpp"

namespace fraclab {

namespace {

double quad_tolerance(const QuadConfig& cfg, double value) {
  return std::max(cfg.abs_tol, cfg.rel_tol * std::abs(value));
}

}  // namespace

AEFDecomposition aef_decompose(const FunctionSequence& seq, int i, const Vec& x, double R,
                               const FracParams& P, const QuadConfig& cfg) {
  const double rho0 = x.norm();
  if (!(R >= 2.0 * (rho0 + 1.0)))
    throw RadiusTooSmall("aef_decompose: requires R >= 2(|x| + 1)");

  const ScalarField ui = seq.member(i);
  const ScalarField& u = seq.limit_field;
  const ScalarField d = field_difference(u, ui);

  AEFDecomposition out;
  const double twos = 2.0 * P.sigma;

  // A: c int_{B_R} [d(x) - d(y)] k(x-y) dy, symmetrized near x.
  {
    SphericalDifferenceAverage G(d, x, cfg);
    const double margin = d.window().margin((x - d.center()).norm());
    const double delta =
        std::isfinite(margin) ? std::min(cfg.near_radius, 0.5 * margin) : cfg.near_radius;

    std::vector<double> nodes;
    const double t_full = R - rho0;   // spheres fully inside B_R up to here
    const double t_max = R + rho0;    // and intersect it up to here
    const auto breaks = G.t_breaks();
    const double a = 1e-3 * [&] {
      double t1 = delta;
      for (double b : breaks)
        if (b > 0.0 && b < t1) t1 = b;
      return t1;
    }();

    double interior = 0.0, err = 0.0;
    {
      const double Ga = G(a), Gh = G(0.5 * a);
      const double c4 = 4.0 * (Ga - 4.0 * Gh) / (3.0 * a * a * a * a);
      const double c2 = (Ga - c4 * a * a * a * a) / (a * a);
      interior += c2 * std::pow(a, 2.0 - twos) / (2.0 - twos) +
                  c4 * std::pow(a, 4.0 - twos) / (4.0 - twos);
    }
    nodes.push_back(a);
    for (double b : breaks)
      if (b > a && b < t_full) nodes.push_back(b);
    nodes.push_back(t_full);
    std::sort(nodes.begin(), nodes.end());
    auto integrand = [&](double t) { return std::pow(t, -1.0 - twos) * G(t); };
    auto r1 = integrate_adaptive(integrand, nodes, cfg.adaptive());
    interior += r1.value;
    err += r1.err;
    out.tol_budget += quad_tolerance(cfg, r1.value);

    if (rho0 > 0.0) {
      std::vector<double> nodes2{t_full, t_max};
      for (double b : breaks)
        if (b > t_full && b < t_max) nodes2.push_back(b);
      std::sort(nodes2.begin(), nodes2.end());
      auto clipped = [&](double t) { return std::pow(t, -1.0 - twos) * G.clipped(t, R); };
      auto r2 = integrate_adaptive(clipped, nodes2, cfg.adaptive());
      interior += r2.value;
      err += r2.err;
      out.tol_budget += quad_tolerance(cfg, r2.value);
    }
    out.A = -P.c * interior;
    out.err_est += P.c * err;
  }

  // E: c [ d(x) J(x,R) - int_{B_R^c} u(y) k(x-y) dy ]
  {
    RadialWeight ones = RadialWeight::with_power_tail(
        PiecewiseRadialProfile([](double) { return 1.0; }), R, R, 1.0, 0.0);
    double eJ = 0.0;
    const double J = kernel_integral(ones, x, P, cfg, &eJ);
    double eU = 0.0;
    const double TIu = tail_integral(u, x, R, P, cfg, &eU);
    out.E = P.c * d(x) * J - TIu;
    out.err_est += P.c * std::abs(d(x)) * eJ + eU;
    out.tol_budget += quad_tolerance(cfg, J) * std::abs(P.c * d(x)) + quad_tolerance(cfg, TIu);
  }

  // F: tail mass of the member
  {
    double eF = 0.0;
    out.F = tail_integral(ui, x, R, P, cfg, &eF);
    out.err_est += eF;
    out.tol_budget += quad_tolerance(cfg, out.F);
  }

  // identity defect against the directly evaluated difference
  {
    auto fu = fraclap_pv(u, x, P, cfg);
    auto fui = fraclap_pv(ui, x, P, cfg);
    out.residual = (out.A + out.E + out.F) - (fu.value - fui.value);
    out.err_est += fu.err_est + fui.err_est;
    out.tol_budget += quad_tolerance(cfg, fu.value) + quad_tolerance(cfg, fui.value);
  }
  return out;
}

namespace {

double extrapolate_index(const std::vector<double>& F, const BEstimateOptions& opts,
                         double* gap) {
  const size_t k = F.size();
  if (gap) *gap = (k > 1) ? std::abs(F[k - 1] - F[k - 2]) : 0.0;
  if (opts.richardson_in_index && k >= 2) return 2.0 * F[k - 1] - F[k - 2];
  return F[k - 1];
}

}  // namespace

BEstimate estimate_b(const FunctionSequence& seq, const std::vector<int>& index_grid,
                     const std::vector<double>& radius_grid,
                     const std::vector<double>& x_sample_radii, const FracParams& P,
                     const QuadConfig& cfg, const BEstimateOptions& opts) {
  if (index_grid.empty() || radius_grid.empty())
    throw std::invalid_argument("estimate_b: empty grids");
  for (size_t k = 1; k < index_grid.size(); ++k)
    if (index_grid[k] <= index_grid[k - 1])
      throw std::invalid_argument("estimate_b: index grid must increase");
  for (size_t k = 1; k < radius_grid.size(); ++k)
    if (radius_grid[k] <= radius_grid[k - 1])
      throw std::invalid_argument("estimate_b: radius grid must increase");

  std::vector<double> xs = x_sample_radii;
  if (xs.empty() || xs.front() != 0.0) xs.insert(xs.begin(), 0.0);
  const double Rmin = radius_grid.front();
  for (double xr : xs)
    if (!(std::abs(xr) < 0.5 * Rmin))
      throw PointOutsideBall("estimate_b: sample points must satisfy |x| < min(R)/2");

  BEstimate out;
  out.index_grid = index_grid;
  out.radius_grid = radius_grid;
  out.x_sample_radii = xs;

  // members are reused across (x, R); build once
  std::vector<ScalarField> members;
  members.reserve(index_grid.size());
  for (int i : index_grid) members.push_back(seq.member(i));

  for (size_t xi = 0; xi < xs.size(); ++xi) {
    const Vec x = Vec::axis(P.n, 0, xs[xi]);
    std::vector<double> F_of_R;
    std::vector<std::vector<double>> table;
    for (double R : radius_grid) {
      std::vector<double> row;
      for (const auto& m : members) row.push_back(tail_integral(m, x, R, P, cfg));
      double gap = 0.0;
      F_of_R.push_back(extrapolate_index(row, opts, &gap));
      if (xi == 0 && R == radius_grid.back()) {
        out.cauchy_gap_index = gap;
        const double limit = F_of_R.back();
        if (gap > std::max(opts.cauchy_abs, opts.cauchy_rel * std::abs(limit)))
          throw NonConvergent(
              "estimate_b: index limit not converged at the largest radius");
      }
      table.push_back(std::move(row));
    }

    double bx;
    const size_t M = F_of_R.size();
    if (opts.richardson_in_radius && M >= 2) {
      const double kappa =
          std::pow(radius_grid[M - 1] / radius_grid[M - 2], -2.0 * P.sigma);
      bx = (F_of_R[M - 1] - kappa * F_of_R[M - 2]) / (1.0 - kappa);
    } else {
      bx = F_of_R[M - 1];
    }
    if (xi == 0) {
      out.b = bx;
      out.table = std::move(table);
      out.cauchy_gap_radius = (M > 1) ? std::abs(F_of_R[M - 1] - F_of_R[M - 2]) : 0.0;
      out.radius_converged =
          out.cauchy_gap_radius <= std::max(opts.cauchy_abs, opts.cauchy_rel * std::abs(bx));
    }
    out.x_checks.push_back(bx);
  }
  for (double bx : out.x_checks) out.x_spread = std::max(out.x_spread, std::abs(bx - out.b));
  return out;
}

SandwichResult sandwich_check(const FunctionSequence& seq, int i, const Vec& x, double R,
                              const FracParams& P, const QuadConfig& cfg) {
  if (!(x.norm() < R)) throw PointOutsideBall("sandwich_check: requires |x| < R");
  const ScalarField ui = seq.member(i);
  SandwichResult out;
  out.F_x = tail_integral(ui, x, R, P, cfg);
  out.F_0 = tail_integral(ui, Vec::zero(P.n), R, P, cfg);
  const double e = P.n + 2.0 * P.sigma;
  const double rho = x.norm();
  out.lower_bound = std::pow(R / (R + rho), e) * out.F_0;
  out.upper_bound = std::pow(R / (R - rho), e) * out.F_0;
  out.lower_margin = out.F_x - out.lower_bound;
  out.upper_margin = out.upper_bound - out.F_x;
  out.ok = out.lower_margin >= -1e-12 && out.upper_margin >= -1e-12;
  return out;
}

ConstantSolutionResult constant_solution_check(double b, double p, const FracParams& P,
                                               const QuadConfig& cfg) {
  if (!(b > 0.0)) throw std::invalid_argument("constant_solution_check: requires b > 0");
  if (p == 0.0) throw std::invalid_argument("constant_solution_check: requires p != 0");
  const double root = std::pow(b, 1.0 / p);
  const ScalarField v = ScalarField::constant(P.n, root);
  ConstantSolutionResult out;
  out.operator_value = fraclap_pv(v, Vec::axis(P.n, 0, 0.3), P, cfg).value;
  out.identity_defect = std::abs((0.0 - b) - (-std::pow(root, p)));
  out.ok = std::abs(out.operator_value) <= cfg.abs_tol &&
           out.identity_defect <= 1e-12 * std::max(1.0, std::abs(b));
  return out;
}

}  // namespace fraclab
