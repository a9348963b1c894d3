#include "fraclab/fraclap.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "fraclab/angular.hpp"
#include "fraclab/errors.hpp"
#include "fraclab/kernel_integrals.hpp"
#include "fraclab/spherical.hpp"

namespace fraclab {

namespace {

AngularOptions angular_options(const QuadConfig& cfg) {
  AngularOptions a;
  a.min_order = cfg.ang_min_order;
  a.max_order = cfg.ang_max_order;
  a.abs_tol = 0.1 * cfg.abs_tol;
  a.rel_tol = 0.1 * cfg.rel_tol;
  return a;
}

}  // namespace

EvalResult fraclap_pv(const ScalarField& u, const Vec& x, const FracParams& P,
                      const QuadConfig& cfg) {
  if (u.dim() != P.n)
    throw std::invalid_argument("fraclap_pv: field dimension does not match params");
  if (u.dim() != x.dim())
    throw std::invalid_argument("fraclap_pv: point dimension does not match field");
  if (!u.tail().in_L_sigma(P.sigma))
    throw DivergentTail("fraclap_pv: tail descriptor violates the integrability class");

  const double rho_ctr = (x - u.center()).norm();
  const double margin = u.window().margin(rho_ctr);
  if (!(margin > 0.0))
    throw NonSmoothPoint("fraclap_pv: evaluation point outside the smooth window");
  const double delta =
      std::isfinite(margin) ? std::min(cfg.near_radius, 0.5 * margin) : cfg.near_radius;

  SphericalDifferenceAverage G(u, x, cfg);
  const double sigma = P.sigma;
  const double twos = 2.0 * sigma;
  const double ux = u(x);

  // far split radius T (measured from x): past all structure of the field
  double structure = 0.0;
  switch (u.tail().kind) {
    case TailDescriptor::Kind::CompactSupport:
      structure = u.tail().radius;
      break;
    case TailDescriptor::Kind::PowerLaw:
      structure = u.tail().onset;
      break;
    case TailDescriptor::Kind::Bounded:
      structure = 0.0;
      break;
  }
  for (double b : u.breakpoints()) structure = std::max(structure, b);
  const double T = std::max({2.0 * (rho_ctr + 1.0), 4.0 * delta, structure + rho_ctr + 0.5});

  double err = 0.0;

  // Near field on (0, delta]. The difference average G(t) is an even O(t^2)
  // function, but below a noise cut its cancellation error gets amplified by
  // the t^{-1-2s} weight, so [0,a] is carried by a two-term Taylor model
  // fitted from samples at a and a/2 (exact zero for locally constant
  // fields); [a, delta] is integrated adaptively.
  const auto breaks = G.t_breaks();
  std::vector<double> near_nodes{delta};
  for (double b : breaks)
    if (b > 0.0 && b < delta) near_nodes.push_back(b);
  std::sort(near_nodes.begin(), near_nodes.end());
  const double t1 = near_nodes.front();
  const double a = 1e-3 * t1;

  KahanSum interior;  // int_0^T t^{-1-2s} G(t) dt
  if (a > 1e-60) {    // a degenerate window leaves nothing to model
    const double Ga = G(a), Gh = G(0.5 * a);
    const double c4 = 4.0 * (Ga - 4.0 * Gh) / (3.0 * a * a * a * a);
    const double c2 = (Ga - c4 * a * a * a * a) / (a * a);
    const double model = c2 * std::pow(a, 2.0 - twos) / (2.0 - twos) +
                         c4 * std::pow(a, 4.0 - twos) / (4.0 - twos);
    interior.add(model);
    const double probe = 0.25 * a;
    const double mismatch =
        std::abs(G(probe) - c2 * probe * probe - c4 * probe * probe * probe * probe);
    err += mismatch * std::pow(probe, 1.0 - twos) / (2.0 - twos);
  }
  auto radial_integrand = [&](double t) { return std::pow(t, -1.0 - twos) * G(t); };
  {
    std::vector<double> nodes{a};
    nodes.insert(nodes.end(), near_nodes.begin(), near_nodes.end());
    auto r = integrate_adaptive(radial_integrand, nodes, cfg.adaptive());
    interior.add(r.value);
    err += r.err;
  }

  // mid field [delta, T]
  {
    std::vector<double> nodes{delta, T};
    for (double b : breaks)
      if (b > delta && b < T) nodes.push_back(b);
    std::sort(nodes.begin(), nodes.end());
    auto r = integrate_adaptive(radial_integrand, nodes, cfg.adaptive());
    interior.add(r.value);
    err += r.err;
  }

  // far field: int_T^inf t^{-1-2s} G(t) dt = far_u - u(x) |S^{n-1}| T^{-2s}/(2s)
  double far_u = 0.0;
  {
    const auto& tail = u.tail();
    bool analytic = false;
    if (cfg.far_policy == QuadConfig::FarPolicy::AnalyticTail) {
      if (tail.kind == TailDescriptor::Kind::CompactSupport &&
          T >= tail.radius + rho_ctr) {
        far_u = 0.0;
        analytic = true;
      } else if (tail.kind == TailDescriptor::Kind::PowerLaw &&
                 T >= tail.onset + rho_ctr) {
        if (tail.exponent == 0.0) {
          // exactly constant beyond the onset: center plays no role
          far_u = tail.coefficient * ball_complement_integral(P.n, sigma, T, 0.0);
          analytic = true;
        } else if (rho_ctr == 0.0) {
          far_u = tail.coefficient *
                  ball_complement_integral(P.n, sigma, T, tail.exponent);
          analytic = true;
        }
      }
    }
    if (!analytic) {
      // mapped quadrature in s = 1/t with the decay hint peeled off
      const double qh =
          (tail.kind == TailDescriptor::Kind::PowerLaw) ? tail.exponent : 0.0;
      auto h = [&](double s) { return std::pow(s, -qh) * G.average(1.0 / s); };
      auto r = integrate_power_weighted(h, 1.0 / T, twos + qh, cfg.adaptive());
      far_u = r.value;
      err += r.err;
    }
  }
  const double ball_c = ball_complement_integral(P.n, sigma, T, 0.0);

  EvalResult out;
  out.value = -P.c * interior.value() + P.c * (ux * ball_c - far_u);
  out.err_est = P.c * err;
  return out;
}

EvalResult radial_fraclap(const ScalarField& u, double r, const FracParams& P,
                          const QuadConfig& cfg) {
  if (!u.is_radial()) throw NotRadial("radial_fraclap: field has no radial profile");
  if (!(r >= 0.0)) throw std::invalid_argument("radial_fraclap: radius must be >= 0");
  const Vec x = u.center() + Vec::axis(u.dim(), 0, r);
  return fraclap_pv(u, x, P, cfg);
}

double tail_integral(const ScalarField& u, const Vec& x, double R, const FracParams& P,
                     const QuadConfig& cfg, double* err_est) {
  if (!(x.norm() < R)) throw PointOutsideBall("tail_integral: requires |x| < R");
  if (!u.tail().in_L_sigma(P.sigma))
    throw DivergentTail("tail_integral: tail descriptor violates the integrability class");

  const auto& tail = u.tail();
  if (tail.kind == TailDescriptor::Kind::CompactSupport && tail.radius <= R) {
    if (err_est) *err_est = 0.0;
    return 0.0;
  }

  // fast path: field radial about the origin reduces to a kernel integral
  if (u.is_radial() && u.center().norm() == 0.0) {
    RadialWeight w;
    w.profile = u.profile();
    w.support_lo = R;
    switch (tail.kind) {
      case TailDescriptor::Kind::CompactSupport:
        w.support_hi = tail.radius;
        break;
      case TailDescriptor::Kind::PowerLaw:
        w.tail_onset = std::max(tail.onset, R);
        w.tail_exact_power = true;
        w.tail_coeff = tail.coefficient;
        w.tail_exponent = tail.exponent;
        break;
      case TailDescriptor::Kind::Bounded: {
        double onset = R;  // keep any breakpoints inside the finite stretch
        for (double b : u.breakpoints()) onset = std::max(onset, b);
        w.tail_onset = onset;
        w.tail_exact_power = false;
        w.tail_exponent = 0.0;
        break;
      }
    }
    double err = 0.0;
    const double v = kernel_integral(w, x, P, cfg, &err);
    if (err_est) *err_est = P.c * err;
    return P.c * v;
  }

  // generic path: spherical quadrature over origin-centered shells, n <= 3
  const int n = P.n;
  const double e = n + 2.0 * P.sigma;
  const auto aopt = angular_options(cfg);
  auto shell = [&](const Vec& xs, double r) {
    auto f = [&](const Vec& w) {
      const Vec z = xs - w * r;
      return u(w * r) * std::pow(z.norm2(), -0.5 * e);
    };
    return sphere_integral(f, n, aopt).value;
  };

  double structure = 0.0;
  for (double b : u.breakpoints()) structure = std::max(structure, b);
  if (tail.kind == TailDescriptor::Kind::PowerLaw) structure = std::max(structure, tail.onset);
  if (tail.kind == TailDescriptor::Kind::CompactSupport)
    structure = std::max(structure, tail.radius);
  const double Rcap = std::max({2.0 * R, structure, 2.0 * x.norm()}) + 1.0;

  double err = 0.0;
  std::vector<double> nodes{R, Rcap};
  for (double b : u.breakpoints())
    if (b > R && b < Rcap) nodes.push_back(b);
  std::sort(nodes.begin(), nodes.end());
  auto f = [&](double r) { return std::pow(r, n - 1) * shell(x, r); };
  auto fin = integrate_adaptive(f, nodes, cfg.adaptive());
  err += fin.err;

  double tail_part = 0.0;
  if (tail.kind != TailDescriptor::Kind::CompactSupport) {
    const double qh = (tail.kind == TailDescriptor::Kind::PowerLaw) ? tail.exponent : 0.0;
    auto h = [&](double s) {
      // u(w/s) |x - w/s|^{-n-2s} = s^{n+2s} u(w/s) |s x - w|^{-n-2s}
      auto fs = [&](const Vec& w) {
        const Vec z = x * s - w;
        return std::pow(s, -qh) * u(w * (1.0 / s)) * std::pow(z.norm2(), -0.5 * e);
      };
      return sphere_integral(fs, n, aopt).value;
    };
    auto res = integrate_power_weighted(h, 1.0 / Rcap, 2.0 * P.sigma + qh, cfg.adaptive());
    tail_part = res.value;
    err += res.err;
  }
  if (err_est) *err_est = P.c * err;
  return P.c * (fin.value + tail_part);
}

}  // namespace fraclab
