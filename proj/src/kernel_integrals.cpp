#include "fraclab/kernel_integrals.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "fraclab/angular.hpp"
#include "fraclab/errors.hpp"

namespace fraclab {

RadialWeight RadialWeight::on_interval(PiecewiseRadialProfile g, double lo, double hi) {
  RadialWeight w;
  w.profile = std::move(g);
  w.support_lo = lo;
  w.support_hi = hi;
  return w;
}

RadialWeight RadialWeight::with_power_tail(PiecewiseRadialProfile g, double lo, double onset,
                                           double coeff, double exponent) {
  RadialWeight w;
  w.profile = std::move(g);
  w.support_lo = lo;
  w.tail_onset = onset;
  w.tail_exact_power = true;
  w.tail_coeff = coeff;
  w.tail_exponent = exponent;
  return w;
}

namespace {

double stable_dist2(double rho, double r, double theta) {
  const double s = std::sin(0.5 * theta);
  const double d = rho - r;
  return d * d + 4.0 * rho * r * s * s;
}

AngularOptions angular_options(const QuadConfig& cfg) {
  AngularOptions a;
  a.min_order = cfg.ang_min_order;
  a.max_order = cfg.ang_max_order;
  a.abs_tol = 0.1 * cfg.abs_tol;
  a.rel_tol = 0.1 * cfg.rel_tol;
  return a;
}

// Angular averages over the unit sphere of the kernel and its derivatives,
// at axial distance rho from the shell center and shell radius r:
//   m0    = int_S |rho e1 - r w|^{-n-2s} dw
//   m1    = e1-component of int_S grad k (rho e1 - r w) dw
//   h11, hperp = axial/transverse diagonal entries of int_S hess k dw
struct ShellMoments {
  double m0 = 0, m1 = 0, h11 = 0, hperp = 0;
};

double moment0(int n, double sigma, double rho, double r, const AngularOptions& aopt) {
  const double e = n + 2.0 * sigma;
  if (n == 1)
    return std::pow(std::abs(rho - r), -e) + std::pow(rho + r, -e);
  if (rho == 0.0) {
    // constant over the shell
    return sphere_measures(n).first * std::pow(r, -e);
  }
  auto h = [=](double th) { return std::pow(stable_dist2(rho, r, th), -0.5 * e); };
  return polar_integral(h, n, {}, aopt).value;
}

double moment1(int n, double sigma, double rho, double r, const AngularOptions& aopt) {
  const double e = n + 2.0 * sigma;
  if (n == 1) {
    const double zm = rho - r, zp = rho + r;
    return -e * (zm * std::pow(std::abs(zm), -e - 2.0) + zp * std::pow(zp, -e - 2.0));
  }
  auto h = [=](double th) {
    const double w2 = stable_dist2(rho, r, th);
    return (rho - r * std::cos(th)) * std::pow(w2, -0.5 * (e + 2.0));
  };
  return -e * polar_integral(h, n, {}, aopt).value;
}

void moment2(int n, double sigma, double rho, double r, const AngularOptions& aopt,
             double& h11, double& hperp) {
  const double e = n + 2.0 * sigma;
  if (n == 1) {
    const double zm = std::abs(rho - r), zp = rho + r;
    h11 = e * (e + 1.0) * (std::pow(zm, -e - 2.0) + std::pow(zp, -e - 2.0));
    hperp = 0.0;
    return;
  }
  auto ax = [=](double th) {
    const double w2 = stable_dist2(rho, r, th);
    const double z1 = rho - r * std::cos(th);
    return ((e + 2.0) * z1 * z1 - w2) * std::pow(w2, -0.5 * (e + 4.0));
  };
  h11 = e * polar_integral(ax, n, {}, aopt).value;
  auto tr = [=](double th) {
    const double w2 = stable_dist2(rho, r, th);
    const double st = std::sin(th);
    return ((e + 2.0) * r * r * st * st / (n - 1) - w2) * std::pow(w2, -0.5 * (e + 4.0));
  };
  hperp = e * polar_integral(tr, n, {}, aopt).value;
}

struct Parts {
  double finite = 0, tail = 0, err = 0;
};

// shared radial pipeline; `moment` maps (rho', r') at shell radius r' to the
// angular factor, `order` is the kernel homogeneity offset (0, 1 or 2).
Parts radial_parts(const RadialWeight& g, double rho, int order, const FracParams& P,
                   const QuadConfig& cfg,
                   const std::function<double(double, double)>& moment) {
  if (!(rho < g.support_lo))
    throw SingularKernel("kernel integral: point inside the integrand support");

  Parts out;
  const int n = P.n;
  const bool unbounded = !std::isfinite(g.support_hi);
  const double onset_eff = unbounded ? std::max(g.tail_onset, g.support_lo) : 0.0;
  const double fin_hi = unbounded ? onset_eff : g.support_hi;

  if (fin_hi > g.support_lo) {
    std::vector<double> nodes{g.support_lo, fin_hi};
    for (double b : g.profile.breaks())
      if (b > g.support_lo && b < fin_hi) nodes.push_back(b);
    std::sort(nodes.begin(), nodes.end());
    auto f = [&](double r) {
      return std::pow(r, n - 1) * g.profile(r) * moment(rho, r);
    };
    auto res = integrate_adaptive(f, nodes, cfg.adaptive());
    out.finite = res.value;
    out.err += res.err;
  }

  if (unbounded) {
    const double beta = 2.0 * P.sigma + g.tail_exponent + order;
    // kernel homogeneity: moment(rho, 1/s) = s^{n+2s+order} * moment(s rho, 1)
    auto h = [&](double s) {
      const double coeff = g.tail_exact_power
                               ? g.tail_coeff
                               : std::pow(s, -g.tail_exponent) * g.profile(1.0 / s);
      return coeff * moment(s * rho, 1.0);
    };
    auto res = integrate_power_weighted(h, 1.0 / onset_eff, beta, cfg.adaptive());
    out.tail = res.value;
    out.err += res.err;
  }
  return out;
}

}  // namespace

double kernel_integral(const RadialWeight& g, const Vec& x, const FracParams& P,
                       const QuadConfig& cfg, double* err_est) {
  const double rho = x.norm();
  const auto aopt = angular_options(cfg);

  // exact closed form for the power tail seen from the center
  if (rho == 0.0 && !std::isfinite(g.support_hi) && g.tail_exact_power &&
      cfg.far_policy == QuadConfig::FarPolicy::AnalyticTail) {
    const double onset_eff = std::max(g.tail_onset, g.support_lo);
    RadialWeight fin = g;
    fin.support_hi = onset_eff;
    auto m0 = [&](double rr, double r) { return moment0(P.n, P.sigma, rr, r, aopt); };
    Parts parts = radial_parts(fin, rho, 0, P, cfg, m0);
    const double tail =
        g.tail_coeff * ball_complement_integral(P.n, P.sigma, onset_eff, g.tail_exponent);
    if (err_est) *err_est = parts.err;
    return parts.finite + tail;
  }

  auto m0 = [&](double rr, double r) { return moment0(P.n, P.sigma, rr, r, aopt); };
  Parts parts = radial_parts(g, rho, 0, P, cfg, m0);
  if (err_est) *err_est = parts.err;
  return parts.finite + parts.tail;
}

Vec kernel_gradient_integral(const RadialWeight& g, const Vec& x, const FracParams& P,
                             const QuadConfig& cfg, double* err_est) {
  const double rho = x.norm();
  const auto aopt = angular_options(cfg);
  auto m1 = [&](double rr, double r) { return moment1(P.n, P.sigma, rr, r, aopt); };
  Parts parts = radial_parts(g, rho, 1, P, cfg, m1);
  if (err_est) *err_est = parts.err;

  const double axial = parts.finite + parts.tail;
  AxialFrame frame(x);
  return frame.to_world(Vec::axis(x.dim(), 0, axial));
}

SymMat kernel_hessian_integral(const RadialWeight& g, const Vec& x, const FracParams& P,
                               const QuadConfig& cfg, double* err_est) {
  const int n = P.n;
  const double rho = x.norm();
  const auto aopt = angular_options(cfg);

  double err = 0.0;
  auto ax = [&](double rr, double r) {
    double h11, hp;
    moment2(n, P.sigma, rr, r, aopt, h11, hp);
    return h11;
  };
  Parts pa = radial_parts(g, rho, 2, P, cfg, ax);
  err += pa.err;
  const double h11 = pa.finite + pa.tail;

  double hperp = 0.0;
  if (n >= 2) {
    auto tr = [&](double rr, double r) {
      double h1, hp;
      moment2(n, P.sigma, rr, r, aopt, h1, hp);
      return hp;
    };
    Parts pt = radial_parts(g, rho, 2, P, cfg, tr);
    err += pt.err;
    hperp = pt.finite + pt.tail;
  }
  if (err_est) *err_est = err;

  SymMat H(n);
  AxialFrame frame(x);
  for (int k = 0; k < n; ++k) {
    const Vec qk = frame.to_world(Vec::axis(n, k));
    const double d = (k == 0) ? h11 : hperp;
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) H.set(i, j, H(i, j) + d * qk[i] * qk[j]);
  }
  return H;
}

double kernel_hessian_entry_direct(const RadialWeight& g, const Vec& x, int i, int j,
                                   const FracParams& P, const QuadConfig& cfg) {
  const int n = P.n;
  const double e = n + 2.0 * P.sigma;
  const double rho = x.norm();
  const auto aopt = angular_options(cfg);

  auto k2 = [&](const Vec& z) {
    const double z2 = z.norm2();
    const double diag = (i == j) ? z2 : 0.0;
    return e * ((e + 2.0) * z[i] * z[j] - diag) * std::pow(z2, -0.5 * (e + 4.0));
  };
  // Same radial pipeline as the reduced path: the tail substitution relies on
  // moment(s rho, 1) equalling the angular integral at unit shell radius with
  // the evaluation point moved to axial distance s rho.
  auto moment = [&](double rr, double r) {
    Vec xs = (rho == 0.0) ? Vec::axis(n, 0, rr) : x * (rr / rho);
    auto f = [&](const Vec& w) { return k2(xs - w * r); };
    return sphere_integral(f, n, aopt).value;
  };
  Parts parts = radial_parts(g, rho, 2, P, cfg, moment);
  return parts.finite + parts.tail;
}

}  // namespace fraclab
