#include "fraclab/constructions.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "fraclab/errors.hpp"
#include "fraclab/richardson.hpp"

namespace fraclab {

double smooth_step(double t) {
  if (t <= 0.0) return 0.0;
  if (t >= 1.0) return 1.0;
  const double a = std::exp(-1.0 / t);
  const double b = std::exp(-1.0 / (1.0 - t));
  return a / (a + b);
}

ScalarField make_w_lambda(double lambda, const FracParams& params) {
  if (!(lambda >= 1.0)) throw std::invalid_argument("make_w_lambda: requires lambda >= 1");
  const double top = lambda + lambda * lambda;
  PiecewiseRadialProfile prof(
      {3.0, 4.0, 6.0, 7.0},
      {[lambda](double) { return lambda; },
       [lambda](double r) { return lambda + lambda * lambda * smooth_step(r - 3.0); },
       [top](double) { return top; },
       [top](double r) { return (1.0 - smooth_step(r - 6.0)) * top; },
       [](double) { return 0.0; }});
  return ScalarField::radial(params.n, std::move(prof), TailDescriptor::compact_support(7.0),
                             SmoothWindow::everywhere(), true);
}

namespace {

// the four radial weights of the B_2 display for f_lambda
RadialWeight weight_psi_band() {
  return RadialWeight::on_interval(
      PiecewiseRadialProfile({3.0, 4.0}, {[](double) { return 0.0; },
                                          [](double r) { return smooth_step(r - 3.0); },
                                          [](double) { return 0.0; }}),
      3.0, 4.0);
}

RadialWeight weight_one(double lo, double hi) {
  return RadialWeight::on_interval(PiecewiseRadialProfile([](double) { return 1.0; }), lo, hi);
}

RadialWeight weight_one_minus_phi6() {
  return RadialWeight::on_interval(
      PiecewiseRadialProfile({6.0, 7.0}, {[](double) { return 0.0; },
                                          [](double r) { return 1.0 - smooth_step(r - 6.0); },
                                          [](double) { return 0.0; }}),
      6.0, 7.0);
}

RadialWeight weight_phi6() {
  return RadialWeight::with_power_tail(
      PiecewiseRadialProfile({6.0, 7.0}, {[](double) { return 0.0; },
                                          [](double r) { return smooth_step(r - 6.0); },
                                          [](double) { return 1.0; }}),
      6.0, 7.0, 1.0, 0.0);
}

}  // namespace

EvalResult f_lambda(double lambda, const Vec& x, const FracParams& P, const QuadConfig& cfg) {
  if (!(lambda >= 1.0)) throw std::invalid_argument("f_lambda: requires lambda >= 1");
  if (x.norm() < 2.0) {
    double e1 = 0, e2 = 0, e3 = 0, e4 = 0;
    const double t1 = kernel_integral(weight_psi_band(), x, P, cfg, &e1);
    const double t2 = kernel_integral(weight_one(4.0, 6.0), x, P, cfg, &e2);
    const double t3 = kernel_integral(weight_one_minus_phi6(), x, P, cfg, &e3);
    const double t4 = kernel_integral(weight_phi6(), x, P, cfg, &e4);
    return {-P.c * (t1 + t2 + t3) + P.c * t4 / lambda,
            P.c * (e1 + e2 + e3 + e4 / lambda)};
  }
  auto w = make_w_lambda(lambda, P);
  auto r = fraclap_pv(w, x, P, cfg);
  const double s = 1.0 / (lambda * lambda);
  return {s * r.value, s * r.err_est};
}

EvalResult f_limit(const Vec& x, const FracParams& P, const QuadConfig& cfg) {
  if (!(x.norm() < 2.0))
    throw std::invalid_argument("f_limit: the display holds on B_2 only");
  double e1 = 0, e2 = 0, e3 = 0;
  const double t1 = kernel_integral(weight_psi_band(), x, P, cfg, &e1);
  const double t2 = kernel_integral(weight_one(4.0, 6.0), x, P, cfg, &e2);
  const double t3 = kernel_integral(weight_one_minus_phi6(), x, P, cfg, &e3);
  return {-P.c * (t1 + t2 + t3), P.c * (e1 + e2 + e3)};
}

double beta_constant(const FracParams& P, const QuadConfig& cfg) {
  const double f0 = f_limit(Vec::zero(P.n), P, cfg).value;
  return std::pow(-f0, -1.0 / (2.0 * P.sigma));
}

nlohmann::json MollifiedFamily::descriptor() const {
  return {{"j", j}, {"beta", beta}, {"R_j", R_j}, {"scale", scale}};
}

MollifiedFamily make_v_j(int j, const FracParams& P, const QuadConfig& cfg) {
  return make_v_j(j, P, cfg, beta_constant(P, cfg));
}

MollifiedFamily make_v_j(int j, const FracParams& P, const QuadConfig& cfg, double beta) {
  if (j < 1) throw std::invalid_argument("make_v_j: requires j >= 1");
  (void)cfg;
  MollifiedFamily fam;
  fam.j = j;
  fam.beta = beta;
  const double mu = beta * std::pow(double(j), -1.0 / (2.0 * P.sigma));
  fam.scale = mu;
  fam.R_j = 1.0 / mu;
  fam.w = make_w_lambda(double(j), P);
  fam.v = fam.w.dilated_argument(mu).scaled(1.0 / double(j));
  return fam;
}

StepFamily make_step_family(StepKind kind, double lambda_or_j, const FracParams& P,
                            double p) {
  if (!(lambda_or_j > 0.0))
    throw std::invalid_argument("make_step_family: parameter must be positive");
  StepFamily fam;
  fam.kind = kind;
  fam.lambda_or_j = lambda_or_j;
  switch (kind) {
    case StepKind::W: {
      const double lam = lambda_or_j;
      fam.p = 2.0;
      fam.inner_level = lam;
      fam.outer_level = lam + lam * lam;
      fam.jump_radius = 3.0;
      break;
    }
    case StepKind::V: {
      const double j = lambda_or_j;
      fam.p = 2.0;
      fam.inner_level = 1.0;
      fam.outer_level = 1.0 + j;
      fam.jump_radius = 3.0 * std::pow(j, 1.0 / (2.0 * P.sigma));
      break;
    }
    case StepKind::U: {
      const double lam = lambda_or_j;
      fam.p = p;
      fam.inner_level = lam;
      fam.outer_level = lam + std::pow(lam, p);
      fam.jump_radius = 3.0;
      break;
    }
  }
  const double lo = fam.inner_level, hi = fam.outer_level, jr = fam.jump_radius;
  PiecewiseRadialProfile prof({jr}, {[lo](double) { return lo; }, [hi](double) { return hi; }});
  fam.field = ScalarField::radial(P.n, std::move(prof),
                                  TailDescriptor::power_law(hi, 0.0, jr),
                                  SmoothWindow::ball(jr), true);
  return fam;
}

double r_condition_a(double R, int n, double sigma, double p, double q, double lambda) {
  const double gam = tail_constant(n, sigma);
  const double gamq = weighted_tail_constant(n, sigma, q);
  const double twos = 2.0 * sigma;
  const double lhs = gam * std::pow(R - 2.0, -twos) +
                     std::pow(2.0, n + twos) * gam * (std::pow(lambda, 1.0 - p) + 1.0) *
                         std::pow(R, -twos) +
                     std::pow(2.0, n + twos) * gamq * std::pow(lambda, -p) *
                         std::pow(R, -twos - q);
  return lhs - 0.5 * gam * std::pow(6.0, -twos);
}

double r_condition_b(double R, int n, double sigma, double p, double lambda) {
  (void)n;
  const double twos = 2.0 * sigma;
  const double lhs = std::pow(4.0, -twos - 2.0) -
                     (1.0 + std::pow(lambda, 1.0 - p)) * std::pow(R, -twos - 2.0);
  return std::pow(4.0, -twos - 3.0) - lhs;
}

RSelection choose_R(int n, double sigma, double p, double q, double lambda, double tol) {
  if (!(q > -2.0 * sigma)) throw std::invalid_argument("choose_R: requires q > -2 sigma");
  if (!(lambda >= 1.0)) throw std::invalid_argument("choose_R: requires lambda >= 1");
  auto violated = [&](double R) {
    return r_condition_a(R, n, sigma, p, q, lambda) > 0.0 ||
           r_condition_b(R, n, sigma, p, lambda) > 0.0;
  };
  double lo = 9.0, hi = 18.0;
  while (violated(hi)) hi *= 2.0;  // both left sides vanish as R grows
  if (!violated(lo + tol)) {
    hi = lo + tol;
  } else {
    while (hi - lo > tol) {
      const double mid = 0.5 * (lo + hi);
      (violated(mid) ? lo : hi) = mid;
    }
  }
  RSelection sel;
  sel.R = hi;
  sel.margin_a = -r_condition_a(hi, n, sigma, p, q, lambda);
  sel.margin_b = -r_condition_b(hi, n, sigma, p, lambda);
  return sel;
}

nlohmann::json BlowupFamily::descriptor() const {
  return {{"n", n},   {"sigma", sigma}, {"p", p},   {"q", q},
          {"lambda", lambda}, {"R", R}, {"c1", c1}, {"c2", c2},
          {"c3", c3}, {"c4", c4},       {"delta0", delta0}, {"c5", c5}};
}

BlowupFamily make_u_lambda(int n, double sigma, double p, double q, double lambda,
                           const QuadConfig& cfg) {
  if (!(q > -2.0 * sigma))
    throw DivergentTail("make_u_lambda: requires q > -2 sigma");
  if (!(lambda >= 1.0)) throw std::invalid_argument("make_u_lambda: requires lambda >= 1");

  BlowupFamily fam;
  fam.n = n;
  fam.sigma = sigma;
  fam.p = p;
  fam.q = q;
  fam.lambda = lambda;
  const auto sel = choose_R(n, sigma, p, q, lambda, 1e-9);
  fam.R = sel.R;
  const double R = fam.R;

  const double lamp = std::pow(lambda, p);
  const double top = lambda + lamp;
  PiecewiseRadialProfile prof(
      {3.0, 4.0, R, R + 1.0},
      {[lambda](double) { return lambda; },
       [lambda, lamp](double r) { return lambda + lamp * smooth_step(r - 3.0); },
       [top](double) { return top; },
       [top, R, q](double r) {
         const double phi = smooth_step(r - R);
         return (1.0 - phi) * top + phi * std::pow(r, -q);
       },
       [q](double r) { return std::pow(r, -q); }});
  fam.u = ScalarField::radial(n, std::move(prof), TailDescriptor::power_law(1.0, q, R + 1.0),
                              SmoothWindow::everywhere(), true);

  const auto P = FracParams::make(n, sigma);
  fam.c1 = 3.0 * P.c * P.gamma_tail;
  fam.c2 = 0.5 * P.c * P.gamma_tail * std::pow(6.0, -2.0 * sigma);

  const double lam1p = std::pow(lambda, 1.0 - p);
  const double lammp = std::pow(lambda, -p);

  // K display on B_2: c ( -I_psi - I_[4,R] + I_far0 + I_farq )
  fam.k_terms.push_back({weight_psi_band(), -1.0});
  fam.k_terms.push_back({weight_one(4.0, R), -1.0});
  fam.k_terms.push_back(
      {RadialWeight::with_power_tail(
           PiecewiseRadialProfile({R, R + 1.0},
                                  {[](double) { return 0.0; },
                                   [lam1p, R](double r) {
                                     const double phi = smooth_step(r - R);
                                     return (lam1p + 1.0) * phi - 1.0;
                                   },
                                   [lam1p](double) { return lam1p; }}),
           R, R + 1.0, lam1p, 0.0),
       +1.0});
  fam.k_terms.push_back(
      {RadialWeight::with_power_tail(
           PiecewiseRadialProfile({R, R + 1.0},
                                  {[](double) { return 0.0; },
                                   [lammp, R, q](double r) {
                                     return -lammp * smooth_step(r - R) * std::pow(r, -q);
                                   },
                                   [lammp, q](double r) { return -lammp * std::pow(r, -q); }}),
           R, R + 1.0, -lammp, q),
       +1.0});

  // Step-3 decomposition weights at the origin
  fam.e_terms.push_back({weight_psi_band(), -1.0});
  fam.e_terms.push_back({weight_one(4.0, R), -1.0});
  fam.e_terms.push_back(
      {RadialWeight::with_power_tail(
           PiecewiseRadialProfile({R, R + 1.0},
                                  {[](double) { return 0.0; },
                                   [lam1p, R](double r) {
                                     return lam1p * smooth_step(r - R);
                                   },
                                   [lam1p](double) { return lam1p; }}),
           R, R + 1.0, lam1p, 0.0),
       +1.0});
  fam.e_terms.push_back(
      {RadialWeight::with_power_tail(
           PiecewiseRadialProfile(
               {R, R + 1.0},
               {[](double) { return 0.0; },
                [lammp, R, q](double r) {
                  const double phi = smooth_step(r - R);
                  return (1.0 - phi) + lammp * phi * std::pow(r, -q);
                },
                [lammp, q](double r) { return lammp * std::pow(r, -q); }}),
           R, R + 1.0, lammp, q),
       -1.0});

  (void)cfg;
  return fam;
}

EvalResult K_lambda_B2(const BlowupFamily& fam, const Vec& x, const QuadConfig& cfg) {
  if (!(x.norm() <= 2.0))
    throw std::invalid_argument("K_lambda_B2: the display holds on B_2 only");
  const auto P = FracParams::make(fam.n, fam.sigma);
  double value = 0.0, err = 0.0;
  for (const auto& term : fam.k_terms) {
    double e = 0.0;
    value += term.sign * kernel_integral(term.weight, x, P, cfg, &e);
    err += e;
  }
  return {P.c * value, P.c * err};
}

EvalResult K_lambda_general(const BlowupFamily& fam, const Vec& x, const QuadConfig& cfg) {
  const auto P = FracParams::make(fam.n, fam.sigma);
  auto r = fraclap_pv(fam.u, x, P, cfg);
  const double denom = std::pow(fam.u(x), fam.p);
  return {r.value / denom, r.err_est / std::abs(denom)};
}

Vec K_gradient(const BlowupFamily& fam, const Vec& x, const QuadConfig& cfg) {
  const auto P = FracParams::make(fam.n, fam.sigma);
  Vec g(fam.n);
  for (const auto& term : fam.k_terms) {
    const Vec gi = kernel_gradient_integral(term.weight, x, P, cfg);
    for (int i = 0; i < fam.n; ++i) g[i] += term.sign * gi[i];
  }
  return g * P.c;
}

SymMat K_hessian(const BlowupFamily& fam, const Vec& x, const QuadConfig& cfg) {
  const auto P = FracParams::make(fam.n, fam.sigma);
  SymMat H(fam.n);
  for (const auto& term : fam.k_terms) {
    const SymMat Hi = kernel_hessian_integral(term.weight, x, P, cfg);
    for (int i = 0; i < fam.n; ++i)
      for (int j = i; j < fam.n; ++j) H.set(i, j, H(i, j) + term.sign * Hi(i, j));
  }
  for (int i = 0; i < fam.n; ++i)
    for (int j = i; j < fam.n; ++j) H.set(i, j, P.c * H(i, j));
  return H;
}

namespace {

void check_kernel_derivative_contract(const RadialWeight& g, const Vec& x) {
  if (g.support_lo < 3.0 - 1e-12)
    throw SingularKernel("kernel derivative: integrand must be supported outside B_3");
  if (!(x.norm() <= 2.0))
    throw SingularKernel("kernel derivative: evaluation point must lie in B_2");
}

}  // namespace

Vec kernel_derivative_gradient(const RadialWeight& g, const Vec& x, const FracParams& P,
                               const QuadConfig& cfg) {
  check_kernel_derivative_contract(g, x);
  return kernel_gradient_integral(g, x, P, cfg);
}

SymMat kernel_derivative_hessian(const RadialWeight& g, const Vec& x, const FracParams& P,
                                 const QuadConfig& cfg) {
  check_kernel_derivative_contract(g, x);
  return kernel_hessian_integral(g, x, P, cfg);
}

HessianTermsAtZero K_hessian_terms_at_zero(const BlowupFamily& fam, const QuadConfig& cfg) {
  const auto P = FracParams::make(fam.n, fam.sigma);
  const double scale = fam.n + 2.0 * fam.sigma;
  HessianTermsAtZero out;
  out.total = SymMat(fam.n);
  const Vec zero = Vec::zero(fam.n);
  for (const auto& term : fam.e_terms) {
    SymMat E(fam.n);
    for (int i = 0; i < fam.n; ++i)
      for (int j = i; j < fam.n; ++j) {
        const double entry =
            kernel_hessian_entry_direct(term.weight, zero, i, j, P, cfg) / scale;
        E.set(i, j, term.sign * entry);
      }
    out.E.push_back(E);
    for (int i = 0; i < fam.n; ++i)
      for (int j = i; j < fam.n; ++j)
        out.total.set(i, j, out.total(i, j) + scale * P.c * E(i, j));
  }
  return out;
}

double estimate_c3(const BlowupFamily& fam, const QuadConfig& cfg, int grid_points) {
  const double h0 = 0.05;
  double c3 = 0.0;
  for (int k = 0; k < grid_points; ++k) {
    const double r = 2.0 * k / (grid_points - 1.0);
    const Vec x = Vec::axis(fam.n, 0, std::min(r, 1.9));
    const Vec g = K_gradient(fam, x, cfg);
    const SymMat H = K_hessian(fam, x, cfg);

    // third derivatives: Richardson differences of the kernel Hessian
    double third2 = 0.0;
    for (int d = 0; d < fam.n; ++d) {
      for (int i = 0; i < fam.n; ++i) {
        for (int j = i; j < fam.n; ++j) {
          auto entry = [&](double t) {
            Vec y = x;
            y[d] = t;
            return K_hessian(fam, y, cfg)(i, j);
          };
          const double v = richardson_derivative(entry, x[d], h0, 2);
          third2 += (i == j ? 1.0 : 2.0) * v * v;
        }
      }
    }
    c3 = std::max(c3, g.norm() + H.frobenius() + std::sqrt(third2));
  }
  return c3;
}

double estimate_c4(const BlowupFamily& fam, const QuadConfig& cfg) {
  const SymMat H = K_hessian(fam, Vec::zero(fam.n), cfg);
  SymMat negH(fam.n);
  for (int i = 0; i < fam.n; ++i)
    for (int j = i; j < fam.n; ++j) negH.set(i, j, -H(i, j));
  const auto ev = sym_eigenvalues(negH);
  double c4 = ev[0];
  for (int i = 1; i < fam.n; ++i) c4 = std::min(c4, ev[i]);
  return c4;
}

void delta0_and_rescale(BlowupFamily& fam, const QuadConfig& cfg) {
  if (!(fam.c3 > 0.0) || !(fam.c4 > 0.0))
    throw std::invalid_argument("delta0_and_rescale: set c3 and c4 estimates first");
  fam.delta0 = std::min(0.125, fam.c4 / (6.0 * fam.c3));
  fam.c5 = fam.c4 * fam.delta0;

  // sample the shifted ball B_{2 delta0}(4 delta0 e1)
  const double d0 = fam.delta0;
  std::vector<Vec> samples;
  for (double s : {-0.95, -0.5, 0.0, 0.5, 0.95})
    samples.push_back(Vec::axis(fam.n, 0, (4.0 + 2.0 * s) * d0));
  if (fam.n >= 2) {
    for (double s : {-0.6, 0.6}) {
      Vec x = Vec::axis(fam.n, 0, 4.0 * d0);
      x[1] = 2.0 * s * d0;
      samples.push_back(x);
    }
  }
  for (const auto& x : samples) {
    const double gn = K_gradient(fam, x, cfg).norm();
    if (gn < fam.c5)
      throw DeltaSearchFailed(
          "delta0_and_rescale: |grad K| fell below c5 on the shifted ball; "
          "refine the c3/c4 estimates");
  }
  fam.completed = true;
}

ScalarField u_tilde(const BlowupFamily& fam) {
  if (!fam.completed)
    throw std::invalid_argument("u_tilde: family not completed (delta0 missing)");
  const double d0 = fam.delta0;
  return fam.u.dilated_argument(d0)
      .translated(Vec::axis(fam.n, 0, -4.0))
      .scaled(std::pow(d0, fam.q));
}

double u_tilde_exponent(const BlowupFamily& fam) {
  return fam.q + 2.0 * fam.sigma - fam.p * fam.q;
}

EvalResult K_tilde(const BlowupFamily& fam, const Vec& x, const QuadConfig& cfg) {
  if (!fam.completed)
    throw std::invalid_argument("K_tilde: family not completed (delta0 missing)");
  const Vec y = (x + Vec::axis(fam.n, 0, 4.0)) * fam.delta0;
  const double scale = std::pow(fam.delta0, u_tilde_exponent(fam));
  const auto r = (y.norm() <= 2.0) ? K_lambda_B2(fam, y, cfg) : K_lambda_general(fam, y, cfg);
  return {scale * r.value, scale * r.err_est};
}

}  // namespace fraclab
