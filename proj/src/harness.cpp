#include "fraclab/harness.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <random>

#include "fraclab/constructions.hpp"
#include "fraclab/errors.hpp"
#include "fraclab/limits.hpp"
#include "fraclab/richardson.hpp"

#include "CLI11.hpp"

namespace fraclab {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

ScalarField poisson_profile_field(int dim) {
  return ScalarField::radial(dim,
                             PiecewiseRadialProfile([](double r) { return 1.0 / (1.0 + r * r); }),
                             TailDescriptor::bounded(1.0), SmoothWindow::everywhere(), true);
}

nlohmann::json meta_for(const ExperimentConfig& cfg) {
  nlohmann::json m;
  m["theorem"] = cfg.theorem;
  m["n"] = cfg.n;
  m["sigma"] = cfg.sigma;
  m["p"] = cfg.p;
  m["q"] = cfg.q;
  m["lambda_grid"] = cfg.lambda_grid;
  m["j_grid"] = cfg.j_grid;
  m["index_grid"] = cfg.index_grid;
  m["radius_grid"] = cfg.radius_grid;
  m["x_samples"] = cfg.x_samples;
  m["config_hash"] = fnv1a(cfg.canonical());
  return m;
}

// Index grid for the leak estimate. Two constraints on the top index, both
// from the plateau radius R_i = i^{1/(2s)}/beta: the moving bump must clear
// the largest radius (3 R_i >> R), and the plateau's own missing tail mass
// c gamma (3 R_i)^{-2s} must drop below the convergence gate.
std::vector<int> scaled_index_grid(double beta, const FracParams& P, double r_max) {
  const double twos = 2.0 * P.sigma;
  const double clearance = std::pow(beta * 2.5 * r_max / 3.0, twos);
  const double residual =
      std::pow(beta, twos) * (P.c * P.gamma_tail / 0.005) / std::pow(3.0, twos);
  const double needed = std::max(clearance, residual);
  int top = 8;
  while (top < needed && top < (1 << 28)) top *= 2;
  std::vector<int> grid;
  for (int d = 16; d >= 1; d /= 2)
    if (top / d >= 1) grid.push_back(top / d);
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  return grid;
}

FunctionSequence smooth_family_sequence(const FracParams& P, const QuadConfig& quad,
                                        double beta) {
  FunctionSequence seq;
  seq.member = [P, quad, beta](int i) { return make_v_j(i, P, quad, beta).v; };
  seq.limit_field = ScalarField::constant(P.n, 1.0);
  return seq;
}

}  // namespace

VerificationReport verify_oracles(const ExperimentConfig& cfg) {
  const auto t0 = Clock::now();
  VerificationReport rep;
  rep.meta = meta_for(cfg);
  const QuadConfig& quad = cfg.quad;

  // constant fields map to zero
  {
    std::mt19937 rng(123);
    double worst = 0.0;
    for (int n : {1, 2, 3}) {
      const int points = (n == 3) ? 4 : 20;
      std::uniform_real_distribution<double> d(-10.0, 10.0);
      for (double s : {0.25, 0.5, 0.75}) {
        const auto P = FracParams::make(n, s);
        const auto u = ScalarField::constant(n, 7.0);
        for (int k = 0; k < points; ++k) {
          Vec x(n);
          for (int i = 0; i < n; ++i) x[i] = d(rng);
          worst = std::max(worst, std::abs(fraclap_pv(u, x, P, quad).value));
        }
      }
    }
    rep.add("oracle.constant", "operator annihilates constants", worst, 1e-9,
            1e-9 - worst, worst <= 1e-9);
  }

  // 1d Poisson-profile closed form (1 - x^2) / (1 + x^2)^2 at sigma = 1/2
  {
    const auto P = FracParams::make(1, 0.5);
    const auto u = poisson_profile_field(1);
    double worst = 0.0;
    for (double x : {0.0, 0.5, 2.0}) {
      const double exact = (1.0 - x * x) / ((1.0 + x * x) * (1.0 + x * x));
      const double got = fraclap_pv(u, Vec{x}, P, quad).value;
      worst = std::max(worst, std::abs(got - exact) / std::abs(exact));
    }
    rep.add("oracle.poisson", "half-order value of the Cauchy profile", worst, 1e-6,
            1e-6 - worst, worst <= 1e-6);
  }

  // scaling identity
  {
    double worst = 0.0;
    const double mu = 1.7;
    for (int n : {1, 2}) {
      for (double s : {0.25, 0.5, 0.75}) {
        const auto P = FracParams::make(n, s);
        const auto u = poisson_profile_field(n);
        const auto u_mu = u.dilated_argument(mu);
        for (double xr : {0.3, 1.1}) {
          const double lhs = fraclap_pv(u_mu, Vec::axis(n, 0, xr), P, quad).value;
          const double rhs =
              std::pow(mu, 2.0 * s) * fraclap_pv(u, Vec::axis(n, 0, mu * xr), P, quad).value;
          worst = std::max(worst, std::abs(lhs - rhs) / std::max(1e-30, std::abs(lhs)));
        }
      }
    }
    rep.add("oracle.scaling", "dilation covariance of order 2 sigma", worst, 1e-6,
            1e-6 - worst, worst <= 1e-6);
  }

  // translation invariance
  {
    double worst = 0.0;
    for (int n : {1, 2}) {
      const auto P = FracParams::make(n, 0.5);
      const auto u = poisson_profile_field(n);
      const Vec a = Vec::axis(n, 0, 0.8);
      const auto ua = u.translated(a);
      for (double xr : {0.0, 0.6}) {
        const Vec x = Vec::axis(n, 0, xr);
        const double lhs = fraclap_pv(ua, x + a, P, quad).value;
        const double rhs = fraclap_pv(u, x, P, quad).value;
        worst = std::max(worst, std::abs(lhs - rhs) / std::max(1e-30, std::abs(rhs)));
      }
    }
    rep.add("oracle.translation", "translation invariance", worst, 1e-6, 1e-6 - worst,
            worst <= 1e-6);
  }

  // the step-family value at the origin
  {
    double worst = 0.0;
    for (int n : {1, 2}) {
      for (double s : {0.25, 0.5, 0.75}) {
        const auto P = FracParams::make(n, s);
        const double expected = -P.c * P.gamma_tail * std::pow(3.0, -2.0 * s);
        for (double j : {1.0, 10.0, 100.0}) {
          const auto fam = make_step_family(StepKind::V, j, P);
          const double got = fraclap_pv(fam.field, Vec::zero(n), P, quad).value;
          worst = std::max(worst, std::abs(got - expected) / std::abs(expected));
        }
      }
    }
    rep.add("oracle.step-v", "two-level family value at the center", worst, 1e-6,
            1e-6 - worst, worst <= 1e-6);
    const auto P = FracParams::make(1, 0.5);
    rep.constants["step_v_value_n1_s05"] =
        fraclap_pv(make_step_family(StepKind::V, 10.0, P).field, Vec{0.0}, P, quad).value;
  }

  rep.runtime_seconds = seconds_since(t0);
  return rep;
}

VerificationReport verify_thm12(const ExperimentConfig& cfg) {
  const auto t0 = Clock::now();
  VerificationReport rep;
  rep.meta = meta_for(cfg);
  const auto P = FracParams::make(cfg.n, cfg.sigma);
  const QuadConfig& quad = cfg.quad;

  const double beta = beta_constant(P, quad);
  rep.constants["beta"] = beta;

  std::vector<MollifiedFamily> fams;
  for (int j : cfg.j_grid) fams.push_back(make_v_j(j, P, quad, beta));

  // (i) plateau and derivative decay on the fixed ball
  {
    std::vector<double> sup_v, sup_g, sup_h;
    for (const auto& fam : fams) {
      double sv = 0.0, sg = 0.0, sh = 0.0;
      const int fd_steps = std::min(cfg.quad.richardson_steps, 3);
      for (int k = 0; k <= 4; ++k) {
        const double r = cfg.c2_ball_radius * k / 4.0;
        const Vec x = Vec::axis(cfg.n, 0, r);
        sv = std::max(sv, std::abs(fam.v(x) - 1.0));
        auto eval = [&fam](const Vec& y) { return fam.v(y); };
        sg = std::max(sg, richardson_gradient(eval, x, 0.05, fd_steps).norm());
        sh = std::max(sh, richardson_hessian(eval, x, 0.05, fd_steps).frobenius());
      }
      sup_v.push_back(sv);
      sup_g.push_back(sg);
      sup_h.push_back(sh);
    }
    bool mono = true;
    for (size_t k = 1; k < fams.size(); ++k) {
      mono = mono && sup_v[k] <= sup_v[k - 1] + 1e-12 &&
             sup_g[k] <= sup_g[k - 1] + 1e-10 && sup_h[k] <= sup_h[k - 1] + 1e-8;
    }
    const double final_dev = std::max({sup_v.back(), sup_g.back(), sup_h.back()});
    rep.add("thm12.c2loc", "plateau convergence on a compact set", final_dev, 0.05,
            0.05 - final_dev, mono && final_dev <= 0.05);
  }

  // (ii) operator values settle at -1
  std::vector<std::vector<double>> trace;
  {
    std::vector<double> sup_dev;
    for (const auto& fam : fams) {
      double sd = 0.0;
      for (double xr : cfg.x_samples)
        sd = std::max(sd,
                      std::abs(radial_fraclap(fam.v, std::abs(xr), P, quad).value + 1.0));
      sup_dev.push_back(sd);
      trace.push_back({double(fam.j), sd});
    }
    bool mono = true;
    for (size_t k = 1; k < sup_dev.size(); ++k)
      mono = mono && sup_dev[k] <= sup_dev[k - 1] + 1e-12;
    rep.add("thm12.limit", "operator values settle at minus one", sup_dev.back(), 0.05,
            0.05 - sup_dev.back(), mono && sup_dev.back() <= 0.05);
  }

  // (iii) scaling identity inside the plateau
  {
    double worst = 0.0;
    for (const auto& fam : fams) {
      for (double frac : {0.0, 0.4, 0.9}) {
        const double r = frac * fam.R_j;
        if (fam.scale * r >= 2.0) continue;
        const double lhs = radial_fraclap(fam.v, r, P, quad).value;
        const double rhs = std::pow(beta, 2.0 * P.sigma) *
                           f_lambda(double(fam.j), Vec::axis(cfg.n, 0, fam.scale * r), P,
                                    quad).value;
        worst = std::max(worst, std::abs(lhs - rhs) / std::max(1e-30, std::abs(rhs)));
      }
    }
    rep.add("thm12.scaling", "dilation identity linking the family to f", worst, 1e-6,
            1e-6 - worst, worst <= 1e-6);
  }

  // (iv) the leak estimate
  {
    auto seq = smooth_family_sequence(P, quad, beta);
    std::vector<int> idx = cfg.index_grid;
    if (cfg.auto_index_grid)
      idx = scaled_index_grid(beta, P, cfg.radius_grid.back());
    rep.meta["realized_index_grid"] = idx;
    BEstimateOptions opts;
    opts.richardson_in_index = cfg.richardson_in_index;
    opts.richardson_in_radius = cfg.richardson_in_radius;
    try {
      auto est = estimate_b(seq, idx, cfg.radius_grid, cfg.x_samples, P, quad, opts);
      rep.constants["b"] = est.b;
      rep.add("thm12.b", "iterated-limit leak constant equals one", est.b, 1.0,
              0.05 - std::abs(est.b - 1.0), std::abs(est.b - 1.0) <= 0.05);
      rep.add("thm12.b.xspread", "leak constant independent of the base point",
              est.x_spread, 0.05 * est.b, 0.05 * est.b - est.x_spread,
              est.x_spread <= 0.05 * est.b);
      if (!cfg.out_csv_prefix.empty()) {
        std::vector<std::vector<double>> rows;
        for (size_t r = 0; r < est.radius_grid.size(); ++r) {
          std::vector<double> row{est.radius_grid[r]};
          row.insert(row.end(), est.table[r].begin(), est.table[r].end());
          rows.push_back(std::move(row));
        }
        std::vector<std::string> header{"R"};
        for (int i : est.index_grid) header.push_back("i" + std::to_string(i));
        write_csv(cfg.out_csv_prefix + "_Ftable.csv", header, rows);
      }
    } catch (const NonConvergent& e) {
      rep.add("thm12.b", std::string("iterated-limit leak constant equals one; ") +
                             e.what(),
              0.0, 1.0, -1.0, false);
    }
  }

  if (!cfg.out_csv_prefix.empty())
    write_csv(cfg.out_csv_prefix + "_thm12_trace.csv", {"j", "sup_dev"}, trace);

  rep.runtime_seconds = seconds_since(t0);
  return rep;
}

VerificationReport verify_thm11_b(const ExperimentConfig& cfg) {
  const auto t0 = Clock::now();
  VerificationReport rep;
  rep.meta = meta_for(cfg);
  const auto P = FracParams::make(cfg.n, cfg.sigma);
  const QuadConfig& quad = cfg.quad;

  const double beta = beta_constant(P, quad);
  rep.constants["beta"] = beta;
  auto seq = smooth_family_sequence(P, quad, beta);

  // decomposition identity across (i, x, R) triples
  {
    double worst_ratio = 0.0;
    for (int i : cfg.j_grid) {
      for (double xr : cfg.x_samples) {
        for (size_t rI = 0; rI < std::min<size_t>(2, cfg.radius_grid.size()); ++rI) {
          const double R = cfg.radius_grid[rI];
          if (!(R >= 2.0 * (std::abs(xr) + 1.0))) continue;
          auto dec = aef_decompose(seq, i, Vec::axis(cfg.n, 0, xr), R, P, quad);
          worst_ratio =
              std::max(worst_ratio, std::abs(dec.residual) / (2.0 * dec.tol_budget));
        }
      }
    }
    rep.add("thm11.aef.identity", "three-term split reproduces the difference",
            worst_ratio, 1.0, 1.0 - worst_ratio, worst_ratio <= 1.0);
  }

  // tail masses: nonnegative, non-increasing in the radius
  {
    const int i_mid = cfg.j_grid[cfg.j_grid.size() / 2];
    const auto member = seq.member(i_mid);
    const Vec x = Vec::axis(cfg.n, 0, cfg.x_samples.size() > 1 ? cfg.x_samples[1] : 0.0);
    bool ok = true;
    double prev = std::numeric_limits<double>::infinity();
    double min_val = std::numeric_limits<double>::infinity();
    for (double R : cfg.radius_grid) {
      const double F = tail_integral(member, x, R, P, quad);
      ok = ok && F >= -1e-12 && F <= prev + 1e-12;
      min_val = std::min(min_val, F);
      prev = F;
    }
    rep.add("thm11.tail.monotone", "tail mass nonnegative and non-increasing", min_val,
            0.0, min_val, ok);
  }

  // two-sided comparison with the centered mass
  {
    double worst = std::numeric_limits<double>::infinity();
    bool ok = true;
    for (double xr : cfg.x_samples) {
      if (xr == 0.0) continue;
      auto s = sandwich_check(seq, cfg.j_grid.back(), Vec::axis(cfg.n, 0, xr),
                              cfg.radius_grid.front(), P, quad);
      ok = ok && s.ok;
      worst = std::min(std::min(s.lower_margin, s.upper_margin), worst);
    }
    if (!std::isfinite(worst)) worst = 0.0;
    rep.add("thm11.sandwich", "two-sided comparison of shifted tail masses", worst, 0.0,
            worst, ok);
  }

  // the iterated-limit estimate and the constant solution it produces
  {
    std::vector<int> idx = cfg.index_grid;
    if (cfg.auto_index_grid)
      idx = scaled_index_grid(beta, P, cfg.radius_grid.back());
    rep.meta["realized_index_grid"] = idx;
    BEstimateOptions opts;
    opts.richardson_in_index = cfg.richardson_in_index;
    opts.richardson_in_radius = cfg.richardson_in_radius;
    try {
      auto est = estimate_b(seq, idx, cfg.radius_grid, cfg.x_samples, P, quad, opts);
      rep.constants["b"] = est.b;
      rep.add("thm11.b", "leak constant of the smooth family", est.b, 1.0,
              0.05 - std::abs(est.b - 1.0), std::abs(est.b - 1.0) <= 0.05);
      rep.add("thm11.b.xspread", "base-point independence", est.x_spread, 0.05 * est.b,
              0.05 * est.b - est.x_spread, est.x_spread <= 0.05 * est.b);
      auto cs = constant_solution_check(est.b, cfg.p, P, quad);
      rep.add("thm11.const-solution", "positive constant solves the limit equation",
              std::max(std::abs(cs.operator_value), cs.identity_defect), quad.abs_tol,
              quad.abs_tol - std::abs(cs.operator_value), cs.ok);
      if (!cfg.out_csv_prefix.empty()) {
        std::vector<std::vector<double>> rows;
        for (size_t r = 0; r < est.radius_grid.size(); ++r) {
          std::vector<double> row{est.radius_grid[r]};
          row.insert(row.end(), est.table[r].begin(), est.table[r].end());
          rows.push_back(std::move(row));
        }
        std::vector<std::string> header{"R"};
        for (int i : est.index_grid) header.push_back("i" + std::to_string(i));
        write_csv(cfg.out_csv_prefix + "_Ftable.csv", header, rows);
      }
    } catch (const NonConvergent& e) {
      rep.add("thm11.b", std::string("leak constant of the smooth family; ") + e.what(),
              0.0, 1.0, -1.0, false);
    }
  }

  rep.runtime_seconds = seconds_since(t0);
  return rep;
}

VerificationReport verify_thm13(const ExperimentConfig& cfg) {
  const auto t0 = Clock::now();
  VerificationReport rep;
  rep.meta = meta_for(cfg);
  const auto P = FracParams::make(cfg.n, cfg.sigma);
  const QuadConfig& quad = cfg.quad;

  QuadConfig coarse = quad;  // derivative-bound estimates need less accuracy
  coarse.abs_tol = std::max(quad.abs_tol, 1e-7);
  coarse.rel_tol = std::max(quad.rel_tol, 1e-6);

  std::vector<BlowupFamily> fams;
  for (double lam : cfg.lambda_grid) fams.push_back(make_u_lambda(cfg.n, cfg.sigma, cfg.p,
                                                                  cfg.q, lam, quad));
  for (auto& fam : fams)
    rep.constants["R_lambda_" + std::to_string(fam.lambda)] = fam.R;
  rep.constants["c1"] = fams.front().c1;
  rep.constants["c2"] = fams.front().c2;

  std::mt19937 rng(2026);

  // Step 1: the window on B_2
  {
    double worst_low = std::numeric_limits<double>::infinity();
    double worst_high = std::numeric_limits<double>::infinity();
    bool ok = true;
    for (auto& fam : fams) {
      std::vector<std::vector<double>> samples;
      for (int k = 0; k <= 8; ++k) {
        const double r = 2.0 * k / 8.0;
        const double K = K_lambda_B2(fam, Vec::axis(cfg.n, 0, r), quad).value;
        ok = ok && K >= -fam.c1 - 1e-9 && K <= -fam.c2 + 1e-9;
        worst_low = std::min(worst_low, K + fam.c1);
        worst_high = std::min(worst_high, -fam.c2 - K);
        samples.push_back({r, K});
      }
      if (cfg.n >= 2) {
        const double K = K_lambda_B2(fam, Vec{1.0, 1.0}, quad).value;
        ok = ok && K >= -fam.c1 - 1e-9 && K <= -fam.c2 + 1e-9;
      }
      if (!cfg.out_csv_prefix.empty()) {
        write_csv(cfg.out_csv_prefix + "_K_lambda" + std::to_string(fam.lambda) + ".csv",
                  {"r", "K"}, samples);
      }
    }
    rep.add("thm13.step1.window", "prescribed function pinned in a negative window",
            std::min(worst_low, worst_high), 0.0, std::min(worst_low, worst_high), ok);
  }

  // fast path against the general evaluator
  {
    double worst = 0.0;
    std::uniform_real_distribution<double> d(-1.0, 1.0);
    for (auto& fam : fams) {
      for (int k = 0; k < 2; ++k) {
        Vec x(cfg.n);
        for (int i = 0; i < cfg.n; ++i) x[i] = 1.4 * d(rng);
        const double fast = K_lambda_B2(fam, x, quad).value;
        const double gen = K_lambda_general(fam, x, quad).value;
        worst = std::max(worst, std::abs(fast - gen) / std::abs(gen));
      }
    }
    rep.add("thm13.fastpath", "band decomposition agrees with the direct ratio", worst,
            1e-5, 1e-5 - worst, worst <= 1e-5);
  }

  // Step 4 first part: the gradient vanishes at the center
  {
    double worst = 0.0;
    for (auto& fam : fams) {
      const double K0 = std::abs(K_lambda_B2(fam, Vec::zero(cfg.n), quad).value);
      const double g0 = K_gradient(fam, Vec::zero(cfg.n), quad).norm();
      worst = std::max(worst, g0 / K0);
    }
    rep.add("thm13.step4.grad0", "radial symmetry kills the central gradient", worst,
            1e-6, 1e-6 - worst, worst <= 1e-6);
  }

  // Step 3: Hessian sign structure at the center
  {
    const double diag_bound = -(cfg.n + 2.0 * cfg.sigma) * P.c * P.ball_volume *
                              std::pow(4.0, -2.0 * cfg.sigma - 3.0);
    bool ok = true;
    double worst_diag = -std::numeric_limits<double>::infinity();
    double worst_off = 0.0, worst_e2 = 0.0;
    for (auto& fam : fams) {
      auto terms = K_hessian_terms_at_zero(fam, quad);
      for (int i = 0; i < cfg.n; ++i) {
        ok = ok && terms.total(i, i) <= diag_bound + 1e-9;
        worst_diag = std::max(worst_diag, terms.total(i, i));
      }
      if (cfg.n >= 2) {
        for (const auto& E : terms.E) worst_off = std::max(worst_off, E.max_offdiag_abs());
        ok = ok && worst_off <= 1e-6;
      }
      const double e2_expected =
          -P.ball_volume * (std::pow(4.0, -2.0 * cfg.sigma - 2.0) -
                            std::pow(fam.R, -2.0 * cfg.sigma - 2.0));
      const double e2_err =
          std::abs(terms.E[1](0, 0) - e2_expected) / std::abs(e2_expected);
      ok = ok && e2_err <= 1e-8;
      worst_e2 = std::max(worst_e2, e2_err);
    }
    rep.add("thm13.step3.hessian", "central Hessian negative with closed-form band",
            worst_diag, diag_bound, diag_bound - worst_diag, ok);
    rep.constants["hessian_offdiag_worst"] = worst_off;
    rep.constants["hessian_band_term_relerr"] = worst_e2;
  }

  // Step 2: realized derivative bounds, then the uniform constants
  double c3 = 0.0, c4 = std::numeric_limits<double>::infinity();
  {
    for (auto& fam : fams) {
      fam.c3 = estimate_c3(fam, coarse, 5);
      fam.c4 = estimate_c4(fam, quad);
      c3 = std::max(c3, fam.c3);
      c4 = std::min(c4, fam.c4);
    }
    rep.constants["c3"] = c3;
    rep.constants["c4"] = c4;
    rep.add("thm13.step2.bounds", "uniform derivative bounds realized", c3, 0.0, c3,
            c3 > 0.0 && c4 > 0.0 && std::isfinite(c3));
  }

  // Step 4: delta0, the gradient floor on the shifted ball, the rescaling
  {
    bool ok = true;
    double delta0 = 0.0, c5 = 0.0;
    double worst_eq = 0.0;
    std::vector<double> mins;
    for (auto& fam : fams) {
      fam.c3 = c3;
      fam.c4 = c4;
      try {
        delta0_and_rescale(fam, quad);
      } catch (const DeltaSearchFailed&) {
        ok = false;
        continue;
      }
      delta0 = fam.delta0;
      c5 = fam.c5;

      // rescaled equation at five points
      auto ut = u_tilde(fam);
      for (double xr : {-1.5, -0.4, 0.0, 0.8, 1.7}) {
        const Vec x = Vec::axis(cfg.n, 0, xr);
        const double lhs = fraclap_pv(ut, x, P, quad).value;
        const double rhs = K_tilde(fam, x, quad).value * std::pow(ut(x), fam.p);
        worst_eq = std::max(worst_eq, std::abs(lhs - rhs) / std::abs(rhs));
      }

      // minimum over the closed unit ball
      double mn = std::numeric_limits<double>::infinity();
      for (int k = -2; k <= 2; ++k)
        mn = std::min(mn, ut(Vec::axis(cfg.n, 0, 0.5 * k)));
      const double expected = std::pow(fam.delta0, fam.q) * fam.lambda;
      ok = ok && mn == expected;
      mins.push_back(mn);
    }
    rep.constants["delta0"] = delta0;
    rep.constants["c5"] = c5;
    rep.add("thm13.step4.delta0", "shift scale inside (0, 1/4)", delta0, 0.25,
            0.25 - delta0, ok && delta0 > 0.0 && delta0 < 0.25);
    rep.add("thm13.rescaled.eq", "rescaled pair solves the equation", worst_eq, 1e-5,
            1e-5 - worst_eq, ok && worst_eq <= 1e-5);

    bool blowup = mins.size() == fams.size() && !mins.empty();
    for (size_t k = 1; k < mins.size(); ++k) blowup = blowup && mins[k] > mins[k - 1];
    if (!mins.empty())
      blowup = blowup && mins.back() >= 10.0 * mins.front();
    rep.add("thm13.blowup", "minimum over the unit ball grows without bound",
            mins.empty() ? 0.0 : mins.back() / mins.front(), 10.0,
            mins.empty() ? -10.0 : mins.back() / mins.front() - 10.0, blowup);
  }

  // decay normalization of the family itself
  {
    double worst = 0.0;
    for (auto& fam : fams) {
      for (double mult : {1.0, 4.0, 32.0}) {
        const double r = (fam.R + 1.0) * mult;
        worst = std::max(worst,
                         std::abs(std::pow(r, fam.q) * fam.u(Vec::axis(cfg.n, 0, r)) - 1.0));
      }
    }
    rep.add("thm13.decay", "tail normalization of the family", worst, 1e-12,
            1e-12 - worst, worst <= 1e-12);
  }

  // stability of the rescaled bounds across the grid
  {
    double lo_min = std::numeric_limits<double>::infinity(), lo_max = 0.0;
    double hi_max = 0.0;
    for (auto& fam : fams) {
      if (!fam.completed) continue;
      const double scale_g = std::pow(fam.delta0, u_tilde_exponent(fam) + 1.0);
      const double scale_h = std::pow(fam.delta0, u_tilde_exponent(fam) + 2.0);
      double mn = std::numeric_limits<double>::infinity(), mxg = 0.0, mxh = 0.0;
      for (double xr : {-2.0, -1.0, 0.0, 1.0, 2.0}) {
        const Vec y = (Vec::axis(cfg.n, 0, xr) + Vec::axis(cfg.n, 0, 4.0)) * fam.delta0;
        const double g = K_gradient(fam, y, quad).norm() * scale_g;
        const double h = K_hessian(fam, y, quad).frobenius() * scale_h;
        mn = std::min(mn, g);
        mxg = std::max(mxg, g);
        mxh = std::max(mxh, h);
      }
      lo_min = std::min(lo_min, mn);
      lo_max = std::max(lo_max, mn);
      hi_max = std::max(hi_max, std::max(mxg, mxh));
    }
    const double ratio = (lo_min > 0.0) ? lo_max / lo_min : 1e300;
    rep.constants["rescaled_grad_lower"] = lo_min;
    rep.constants["rescaled_upper"] = hi_max;
    rep.add("thm13.rescaled.stable", "rescaled derivative window stable across the grid",
            ratio, 1.5, 1.5 - ratio, lo_min > 0.0 && ratio <= 1.5);
  }

  rep.runtime_seconds = seconds_since(t0);
  return rep;
}

ScalarField field_from_descriptor(const nlohmann::json& desc, int n, double sigma) {
  const std::string kind = desc.at("kind").get<std::string>();
  const auto P = FracParams::make(n, sigma);
  QuadConfig quad;
  if (kind == "constant")
    return ScalarField::constant(n, desc.value("value", 1.0));
  if (kind == "cauchy-profile") return ScalarField::radial(
        n, PiecewiseRadialProfile([](double r) { return 1.0 / (1.0 + r * r); }),
        TailDescriptor::bounded(1.0), SmoothWindow::everywhere(), true);
  if (kind == "indicator-complement") {
    const double radius = desc.value("radius", 3.0);
    PiecewiseRadialProfile prof({radius},
                                {[](double) { return 0.0; }, [](double) { return 1.0; }});
    return ScalarField::radial(n, prof, TailDescriptor::power_law(1.0, 0.0, radius),
                               SmoothWindow::ball(radius), true);
  }
  if (kind == "w-lambda") return make_w_lambda(desc.value("lambda", 1.0), P);
  if (kind == "v-j") return make_v_j(desc.value("j", 4), P, quad).v;
  if (kind == "u-lambda")
    return make_u_lambda(n, sigma, desc.value("p", 3.0), desc.value("q", 1.0),
                         desc.value("lambda", 1.0), quad).u;
  if (kind == "step-w")
    return make_step_family(StepKind::W, desc.value("lambda", 1.0), P).field;
  if (kind == "step-v")
    return make_step_family(StepKind::V, desc.value("j", 1.0), P).field;
  if (kind == "step-u")
    return make_step_family(StepKind::U, desc.value("lambda", 1.0), P,
                            desc.value("p", 2.0)).field;
  throw std::invalid_argument("field descriptor: unknown kind '" + kind + "'");
}

namespace {

void emit_report(const VerificationReport& rep, const ExperimentConfig& cfg) {
  rep.print_summary(std::cout);
  if (!cfg.out_json.empty()) {
    std::ofstream out(cfg.out_json);
    if (!out) throw std::runtime_error("cannot open " + cfg.out_json);
    out << rep.dump(true) << "\n";
  }
}

void add_config_options(CLI::App* sub, std::vector<std::pair<std::string, std::string>>* kv,
                        std::string* config_path) {
  sub->add_option("--config", *config_path, "flat key = value config file");
  static const std::vector<std::pair<std::string, std::string>> keys = {
      {"--n", "n"},
      {"--sigma", "sigma"},
      {"--p", "p"},
      {"--q", "q"},
      {"--lambda", "lambda-grid"},
      {"--j", "j-grid"},
      {"--index-grid", "index-grid"},
      {"--radius-grid", "radius-grid"},
      {"--x-samples", "x-samples"},
      {"--c2-ball-radius", "c2-ball-radius"},
      {"--auto-index-grid", "auto-index-grid"},
      {"--richardson-in-index", "richardson-in-index"},
      {"--richardson-in-radius", "richardson-in-radius"},
      {"--near-radius", "near-radius"},
      {"--rel-tol", "rel-tol"},
      {"--abs-tol", "abs-tol"},
      {"--max-subdiv", "max-subdiv"},
      {"--richardson-steps", "richardson-steps"},
      {"--ang-min-order", "ang-min-order"},
      {"--ang-max-order", "ang-max-order"},
      {"--far-policy", "far-policy"},
      {"--out", "out-json"},
      {"--csv-prefix", "out-csv-prefix"},
  };
  for (const auto& [flag, key] : keys) {
    sub->add_option_function<std::string>(
        flag, [kv, key = key](const std::string& v) { kv->emplace_back(key, v); },
        "overrides config key " + key);
  }
}

ExperimentConfig resolve_config(const std::string& theorem, const std::string& config_path,
                                const std::vector<std::pair<std::string, std::string>>& kv) {
  ExperimentConfig cfg;
  if (!config_path.empty()) cfg = ExperimentConfig::from_file(config_path);
  cfg.theorem = theorem;
  for (const auto& [key, value] : kv) cfg.apply(key, value);  // flags win
  cfg.validate();
  return cfg;
}

}  // namespace

int run_cli(int argc, char** argv) {
  CLI::App app{"fraclab: pointwise fractional Laplacian laboratory"};
  app.require_subcommand(1);

  std::string config_path;
  std::vector<std::pair<std::string, std::string>> kv;

  auto* oracles = app.add_subcommand("oracles", "quadrature trust anchors");
  add_config_options(oracles, &kv, &config_path);
  auto* thm12 = app.add_subcommand("thm12", "smooth family with operator limit -1");
  add_config_options(thm12, &kv, &config_path);
  auto* thm13 = app.add_subcommand("thm13", "blow-up family with negative prescribed K");
  add_config_options(thm13, &kv, &config_path);
  auto* estb = app.add_subcommand("estimate-b", "convergence machinery and leak constant");
  add_config_options(estb, &kv, &config_path);

  auto* chooser = app.add_subcommand("choose-r", "minimal admissible far cutoff");
  double cr_n = 1, cr_sigma = 0.5, cr_p = 1.0, cr_q = 1.0, cr_lambda = 1.0, cr_tol = 1e-9;
  chooser->add_option("--n", cr_n);
  chooser->add_option("--sigma", cr_sigma);
  chooser->add_option("--p", cr_p);
  chooser->add_option("--q", cr_q);
  chooser->add_option("--lambda", cr_lambda);
  chooser->add_option("--tol", cr_tol);

  auto* eval = app.add_subcommand("eval", "single operator evaluation");
  std::string field_desc = R"({"kind":"constant","value":1.0})";
  std::string x_text = "0";
  double ev_n = 1, ev_sigma = 0.5;
  eval->add_option("--field", field_desc, "field descriptor (inline JSON or @file)");
  eval->add_option("--x", x_text, "evaluation point, comma separated");
  eval->add_option("--n", ev_n);
  eval->add_option("--sigma", ev_sigma);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (chooser->parsed()) {
      auto sel = choose_R(int(cr_n), cr_sigma, cr_p, cr_q, cr_lambda, cr_tol);
      std::cout << "R = " << sel.R << "\nmargin_a = " << sel.margin_a
                << "\nmargin_b = " << sel.margin_b << "\n";
      return 0;
    }
    if (eval->parsed()) {
      nlohmann::json desc;
      if (!field_desc.empty() && field_desc.front() == '@') {
        std::ifstream in(field_desc.substr(1));
        if (!in) throw std::runtime_error("cannot open " + field_desc.substr(1));
        in >> desc;
      } else {
        desc = nlohmann::json::parse(field_desc);
      }
      const auto xs = parse_double_list(x_text);
      const int dim = static_cast<int>(ev_n);
      if (static_cast<int>(xs.size()) != dim)
        throw std::invalid_argument("eval: point dimension does not match --n");
      Vec x(dim);
      for (size_t i = 0; i < xs.size(); ++i) x[static_cast<int>(i)] = xs[i];
      const auto P = FracParams::make(dim, ev_sigma);
      QuadConfig quad;
      const auto field = field_from_descriptor(desc, int(ev_n), ev_sigma);
      const auto r = fraclap_pv(field, x, P, quad);
      std::cout << "value = " << r.value << "\nerr_est = " << r.err_est << "\n";
      return 0;
    }

    VerificationReport rep;
    ExperimentConfig cfg;
    if (oracles->parsed()) {
      cfg = resolve_config("oracles", config_path, kv);
      rep = verify_oracles(cfg);
    } else if (thm12->parsed()) {
      cfg = resolve_config("thm12", config_path, kv);
      rep = verify_thm12(cfg);
    } else if (thm13->parsed()) {
      cfg = resolve_config("thm13", config_path, kv);
      rep = verify_thm13(cfg);
    } else if (estb->parsed()) {
      cfg = resolve_config("thm11-b", config_path, kv);
      rep = verify_thm11_b(cfg);
    }
    emit_report(rep, cfg);
    return rep.all_pass() ? 0 : 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace fraclab
