// Acceptance suite: one line per criterion, exit 0 iff all pass.
#include <cmath>
#include <cstdio>
#include <numbers>
#include <string>
#include <vector>

#include "fraclab/constructions.hpp"
#include "fraclab/harness.hpp"
#include "fraclab/limits.hpp"

using namespace fraclab;

namespace {

int failures = 0;

void criterion(int id, const std::string& text, bool pass) {
  std::printf("[%s] criterion %d: %s\n", pass ? "PASS" : "FAIL", id, text.c_str());
  if (!pass) ++failures;
}

bool check_named(const VerificationReport& rep, const std::string& name) {
  for (const auto& c : rep.checks())
    if (c.name == name) return c.pass;
  return false;
}

double computed_named(const VerificationReport& rep, const std::string& name) {
  for (const auto& c : rep.checks())
    if (c.name == name) return c.computed;
  return std::numeric_limits<double>::quiet_NaN();
}

}  // namespace

int main() {
  ExperimentConfig base;

  // 1. quadrature trust anchors
  {
    auto rep = verify_oracles(base);
    const bool ok = check_named(rep, "oracle.constant") &&
                    check_named(rep, "oracle.poisson") &&
                    check_named(rep, "oracle.scaling") &&
                    check_named(rep, "oracle.translation");
    criterion(1,
              "constant fields to 1e-9, 1d closed form to 1e-6, scaling and "
              "translation identities to 1e-6",
              ok);

    // 2. the step-family constant, including the n=1, sigma=1/2 value
    const auto P = FracParams::make(1, 0.5);
    QuadConfig quad;
    bool step_ok = check_named(rep, "oracle.step-v");
    for (double j : {1.0, 10.0, 100.0}) {
      const auto fam = make_step_family(StepKind::V, j, P);
      const double got = fraclap_pv(fam.field, Vec{0.0}, P, quad).value;
      const double expected = -2.0 / (3.0 * std::numbers::pi);
      step_ok = step_ok && std::abs(got - expected) / std::abs(expected) <= 1e-6;
    }
    criterion(2, "two-level family value at 0 equals -c |S^{n-1}|/(2s 3^{2s}), j in {1,10,100}",
              step_ok);
  }

  // 3. the smooth family: operator limit and scaling identity
  {
    bool ok = true;
    for (int n : {1, 2}) {
      ExperimentConfig cfg = base;
      cfg.theorem = "thm12";
      cfg.n = n;
      cfg.sigma = 0.5;
      cfg.j_grid = {4, 16, 64};
      auto rep = verify_thm12(cfg);
      ok = ok && check_named(rep, "thm12.limit") && check_named(rep, "thm12.scaling") &&
           computed_named(rep, "thm12.limit") <= 0.05;
    }
    criterion(3,
              "smooth family: sup |op v_j + 1| decreasing over {4,16,64}, <= 0.05 at 64; "
              "scaling identity to 1e-6",
              ok);
  }

  // 4. convergence machinery and the leak estimate
  {
    ExperimentConfig cfg = base;
    cfg.theorem = "thm11-b";
    cfg.n = 1;
    cfg.sigma = 0.5;
    auto rep = verify_thm11_b(cfg);
    const bool ok = check_named(rep, "thm11.aef.identity") &&
                    check_named(rep, "thm11.tail.monotone") &&
                    check_named(rep, "thm11.sandwich") && check_named(rep, "thm11.b") &&
                    check_named(rep, "thm11.b.xspread");
    criterion(4,
              "three-term identity within 2x tolerances, tail masses monotone, "
              "two-sided comparison, leak constant 1 +/- 0.05 with spread <= 5%",
              ok);
  }

  // 5. the blow-up family at (1, 1/2, 3, 1) and (2, 1/2, 3, 1)
  {
    bool ok = true;
    for (int n : {1, 2}) {
      ExperimentConfig cfg = base;
      cfg.theorem = "thm13";
      cfg.n = n;
      cfg.sigma = 0.5;
      cfg.p = 3.0;
      cfg.q = 1.0;
      cfg.lambda_grid = {1.0, 10.0, 100.0};
      auto rep = verify_thm13(cfg);
      ok = ok && check_named(rep, "thm13.step1.window") &&
           check_named(rep, "thm13.step4.grad0") &&
           check_named(rep, "thm13.step3.hessian") &&
           check_named(rep, "thm13.rescaled.eq") && check_named(rep, "thm13.blowup");
      if (n == 2) ok = ok && rep.constants.at("hessian_offdiag_worst") <= 1e-6;
    }
    criterion(5,
              "blow-up family: negative window, vanishing central gradient, Hessian "
              "bounds, rescaled equation to 1e-5, minimum grows 100x",
              ok);
  }

  // 6. the minimal far cutoff at the reference parameters
  {
    const auto sel = choose_R(1, 0.5, 1.0, 1.0, 1.0);
    const bool ok = sel.R > 100.0 && sel.R <= 112.0 && sel.margin_a >= 0.0 &&
                    sel.margin_b >= 0.0 &&
                    r_condition_a(100.0, 1, 0.5, 1.0, 1.0, 1.0) > 0.0;
    criterion(6, "minimal far cutoff in (100, 112], tail condition fails at 100", ok);
  }

  // 7. determinism of the report payload
  {
    ExperimentConfig cfg = base;
    cfg.theorem = "thm12";
    cfg.j_grid = {4, 16};
    cfg.radius_grid = {10.0, 20.0};
    const auto r1 = verify_thm12(cfg);
    const auto r2 = verify_thm12(cfg);
    criterion(7, "identical configs produce identical payloads (runtime excluded)",
              r1.dump(false) == r2.dump(false));
  }

  std::printf("%s: %d criterion(s) failed\n", failures == 0 ? "ACCEPTANCE PASS" : "ACCEPTANCE FAIL",
              failures);
  return failures == 0 ? 0 : 1;
}
