#pragma once

#include <string>
#include <vector>

#include "fraclab/field.hpp"
#include "fraclab/fraclap.hpp"
#include "fraclab/kernel_integrals.hpp"

#include "json.hpp"

namespace fraclab {

/// C-infinity monotone step: 0 for t <= 0, 1 for t >= 1, built from the
/// exponential bump g(t) = exp(-1/t) as g(t) / (g(t) + g(1-t)).
double smooth_step(double t);

/// The mollified two-level bump: lambda on B_3, lambda + lambda^2 between the
/// cutoffs, falling to zero past radius 7.
ScalarField make_w_lambda(double lambda, const FracParams& params);

/// f_lambda = lambda^{-2} (-Delta)^sigma w_lambda; inside B_2 through the
/// lambda-split three-plus-one term decomposition, elsewhere through the
/// general evaluator.
EvalResult f_lambda(double lambda, const Vec& x, const FracParams& params,
                    const QuadConfig& cfg);

/// The lambda-free limit of f_lambda on B_2 (three nonsingular terms).
EvalResult f_limit(const Vec& x, const FracParams& params, const QuadConfig& cfg);

/// beta = (-f_limit(0))^{-1/(2 sigma)}.
double beta_constant(const FracParams& params, const QuadConfig& cfg);

/// The smooth family v_j = j^{-1} w_j(beta j^{-1/(2 sigma)} x); identically 1
/// on B_{R_j} with R_j = beta^{-1} j^{1/(2 sigma)}.
struct MollifiedFamily {
  int j = 1;
  double beta = 0.0;
  double R_j = 0.0;
  double scale = 0.0;  // the argument scale beta j^{-1/(2 sigma)}
  ScalarField v;
  ScalarField w;

  nlohmann::json descriptor() const;
};

MollifiedFamily make_v_j(int j, const FracParams& params, const QuadConfig& cfg);
MollifiedFamily make_v_j(int j, const FracParams& params, const QuadConfig& cfg,
                         double beta);

/// Exact two-level step fields used as the guiding illustrations.
enum class StepKind { W, V, U };

struct StepFamily {
  StepKind kind = StepKind::W;
  double lambda_or_j = 1.0;
  double p = 2.0;            // exponent of the upper level (W uses 2)
  double inner_level = 0.0;  // value inside the jump radius
  double outer_level = 0.0;
  double jump_radius = 3.0;
  ScalarField field;
};

StepFamily make_step_family(StepKind kind, double lambda_or_j, const FracParams& params,
                            double p = 2.0);

/// Minimal admissible far cutoff radius for the blow-up family: the smallest
/// R > 9 satisfying both the tail-smallness and the Hessian-margin
/// inequalities, located by doubling and bisection.
struct RSelection {
  double R = 0.0;
  double margin_a = 0.0;  // slack of the tail-smallness condition (>= 0)
  double margin_b = 0.0;  // slack of the Hessian-margin condition (>= 0)
};

double r_condition_a(double R, int n, double sigma, double p, double q, double lambda);
double r_condition_b(double R, int n, double sigma, double p, double lambda);
RSelection choose_R(int n, double sigma, double p, double q, double lambda,
                    double tol = 1e-9);

/// The blow-up family: u_lambda with prescribed negative K_lambda,
/// K_lambda = (-Delta)^sigma u_lambda / u_lambda^p.
struct BlowupFamily {
  int n = 1;
  double sigma = 0.5;
  double p = 3.0;
  double q = 1.0;
  double lambda = 1.0;
  double R = 0.0;
  ScalarField u;

  double c1 = 0.0;  // window: -c1 <= K <= -c2 on B_2
  double c2 = 0.0;
  double c3 = 0.0;  // |grad K| + |hess K| + |third K| bound (realized)
  double c4 = 0.0;  // Hessian definiteness at 0 (realized)
  double delta0 = 0.0;
  double c5 = 0.0;  // |grad K| >= c5 on the shifted ball (realized)
  bool completed = false;

  // integrand weights of the B_2 fast path, with signs
  struct Term {
    RadialWeight weight;
    double sign = 1.0;
  };
  std::vector<Term> k_terms;   // K = c * sum sign * integral
  std::vector<Term> e_terms;   // Step-3 Hessian decomposition at 0

  nlohmann::json descriptor() const;
};

BlowupFamily make_u_lambda(int n, double sigma, double p, double q, double lambda,
                           const QuadConfig& cfg);

/// Fast path on B_2: the three nonsingular integrals of the display (the
/// far-field term split into its two power components).
EvalResult K_lambda_B2(const BlowupFamily& fam, const Vec& x, const QuadConfig& cfg);

/// General path: (-Delta)^sigma u_lambda (x) / u_lambda(x)^p, any x.
EvalResult K_lambda_general(const BlowupFamily& fam, const Vec& x, const QuadConfig& cfg);

Vec K_gradient(const BlowupFamily& fam, const Vec& x, const QuadConfig& cfg);
SymMat K_hessian(const BlowupFamily& fam, const Vec& x, const QuadConfig& cfg);

/// Spec of the kernel-derivative contract: order 1 -> gradient, order 2 ->
/// Hessian of x -> int g(|y|) |x-y|^{-n-2 sigma} dy for weights supported
/// outside B_3, evaluated at x in B_2.
Vec kernel_derivative_gradient(const RadialWeight& g, const Vec& x,
                               const FracParams& params, const QuadConfig& cfg);
SymMat kernel_derivative_hessian(const RadialWeight& g, const Vec& x,
                                 const FracParams& params, const QuadConfig& cfg);

/// Step-3 diagnostic: the four normalized Hessian pieces at the origin, each
/// by direct spherical quadrature. hessian(0)_{ij} = (n+2s) c sum_l E_{l,ij}.
struct HessianTermsAtZero {
  std::vector<SymMat> E;  // E_1 .. E_4
  SymMat total;           // the assembled Hessian of K at 0
};
HessianTermsAtZero K_hessian_terms_at_zero(const BlowupFamily& fam, const QuadConfig& cfg);

/// Realized derivative bounds over a B_2 sample grid: c3 as the grid maximum
/// of |grad K| + |hess K|_F + |third K|_F (third derivatives by Richardson
/// differences of the kernel Hessian), c4 as the smallest eigenvalue of
/// -hess K(0).
double estimate_c3(const BlowupFamily& fam, const QuadConfig& cfg, int grid_points = 9);
double estimate_c4(const BlowupFamily& fam, const QuadConfig& cfg);

/// Completes the family: delta0 = min(1/8, c4/(6 c3)), c5 = c4 delta0,
/// verified on a sample grid of B_{2 delta0}(4 delta0 e1). Uses the family's
/// stored c3, c4 (set them from estimate_* or from suite-level estimates).
void delta0_and_rescale(BlowupFamily& fam, const QuadConfig& cfg);

/// The rescaled pair on the shifted ball.
ScalarField u_tilde(const BlowupFamily& fam);
double u_tilde_exponent(const BlowupFamily& fam);  // q + 2 sigma - p q
EvalResult K_tilde(const BlowupFamily& fam, const Vec& x, const QuadConfig& cfg);

}  // namespace fraclab
