#pragma once

#include <functional>
#include <utility>
#include <vector>

namespace fraclab {

struct QuadResult {
  double value = 0.0;
  double err = 0.0;
};

struct AdaptiveOptions {
  double abs_tol = 1e-9;
  double rel_tol = 1e-8;
  int max_subdiv = 60;        // interval bisections per call
  bool throw_on_failure = true;
};

using Integrand = std::function<double(double)>;

/// One 15-point Gauss--Kronrod panel on [a,b]; err is the embedded
/// 7-point Gauss estimate |K15 - G7|.
QuadResult gk15_panel(const Integrand& f, double a, double b);

/// Globally adaptive bisection over the segments delimited by `nodes`
/// (ascending). Splits the worst segment until the summed error estimate
/// drops below max(abs_tol, rel_tol * |value|) or the budget runs out.
QuadResult integrate_adaptive(const Integrand& f, const std::vector<double>& nodes,
                              const AdaptiveOptions& opt);

QuadResult integrate_adaptive(const Integrand& f, double a, double b,
                              const AdaptiveOptions& opt);

/// int_0^b s^{beta-1} h(s) ds for beta > 0 and h bounded. For beta < 1 the
/// endpoint power is peeled off exactly by the substitution tau = s^beta.
QuadResult integrate_power_weighted(const Integrand& h, double b, double beta,
                                    const AdaptiveOptions& opt);

/// Gauss--Legendre nodes and weights on [-1,1]; cached per order, thread safe.
const std::pair<std::vector<double>, std::vector<double>>& gauss_legendre(int order);

struct DoublingOptions {
  int min_order = 16;
  int max_order = 1024;
  double abs_tol = 1e-10;
  double rel_tol = 1e-9;
};

/// Fixed-order Gauss rule on [a,b] with the order doubled until two
/// successive orders agree within tolerance. err is the last gap.
QuadResult integrate_doubling(const Integrand& f, double a, double b,
                              const DoublingOptions& opt);

/// Compensated (Kahan) accumulator for deterministic reductions.
class KahanSum {
public:
  void add(double x) {
    const double y = x - comp_;
    const double t = sum_ + y;
    comp_ = (t - sum_) - y;
    sum_ = t;
  }
  double value() const { return sum_; }

private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

}  // namespace fraclab
