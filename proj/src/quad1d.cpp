#include "fraclab/quad1d.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>

#include "fraclab/errors.hpp"

namespace fraclab {

namespace {

// 15-point Kronrod extension of the 7-point Gauss rule (positive abscissae).
constexpr double kK15Nodes[8] = {
    0.991455371120813, 0.949107912342759, 0.864864423359769, 0.741531185599394,
    0.586087235467691, 0.405845151377397, 0.207784955007898, 0.0};
constexpr double kK15Weights[8] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250, 0.140653259715525,
    0.169004726639267, 0.190350578064785, 0.204432940075298, 0.209482141084728};
// Gauss weights attach to the odd-indexed Kronrod nodes.
constexpr double kG7Weights[4] = {0.129484966168870, 0.279705391489277,
                                  0.381830050505119, 0.417959183673469};

struct Segment {
  double a, b;
  double value, err;
};

}  // namespace

QuadResult gk15_panel(const Integrand& f, double a, double b) {
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  double fv[15];
  for (int i = 0; i < 7; ++i) {
    fv[i] = f(mid - half * kK15Nodes[i]);
    fv[14 - i] = f(mid + half * kK15Nodes[i]);
  }
  fv[7] = f(mid);

  KahanSum kronrod;
  for (int i = 0; i < 7; ++i) kronrod.add(kK15Weights[i] * (fv[i] + fv[14 - i]));
  kronrod.add(kK15Weights[7] * fv[7]);

  KahanSum gauss;
  for (int i = 0; i < 3; ++i) gauss.add(kG7Weights[i] * (fv[2 * i + 1] + fv[13 - 2 * i]));
  gauss.add(kG7Weights[3] * fv[7]);

  QuadResult r;
  r.value = kronrod.value() * half;
  r.err = std::abs((kronrod.value() - gauss.value()) * half);
  return r;
}

QuadResult integrate_adaptive(const Integrand& f, const std::vector<double>& nodes,
                              const AdaptiveOptions& opt) {
  if (nodes.size() < 2) return {};
  std::vector<Segment> segs;
  segs.reserve(nodes.size() + opt.max_subdiv);
  for (size_t i = 0; i + 1 < nodes.size(); ++i) {
    if (!(nodes[i] < nodes[i + 1])) continue;
    auto r = gk15_panel(f, nodes[i], nodes[i + 1]);
    segs.push_back({nodes[i], nodes[i + 1], r.value, r.err});
  }

  auto totals = [&segs]() {
    KahanSum v, e;
    for (const auto& s : segs) {
      v.add(s.value);
      e.add(s.err);
    }
    return std::pair<double, double>(v.value(), e.value());
  };

  int splits = 0;
  auto [val, err] = totals();
  while (err > std::max(opt.abs_tol, opt.rel_tol * std::abs(val))) {
    if (splits >= opt.max_subdiv) {
      if (opt.throw_on_failure)
        throw ToleranceNotMet("integrate_adaptive: subdivision budget exhausted");
      break;
    }
    // split the segment with the largest error estimate (first on ties)
    size_t worst = 0;
    for (size_t i = 1; i < segs.size(); ++i)
      if (segs[i].err > segs[worst].err) worst = i;
    Segment s = segs[worst];
    const double m = 0.5 * (s.a + s.b);
    if (!(s.a < m && m < s.b)) break;  // interval at floating-point resolution
    auto left = gk15_panel(f, s.a, m);
    auto right = gk15_panel(f, m, s.b);
    segs[worst] = {s.a, m, left.value, left.err};
    segs.push_back({m, s.b, right.value, right.err});
    ++splits;
    std::tie(val, err) = totals();
  }

  // deterministic final reduction: sum in left-endpoint order
  std::sort(segs.begin(), segs.end(),
            [](const Segment& x, const Segment& y) { return x.a < y.a; });
  KahanSum v, e;
  for (const auto& s : segs) {
    v.add(s.value);
    e.add(s.err);
  }
  return {v.value(), e.value()};
}

QuadResult integrate_adaptive(const Integrand& f, double a, double b,
                              const AdaptiveOptions& opt) {
  return integrate_adaptive(f, std::vector<double>{a, b}, opt);
}

QuadResult integrate_power_weighted(const Integrand& h, double b, double beta,
                                    const AdaptiveOptions& opt) {
  if (!(beta > 0.0)) throw std::invalid_argument("integrate_power_weighted: beta must be > 0");
  if (!(b > 0.0)) return {};
  if (beta >= 1.0) {
    auto f = [&h, beta](double s) { return std::pow(s, beta - 1.0) * h(s); };
    return integrate_adaptive(f, 0.0, b, opt);
  }
  // tau = s^beta removes the endpoint singularity exactly
  const double inv = 1.0 / beta;
  auto g = [&h, inv](double tau) { return h(std::pow(tau, inv)); };
  auto r = integrate_adaptive(g, 0.0, std::pow(b, beta), opt);
  return {r.value * inv, r.err * inv};
}

const std::pair<std::vector<double>, std::vector<double>>& gauss_legendre(int order) {
  static std::map<int, std::pair<std::vector<double>, std::vector<double>>> cache;
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(order);
  if (it != cache.end()) return it->second;

  std::vector<double> x(order), w(order);
  const int half = (order + 1) / 2;
  for (int i = 0; i < half; ++i) {
    // Newton iteration from the Chebyshev-based initial guess
    double z = std::cos(std::numbers::pi * (i + 0.75) / (order + 0.5));
    double pp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 0; j < order; ++j) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * z * p1 - j * p2) / (j + 1.0);
      }
      pp = order * (z * p0 - p1) / (z * z - 1.0);
      const double dz = p0 / pp;
      z -= dz;
      if (std::abs(dz) < 1e-15) break;
    }
    x[i] = -z;
    x[order - 1 - i] = z;
    w[i] = 2.0 / ((1.0 - z * z) * pp * pp);
    w[order - 1 - i] = w[i];
  }
  return cache.emplace(order, std::make_pair(std::move(x), std::move(w))).first->second;
}

namespace {

double gauss_fixed(const Integrand& f, double a, double b, int order) {
  const auto& [x, w] = gauss_legendre(order);
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  KahanSum s;
  for (int i = 0; i < order; ++i) s.add(w[i] * f(mid + half * x[i]));
  return s.value() * half;
}

}  // namespace

QuadResult integrate_doubling(const Integrand& f, double a, double b,
                              const DoublingOptions& opt) {
  if (!(a < b)) return {};
  double prev = gauss_fixed(f, a, b, opt.min_order);
  double gap = std::abs(prev);
  for (int order = 2 * opt.min_order; order <= opt.max_order; order *= 2) {
    const double cur = gauss_fixed(f, a, b, order);
    gap = std::abs(cur - prev);
    prev = cur;
    if (gap <= std::max(opt.abs_tol, opt.rel_tol * std::abs(cur))) break;
  }
  // if the loop ran out, the last gap is reported honestly
  return {prev, gap};
}

}  // namespace fraclab
