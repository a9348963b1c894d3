#include "fraclab/richardson.hpp"

#include <cmath>
#include <vector>

namespace fraclab {

namespace {

// Richardson tableau for an h^2-series of central-difference estimates;
// d[i] is the estimate at stride h_min * 2^i (smallest stride first).
double extrapolate(std::vector<double> d, double* err) {
  const size_t k = d.size();
  double best = d[0];
  double gap = (k > 1) ? std::abs(d[0] - d[1]) : std::abs(d[0]);
  for (size_t level = 1; level < k; ++level) {
    const double factor = std::pow(4.0, level);
    for (size_t i = 0; i + level < k; ++i)
      d[i] = (factor * d[i] - d[i + 1]) / (factor - 1.0);
    gap = std::abs(d[0] - best);
    best = d[0];
  }
  if (err) *err = gap;
  return best;
}

}  // namespace

double richardson_derivative(const std::function<double(double)>& f, double x, double h0,
                             int steps, double* err) {
  std::vector<double> d;
  double h = h0;
  for (int k = 0; k <= steps; ++k, h *= 0.5)
    d.push_back((f(x + h) - f(x - h)) / (2.0 * h));
  std::reverse(d.begin(), d.end());  // smallest h first for the tableau above
  return extrapolate(std::move(d), err);
}

double richardson_second_derivative(const std::function<double(double)>& f, double x,
                                    double h0, int steps, double* err) {
  const double fx = f(x);
  std::vector<double> d;
  double h = h0;
  for (int k = 0; k <= steps; ++k, h *= 0.5)
    d.push_back((f(x + h) - 2.0 * fx + f(x - h)) / (h * h));
  std::reverse(d.begin(), d.end());
  return extrapolate(std::move(d), err);
}

Vec richardson_gradient(const std::function<double(const Vec&)>& f, const Vec& x,
                        double h0, int steps) {
  const int n = x.dim();
  Vec g(n);
  for (int i = 0; i < n; ++i) {
    auto fi = [&](double t) {
      Vec y = x;
      y[i] = t;
      return f(y);
    };
    g[i] = richardson_derivative(fi, x[i], h0, steps);
  }
  return g;
}

SymMat richardson_hessian(const std::function<double(const Vec&)>& f, const Vec& x,
                          double h0, int steps) {
  const int n = x.dim();
  SymMat H(n);
  for (int i = 0; i < n; ++i) {
    auto fi = [&](double t) {
      Vec y = x;
      y[i] = t;
      return f(y);
    };
    H.set(i, i, richardson_second_derivative(fi, x[i], h0, steps));
  }
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      std::vector<double> d;
      double h = h0;
      for (int k = 0; k <= steps; ++k, h *= 0.5) {
        Vec pp = x, pm = x, mp = x, mm = x;
        pp[i] += h; pp[j] += h;
        pm[i] += h; pm[j] -= h;
        mp[i] -= h; mp[j] += h;
        mm[i] -= h; mm[j] -= h;
        d.push_back((f(pp) - f(pm) - f(mp) + f(mm)) / (4.0 * h * h));
      }
      std::reverse(d.begin(), d.end());
      H.set(i, j, extrapolate(std::move(d), nullptr));
    }
  }
  return H;
}

}  // namespace fraclab
