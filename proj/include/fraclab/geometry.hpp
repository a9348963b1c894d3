#pragma once

#include <array>
#include <cassert>
#include <cmath>
#include <initializer_list>

namespace fraclab {

inline constexpr int kMaxDim = 3;

/// Point in R^n for n <= 3. Fixed storage, value semantics.
class Vec {
public:
  Vec() = default;
  explicit Vec(int dim) : n_(dim) { assert(dim >= 1 && dim <= kMaxDim); }
  Vec(std::initializer_list<double> xs) {
    assert(xs.size() >= 1 && xs.size() <= kMaxDim);
    n_ = static_cast<int>(xs.size());
    int i = 0;
    for (double v : xs) c_[i++] = v;
  }

  static Vec zero(int dim) { return Vec(dim); }
  static Vec axis(int dim, int k, double scale = 1.0) {
    Vec v(dim);
    v[k] = scale;
    return v;
  }

  int dim() const { return n_; }
  double operator[](int i) const { return c_[i]; }
  double& operator[](int i) { return c_[i]; }

  double dot(const Vec& o) const {
    double s = 0;
    for (int i = 0; i < n_; ++i) s += c_[i] * o.c_[i];
    return s;
  }
  double norm2() const { return dot(*this); }
  double norm() const { return std::sqrt(norm2()); }

  Vec operator+(const Vec& o) const {
    Vec r(n_);
    for (int i = 0; i < n_; ++i) r.c_[i] = c_[i] + o.c_[i];
    return r;
  }
  Vec operator-(const Vec& o) const {
    Vec r(n_);
    for (int i = 0; i < n_; ++i) r.c_[i] = c_[i] - o.c_[i];
    return r;
  }
  Vec operator*(double s) const {
    Vec r(n_);
    for (int i = 0; i < n_; ++i) r.c_[i] = c_[i] * s;
    return r;
  }
  Vec operator-() const { return *this * -1.0; }

private:
  std::array<double, kMaxDim> c_{};
  int n_ = 1;
};

inline Vec operator*(double s, const Vec& v) { return v * s; }

/// Small symmetric matrix (n <= 3), stored dense.
class SymMat {
public:
  SymMat() = default;
  explicit SymMat(int dim) : n_(dim) { assert(dim >= 1 && dim <= kMaxDim); }

  static SymMat identity(int dim, double scale = 1.0) {
    SymMat m(dim);
    for (int i = 0; i < dim; ++i) m(i, i) = scale;
    return m;
  }

  int dim() const { return n_; }
  double operator()(int i, int j) const { return a_[i][j]; }
  double& operator()(int i, int j) { return a_[i][j]; }

  void set(int i, int j, double v) {
    a_[i][j] = v;
    a_[j][i] = v;
  }

  double max_abs() const {
    double m = 0;
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j) m = std::max(m, std::abs(a_[i][j]));
    return m;
  }
  double frobenius() const {
    double s = 0;
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j) s += a_[i][j] * a_[i][j];
    return std::sqrt(s);
  }
  double max_offdiag_abs() const {
    double m = 0;
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j)
        if (i != j) m = std::max(m, std::abs(a_[i][j]));
    return m;
  }

private:
  std::array<std::array<double, kMaxDim>, kMaxDim> a_{};
  int n_ = 1;
};

/// Eigenvalues of a small symmetric matrix by cyclic Jacobi sweeps.
inline std::array<double, kMaxDim> sym_eigenvalues(SymMat m) {
  const int n = m.dim();
  for (int sweep = 0; sweep < 50; ++sweep) {
    double off = 0;
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q) off += m(p, q) * m(p, q);
    if (off < 1e-30) break;
    for (int p = 0; p < n; ++p) {
      for (int q = p + 1; q < n; ++q) {
        if (m(p, q) == 0.0) continue;
        const double theta = 0.5 * std::atan2(2.0 * m(p, q), m(q, q) - m(p, p));
        const double c = std::cos(theta), s = std::sin(theta);
        const double app = m(p, p), aqq = m(q, q), apq = m(p, q);
        m(p, p) = c * c * app - 2.0 * s * c * apq + s * s * aqq;
        m(q, q) = s * s * app + 2.0 * s * c * apq + c * c * aqq;
        m.set(p, q, 0.0);
        for (int k = 0; k < n; ++k) {
          if (k == p || k == q) continue;
          const double akp = m(k, p), akq = m(k, q);
          m.set(k, p, c * akp - s * akq);
          m.set(k, q, s * akp + c * akq);
        }
      }
    }
  }
  std::array<double, kMaxDim> ev{};
  for (int i = 0; i < n; ++i) ev[i] = m(i, i);
  return ev;
}

/// Orthogonal frame taking e1 to a given unit direction (Householder reflection).
/// Used to evaluate axially reduced integrals in a rotated coordinate system.
class AxialFrame {
public:
  // axis need not be normalized; a zero axis yields the identity frame.
  explicit AxialFrame(const Vec& axis) : n_(axis.dim()), v_(axis.dim()) {
    const double len = axis.norm();
    if (len == 0.0) return;
    Vec u = axis * (1.0 / len);
    Vec w = u - Vec::axis(n_, 0);
    const double w2 = w.norm2();
    if (w2 < 1e-30) return;  // axis already e1
    v_ = w;
    v2_ = w2;
    active_ = true;
  }

  // maps local coordinates (axis = e1) to world coordinates
  Vec to_world(const Vec& local) const {
    if (!active_) return local;
    const double f = 2.0 * local.dot(v_) / v2_;
    return local - v_ * f;
  }

  // H is a reflection, hence its own inverse
  Vec to_local(const Vec& world) const { return to_world(world); }

  int dim() const { return n_; }

private:
  int n_;
  Vec v_;
  double v2_ = 1.0;
  bool active_ = false;
};

}  // namespace fraclab
