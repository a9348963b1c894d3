#pragma once

#include <functional>
#include <limits>
#include <vector>

#include "fraclab/geometry.hpp"

namespace fraclab {

/// Far-field behavior certificate. Membership in L_sigma(R^n) is decided
/// from this descriptor alone: compact support and bounded fields always
/// qualify; an exact power tail |y|^{-q} needs q > -2 sigma.
struct TailDescriptor {
  enum class Kind { CompactSupport, PowerLaw, Bounded };
  Kind kind = Kind::Bounded;
  double radius = 0.0;       // compact support: u = 0 for |x - center| > radius
  double coefficient = 0.0;  // power law: u = coefficient * |x - center|^{-exponent} ...
  double exponent = 0.0;
  double onset = 0.0;        // ... exactly, for |x - center| >= onset
  double bound = 0.0;        // bounded: |u| <= bound everywhere

  static TailDescriptor compact_support(double radius) {
    TailDescriptor t;
    t.kind = Kind::CompactSupport;
    t.radius = radius;
    return t;
  }
  static TailDescriptor power_law(double coefficient, double exponent, double onset) {
    TailDescriptor t;
    t.kind = Kind::PowerLaw;
    t.coefficient = coefficient;
    t.exponent = exponent;
    t.onset = onset;
    return t;
  }
  static TailDescriptor bounded(double bound) {
    TailDescriptor t;
    t.kind = Kind::Bounded;
    t.bound = bound;
    return t;
  }

  bool in_L_sigma(double sigma) const {
    return kind != Kind::PowerLaw || exponent > -2.0 * sigma;
  }
};

/// Annulus of radii (about the field's center) where the field is smooth
/// enough for a pointwise evaluation of the operator.
struct SmoothWindow {
  double inner = 0.0;
  double outer = std::numeric_limits<double>::infinity();

  static SmoothWindow everywhere() { return {}; }
  static SmoothWindow ball(double radius) { return {0.0, radius}; }
  static SmoothWindow annulus(double in, double out) { return {in, out}; }

  // distance from radius rho to the nearest window boundary (<= 0: outside)
  double margin(double rho) const {
    double m = outer - rho;
    if (inner > 0.0) m = std::min(m, rho - inner);
    return m;
  }
};

/// Radial profile defined piecewise over [0, b1], (b1, b2], ..., (bk, inf).
/// The lower branch owns its right endpoint, so branch boundaries evaluate
/// without floating-point ambiguity.
class PiecewiseRadialProfile {
public:
  using Fn = std::function<double(double)>;

  PiecewiseRadialProfile() = default;
  explicit PiecewiseRadialProfile(Fn whole) : fn_(std::move(whole)) {}
  PiecewiseRadialProfile(std::vector<double> breaks, std::vector<Fn> branches);
  PiecewiseRadialProfile(Fn fn, std::vector<double> breaks)
      : fn_(std::move(fn)), breaks_(std::move(breaks)) {}

  double operator()(double r) const { return fn_(r); }
  const std::vector<double>& breaks() const { return breaks_; }

  // r -> value_scale * f(arg_scale * r); breakpoints rescale accordingly
  PiecewiseRadialProfile rescaled(double arg_scale, double value_scale) const;

private:
  Fn fn_;
  std::vector<double> breaks_;
};

PiecewiseRadialProfile profile_difference(const PiecewiseRadialProfile& a,
                                          const PiecewiseRadialProfile& b);

/// An evaluatable function on R^n carrying the structure the quadrature
/// engine exploits: optional radial profile about a center, breakpoint radii,
/// a smooth window and a tail certificate.
class ScalarField {
public:
  using EvalFn = std::function<double(const Vec&)>;

  static ScalarField constant(int dim, double value);
  static ScalarField radial(int dim, PiecewiseRadialProfile profile, TailDescriptor tail,
                            SmoothWindow window = SmoothWindow::everywhere(),
                            bool nonneg = false);
  static ScalarField radial_about(Vec center, PiecewiseRadialProfile profile,
                                  TailDescriptor tail,
                                  SmoothWindow window = SmoothWindow::everywhere(),
                                  bool nonneg = false);
  static ScalarField opaque(int dim, EvalFn eval, TailDescriptor tail,
                            SmoothWindow window = SmoothWindow::everywhere(),
                            bool nonneg = false, std::vector<double> radial_hints = {});

  double operator()(const Vec& x) const;
  double profile_at(double r) const;  // radial fields only

  int dim() const { return dim_; }
  bool is_radial() const { return radial_; }
  const Vec& center() const { return center_; }
  const PiecewiseRadialProfile& profile() const { return profile_; }
  const std::vector<double>& breakpoints() const { return profile_.breaks(); }
  const TailDescriptor& tail() const { return tail_; }
  const SmoothWindow& window() const { return window_; }
  bool nonneg() const { return nonneg_; }

  /// x -> u(x - shift)
  ScalarField translated(const Vec& shift) const;
  /// x -> u(mu x), mu > 0
  ScalarField dilated_argument(double mu) const;
  /// x -> s u(x)
  ScalarField scaled(double s) const;
  /// same values, radial metadata dropped (forces the generic spherical path)
  ScalarField without_radial_info() const;

private:
  int dim_ = 1;
  bool radial_ = false;
  Vec center_{0.0};
  PiecewiseRadialProfile profile_;
  EvalFn eval_;
  TailDescriptor tail_;
  SmoothWindow window_;
  bool nonneg_ = false;
};

/// u - v with combined metadata. Requires matching dimensions and, unless
/// both fields are smooth everywhere, matching centers.
ScalarField field_difference(const ScalarField& u, const ScalarField& v);

}  // namespace fraclab
