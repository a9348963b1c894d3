#include "fraclab/field.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fraclab {

PiecewiseRadialProfile::PiecewiseRadialProfile(std::vector<double> breaks,
                                               std::vector<Fn> branches) {
  if (branches.size() != breaks.size() + 1)
    throw std::invalid_argument("PiecewiseRadialProfile: need breaks.size()+1 branches");
  breaks_ = breaks;
  fn_ = [breaks = std::move(breaks), branches = std::move(branches)](double r) {
    size_t i = 0;
    while (i < breaks.size() && r > breaks[i]) ++i;
    return branches[i](r);
  };
}

PiecewiseRadialProfile PiecewiseRadialProfile::rescaled(double arg_scale,
                                                        double value_scale) const {
  std::vector<double> br;
  br.reserve(breaks_.size());
  for (double b : breaks_) br.push_back(b / arg_scale);
  auto base = fn_;
  return PiecewiseRadialProfile(
      [base, arg_scale, value_scale](double r) { return value_scale * base(arg_scale * r); },
      std::move(br));
}

PiecewiseRadialProfile profile_difference(const PiecewiseRadialProfile& a,
                                          const PiecewiseRadialProfile& b) {
  std::vector<double> br = a.breaks();
  br.insert(br.end(), b.breaks().begin(), b.breaks().end());
  std::sort(br.begin(), br.end());
  br.erase(std::unique(br.begin(), br.end()), br.end());
  return PiecewiseRadialProfile([a, b](double r) { return a(r) - b(r); }, std::move(br));
}

ScalarField ScalarField::constant(int dim, double value) {
  return radial(dim, PiecewiseRadialProfile([value](double) { return value; }),
                TailDescriptor::power_law(value, 0.0, 0.0), SmoothWindow::everywhere(),
                value >= 0.0);
}

ScalarField ScalarField::radial(int dim, PiecewiseRadialProfile profile, TailDescriptor tail,
                                SmoothWindow window, bool nonneg) {
  return radial_about(Vec::zero(dim), std::move(profile), tail, window, nonneg);
}

ScalarField ScalarField::radial_about(Vec center, PiecewiseRadialProfile profile,
                                      TailDescriptor tail, SmoothWindow window,
                                      bool nonneg) {
  ScalarField f;
  f.dim_ = center.dim();
  f.radial_ = true;
  f.center_ = center;
  f.profile_ = std::move(profile);
  f.tail_ = tail;
  f.window_ = window;
  f.nonneg_ = nonneg;
  return f;
}

ScalarField ScalarField::opaque(int dim, EvalFn eval, TailDescriptor tail,
                                SmoothWindow window, bool nonneg,
                                std::vector<double> radial_hints) {
  ScalarField f;
  f.dim_ = dim;
  f.radial_ = false;
  f.center_ = Vec::zero(dim);
  f.eval_ = std::move(eval);
  f.profile_ = PiecewiseRadialProfile([](double) { return 0.0; }, std::move(radial_hints));
  f.tail_ = tail;
  f.window_ = window;
  f.nonneg_ = nonneg;
  return f;
}

double ScalarField::operator()(const Vec& x) const {
  if (radial_) return profile_((x - center_).norm());
  return eval_(x);
}

double ScalarField::profile_at(double r) const {
  if (!radial_) throw std::invalid_argument("ScalarField: no radial profile");
  return profile_(r);
}

ScalarField ScalarField::translated(const Vec& shift) const {
  ScalarField f = *this;
  f.center_ = center_ + shift;
  if (!radial_) {
    auto base = eval_;
    f.eval_ = [base, shift](const Vec& x) { return base(x - shift); };
  }
  return f;
}

ScalarField ScalarField::dilated_argument(double mu) const {
  if (!(mu > 0.0)) throw std::invalid_argument("dilated_argument: mu must be positive");
  ScalarField f = *this;
  f.center_ = center_ * (1.0 / mu);
  f.window_.inner = window_.inner / mu;
  f.window_.outer = window_.outer / mu;
  switch (tail_.kind) {
    case TailDescriptor::Kind::CompactSupport:
      f.tail_.radius = tail_.radius / mu;
      break;
    case TailDescriptor::Kind::PowerLaw:
      f.tail_.coefficient = tail_.coefficient * std::pow(mu, -tail_.exponent);
      f.tail_.onset = tail_.onset / mu;
      break;
    case TailDescriptor::Kind::Bounded:
      break;
  }
  if (radial_) {
    f.profile_ = profile_.rescaled(mu, 1.0);
  } else {
    auto base = eval_;
    f.eval_ = [base, mu](const Vec& x) { return base(x * mu); };
    std::vector<double> hints;
    for (double b : profile_.breaks()) hints.push_back(b / mu);
    f.profile_ = PiecewiseRadialProfile([](double) { return 0.0; }, std::move(hints));
  }
  return f;
}

ScalarField ScalarField::scaled(double s) const {
  ScalarField f = *this;
  f.nonneg_ = nonneg_ && s >= 0.0;
  switch (tail_.kind) {
    case TailDescriptor::Kind::CompactSupport:
      break;
    case TailDescriptor::Kind::PowerLaw:
      f.tail_.coefficient = tail_.coefficient * s;
      break;
    case TailDescriptor::Kind::Bounded:
      f.tail_.bound = tail_.bound * std::abs(s);
      break;
  }
  if (radial_) {
    f.profile_ = profile_.rescaled(1.0, s);
  } else {
    auto base = eval_;
    f.eval_ = [base, s](const Vec& x) { return s * base(x); };
  }
  return f;
}

ScalarField ScalarField::without_radial_info() const {
  if (!radial_) return *this;
  ScalarField f = *this;
  f.radial_ = false;
  auto prof = profile_;
  auto ctr = center_;
  f.eval_ = [prof, ctr](const Vec& x) { return prof((x - ctr).norm()); };
  // keep the breakpoints as hints (still radii about center_)
  return f;
}

namespace {

TailDescriptor difference_tail(const TailDescriptor& a, const TailDescriptor& b) {
  using K = TailDescriptor::Kind;
  if (a.kind == K::CompactSupport && b.kind == K::CompactSupport)
    return TailDescriptor::compact_support(std::max(a.radius, b.radius));
  if (a.kind == K::PowerLaw && b.kind == K::CompactSupport)
    return TailDescriptor::power_law(a.coefficient, a.exponent, std::max(a.onset, b.radius));
  if (a.kind == K::CompactSupport && b.kind == K::PowerLaw)
    return TailDescriptor::power_law(-b.coefficient, b.exponent, std::max(a.radius, b.onset));
  if (a.kind == K::PowerLaw && b.kind == K::PowerLaw && a.exponent == b.exponent) {
    const double coeff = a.coefficient - b.coefficient;
    const double onset = std::max(a.onset, b.onset);
    if (coeff == 0.0) return TailDescriptor::compact_support(onset);
    return TailDescriptor::power_law(coeff, a.exponent, onset);
  }
  return TailDescriptor::bounded(a.bound + b.bound);  // best effort; forces mapped far field
}

}  // namespace

ScalarField field_difference(const ScalarField& u, const ScalarField& v) {
  if (u.dim() != v.dim())
    throw std::invalid_argument("field_difference: dimension mismatch");
  const bool same_center = (u.center() - v.center()).norm() == 0.0;
  SmoothWindow win{std::max(u.window().inner, v.window().inner),
                   std::min(u.window().outer, v.window().outer)};
  TailDescriptor tail = difference_tail(u.tail(), v.tail());

  if (u.is_radial() && v.is_radial() && same_center) {
    return ScalarField::radial_about(u.center(),
                                     profile_difference(u.profile(), v.profile()), tail,
                                     win, false);
  }
  if (!same_center && !(u.window().inner == 0.0 && v.window().inner == 0.0))
    throw std::invalid_argument(
        "field_difference: mismatched centers with restricted smooth windows");
  std::vector<double> hints = u.breakpoints();
  hints.insert(hints.end(), v.breakpoints().begin(), v.breakpoints().end());
  std::sort(hints.begin(), hints.end());
  hints.erase(std::unique(hints.begin(), hints.end()), hints.end());
  auto ue = u, ve = v;
  return ScalarField::opaque(
      u.dim(), [ue, ve](const Vec& x) { return ue(x) - ve(x); }, tail, win, false,
      std::move(hints));
}

}  // namespace fraclab
