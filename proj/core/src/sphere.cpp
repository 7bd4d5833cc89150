#include "weierlab/sphere.hpp"

#include <cmath>
#include <numbers>

#include "weierlab/errors.hpp"

namespace weierlab {

double chordal(const ExtComplex& a, const ExtComplex& b) {
  if (a.is_infinite() && b.is_infinite()) return 0.0;
  if (a.is_infinite()) return 1.0 / std::sqrt(1.0 + std::norm(b.value()));
  if (b.is_infinite()) return 1.0 / std::sqrt(1.0 + std::norm(a.value()));
  const Complex x = a.value(), y = b.value();
  return std::abs(x - y) / (std::sqrt(1.0 + std::norm(x)) * std::sqrt(1.0 + std::norm(y)));
}

Eigen::Vector3d stereographic(const ExtComplex& v) {
  if (v.is_infinite()) return {0.0, 0.0, 1.0};
  const Complex w = v.value();
  const double n2 = std::norm(w);
  if (n2 > 1e300) return {0.0, 0.0, 1.0};
  const double s = 1.0 / (n2 + 1.0);
  return {2.0 * w.real() * s, 2.0 * w.imag() * s, (n2 - 1.0) * s};
}

SphericalGradient::SphericalGradient(MeroExpr f, LocalOrderOptions opts)
    : f_(std::move(f)),
      df_(derivative(f_)),
      inv_(MeroExpr::constant(1.0) / f_),
      dinv_(derivative(inv_)),
      opts_(std::move(opts)) {}

double SphericalGradient::operator()(Complex z) const {
  constexpr double k = 2.0 * std::numbers::sqrt2;
  ExtComplex v = eval_ext(f_, z, opts_);
  if (v.is_finite() && std::abs(v.value()) <= kReciprocalThreshold) {
    ExtComplex d = eval_ext(df_, z, opts_);
    if (d.is_infinite()) {
      throw Error(ErrorCode::Indeterminate, "derivative infinite at a finite value");
    }
    return k * std::abs(d.value()) / (1.0 + std::norm(v.value()));
  }
  ExtComplex w = eval_ext(inv_, z, opts_);
  ExtComplex dw = eval_ext(dinv_, z, opts_);
  if (w.is_infinite() || dw.is_infinite()) {
    throw Error(ErrorCode::Indeterminate, "reciprocal route failed near a pole");
  }
  return k * std::abs(dw.value()) / (1.0 + std::norm(w.value()));
}

double spherical_gradient(const MeroExpr& f, Complex z) { return SphericalGradient(f)(z); }

MobiusMap::MobiusMap(Complex a, Complex b, Complex c, Complex d) : a_(a), b_(b), c_(c), d_(d) {
  if (a * d - b * c == Complex(0.0, 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "Mobius map requires ad - bc != 0");
  }
}

MobiusMap MobiusMap::from_three_points(Complex p, Complex q, Complex r) {
  if (p == q || q == r || p == r) {
    throw Error(ErrorCode::InvalidArgument, "cross-ratio points must be distinct");
  }
  // T(z) = (z - p)(q - r) / ((z - r)(q - p))
  return {q - r, -p * (q - r), q - p, -r * (q - p)};
}

MobiusMap MobiusMap::disk_swap(Complex z0) {
  if (std::abs(z0) >= 1.0) throw Error(ErrorCode::InvalidArgument, "disk_swap: |z0| must be < 1");
  return {1.0, -z0, std::conj(z0), -1.0};
}

ExtComplex MobiusMap::operator()(const ExtComplex& v) const {
  if (v.is_infinite()) {
    if (c_ == Complex(0.0, 0.0)) return ExtComplex::infinity();
    return ExtComplex(a_ / c_);
  }
  const Complex z = v.value();
  const Complex den = c_ * z + d_;
  if (den == Complex(0.0, 0.0)) return ExtComplex::infinity();
  const Complex w = (a_ * z + b_) / den;
  if (!std::isfinite(w.real()) || !std::isfinite(w.imag())) return ExtComplex::infinity();
  return ExtComplex(w);
}

MobiusMap MobiusMap::inverse() const { return {d_, -b_, -c_, a_}; }

MobiusMap MobiusMap::then(const MobiusMap& o) const {
  return {o.a_ * a_ + o.b_ * c_, o.a_ * b_ + o.b_ * d_, o.c_ * a_ + o.d_ * c_,
          o.c_ * b_ + o.d_ * d_};
}

MeroExpr MobiusMap::as_expr() const {
  const MeroExpr z = MeroExpr::variable();
  const MeroExpr num = MeroExpr::constant(a_) * z + MeroExpr::constant(b_);
  const MeroExpr den = MeroExpr::constant(c_) * z + MeroExpr::constant(d_);
  return num / den;
}

}  // namespace weierlab
