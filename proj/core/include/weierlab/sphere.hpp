#pragma once

#include <Eigen/Core>

#include "weierlab/ext_complex.hpp"
#include "weierlab/mero_expr.hpp"

namespace weierlab {

/// Half the chordal distance: half the Euclidean distance between the
/// stereographic images on the unit sphere. Values lie in [0, 1].
double chordal(const ExtComplex& a, const ExtComplex& b);

/// Inverse stereographic projection from the north pole; infinity maps to
/// (0, 0, 1) and 0 to the south pole.
Eigen::Vector3d stereographic(const ExtComplex& v);

/// |grad f|_e = 2 sqrt(2) |f'| / (1 + |f|^2), the Euclidean gradient length of
/// the sphere-valued map. Near poles (|f| > 1e6) the reciprocal 1/f is used,
/// which keeps the value finite.
///
/// Holds the derivative and reciprocal data so repeated evaluation does not
/// rebuild trees.
class SphericalGradient {
 public:
  explicit SphericalGradient(MeroExpr f, LocalOrderOptions opts = {});

  double operator()(Complex z) const;

  const MeroExpr& function() const noexcept { return f_; }

  static constexpr double kReciprocalThreshold = 1e6;

 private:
  MeroExpr f_, df_, inv_, dinv_;
  LocalOrderOptions opts_;
};

/// One-shot convenience wrapper around `SphericalGradient`.
double spherical_gradient(const MeroExpr& f, Complex z);

/// Linear fractional map z -> (a z + b) / (c z + d), ad - bc != 0.
class MobiusMap {
 public:
  MobiusMap(Complex a, Complex b, Complex c, Complex d);

  static MobiusMap identity() { return {1.0, 0.0, 0.0, 1.0}; }
  /// The map sending p, q, r to 0, 1, infinity (finite, pairwise distinct).
  static MobiusMap from_three_points(Complex p, Complex q, Complex r);
  /// Disk automorphism z -> (z - z0) / (z conj(z0) - 1), an involution that
  /// swaps 0 and z0.
  static MobiusMap disk_swap(Complex z0);

  ExtComplex operator()(const ExtComplex& v) const;
  MobiusMap inverse() const;
  MobiusMap then(const MobiusMap& outer) const;
  /// The map as an expression in z.
  MeroExpr as_expr() const;

  Complex a() const noexcept { return a_; }
  Complex b() const noexcept { return b_; }
  Complex c() const noexcept { return c_; }
  Complex d() const noexcept { return d_; }

 private:
  Complex a_, b_, c_, d_;
};

inline ExtComplex mobius_apply(const MobiusMap& t, const ExtComplex& v) { return t(v); }

}  // namespace weierlab
