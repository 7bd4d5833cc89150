#pragma once

#include <cmath>
#include <complex>
#include <iosfwd>

namespace weierlab {

using Complex = std::complex<double>;

/// A point of the extended complex plane: either a finite, non-NaN complex
/// number or the point at infinity.
/// |z| as sqrt(norm); cheaper than the overflow-safe std::abs and accurate
/// for the magnitudes handled here.
inline double modulus(Complex z) noexcept { return std::sqrt(std::norm(z)); }

class ExtComplex {
 public:
  /// Finite value. Throws `Error(NonFinite)` on NaN or infinite components.
  ExtComplex(Complex value);  // NOLINT: implicit by intent
  ExtComplex(double re, double im = 0.0) : ExtComplex(Complex(re, im)) {}

  static ExtComplex infinity() noexcept { return ExtComplex(); }

  bool is_infinite() const noexcept { return infinite_; }
  bool is_finite() const noexcept { return !infinite_; }

  /// Finite value; throws `Error(InvalidArgument)` at infinity.
  Complex value() const;

  friend bool operator==(const ExtComplex& a, const ExtComplex& b) noexcept {
    if (a.infinite_ || b.infinite_) return a.infinite_ == b.infinite_;
    return a.value_ == b.value_;
  }

 private:
  ExtComplex() noexcept : infinite_(true) {}

  Complex value_{};
  bool infinite_ = false;
};

std::ostream& operator<<(std::ostream& os, const ExtComplex& v);

}  // namespace weierlab
