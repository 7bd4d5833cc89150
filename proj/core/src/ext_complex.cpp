#include "weierlab/ext_complex.hpp"

#include <cmath>
#include <ostream>

#include "weierlab/errors.hpp"

namespace weierlab {

ExtComplex::ExtComplex(Complex value) : value_(value) {
  if (!std::isfinite(value.real()) || !std::isfinite(value.imag())) {
    throw Error(ErrorCode::NonFinite, "ExtComplex: finite value expected");
  }
}

Complex ExtComplex::value() const {
  if (infinite_) throw Error(ErrorCode::InvalidArgument, "ExtComplex: value() at infinity");
  return value_;
}

std::ostream& operator<<(std::ostream& os, const ExtComplex& v) {
  if (v.is_infinite()) return os << "inf";
  return os << v.value();
}

}  // namespace weierlab
