#include "weierlab/domain.hpp"

#include <algorithm>
#include <cmath>

#include "weierlab/errors.hpp"

namespace weierlab {
namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

bool positive_finite(double x) { return std::isfinite(x) && x > 0.0; }

}  // namespace

DomainSpec::DomainSpec(Region region, std::vector<Complex> punctures)
    : region_(std::move(region)), punctures_(std::move(punctures)) {
  std::visit(overloaded{
                 [](const Disk& d) {
                   if (!positive_finite(d.radius)) {
                     throw Error(ErrorCode::InvalidArgument, "disk radius must be positive");
                   }
                 },
                 [](const Annulus& a) {
                   if (!positive_finite(a.inner_radius) || !positive_finite(a.outer_radius) ||
                       a.inner_radius >= a.outer_radius) {
                     throw Error(ErrorCode::InvalidArgument, "annulus needs 0 < r_in < r_out");
                   }
                 },
                 [](const Rectangle& r) {
                   if (!(r.lower_left.real() < r.upper_right.real()) ||
                       !(r.lower_left.imag() < r.upper_right.imag())) {
                     throw Error(ErrorCode::InvalidArgument, "rectangle corners must span an open box");
                   }
                 },
                 [](const TruncatedPlane& t) {
                   if (!positive_finite(t.outer_radius)) {
                     throw Error(ErrorCode::InvalidArgument, "outer radius must be positive");
                   }
                 },
             },
             region_);
  for (std::size_t i = 0; i < punctures_.size(); ++i) {
    if (!region_contains(punctures_[i])) {
      throw Error(ErrorCode::InvalidArgument, "puncture lies outside the region");
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (punctures_[i] == punctures_[j]) {
        throw Error(ErrorCode::InvalidArgument, "punctures must be pairwise distinct");
      }
    }
  }
}

double DomainSpec::boundary_distance(Complex z) const {
  return std::visit(overloaded{
                        [&](const Disk& d) { return d.radius - modulus(z - d.center); },
                        [&](const Annulus& a) {
                          double r = modulus(z - a.center);
                          return std::min(r - a.inner_radius, a.outer_radius - r);
                        },
                        [&](const Rectangle& r) {
                          return std::min({z.real() - r.lower_left.real(),
                                           r.upper_right.real() - z.real(),
                                           z.imag() - r.lower_left.imag(),
                                           r.upper_right.imag() - z.imag()});
                        },
                        [&](const TruncatedPlane& t) { return t.outer_radius - modulus(z); },
                    },
                    region_);
}

bool DomainSpec::region_contains(Complex z) const { return boundary_distance(z) > 0.0; }

int DomainSpec::puncture_near(Complex z, double tol) const {
  for (std::size_t i = 0; i < punctures_.size(); ++i) {
    if (modulus(z - punctures_[i]) <= tol) return static_cast<int>(i);
  }
  return -1;
}

bool DomainSpec::contains(Complex z, double exclusion) const {
  if (!region_contains(z)) return false;
  for (const Complex& p : punctures_) {
    double dist = modulus(z - p);
    if (dist == 0.0 || dist < exclusion) return false;
  }
  return true;
}

Complex DomainSpec::center() const {
  return std::visit(overloaded{
                        [](const Disk& d) { return d.center; },
                        [](const Annulus& a) { return a.center; },
                        [](const Rectangle& r) { return 0.5 * (r.lower_left + r.upper_right); },
                        [](const TruncatedPlane&) { return Complex(0.0, 0.0); },
                    },
                    region_);
}

double DomainSpec::half_extent() const {
  return std::visit(overloaded{
                        [](const Disk& d) { return d.radius; },
                        [](const Annulus& a) { return a.outer_radius; },
                        [](const Rectangle& r) {
                          Complex span = r.upper_right - r.lower_left;
                          return 0.5 * std::max(span.real(), span.imag());
                        },
                        [](const TruncatedPlane& t) { return t.outer_radius; },
                    },
                    region_);
}

bool DomainSpec::is_simply_connected() const {
  return punctures_.empty() && !std::holds_alternative<Annulus>(region_);
}

const char* DomainSpec::type_name() const {
  return std::visit(overloaded{
                        [](const Disk&) { return "disk"; },
                        [](const Annulus&) { return "annulus"; },
                        [](const Rectangle&) { return "rectangle"; },
                        [](const TruncatedPlane&) { return "truncated_plane"; },
                    },
                    region_);
}

}  // namespace weierlab
