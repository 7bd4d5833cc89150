#pragma once

#include <Eigen/Core>
#include <array>
#include <cmath>
#include <complex>

#include "weierlab/errors.hpp"

namespace weierlab {

inline double magnitude(double x) { return std::abs(x); }
inline double magnitude(const std::complex<double>& x) { return std::abs(x); }
template <class Derived>
double magnitude(const Eigen::MatrixBase<Derived>& x) {
  return x.norm();
}

inline bool all_finite(double x) { return std::isfinite(x); }
inline bool all_finite(const std::complex<double>& x) {
  return std::isfinite(x.real()) && std::isfinite(x.imag());
}
template <class Derived>
bool all_finite(const Eigen::MatrixBase<Derived>& x) {
  return x.allFinite();
}

/// 4-point Gauss-Legendre rule on [0, 1].
inline constexpr std::array<double, 4> kGauss4Nodes{0.06943184420297371, 0.33000947820757187,
                                                    0.6699905217924281, 0.9305681557970262};
inline constexpr std::array<double, 4> kGauss4Weights{0.17392742256872692, 0.3260725774312731,
                                                      0.3260725774312731, 0.17392742256872692};

template <class F>
auto gauss_legendre4(F&& f, double a, double b) {
  using T = std::decay_t<decltype(f(a))>;
  const double len = b - a;
  T sum = kGauss4Weights[0] * f(a + len * kGauss4Nodes[0]);
  for (std::size_t k = 1; k < 4; ++k) sum = sum + kGauss4Weights[k] * f(a + len * kGauss4Nodes[k]);
  return T(sum * len);
}

namespace detail {

template <class T, class F>
T simpson_step(F& f, double a, double fa_dummy, double b, const T& fa, const T& fm, const T& fb,
               const T& whole, double tol, int depth, int& evals) {
  (void)fa_dummy;
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const T flm = f(lm);
  const T frm = f(rm);
  evals += 2;
  if (!all_finite(flm) || !all_finite(frm)) {
    throw Error(ErrorCode::NonFinite, "non-finite integrand sample");
  }
  const double h = (b - a) / 12.0;
  const T left = T(h * (fa + 4.0 * flm + fm));
  const T right = T(h * (fm + 4.0 * frm + fb));
  const T delta = T(left + right - whole);
  if (depth <= 0 || magnitude(delta) <= 15.0 * tol) {
    return T(left + right + delta / 15.0);
  }
  return T(simpson_step<T>(f, a, 0.0, m, fa, flm, fm, left, 0.5 * tol, depth - 1, evals) +
           simpson_step<T>(f, m, 0.0, b, fm, frm, fb, right, 0.5 * tol, depth - 1, evals));
}

}  // namespace detail

/// Adaptive Simpson quadrature for scalar, complex or Eigen-vector valued
/// integrands. The absolute target is `rel_tol` times a coarse estimate of
/// the integral of |f|, so cancelling integrands still converge.
template <class F>
auto adaptive_simpson(F&& f, double a, double b, double rel_tol = 1e-10, int max_depth = 40) {
  using T = std::decay_t<decltype(f(a))>;
  constexpr int kPanels = 8;
  std::array<T, 2 * kPanels + 1> samples;
  double scale = 0.0;
  for (int k = 0; k <= 2 * kPanels; ++k) {
    samples[k] = f(a + (b - a) * k / (2.0 * kPanels));
    if (!all_finite(samples[k])) throw Error(ErrorCode::NonFinite, "non-finite integrand sample");
    scale += magnitude(samples[k]);
  }
  scale *= std::abs(b - a) / (2.0 * kPanels + 1.0);
  const double tol = rel_tol * std::max(scale, 1e-300) / kPanels;
  int evals = 0;
  T total = T(samples[0] * 0.0);
  for (int p = 0; p < kPanels; ++p) {
    const double pa = a + (b - a) * p / kPanels;
    const double pb = a + (b - a) * (p + 1) / kPanels;
    const T& fa = samples[2 * p];
    const T& fm = samples[2 * p + 1];
    const T& fb = samples[2 * p + 2];
    const T whole = T((pb - pa) / 6.0 * (fa + 4.0 * fm + fb));
    total = T(total + detail::simpson_step<T>(f, pa, 0.0, pb, fa, fm, fb, whole, tol, max_depth, evals));
  }
  return total;
}

}  // namespace weierlab
