#include "weierlab/rational.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

#include "weierlab/errors.hpp"

namespace weierlab {
namespace {

Polynomial trim(Polynomial p) {
  double scale = 0.0;
  for (const Complex& c : p) scale = std::max(scale, std::abs(c));
  while (p.size() > 1 && std::abs(p.back()) <= 1e-14 * scale) p.pop_back();
  if (p.empty()) p.push_back(0.0);
  return p;
}

Polynomial mul(const Polynomial& a, const Polynomial& b) {
  Polynomial out(a.size() + b.size() - 1, Complex(0.0, 0.0));
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  }
  return trim(std::move(out));
}

Polynomial add(const Polynomial& a, const Polynomial& b, double sign = 1.0) {
  Polynomial out(std::max(a.size(), b.size()), Complex(0.0, 0.0));
  for (std::size_t i = 0; i < a.size(); ++i) out[i] += a[i];
  for (std::size_t i = 0; i < b.size(); ++i) out[i] += sign * b[i];
  return trim(std::move(out));
}

Polynomial power(Polynomial base, unsigned k) {
  Polynomial out{Complex(1.0, 0.0)};
  while (k) {
    if (k & 1u) out = mul(out, base);
    k >>= 1u;
    if (k) base = mul(base, base);
  }
  return out;
}

RationalForm convert(const MeroExpr& e) {
  using Kind = MeroExpr::Kind;
  switch (e.kind()) {
    case Kind::Constant: return {{e.constant_value()}, {Complex(1.0, 0.0)}};
    case Kind::Variable: return {{Complex(0.0, 0.0), Complex(1.0, 0.0)}, {Complex(1.0, 0.0)}};
    case Kind::Neg: {
      RationalForm r = convert(e.lhs());
      for (Complex& c : r.numerator) c = -c;
      return r;
    }
    case Kind::Pow: {
      RationalForm r = convert(e.lhs());
      int k = e.exponent();
      unsigned mag = static_cast<unsigned>(k < 0 ? -k : k);
      Polynomial n = power(r.numerator, mag), d = power(r.denominator, mag);
      if (k < 0) std::swap(n, d);
      return {n, d};
    }
    case Kind::Add:
    case Kind::Sub: {
      RationalForm a = convert(e.lhs()), b = convert(e.rhs());
      double sign = e.kind() == Kind::Add ? 1.0 : -1.0;
      return {add(mul(a.numerator, b.denominator), mul(b.numerator, a.denominator), sign),
              mul(a.denominator, b.denominator)};
    }
    case Kind::Mul: {
      RationalForm a = convert(e.lhs()), b = convert(e.rhs());
      return {mul(a.numerator, b.numerator), mul(a.denominator, b.denominator)};
    }
    case Kind::Div: {
      RationalForm a = convert(e.lhs()), b = convert(e.rhs());
      return {mul(a.numerator, b.denominator), mul(a.denominator, b.numerator)};
    }
    case Kind::Exp: break;
  }
  throw Error(ErrorCode::Precondition, "expression is not rational");
}

}  // namespace

RationalForm to_rational_form(const MeroExpr& e) {
  if (!e.is_rational()) throw Error(ErrorCode::Precondition, "expression is not rational");
  return convert(e);
}

std::vector<Complex> polynomial_roots(const Polynomial& p_in, double cluster_radius) {
  Polynomial p = trim(p_in);
  const std::size_t n = p.size() - 1;
  if (n == 0) return {};
  Eigen::MatrixXcd companion = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(n),
                                                      static_cast<Eigen::Index>(n));
  for (std::size_t i = 1; i < n; ++i) {
    companion(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i - 1)) = 1.0;
  }
  for (std::size_t i = 0; i < n; ++i) {
    companion(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(n - 1)) = -p[i] / p[n];
  }
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(companion, false);
  std::vector<Complex> raw(solver.eigenvalues().data(), solver.eigenvalues().data() + n);

  std::vector<Complex> merged;
  std::vector<bool> used(raw.size(), false);
  for (std::size_t i = 0; i < raw.size(); ++i) {
    if (used[i]) continue;
    Complex sum = raw[i];
    int count = 1;
    used[i] = true;
    for (std::size_t j = i + 1; j < raw.size(); ++j) {
      if (!used[j] && std::abs(raw[j] - raw[i]) < cluster_radius) {
        used[j] = true;
        sum += raw[j];
        ++count;
      }
    }
    merged.push_back(sum / static_cast<double>(count));
  }
  return merged;
}

std::vector<Complex> critical_points(const MeroExpr& e) {
  RationalForm r = to_rational_form(e);
  std::vector<Complex> pts = polynomial_roots(r.numerator);
  for (const Complex& c : polynomial_roots(r.denominator)) pts.push_back(c);
  std::vector<Complex> out;
  for (const Complex& c : pts) {
    bool dup = std::any_of(out.begin(), out.end(),
                           [&](const Complex& o) { return std::abs(o - c) < 1e-6; });
    if (!dup) out.push_back(c);
  }
  return out;
}

}  // namespace weierlab
