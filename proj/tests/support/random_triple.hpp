#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "weierlab/mero_expr.hpp"
#include "weierlab/rational.hpp"

namespace weierlab::test_support {

/// A regular m-triple on the unit disk together with the points where the
/// data is singular (zeros and poles of f and g, critical points of g).
struct RandomTriple {
  MeroExpr f, g;
  int m = 1;
  std::vector<Complex> singular;
};

inline MeroExpr linear_factor(Complex a) {
  return MeroExpr::variable() - MeroExpr::constant(a);
}

class TripleGenerator {
 public:
  explicit TripleGenerator(unsigned seed) : rng_(seed) {}

  Complex in_disk(double rmin, double rmax) {
    std::uniform_real_distribution<double> r(rmin, rmax), t(0.0, 2 * std::numbers::pi);
    return std::polar(r(rng_), t(rng_));
  }

  Complex coefficient(double lo, double hi) {
    std::uniform_real_distribution<double> mag(lo, hi), t(0.0, 2 * std::numbers::pi);
    return std::polar(mag(rng_), t(rng_));
  }

  /// g = c prod(z - a)/prod(z - b), f = k prod(z - b)^m / (z - w), with the
  /// poles b of g allowed inside the disk. Regular by construction.
  RandomTriple general(int m) {
    std::uniform_int_distribution<int> nzeros(1, 2), npoles(0, 2), coin(0, 1);
    RandomTriple t;
    t.m = m;
    MeroExpr g = MeroExpr::constant(coefficient(0.5, 2.0));
    MeroExpr f = MeroExpr::constant(coefficient(0.5, 2.0));
    for (int k = nzeros(rng_); k > 0; --k) {
      Complex a = in_disk(0.0, 1.3);
      g = g * linear_factor(a);
      t.singular.push_back(a);
    }
    for (int k = npoles(rng_); k > 0; --k) {
      Complex b = in_disk(0.0, 1.3);
      g = g / linear_factor(b);
      f = f * linear_factor(b).pow(m);
      t.singular.push_back(b);
    }
    if (coin(rng_)) {
      Complex w = in_disk(1.5, 2.5);
      f = f / linear_factor(w);
      t.singular.push_back(w);
    }
    t.f = f;
    t.g = g;
    for (Complex c : critical_points(derivative(g))) t.singular.push_back(c);
    return t;
  }

  /// Holomorphic g on the closed disk scaled so that max |g| = fill * L, and a
  /// zero-free f. Used for the bounded-property suite.
  RandomTriple bounded(int m, double L, double fill = 0.9) {
    std::uniform_int_distribution<int> nzeros(1, 3), npoles(0, 1);
    RandomTriple t;
    t.m = m;
    MeroExpr g = MeroExpr::constant(1.0);
    for (int k = nzeros(rng_); k > 0; --k) g = g * linear_factor(in_disk(0.0, 1.5));
    for (int k = npoles(rng_); k > 0; --k) g = g / linear_factor(in_disk(1.3, 2.5));
    double gmax = 0.0;
    for (int k = 0; k < 4096; ++k) {
      Complex z = std::polar(1.0, 2 * std::numbers::pi * k / 4096);
      gmax = std::max(gmax, std::abs(*g.try_eval(z)));
    }
    g = MeroExpr::constant(fill * L / gmax) * g;
    MeroExpr f = MeroExpr::constant(coefficient(0.5, 2.0));
    if (npoles(rng_)) f = f / linear_factor(in_disk(1.3, 2.5));
    if (npoles(rng_)) f = f * linear_factor(in_disk(1.3, 2.5));
    t.f = f;
    t.g = g;
    return t;
  }

  /// Uniform point in |z| < radius at least `clearance` from every listed point.
  Complex clear_point(const std::vector<Complex>& avoid, double radius, double clearance) {
    for (;;) {
      Complex z = in_disk(0.0, radius);
      z = std::polar(radius * std::sqrt(std::abs(z) / radius), std::arg(z));
      bool ok = std::all_of(avoid.begin(), avoid.end(),
                            [&](Complex a) { return std::abs(z - a) >= clearance; });
      if (ok) return z;
    }
  }

  std::mt19937& rng() { return rng_; }

 private:
  std::mt19937 rng_;
};

}  // namespace weierlab::test_support
