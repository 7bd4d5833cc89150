#pragma once

#include <string>
#include <vector>

#include "weierlab/domain.hpp"
#include "weierlab/mero_expr.hpp"

namespace weierlab {

struct RegularityEntry {
  Complex point;
  int order_f = 0;
  int order_g = 0;
  bool ok = true;
  std::string verdict;
};

/// Outcome of the divisor check (f dz)_0 = m (g)_inf at every candidate zero
/// or pole of f and g inside the domain.
struct RegularityReport {
  std::vector<RegularityEntry> entries;
  /// Conjunction of the per-point verdicts.
  bool overall = true;
  /// False when f or g contains exp; regularity is then not decided.
  bool checked = true;
};

/// Runs the divisor check without throwing on a violation. Throws
/// `Error(NonHolomorphic)` if f has a pole inside the domain.
RegularityReport check_regularity(const DomainSpec& domain, const MeroExpr& f, const MeroExpr& g,
                                  int m);

/// A Weierstrass m-triple (domain, f dz, g) carrying the conformal metric
/// ds^2 = (1 + |g|^2)^m |f|^2 |dz|^2.
///
/// All derived expressions (derivatives and the 1/g chart used near poles of
/// g) are built once at construction; the object is immutable afterwards.
class MTriple {
 public:
  /// See `make_triple`.
  MTriple(DomainSpec domain, MeroExpr f, MeroExpr g, int m);

  const DomainSpec& domain() const noexcept { return domain_; }
  const MeroExpr& f() const noexcept { return f_; }
  const MeroExpr& g() const noexcept { return g_; }
  int m() const noexcept { return m_; }
  const RegularityReport& regularity() const noexcept { return report_; }

  /// lambda = (1 + |g|^2)^{m/2} |f|, length per unit |dz|.
  double metric_density(Complex z) const;

  /// K = -2m |g'|^2 / ((1 + |g|^2)^{m+2} |f|^2).
  double curvature(Complex z) const;

  /// -(Delta log lambda) / lambda^2 with the 5-point Laplacian of radius h.
  /// With `richardson`, combines steps h and h/2 to cancel the O(h^2) term.
  double curvature_fd(Complex z, double h = 1e-3, bool richardson = false) const;

  /// Gauss-map value g(z) on the sphere.
  ExtComplex gauss_map(Complex z) const;

  /// |g| above which the 1/g chart is used.
  static constexpr double kPoleThreshold = 1e6;

 private:
  void check_point(Complex z) const;
  double log_density(Complex z) const;

  DomainSpec domain_;
  MeroExpr f_, g_;
  int m_;
  MeroExpr dg_;
  MeroExpr ghat_, fhat_, dghat_;
  CompiledExpr fc_, gc_, dgc_;
  RegularityReport report_;
};

/// Builds a triple. Rational data is checked with `check_regularity`; a
/// violation throws `Error(RegularityViolation)` naming the offending point.
/// Data containing exp is accepted with `regularity().checked == false`.
MTriple make_triple(DomainSpec domain, MeroExpr f, MeroExpr g, int m);

}  // namespace weierlab
