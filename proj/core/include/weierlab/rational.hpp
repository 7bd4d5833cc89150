#pragma once

#include <vector>

#include "weierlab/mero_expr.hpp"

namespace weierlab {

/// Dense polynomial, coefficient k multiplies z^k.
using Polynomial = std::vector<Complex>;

/// Unreduced numerator/denominator pair of a rational expression. Common
/// factors are not cancelled, so roots of either part are only candidate
/// zeros/poles; `local_order` decides what they really are.
struct RationalForm {
  Polynomial numerator;
  Polynomial denominator;
};

/// Throws `Error(Precondition)` if `e` contains an exp node.
RationalForm to_rational_form(const MeroExpr& e);

/// Roots of p via the companion matrix, with clusters of nearby roots (as
/// produced by multiple roots) merged to their mean.
std::vector<Complex> polynomial_roots(const Polynomial& p, double cluster_radius = 1e-3);

/// Candidate zeros and poles of a rational expression (deduplicated).
std::vector<Complex> critical_points(const MeroExpr& e);

}  // namespace weierlab
