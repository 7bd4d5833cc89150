#pragma once

#include <string>
#include <vector>

#include <Eigen/Core>

#include "weierlab/domain.hpp"
#include "weierlab/mero_expr.hpp"
#include "weierlab/surfaces.hpp"

namespace weierlab::detail {

std::string point_str(Complex z);

/// Compiled evaluation with a fallback to `eval_ext` for removable 0/0 sites.
class Evaluator {
 public:
  explicit Evaluator(MeroExpr e) : expr_(std::move(e)), compiled_(expr_) {}
  ExtComplex ext(Complex z) const;
  /// Throws `Error(PoleOnPath)` at a pole.
  Complex finite(Complex z) const;

 private:
  MeroExpr expr_;
  CompiledExpr compiled_;
};

/// Components of the vector 1-form integrated by the R^3-valued classes.
std::vector<Evaluator> integrand(const WeierstrassData& d);
Eigen::Vector3cd eval_form(const std::vector<Evaluator>& form, Complex z);
Eigen::Vector3cd segment_integral(const std::vector<Evaluator>& form, Complex a, Complex b,
                                  double rel_tol);

struct FlatForms {
  Evaluator omega, theta;
  Eigen::Matrix2cd coefficient(Complex z) const;
};

/// RK4 solution of L' = L A from L(a) = I along the segment a -> b.
Eigen::Matrix2cd transport(const FlatForms& forms, Complex a, Complex b, double step);

/// Poincare-ball image of a point of the Hermitian model.
Eigen::Vector3d ball_point(const Eigen::Matrix2cd& psi);

void require_holomorphic(const DomainSpec& domain, const MeroExpr& e, const char* name);
void check_segment_inside(const DomainSpec& domain, Complex a, Complex b);

}  // namespace weierlab::detail
