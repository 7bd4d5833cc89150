#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "random_expr.hpp"
#include "weierlab/errors.hpp"
#include "weierlab/mero_expr.hpp"
#include "weierlab/sphere.hpp"

using namespace weierlab;
using Kind = MeroExpr::Kind;

namespace {

// Central difference, used as an independent check of `derivative`.
Complex central_difference(const MeroExpr& e, Complex z, double h) {
  Complex plus = eval_ext(e, z + h).value();
  Complex minus = eval_ext(e, z - h).value();
  return (plus - minus) / (2.0 * h);
}

ExtComplex random_ext(std::mt19937& rng) {
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  std::uniform_int_distribution<int> inf(0, 19);
  if (inf(rng) == 0) return ExtComplex::infinity();
  return ExtComplex(Complex(u(rng), u(rng)));
}

}  // namespace

TEST(Parse, Variable) {
  MeroExpr e = parse_mero("z");
  EXPECT_EQ(e.kind(), Kind::Variable);
}

TEST(Parse, QuotientStructure) {
  MeroExpr e = parse_mero("1/(z^2-1)");
  ASSERT_EQ(e.kind(), Kind::Div);
  EXPECT_EQ(e.lhs().kind(), Kind::Constant);
  MeroExpr den = e.rhs();
  ASSERT_EQ(den.kind(), Kind::Sub);
  ASSERT_EQ(den.lhs().kind(), Kind::Pow);
  EXPECT_EQ(den.lhs().exponent(), 2);
  EXPECT_EQ(den.lhs().lhs().kind(), Kind::Variable);
  EXPECT_EQ(den.rhs().constant_value(), Complex(1.0, 0.0));
}

TEST(Parse, TwoExpNodes) {
  MeroExpr e = parse_mero("exp(z)/(1+exp(z))");
  ASSERT_EQ(e.kind(), Kind::Div);
  EXPECT_EQ(e.lhs().kind(), Kind::Exp);
  EXPECT_EQ(e.rhs().rhs().kind(), Kind::Exp);
  EXPECT_FALSE(e.is_rational());
}

TEST(Parse, WhitespaceAndImaginaryUnit) {
  MeroExpr e = parse_mero("  2 * i + z ^ 3 ");
  EXPECT_NEAR(std::abs(eval_ext(e, 1.0).value() - Complex(1.0, 2.0)), 0.0, 1e-15);
}

TEST(Parse, UnaryMinusBindsTighterThanPower) {
  // '-' atom is an atom, so -z^2 is (-z)^2.
  MeroExpr e = parse_mero("-z^2");
  EXPECT_EQ(e.kind(), Kind::Pow);
  EXPECT_EQ(e.lhs().kind(), Kind::Neg);
}

TEST(Parse, NegativeExponent) {
  MeroExpr e = parse_mero("z^-2");
  EXPECT_NEAR(std::abs(eval_ext(e, 2.0).value() - 0.25), 0.0, 1e-15);
}

TEST(Parse, SyntaxErrorCarriesOffset) {
  try {
    parse_mero("1 + * z");
    FAIL() << "expected a syntax error";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::Syntax);
    ASSERT_TRUE(e.offset().has_value());
    EXPECT_EQ(*e.offset(), 4u);
  }
}

TEST(Parse, UnknownIdentifier) {
  try {
    parse_mero("z + log(z)");
    FAIL() << "expected an unknown identifier error";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::UnknownIdentifier);
    EXPECT_EQ(*e.offset(), 4u);
  }
}

TEST(Parse, RejectsExponentNotationAndTrailingInput) {
  EXPECT_THROW(parse_mero("1e5"), Error);
  EXPECT_THROW(parse_mero("(z"), Error);
  EXPECT_THROW(parse_mero("z)"), Error);
  EXPECT_THROW(parse_mero(""), Error);
  EXPECT_THROW(parse_mero("z^1.5"), Error);
}

TEST(Parse, PrinterRoundTripsParsedTrees) {
  const char* sources[] = {"z",
                           "1/(z^2-1)",
                           "exp(z)/(1+exp(z))",
                           "z-(z-1)",
                           "-z^2",
                           "-(z^2)",
                           "2.5*z/(z/3)",
                           "((z+i)*(z-i))^-3",
                           "--z",
                           "0.125-exp(-z*i)"};
  for (const char* src : sources) {
    MeroExpr e = parse_mero(src);
    MeroExpr again = parse_mero(e.to_string());
    EXPECT_TRUE(e.structurally_equal(again)) << src << " printed as " << e.to_string();
  }
}

TEST(Parse, PrinterRoundTripPreservesValuesForBuiltTrees) {
  test_support::ExprGenerator gen(11, true);
  for (int k = 0; k < 200; ++k) {
    MeroExpr e = gen.expr(4);
    MeroExpr back = parse_mero(e.to_string());
    Complex z = gen.point();
    auto a = e.try_eval(z);
    auto b = back.try_eval(z);
    if (!a || !b) continue;
    EXPECT_LE(std::abs(*a - *b), 1e-9 * (1.0 + std::abs(*a))) << e.to_string();
  }
}

TEST(Eval, SimplePoleIsInfinity) {
  EXPECT_TRUE(eval_ext(parse_mero("1/z"), 0.0).is_infinite());
  EXPECT_TRUE(eval_ext(parse_mero("z^-3"), 0.0).is_infinite());
}

TEST(Eval, Identity) {
  EXPECT_EQ(eval_ext(parse_mero("z"), Complex(1.0, 1.0)), ExtComplex(Complex(1.0, 1.0)));
}

TEST(Eval, RemovableSingularityUsesReducedLimit) {
  // Oracle: (z^2-1)/(z-1) = z+1 away from 1.
  const double expected = eval_ext(parse_mero("z+1"), 1.0).value().real();
  ExtComplex v = eval_ext(parse_mero("(z^2-1)/(z-1)"), 1.0);
  ASSERT_TRUE(v.is_finite());
  EXPECT_NEAR(std::abs(v.value() - expected), 0.0, 1e-10);
}

TEST(Eval, ZeroTimesPoleResolves) {
  ExtComplex v = eval_ext(parse_mero("(z^2)*(1/z)^2"), 0.0);
  ASSERT_TRUE(v.is_finite());
  EXPECT_NEAR(std::abs(v.value() - 1.0), 0.0, 1e-10);
  EXPECT_TRUE(eval_ext(parse_mero("z*(1/z^2)"), 0.0).is_infinite());
  EXPECT_NEAR(std::abs(eval_ext(parse_mero("z^2*(1/z)"), 0.0).value()), 0.0, 0.0);
}

TEST(Eval, IndeterminateInExpSubtreeIsReported) {
  try {
    eval_ext(parse_mero("(exp(z)-1)/z"), 0.0);
    FAIL() << "expected indeterminate";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::Indeterminate);
  }
  EXPECT_THROW(eval_ext(parse_mero("exp(1/z)"), 0.0), Error);
}

TEST(Derivative, PowerRule) {
  MeroExpr d = derivative(parse_mero("z^2"));
  EXPECT_EQ(d.to_string(), "2*z");
}

TEST(Derivative, ExpRule) {
  MeroExpr d = derivative(parse_mero("exp(z)"));
  EXPECT_TRUE(d.structurally_equal(parse_mero("exp(z)")));
}

TEST(Derivative, QuotientAgainstFiniteDifference) {
  MeroExpr e = parse_mero("1/(z-1)");
  Complex fd = central_difference(e, 0.0, 1e-5);
  Complex exact = eval_ext(derivative(e), 0.0).value();
  EXPECT_NEAR(std::abs(fd - Complex(-1.0, 0.0)), 0.0, 1e-8);
  EXPECT_NEAR(std::abs(exact - fd), 0.0, 1e-8);
  EXPECT_NEAR(std::abs(exact + 1.0), 0.0, 1e-15);
}

TEST(Derivative, MatchesCentralDifferencesOnRandomExpressions) {
  test_support::ExprGenerator gen(2024, true);
  int checked = 0;
  for (int k = 0; k < 300; ++k) {
    MeroExpr e = gen.expr(3);
    MeroExpr d = derivative(e);
    Complex z = gen.point(1.0);
    auto dv = d.try_eval(z);
    auto p = e.try_eval(z + 1e-5), q = e.try_eval(z - 1e-5), c = e.try_eval(z);
    if (!dv || !p || !q || !c) continue;
    // Skip points near poles where O(h^2) is not small.
    if (std::abs(*c) > 1e3 || std::abs(*dv) > 1e4) continue;
    Complex fd = (*p - *q) / 2e-5;
    EXPECT_LE(std::abs(fd - *dv), 1e-6 * std::max(1.0, std::abs(*dv))) << e.to_string();
    ++checked;
  }
  EXPECT_GT(checked, 150);
}

TEST(Compose, SubstitutesVariable) {
  MeroExpr e = compose(parse_mero("z^2+1"), parse_mero("z/2"));
  EXPECT_NEAR(std::abs(eval_ext(e, 2.0).value() - 2.0), 0.0, 1e-15);
}

TEST(LocalOrder, Examples) {
  EXPECT_EQ(local_order(parse_mero("z^3"), 0.0), 3);
  EXPECT_EQ(local_order(parse_mero("1/(z-1)^2"), 1.0), -2);
  EXPECT_EQ(local_order(parse_mero("(z^2-1)/(z-1)"), 1.0), 0);
  EXPECT_EQ(local_order(parse_mero("z^2*(z-3)"), 0.0), 2);
}

TEST(LocalOrder, RejectsExpAndNonIntegerSlopes) {
  EXPECT_THROW(local_order(parse_mero("exp(z)"), 0.0), Error);
  // Two nearby zeros look like a half-integer order at these radii.
  LocalOrderOptions opts;
  opts.radii = {1e-3, 1e-4, 1e-5};
  try {
    local_order(parse_mero("(z-0.0001)*(z+0.0001)*z"), 0.0, opts);
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::OrderUndetermined);
  }
  EXPECT_THROW(local_order(parse_mero("z-z"), 0.0), Error);
}

TEST(Chordal, Values) {
  EXPECT_DOUBLE_EQ(chordal(0.0, ExtComplex::infinity()), 1.0);
  EXPECT_DOUBLE_EQ(chordal(Complex(0.3, -2.0), Complex(0.3, -2.0)), 0.0);
  EXPECT_NEAR(chordal(0.0, 1.0), 1.0 / std::numbers::sqrt2, 1e-15);
  EXPECT_DOUBLE_EQ(chordal(ExtComplex::infinity(), ExtComplex::infinity()), 0.0);
}

TEST(Chordal, MetricAxiomsOnRandomTriples) {
  std::mt19937 rng(7);
  for (int k = 0; k < 1000; ++k) {
    ExtComplex a = random_ext(rng), b = random_ext(rng), c = random_ext(rng);
    double ab = chordal(a, b), ba = chordal(b, a);
    EXPECT_EQ(ab, ba);
    EXPECT_GE(ab, 0.0);
    EXPECT_LE(ab, 1.0 + 1e-15);
    EXPECT_LE(ab, chordal(a, c) + chordal(c, b) + 1e-12);
  }
}

TEST(Chordal, IsHalfTheStereographicChord) {
  std::mt19937 rng(8);
  for (int k = 0; k < 1000; ++k) {
    ExtComplex a = random_ext(rng), b = random_ext(rng);
    Eigen::Vector3d pa = stereographic(a), pb = stereographic(b);
    EXPECT_NEAR(pa.norm(), 1.0, 1e-12);
    EXPECT_NEAR(chordal(a, b), 0.5 * (pa - pb).norm(), 1e-12);
  }
}

TEST(Stereographic, Poles) {
  EXPECT_TRUE(stereographic(0.0).isApprox(Eigen::Vector3d(0, 0, -1)));
  EXPECT_TRUE(stereographic(ExtComplex::infinity()).isApprox(Eigen::Vector3d(0, 0, 1)));
  EXPECT_LE((stereographic(1.0) - Eigen::Vector3d(1, 0, 0)).norm(), 1e-15);
}

TEST(SphericalGradient, Values) {
  EXPECT_EQ(spherical_gradient(parse_mero("3+i"), Complex(0.2, 0.1)), 0.0);
  EXPECT_NEAR(spherical_gradient(parse_mero("z"), 0.0), 2.0 * std::numbers::sqrt2, 1e-15);
  const double at_one = spherical_gradient(parse_mero("z"), 1.0);
  EXPECT_NEAR(at_one, std::numbers::sqrt2, 1e-15);
  EXPECT_NEAR(spherical_gradient(parse_mero("1/z"), 1.0), at_one, 1e-15);
}

TEST(SphericalGradient, FiniteAtPoles) {
  // 1/z at 0 has the same gradient as z at infinity's preimage: 2 sqrt 2.
  EXPECT_NEAR(spherical_gradient(parse_mero("1/z"), 0.0), 2.0 * std::numbers::sqrt2, 1e-12);
  EXPECT_NEAR(spherical_gradient(parse_mero("1/z^2"), 0.0), 0.0, 1e-12);
}

TEST(SphericalGradient, InversionInvariance) {
  test_support::ExprGenerator gen(99);
  int checked = 0;
  for (int k = 0; k < 400 && checked < 200; ++k) {
    MeroExpr e = gen.expr(3);
    if (e.is_constant()) continue;
    MeroExpr inv = MeroExpr::constant(1.0) / e;
    Complex z = gen.point();
    auto v = e.try_eval(z);
    if (!v || std::abs(*v) < 1e-3 || std::abs(*v) > 1e3) continue;
    double a = SphericalGradient(e)(z), b = SphericalGradient(inv)(z);
    EXPECT_LE(std::abs(a - b), 1e-10 * std::max(a, 1e-300)) << e.to_string();
    ++checked;
  }
  EXPECT_GE(checked, 100);
}

TEST(Mobius, IdentityAndInversion) {
  std::mt19937 rng(3);
  MobiusMap id = MobiusMap::identity();
  for (int k = 0; k < 20; ++k) {
    ExtComplex v = random_ext(rng);
    EXPECT_EQ(id(v), v);
  }
  MobiusMap inversion(0.0, 1.0, 1.0, 0.0);
  EXPECT_TRUE(inversion(0.0).is_infinite());
  EXPECT_EQ(inversion(ExtComplex::infinity()), ExtComplex(0.0));
}

TEST(Mobius, CrossRatioConstruction) {
  Complex a(0.5, 1.0), b(-1.0, 2.0), c(3.0, -0.5);
  MobiusMap t = MobiusMap::from_three_points(a, b, c);
  EXPECT_NEAR(std::abs(t(a).value()), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(t(b).value() - 1.0), 0.0, 1e-14);
  EXPECT_TRUE(t(c).is_infinite());
  // Bijectivity: inverse undoes the map.
  ExtComplex w = t.inverse()(t(Complex(0.1, 0.2)));
  EXPECT_NEAR(std::abs(w.value() - Complex(0.1, 0.2)), 0.0, 1e-14);
  EXPECT_THROW(MobiusMap(1.0, 2.0, 2.0, 4.0), Error);
}

TEST(ExtComplexType, RejectsNaN) {
  EXPECT_THROW(ExtComplex(Complex(std::nan(""), 0.0)), Error);
  EXPECT_THROW(ExtComplex::infinity().value(), Error);
}
