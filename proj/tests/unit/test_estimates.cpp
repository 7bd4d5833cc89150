#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "random_triple.hpp"
#include "weierlab/errors.hpp"
#include "weierlab/estimates.hpp"

using namespace weierlab;

namespace {

const double kSqrt2 = std::numbers::sqrt2;

MeroExpr z() { return MeroExpr::variable(); }
MeroExpr c(Complex v) { return MeroExpr::constant(v); }

template <class F>
ErrorCode code_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no exception";
  return ErrorCode::Io;
}

}  // namespace

TEST(CurvatureConstant, Values) {
  EXPECT_DOUBLE_EQ(*curvature_constant(Bounded{1.0}, 2), 4.0);
  EXPECT_NEAR(*curvature_constant(Bounded{1.0}, 1), 2.0, 1e-15);
  EXPECT_NEAR(*curvature_constant(Bounded{2.0}, 3), std::sqrt(6.0) * 2.0 * std::pow(5.0, 1.5),
              1e-12);
  EXPECT_FALSE(curvature_constant(Omits{{ExtComplex(0.0), ExtComplex(1.0), ExtComplex::infinity()}},
                                  1)
                   .has_value());
}

TEST(CurvatureConstant, MonotoneInLAndM) {
  for (int m = 1; m <= 4; ++m) {
    double prev = 0.0;
    for (double L = 0.1; L < 5.0; L += 0.1) {
      double C = *curvature_constant(Bounded{L}, m);
      EXPECT_GT(C, prev);
      EXPECT_GT(*curvature_constant(Bounded{L}, m + 1), C);
      prev = C;
    }
  }
}

TEST(PropertySpec, Validation) {
  EXPECT_EQ(code_of([] { validate_property(Bounded{0.0}); }), ErrorCode::InvalidArgument);
  EXPECT_EQ(code_of([] { validate_property(Bounded{-1.0}); }), ErrorCode::InvalidArgument);
  EXPECT_EQ(code_of([] { validate_property(Omits{}); }), ErrorCode::InvalidArgument);
  EXPECT_EQ(code_of([] {
              validate_property(Omits{{ExtComplex::infinity(), ExtComplex::infinity()}});
            }),
            ErrorCode::InvalidArgument);
  EXPECT_NO_THROW(validate_property(Omits{{ExtComplex(0.0)}}));
}

TEST(PropertyCheck, BoundedHalfZ) {
  auto mesh = build_mesh(DomainSpec(Disk{}), [](Complex) { return 1.0; }, 100);
  auto r = property_check(z() / c(2.0), Bounded{1.0}, mesh);
  EXPECT_TRUE(r.pass);
  EXPECT_EQ(r.kind, "bounded");
  EXPECT_NEAR(r.extreme, 0.5, 1e-3);
  EXPECT_GT(std::abs(r.at), 0.99);
  EXPECT_TRUE(r.near_attainment.empty());

  auto tight = property_check(z() / c(2.0), Bounded{0.5}, mesh);
  EXPECT_TRUE(tight.pass);
  EXPECT_FALSE(tight.near_attainment.empty());

  auto fail = property_check(z() * c(2.0), Bounded{1.0}, mesh);
  EXPECT_FALSE(fail.pass);
  EXPECT_NEAR(fail.extreme, 2.0, 1e-2);
}

TEST(PropertyCheck, ExpOmitsZeroAndInfinity) {
  auto mesh = build_mesh(DomainSpec(Disk{}), [](Complex) { return 1.0; }, 80);
  auto r = property_check(MeroExpr::exp(z()), Omits{{ExtComplex(0.0), ExtComplex::infinity()}},
                          mesh);
  EXPECT_TRUE(r.pass);
  EXPECT_EQ(r.kind, "omits");
  // exp maps the unit disk into e^{-1} < |w| < e.
  double near_zero = chordal(ExtComplex(std::exp(-1.0)), ExtComplex(0.0));
  double near_inf = chordal(ExtComplex(std::exp(1.0)), ExtComplex::infinity());
  EXPECT_NEAR(r.extreme, std::min(near_zero, near_inf), 2e-3);

  auto hit = property_check(z(), Omits{{ExtComplex(0.0)}}, mesh);
  EXPECT_FALSE(hit.pass);
  EXPECT_EQ(hit.closest_value, 0);
}

TEST(OptimalExample, Construction) {
  auto t = optimal_example(1, {Complex(1, 0), Complex(-1, 0)});
  EXPECT_EQ(t.m(), 1);
  EXPECT_TRUE(t.regularity().overall);
  EXPECT_EQ(t.domain().punctures().size(), 2u);
  Complex p(0.3, 0.4);
  EXPECT_NEAR(std::abs(*t.f().try_eval(p) - 1.0 / (p * p - 1.0)), 0.0, 1e-14);
  EXPECT_NEAR(std::abs(*t.g().try_eval(p) - p), 0.0, 0.0);

  auto t2 = optimal_example(2, {Complex(0, 0), Complex(1, 0), Complex(-1, 0)});
  EXPECT_TRUE(t2.regularity().overall);
  EXPECT_NEAR(std::abs(*t2.f().try_eval(p) - 1.0 / (p * (p * p - 1.0))), 0.0, 1e-13);
}

TEST(OptimalExample, BadInput) {
  EXPECT_EQ(code_of([] { optimal_example(1, {Complex(1, 0), Complex(1, 0)}); }),
            ErrorCode::InvalidArgument);
  EXPECT_EQ(code_of([] { optimal_example(2, {Complex(1, 0), Complex(-1, 0)}); }),
            ErrorCode::InvalidArgument);
  EXPECT_EQ(code_of([] { optimal_example(0, {Complex(1, 0)}); }), ErrorCode::InvalidArgument);
}

TEST(OptimalExample, OmitsExactlyMPlusTwo) {
  for (int m = 1; m <= 2; ++m) {
    std::vector<Complex> alphas = m == 1 ? std::vector<Complex>{1.0, -1.0}
                                         : std::vector<Complex>{0.0, 1.0, -1.0};
    auto t = optimal_example(m, alphas);
    auto mesh = build_mesh(t.domain(), [&](Complex w) { return t.metric_density(w); }, 100);
    std::vector<ExtComplex> X;
    for (auto a : alphas) X.emplace_back(a);
    X.push_back(ExtComplex::infinity());
    auto r = property_check(t.g(), Omits{X}, mesh);
    EXPECT_TRUE(r.pass);
    EXPECT_GT(r.extreme, 1e-3);
    EXPECT_EQ(X.size(), static_cast<std::size_t>(m + 2));
    // Any other value is attained; g = z hits every lattice position exactly.
    Complex hit = mesh.lattice().position(2, 2);
    auto other = property_check(t.g(), Omits{{ExtComplex(hit)}}, mesh);
    EXPECT_FALSE(other.pass);
  }
}

TEST(VerifyEstimate, HalfZExample) {
  auto t = make_triple(DomainSpec(Disk{}), c(1.0), z() / c(2.0), 2);
  EXPECT_NEAR(t.curvature(0.0), -1.0, 1e-14);
  auto mesh = build_mesh(t.domain(), [&](Complex w) { return t.metric_density(w); }, 200);
  auto d = boundary_distance_field(mesh);
  int center = mesh.lattice().node(0, 0);
  // Radial integral of 1 + r^2/4 up to the inset boundary at 0.999.
  double r = 0.999;
  double truth = r + r * r * r / 12.0;
  EXPECT_GE(d[center], truth * (1 - 1e-9));
  EXPECT_LT(d[center], truth * 1.01);
  EXPECT_NEAR(13.0 / 12.0, truth, 2e-3);

  auto rep = verify_estimate(t, Bounded{1.0}, mesh);
  EXPECT_EQ(rep.verdict, "pass");
  EXPECT_DOUBLE_EQ(*rep.C2, 16.0);
  EXPECT_DOUBLE_EQ(rep.tolerance, 0.05);
  EXPECT_GT(rep.sup, 1.1);
  EXPECT_LT(rep.sup, 1.6);
  EXPECT_GE(rep.argmax_node, 0);
  EXPECT_NEAR(std::abs(rep.curvature_at_argmax) * rep.distance_at_argmax * rep.distance_at_argmax,
              rep.sup, 1e-12 * rep.sup);
}

TEST(VerifyEstimate, ConstantGaussMapIsFlat) {
  auto t = make_triple(DomainSpec(Disk{}), c(1.0), c(0.3), 2);
  auto mesh = build_mesh(t.domain(), [&](Complex w) { return t.metric_density(w); }, 60);
  auto rep = verify_estimate(t, Bounded{1.0}, mesh);
  EXPECT_EQ(rep.sup, 0.0);
  EXPECT_EQ(rep.verdict, "pass");
}

TEST(VerifyEstimate, OmitsIsEmpiricalOnly) {
  auto t = optimal_example(1, {Complex(1, 0), Complex(-1, 0)});
  auto mesh = build_mesh(t.domain(), [&](Complex w) { return t.metric_density(w); }, 80);
  auto rep = verify_estimate(
      t, Omits{{ExtComplex(1.0), ExtComplex(-1.0), ExtComplex::infinity()}}, mesh);
  EXPECT_EQ(rep.verdict, "empirical_only");
  EXPECT_FALSE(rep.C2.has_value());
  EXPECT_GT(rep.sup, 0.0);
  EXPECT_TRUE(std::isfinite(rep.sup));
}

TEST(VerifyEstimate, Errors) {
  auto t = make_triple(DomainSpec(Disk{}), c(1.0), z() * c(2.0), 1);
  auto mesh = build_mesh(t.domain(), [&](Complex w) { return t.metric_density(w); }, 60);
  EXPECT_EQ(code_of([&] { verify_estimate(t, Bounded{1.0}, mesh); }),
            ErrorCode::PropertyViolated);
  auto coarse = build_mesh(t.domain(), [&](Complex w) { return t.metric_density(w); }, 4);
  EXPECT_EQ(code_of([&] { verify_estimate(t, Bounded{3.0}, coarse); }),
            ErrorCode::MeshTooCoarse);
}

// Reduced version of the randomized bound; the full suite runs in acceptance.
TEST(VerifyEstimate, RandomBoundedTriplesRespectConstant) {
  test_support::TripleGenerator gen(77);
  const double Ls[3] = {0.5, 1.0, 2.0};
  for (int k = 0; k < 9; ++k) {
    int m = 1 + k % 3;
    double L = Ls[k / 3];
    auto r = gen.bounded(m, L);
    auto t = make_triple(DomainSpec(Disk{}), r.f, r.g, m);
    auto mesh = build_mesh(t.domain(), [&](Complex w) { return t.metric_density(w); }, 100);
    auto rep = verify_estimate(t, Bounded{L}, mesh);
    EXPECT_EQ(rep.verdict, "pass") << "triple " << k;
    EXPECT_LE(rep.sup, *rep.C2 * 1.05);
  }
}

TEST(EstimateRefinement, CommonNodeSupNonincreasing) {
  test_support::TripleGenerator gen(5);
  for (int k = 0; k < 3; ++k) {
    auto r = gen.bounded(2, 1.0);
    auto t = make_triple(DomainSpec(Disk{}), r.f, r.g, 2);
    auto st = estimate_refinement(t, Bounded{1.0}, {50, 100, 200});
    ASSERT_EQ(st.sup_common.size(), 3u);
    EXPECT_TRUE(st.nonincreasing());
    for (std::size_t j = 0; j < 3; ++j) EXPECT_LE(st.sup_common[j], st.sup_all[j]);
  }
  auto t = make_triple(DomainSpec(Disk{}), c(1.0), z() / c(2.0), 2);
  EXPECT_EQ(code_of([&] { estimate_refinement(t, Bounded{1.0}, {100, 150}); }),
            ErrorCode::InvalidArgument);
}

TEST(Fujimoto, LogisticExample) {
  MeroExpr e = MeroExpr::exp(z());
  MeroExpr f = e / (c(1.0) + e);
  std::vector<ExtComplex> X{ExtComplex(0.0), ExtComplex(1.0), ExtComplex::infinity()};
  DomainSpec dom(Disk{{0, 0}, 3.0});
  auto one = [](Complex) { return 1.0; };
  auto a = fujimoto_ratio(f, X, 0.25, 3.0, build_mesh(dom, one, 100));
  auto b = fujimoto_ratio(f, X, 0.25, 3.0, build_mesh(dom, one, 200));
  EXPECT_TRUE(std::isfinite(a.sup));
  EXPECT_GT(a.sup, 0.0);
  EXPECT_EQ(a.q, 3);
  EXPECT_NEAR(b.sup / a.sup, 1.0, 0.02);
}

TEST(Fujimoto, ConstantAndErrors) {
  std::vector<ExtComplex> X{ExtComplex(0.0), ExtComplex(1.0), ExtComplex::infinity()};
  auto mesh = build_mesh(DomainSpec(Disk{}), [](Complex) { return 1.0; }, 50);
  EXPECT_EQ(fujimoto_ratio(c(0.5), X, 0.25, 1.0, mesh).sup, 0.0);
  EXPECT_EQ(code_of([&] { fujimoto_ratio(c(0.5), X, 0.4, 1.0, mesh); }), ErrorCode::Precondition);
  EXPECT_EQ(code_of([&] { fujimoto_ratio(c(0.5), X, 0.0, 1.0, mesh); }), ErrorCode::Precondition);
  std::vector<ExtComplex> finite{ExtComplex(0.0), ExtComplex(1.0), ExtComplex(2.0)};
  EXPECT_EQ(code_of([&] { fujimoto_ratio(c(0.5), finite, 0.1, 1.0, mesh); }),
            ErrorCode::Precondition);
  std::vector<ExtComplex> two{ExtComplex(0.0), ExtComplex::infinity()};
  EXPECT_EQ(code_of([&] { fujimoto_ratio(c(0.5), two, 0.1, 1.0, mesh); }),
            ErrorCode::Precondition);
  // z attains 0 at the center node.
  EXPECT_EQ(code_of([&] { fujimoto_ratio(z(), X, 0.25, 1.0, mesh); }),
            ErrorCode::PropertyViolated);
}

TEST(Marty, ScaledIdentityGrows) {
  Disk K{{0, 0}, 0.5};
  auto rep = marty_sup([](int n) { return c(double(n)) * z(); }, {1, 10, 100, 1000}, K, 101,
                       "n*z");
  ASSERT_EQ(rep.sups.size(), 4u);
  for (std::size_t k = 0; k < 4; ++k) {
    EXPECT_NEAR(rep.sups[k], 2 * kSqrt2 * rep.indices[k], 1e-9 * rep.indices[k]);
  }
  EXPECT_NEAR(rep.slope, 1.0, 0.05);
  EXPECT_EQ(rep.verdict, "unbounded-growth");
  EXPECT_EQ(rep.label, "n*z");
}

TEST(Marty, TranslationsAndConstantsBounded) {
  Disk K{{0, 0}, 0.5};
  auto tr = marty_sup([](int n) { return z() + c(1.0 / n); }, {1, 10, 100, 1000}, K, 101);
  EXPECT_EQ(tr.verdict, "bounded");
  for (double s : tr.sups) EXPECT_LE(s, 2 * kSqrt2 + 1e-12);
  auto cst = marty_sup([](int n) { return c(double(n)); }, {1, 2, 3}, K, 21);
  for (double s : cst.sups) EXPECT_EQ(s, 0.0);
  EXPECT_EQ(cst.verdict, "bounded");
}

TEST(Zalcman, ScaledIdentity) {
  for (int n : {10, 100, 1000}) {
    auto res = zalcman_rescale(c(double(n)) * z());
    EXPECT_NEAR(res.R, 2 * kSqrt2 * n, 1e-9 * n);
    EXPECT_NEAR(res.gradient_at_zero, 1.0, 1e-9);
    EXPECT_NEAR(spherical_gradient(res.rescaled, 0.0), 1.0, 1e-9);
    EXPECT_LE(res.envelope_excess, 1e-9);
    EXPECT_NEAR(std::abs(res.z0), 0.0, 1e-6);
    Complex w(0.3, -0.2);
    EXPECT_NEAR(std::abs(*res.rescaled.try_eval(w) - w / (2 * kSqrt2)), 0.0, 1e-9);
  }
}

TEST(Zalcman, OffCenterMaximumIsRecentred) {
  // 5 times a disk automorphism; the chordal gradient peaks where it vanishes.
  Complex a(0.3, 0.1);
  MeroExpr h = c(5.0) * (z() - c(a)) / (c(1.0) - c(std::conj(a)) * z());
  auto res = zalcman_rescale(h);
  EXPECT_TRUE(res.recentred_applied);
  EXPECT_NEAR(std::abs(res.z0 - a), 0.0, 1e-5);
  EXPECT_NEAR(res.gradient_at_zero, 1.0, 1e-9);
  EXPECT_LE(res.envelope_excess, 1e-9);
  EXPECT_NEAR(res.R, 2 * kSqrt2 * 5.0, 1e-6);
}

TEST(Zalcman, Preconditions) {
  EXPECT_EQ(code_of([] { zalcman_rescale(c(2.0)); }), ErrorCode::Precondition);
  // z^1000 peaks within a grid step of the rim.
  EXPECT_EQ(code_of([] { zalcman_rescale(z().pow(1000)); }), ErrorCode::Precondition);
}
