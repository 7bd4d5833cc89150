#include <gtest/gtest.h>

#include <cmath>

#include "random_triple.hpp"
#include "weierlab/errors.hpp"
#include "weierlab/mtriple.hpp"

using namespace weierlab;

namespace {

DomainSpec unit_disk() { return DomainSpec(Disk{}); }

MTriple triple(const char* f, const char* g, int m, DomainSpec d = unit_disk()) {
  return make_triple(std::move(d), parse_mero(f), parse_mero(g), m);
}

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::Io;
}

}  // namespace

TEST(MTriple, DiskIdentityMetric) {
  auto t = triple("1", "z", 2);
  EXPECT_DOUBLE_EQ(t.metric_density(0.0), 1.0);
  EXPECT_DOUBLE_EQ(t.metric_density(0.5), 1.25);
  EXPECT_NEAR(t.curvature(0.0), -4.0, 1e-12);
  Complex z(0.3, -0.4);
  EXPECT_NEAR(t.curvature(z), -4.0 / std::pow(1.25, 4), 1e-12);
}

TEST(MTriple, DiskIdentityMetricM1) {
  auto t = triple("1", "z", 1);
  EXPECT_NEAR(t.curvature(0.0), -2.0, 1e-12);
  EXPECT_NEAR(t.curvature(0.5), -2.0 / std::pow(1.25, 3), 1e-12);
}

TEST(MTriple, CatenoidOnAnnulus) {
  auto t = triple("1/z^2", "z", 2, DomainSpec(Annulus{0.0, 0.5, 2.0}));
  EXPECT_NEAR(t.metric_density(1.0), 2.0, 1e-12);
  EXPECT_NEAR(t.curvature(1.0), -0.25, 1e-12);
}

TEST(MTriple, RegularityViolationAtPole) {
  EXPECT_EQ(code_of([] { triple("1", "1/z", 1, DomainSpec(Disk{0.0, 2.0})); }),
            ErrorCode::RegularityViolation);
  try {
    triple("1", "1/z", 1, DomainSpec(Disk{0.0, 2.0}));
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("0"), std::string::npos);
  }
}

TEST(MTriple, StrayZeroOfF) {
  EXPECT_EQ(code_of([] { triple("z", "1", 1); }), ErrorCode::RegularityViolation);
}

TEST(MTriple, PoleOfFRejected) {
  EXPECT_EQ(code_of([] { triple("1/z", "z", 1); }), ErrorCode::NonHolomorphic);
}

TEST(MTriple, RegularAtMatchedPole) {
  auto t = triple("z^2", "1/z", 2, DomainSpec(Disk{0.0, 2.0}));
  EXPECT_TRUE(t.regularity().overall);
  ASSERT_FALSE(t.regularity().entries.empty());
  EXPECT_EQ(t.regularity().entries[0].order_f, 2);
  EXPECT_EQ(t.regularity().entries[0].order_g, -1);
  // In the chart 1/g the data is (1, z): same numbers as the identity triple.
  EXPECT_NEAR(t.metric_density(0.0), 1.0, 1e-12);
  EXPECT_NEAR(t.curvature(0.0), -4.0, 1e-12);
  EXPECT_NEAR(t.curvature(1e-7), t.curvature(0.0), 1e-9);
  EXPECT_NEAR(t.curvature(0.01), -4.0 / std::pow(1.0001, 4), 1e-9);
}

TEST(MTriple, ExpDataIsUnchecked) {
  auto t = triple("exp(z)", "z", 1);
  EXPECT_FALSE(t.regularity().checked);
  Complex z(0.3, 0.1);
  double closed = -2.0 / (std::pow(1.0 + std::norm(z), 3) * std::exp(2 * z.real()));
  EXPECT_NEAR(t.curvature(z), closed, 1e-12);
  EXPECT_NEAR(t.curvature_fd(z, 1e-3), closed, 1e-4 * std::abs(closed));
}

TEST(MTriple, RejectsBadInput) {
  EXPECT_EQ(code_of([] { triple("1", "z", 0); }), ErrorCode::InvalidArgument);
  EXPECT_EQ(code_of([] { triple("0", "z", 1); }), ErrorCode::RegularityViolation);
  auto t = triple("1", "z", 1);
  EXPECT_EQ(code_of([&] { t.metric_density(2.0); }), ErrorCode::InvalidArgument);
  auto p = triple("1", "z", 1, DomainSpec(Disk{}, {Complex(0.2, 0.0)}));
  EXPECT_EQ(code_of([&] { p.metric_density(0.2); }), ErrorCode::Puncture);
  EXPECT_EQ(code_of([&] { t.curvature_fd(Complex(0.9995, 0.0), 1e-3); }),
            ErrorCode::StencilOutOfDomain);
}

TEST(MTriple, ConstantGaussMapIsFlat) {
  auto t = triple("1+z", "2", 3);
  EXPECT_EQ(t.curvature(0.4), 0.0);
}

// Scaling f by c scales lambda by |c| and K by 1/|c|^2.
TEST(MTriple, ScalingLaw) {
  test_support::TripleGenerator gen(11);
  for (int trial = 0; trial < 20; ++trial) {
    auto r = gen.general(1 + trial % 3);
    Complex c = gen.coefficient(0.3, 3.0);
    MTriple a = make_triple(unit_disk(), r.f, r.g, r.m);
    MTriple b = make_triple(unit_disk(), MeroExpr::constant(c) * r.f, r.g, r.m);
    Complex z = gen.clear_point(r.singular, 0.9, 0.1);
    EXPECT_NEAR(b.metric_density(z) / a.metric_density(z), std::abs(c), 1e-10 * std::abs(c));
    EXPECT_NEAR(b.curvature(z) * std::norm(c), a.curvature(z), 1e-9 * std::abs(a.curvature(z)));
  }
}

TEST(MTriple, ClosedFormMatchesFiniteDifferences) {
  test_support::TripleGenerator gen(5);
  for (int trial = 0; trial < 30; ++trial) {
    auto r = gen.general(1 + trial % 3);
    MTriple t = make_triple(unit_disk(), r.f, r.g, r.m);
    for (int s = 0; s < 3; ++s) {
      Complex z = gen.clear_point(r.singular, 0.85, 0.1);
      double k = t.curvature(z);
      double fd = t.curvature_fd(z, 1e-3, true);
      EXPECT_NEAR(fd, k, 1e-4 * std::abs(k)) << r.f.to_string() << " | " << r.g.to_string();
    }
  }
}

TEST(MTriple, CurvatureNonPositive) {
  test_support::TripleGenerator gen(9);
  for (int trial = 0; trial < 30; ++trial) {
    auto r = gen.general(1 + trial % 3);
    MTriple t = make_triple(unit_disk(), r.f, r.g, r.m);
    Complex z = gen.clear_point(r.singular, 0.95, 1e-3);
    EXPECT_LE(t.curvature(z), 0.0);
    EXPECT_GT(t.metric_density(z), 0.0);
  }
}
