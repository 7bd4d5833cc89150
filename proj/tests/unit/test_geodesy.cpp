#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>
#include <string>

#include "weierlab/errors.hpp"
#include "weierlab/geodesy.hpp"
#include "weierlab/quadrature.hpp"

using namespace weierlab;

namespace {

double one(Complex) { return 1.0; }
double poincare(Complex z) { return 2.0 / (1.0 - std::norm(z)); }

Complex disk_automorphism(Complex a, Complex z) { return (z - a) / (1.0 - std::conj(a) * z); }

int lattice_center(const MeshedDomain& mesh) { return mesh.lattice().node(0, 0); }

}  // namespace

TEST(Quadrature, SimpsonPolynomialAndCancellation) {
  EXPECT_NEAR(adaptive_simpson([](double x) { return x * x * x * x; }, 0.0, 2.0), 32.0 / 5.0,
              1e-12);
  // A periodic integrand whose integral vanishes still converges.
  double s = adaptive_simpson([](double x) { return std::sin(x); }, 0.0, 2 * std::numbers::pi);
  EXPECT_NEAR(s, 0.0, 1e-9);
  Complex c = adaptive_simpson(
      [](double t) {
        Complex z = std::polar(1.0, t);
        return Complex(0, 1) * z / z;
      },
      0.0, 2 * std::numbers::pi);
  EXPECT_NEAR(c.imag(), 2 * std::numbers::pi, 1e-12);
}

TEST(Quadrature, GaussLegendreExactForCubics) {
  double v = gauss_legendre4([](double x) { return 7 * x * x * x * x * x * x * x - x + 2; }, -1.0,
                             1.0);
  EXPECT_NEAR(v, 4.0, 1e-14);
}

TEST(Quadrature, NonFiniteSampleThrows) {
  EXPECT_THROW(adaptive_simpson([](double x) { return 1.0 / x; }, 0.0, 1.0), Error);
}

TEST(PathLength, Examples) {
  std::vector<Complex> seg{0.0, 1.0};
  EXPECT_NEAR(path_length(one, seg), 1.0, 1e-14);
  std::vector<Complex> half{0.0, 0.5};
  EXPECT_NEAR(path_length(poincare, half), std::log(3.0), 1e-10);
  auto plane = [](Complex z) { return 1.0 + std::norm(z); };
  EXPECT_NEAR(path_length(plane, seg), 4.0 / 3.0, 1e-12);
  std::vector<Complex> bent{0.0, Complex(0.3, 0.0), Complex(0.3, 0.4)};
  EXPECT_NEAR(path_length(one, bent), 0.7, 1e-14);
}

TEST(PathLength, MatchesHyperbolicDistance) {
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> u(-0.6, 0.6);
  for (int k = 0; k < 20; ++k) {
    Complex z(u(rng), u(rng));
    std::vector<Complex> radial{0.0, z};
    EXPECT_NEAR(path_length(poincare, radial), hyperbolic_distance(0.0, z), 1e-9);
  }
}

TEST(HyperbolicDistance, Values) {
  EXPECT_EQ(hyperbolic_distance(0.0, 0.0), 0.0);
  EXPECT_NEAR(hyperbolic_distance(0.0, 0.5), 1.0986122886681098, 1e-12);
  EXPECT_THROW(hyperbolic_distance(0.0, 1.0), Error);
}

TEST(HyperbolicDistance, SymmetricAndMobiusInvariant) {
  std::mt19937 rng(17);
  std::uniform_real_distribution<double> r(0.0, 0.95), t(0.0, 2 * std::numbers::pi);
  for (int k = 0; k < 200; ++k) {
    Complex z = std::polar(r(rng), t(rng)), w = std::polar(r(rng), t(rng));
    Complex a = std::polar(r(rng), t(rng));
    double d = hyperbolic_distance(z, w);
    EXPECT_NEAR(d, hyperbolic_distance(w, z), 1e-12);
    double da = hyperbolic_distance(disk_automorphism(a, z), disk_automorphism(a, w));
    EXPECT_NEAR(d, da, 1e-10 * std::max(1.0, d));
  }
}

TEST(Mesh, EuclideanWeightsAreLengths) {
  DomainSpec disk(Disk{});
  auto mesh = build_mesh(disk, one, 100);
  for (const auto& e : mesh.edges()) {
    double len = std::abs(mesh.nodes()[e.a].z - mesh.nodes()[e.b].z);
    ASSERT_NEAR(e.weight, len, 1e-12);
  }
}

TEST(Mesh, Invariants) {
  DomainSpec disk(Disk{});
  auto mesh = build_mesh(disk, poincare, 60);
  for (const auto& e : mesh.edges()) {
    ASSERT_TRUE(std::isfinite(e.weight));
    ASSERT_GT(e.weight, 0.0);
  }
  std::size_t interior = 0;
  for (std::size_t i = 0; i < mesh.size(); ++i) {
    const auto& n = mesh.nodes()[i];
    if (n.flags != kInterior) continue;
    ++interior;
    EXPECT_GE(mesh.neighbors(static_cast<int>(i)).size(), 8u);
    if (std::abs(n.z) < 0.8) EXPECT_EQ(mesh.neighbors(static_cast<int>(i)).size(), 16u);
  }
  // Roughly resolution^2 * pi / 4 lattice nodes.
  EXPECT_NEAR(static_cast<double>(interior), 60.0 * 60.0 * std::numbers::pi / 4, 150.0);
  // Every node is reachable from the boundary.
  EXPECT_NO_THROW(boundary_distance_field(mesh));
}

TEST(Mesh, PoincareWeightsGrowOutward) {
  DomainSpec disk(Disk{});
  auto mesh = build_mesh(disk, poincare, 50);
  const auto& lat = mesh.lattice();
  double prev = 0.0;
  for (int i = 0; i < 24; ++i) {
    int a = lat.node(i, 0), b = lat.node(i + 1, 0);
    ASSERT_GE(a, 0);
    ASSERT_GE(b, 0);
    for (const auto& nb : mesh.neighbors(a)) {
      if (nb.node != b) continue;
      EXPECT_GT(nb.weight, prev);
      prev = nb.weight;
    }
  }
}

TEST(Mesh, PunctureRingsRefine) {
  DomainSpec disk(Disk{}, {Complex(0.0, 0.0)});
  auto inv = [](Complex z) { return 1.0 / std::abs(z); };
  auto mesh = build_mesh(disk, inv, 40);
  double closest = 1.0;
  int adjacent = 0;
  for (const auto& n : mesh.nodes()) {
    closest = std::min(closest, std::abs(n.z));
    if (n.flags & kPunctureAdjacent) {
      ++adjacent;
      EXPECT_NEAR(std::abs(n.z), 1e-4, 1e-12);
    }
  }
  EXPECT_NEAR(closest, 1e-4, 1e-12);
  EXPECT_EQ(adjacent, 32);
  for (const auto& e : mesh.edges()) {
    ASSERT_TRUE(std::isfinite(e.weight));
    ASSERT_GT(e.weight, 0.0);
  }
  for (std::size_t i = 0; i < mesh.size(); ++i) {
    if (mesh.nodes()[i].flags == kInterior) {
      EXPECT_GE(mesh.neighbors(static_cast<int>(i)).size(), 8u) << mesh.nodes()[i].z;
    }
  }
  // Radial lengths under 1/|z|: log(r / 1e-4) inward, log(0.999 / r) outward.
  auto d = boundary_distance_field(mesh);
  int node = mesh.lattice().node(3, 0);
  double r = std::abs(mesh.nodes()[node].z);
  double expect = std::min(std::log(r / 1e-4), std::log(0.999 / r));
  EXPECT_GE(d[node], expect * (1 - 1e-6));
  EXPECT_LE(d[node], expect * 1.05);
}

TEST(Mesh, NonFiniteDensityRejected) {
  DomainSpec disk(Disk{});
  auto bad = [](Complex z) { return z.real() > 0.5 ? std::nan("") : 1.0; };
  try {
    build_mesh(disk, bad, 20);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NonFinite);
  }
}

TEST(Mesh, NestedLattices) {
  DomainSpec disk(Disk{});
  auto coarse = build_mesh(disk, one, 50);
  auto fine = build_mesh(disk, one, 100);
  for (int i = -20; i <= 20; ++i) {
    int a = coarse.lattice().node(i, 0), b = fine.lattice().node(2 * i, 0);
    ASSERT_GE(a, 0);
    ASSERT_GE(b, 0);
    EXPECT_EQ(coarse.nodes()[a].z, fine.nodes()[b].z);
  }
}

TEST(Mesh, CsvExport) {
  DomainSpec rect(Rectangle{{-1.0, -0.5}, {1.0, 0.5}});
  auto mesh = build_mesh(rect, one, 20);
  auto dir = std::filesystem::temp_directory_path();
  std::string nodes = (dir / "weierlab_nodes.csv").string();
  std::string edges = (dir / "weierlab_edges.csv").string();
  mesh.write_nodes_csv(nodes);
  mesh.write_edges_csv(edges);
  auto count = [](const std::string& p) {
    std::ifstream in(p);
    std::string line;
    std::size_t n = 0;
    while (std::getline(in, line)) ++n;
    return n;
  };
  EXPECT_EQ(count(nodes), mesh.size() + 1);
  EXPECT_EQ(count(edges), mesh.edges().size() + 1);
  std::ifstream in(nodes);
  std::string header;
  std::getline(in, header);
  EXPECT_EQ(header, "id,x,y,flags");
}

TEST(DistanceField, EuclideanDiskConverges) {
  DomainSpec disk(Disk{});
  double prev_err = 1.0;
  for (int res : {50, 100, 200}) {
    auto mesh = build_mesh(disk, one, res);
    double d0 = boundary_distance_field(mesh)[lattice_center(mesh)];
    double err = std::abs(d0 - 1.0);
    EXPECT_GE(d0, 0.999 - 1e-12);
    EXPECT_LE(err, prev_err + 1e-12) << res;
    prev_err = err;
    if (res == 200) EXPECT_LT(err, 0.05);
  }
}

TEST(DistanceField, PoincareRadialDistance) {
  DomainSpec disk(Disk{});
  auto mesh = build_mesh(disk, poincare, 200);
  auto d = boundary_distance_field(mesh);
  int node = mesh.lattice().node(90, 0);
  ASSERT_GE(node, 0);
  ASSERT_NEAR(std::abs(mesh.nodes()[node].z), 0.9, 1e-12);
  double closed = hyperbolic_distance(0.0, 0.999) - hyperbolic_distance(0.0, 0.9);
  EXPECT_NEAR(d[node], closed, 0.05 * closed);
  // Graph lengths dominate the true distance to the ghost circle.
  for (std::size_t i = 0; i < mesh.size(); ++i) {
    double r = std::abs(mesh.nodes()[i].z);
    double truth = hyperbolic_distance(0.0, 0.999) - hyperbolic_distance(0.0, std::min(r, 0.999));
    ASSERT_GE(d[i], truth * (1 - 1e-7) - 1e-9);
  }
}

TEST(DistanceField, RectangleCenter) {
  DomainSpec rect(Rectangle{{-2.0, -1.0}, {2.0, 1.0}});
  auto mesh = build_mesh(rect, one, 100);
  double d0 = boundary_distance_field(mesh)[lattice_center(mesh)];
  EXPECT_NEAR(d0, 1.0, 0.05);
}

TEST(DistanceField, Annulus) {
  DomainSpec ann(Annulus{0.0, 0.5, 1.0});
  auto mesh = build_mesh(ann, one, 100);
  auto d = boundary_distance_field(mesh);
  int node = mesh.lattice().node(38, 0);
  ASSERT_GE(node, 0);
  double r = std::abs(mesh.nodes()[node].z);
  EXPECT_NEAR(d[node], std::min(0.999 - r, r - 0.5005), 0.01);
}

TEST(Completeness, PoincareBoundary) {
  std::vector<double> eps{1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6};
  auto rep = completeness_probe(poincare, DomainSpec(Disk{}), CompletenessTarget::boundary(1.0),
                                eps);
  EXPECT_NEAR(rep.slope, 1.0, 0.05);
  EXPECT_TRUE(rep.divergence);
  for (std::size_t k = 1; k < rep.lengths.size(); ++k) EXPECT_GE(rep.lengths[k], rep.lengths[k - 1]);
  // Closed form: L(eps) = log((2 - eps) / eps).
  for (std::size_t k = 0; k < eps.size(); ++k) {
    EXPECT_NEAR(rep.lengths[k], std::log((2 - eps[k]) / eps[k]), 1e-8);
  }
}

TEST(Completeness, FiniteLengthToRim) {
  auto t = make_triple(DomainSpec(Disk{}), parse_mero("1"), parse_mero("z"), 2);
  std::vector<double> eps{1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6};
  auto rep = completeness_probe(t, CompletenessTarget::boundary(1.0), eps);
  EXPECT_FALSE(rep.divergence);
  EXPECT_NEAR(rep.lengths.back(), 4.0 / 3.0, 1e-5);
}

TEST(Completeness, OptimalExampleTowardPuncture) {
  auto t = make_triple(DomainSpec(TruncatedPlane{10.0}, {Complex(1, 0), Complex(-1, 0)}),
                       parse_mero("1/(z^2-1)"), parse_mero("z"), 1);
  std::vector<double> eps{1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6};
  auto rep = completeness_probe(t, CompletenessTarget::puncture(1.0), eps);
  EXPECT_NEAR(rep.slope, std::sqrt(0.5), 0.1 * std::sqrt(0.5));
  EXPECT_TRUE(rep.divergence);
  auto inf = completeness_probe(t, CompletenessTarget::infinity(), eps);
  EXPECT_TRUE(inf.divergence);
  EXPECT_NEAR(inf.slope, 1.0, 0.05);
  EXPECT_NEAR(std::abs(inf.direction.real()), 0.0, 1e-12);
}

TEST(Completeness, PowerGrowth) {
  // Density 1/d^2 toward the rim: L grows like 1/eps.
  auto dens = [](Complex z) { return 1.0 / std::pow(1.0 - std::abs(z), 2); };
  std::vector<double> eps{1e-1, 1e-2, 1e-3, 1e-4, 1e-5};
  auto rep = completeness_probe(dens, DomainSpec(Disk{}), CompletenessTarget::boundary(1.0), eps);
  EXPECT_EQ(rep.model, "power");
  EXPECT_NEAR(rep.exponent, 1.0, 0.05);
  EXPECT_TRUE(rep.divergence);
}

TEST(Completeness, BadLevels) {
  std::vector<double> up{1e-3, 1e-2, 1e-1};
  EXPECT_THROW(completeness_probe(poincare, DomainSpec(Disk{}), CompletenessTarget::boundary(1.0),
                                  up),
               Error);
  std::vector<double> tiny{1e-3, 1e-6, 1e-9};
  EXPECT_THROW(completeness_probe(poincare, DomainSpec(Disk{}), CompletenessTarget::boundary(1.0),
                                  tiny),
               Error);
}
