#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "weierlab/domain.hpp"
#include "weierlab/mero_expr.hpp"
#include "weierlab/mesh.hpp"

namespace weierlab {

/// Minimal surface in R^3 from (f dz, g), m = 2.
struct MinimalData {
  MeroExpr f, g;
};

/// Maxface in L^3 from (f dz, g); x^1 is the timelike axis.
struct MaxfaceData {
  MeroExpr f, g;
};

/// Improper affine front from the holomorphic pair (F, G).
struct ImproperAffineData {
  MeroExpr F, G;
};

/// Flat front in H^3 from the canonical forms: L^{-1} dL = [[0, theta], [omega, 0]] dz.
struct FlatFrontData {
  MeroExpr omega, theta;
};

using SurfaceClass = std::variant<MinimalData, MaxfaceData, ImproperAffineData, FlatFrontData>;

struct WeierstrassData {
  SurfaceClass data;
  DomainSpec domain;
  Complex base{0.0, 0.0};
};

/// "minimal", "maxface", "improper_affine" or "flat_front".
const char* class_name(const WeierstrassData& d);

/// Checks the class invariants that can be decided symbolically:
/// regularity of (f, g, 2) for minimal and maxface data, |g| not identically 1
/// for maxfaces, and holomorphy of F, G, omega, theta. Throws on failure.
void validate(const WeierstrassData& d);

using Polyline = std::vector<Complex>;

/// Triangulated surface over a mesh. Vertex k is mesh node k.
struct SurfaceMesh {
  std::string surface_class;
  std::vector<Complex> params;
  /// R^3 / L^3 coordinates, or the Poincare-ball image for flat fronts.
  std::vector<Eigen::Vector3d> positions;
  /// Flat fronts only: psi = L L^* per vertex.
  std::vector<Eigen::Matrix2cd> hermitian;
  /// Counter-clockwise in the parameter plane.
  std::vector<std::array<int, 3>> faces;
  std::vector<int> li, lj;

  /// Density of the class metric per unit |dz|: ds for minimal, d sigma for
  /// maxfaces, d tau for improper affine fronts, ds_L for flat fronts.
  std::vector<double> density;
  /// Gaussian curvature of that metric.
  std::vector<double> curvature;
  std::vector<std::uint8_t> singular;
  /// g, the Lagrangian Gauss map nu = dF/dG, or the ratio rho = theta/omega.
  std::vector<ExtComplex> gauss;
  /// Maxfaces: induced (1 - |g|^2)^2 |f|^2. Improper affine fronts: affine
  /// metric |G'|^2 - |F'|^2. Zero for the other classes.
  std::vector<double> aux_metric;

  /// Largest disagreement across lattice edges not in the spanning tree.
  double seam_mismatch = 0.0;
  /// Flat fronts: max |det L - 1| and the largest ratio of that drift to the
  /// integrated path length.
  double det_drift = 0.0;
  double det_drift_rate = 0.0;
  bool lorentzian = false;

  std::size_t size() const noexcept { return positions.size(); }
};

/// Relative band around the singular locus used for per-vertex flags.
inline constexpr double kSingularBand = 1e-3;

struct SynthOptions {
  /// Relative tolerance of the per-edge adaptive Simpson rule.
  double rel_tol = 1e-10;
  /// Flat fronts: largest RK4 step in the parameter plane.
  double step = 1e-3;
  /// Flat fronts: |det L - 1| above this throws `Error(DetDrift)`.
  double max_det_drift = 1e-6;
};

/// psi = Re of the integrated 1-form along a breadth-first spanning tree of
/// the mesh rooted at the node nearest the base point. Poles of the integrand
/// on an edge throw `Error(PoleOnPath)`.
SurfaceMesh synth_minimal(const WeierstrassData& d, const MeshedDomain& mesh,
                          const SynthOptions& opts = {});
SurfaceMesh synth_maxface(const WeierstrassData& d, const MeshedDomain& mesh,
                          const SynthOptions& opts = {});
SurfaceMesh synth_improper_affine(const WeierstrassData& d, const MeshedDomain& mesh,
                                  const SynthOptions& opts = {});
SurfaceMesh synth_flatfront(const WeierstrassData& d, const MeshedDomain& mesh,
                            const SynthOptions& opts = {});
/// Dispatches on the class.
SurfaceMesh synthesize(const WeierstrassData& d, const MeshedDomain& mesh,
                       const SynthOptions& opts = {});

/// Value at z by integrating along the straight segment from the base point.
/// R^3/L^3 position, or the ball image for flat fronts.
Eigen::Vector3d direct_position(const WeierstrassData& d, Complex z, const SynthOptions& opts = {});
/// Flat fronts: L(z) along the straight segment from the base point.
Eigen::Matrix2cd direct_lift(const WeierstrassData& d, Complex z, const SynthOptions& opts = {});

struct PeriodResidual {
  std::string surface_class;
  Polyline cycle;
  /// Real parts of the cycle integrals: 3 entries (minimal, maxface) or 1
  /// (improper affine, Re of the integral of F dG). Empty for flat fronts.
  std::vector<double> residual;
  /// Flat fronts: monodromy M - I of L around the cycle starting from I.
  Eigen::Matrix2cd monodromy_deviation = Eigen::Matrix2cd::Zero();
  /// Euclidean norm of `residual`, or Frobenius norm of the deviation.
  double norm = 0.0;
};

/// Integrates around a closed polyline (closed automatically if the last
/// point differs from the first).
PeriodResidual period_residuals(const WeierstrassData& d, const Polyline& cycle,
                                const SynthOptions& opts = {});

/// Closed polygon with n sides inscribed in the circle.
Polyline circle_polyline(Complex center, double radius, int n = 256);

struct ImmersionReport {
  /// Max over sampled vertices, all relative to lambda^2.
  double isothermal = 0.0;    // | <u,u> - <v,v> |
  double orthogonality = 0.0; // | <u,v> |
  double metric = 0.0;        // | <u,u> - lambda^2 |
  /// |discrete Laplacian of psi|, minimal class only.
  std::optional<double> laplacian;
  std::size_t samples = 0;
  double h = 0.0;
};

/// Fourth-order central differences on the lattice, second-order Laplacian.
/// Maxfaces use the Lorentz product (-,+,+) and lambda^2 = (1 - |g|^2)^2 |f|^2, skipping vertices with
/// ||g| - 1| < `band`. Throws `Error(Precondition)` for other classes and
/// `Error(StencilOutOfDomain)` when no vertex has a full stencil.
ImmersionReport immersion_check(const SurfaceMesh& s, const WeierstrassData& d,
                                const MeshedDomain& mesh, double band = 0.1);

/// Max angle between the finite-difference normal psi_u x psi_v and the
/// stereographic image of g. Minimal class only.
double gauss_normal_check(const SurfaceMesh& s, const MeroExpr& g, const MeshedDomain& mesh);

/// Max over mesh nodes of |sum Phi_k^2| / |Phi|^2 for the integrand, with the
/// Lorentz form for maxfaces.
double nullity_residual(const WeierstrassData& d, const MeshedDomain& mesh);

/// Marching squares on the lattice for |g| - 1 (maxface), |F'| - |G'|
/// (improper affine) or |theta| - |omega| (flat front, same zero set as
/// |rho| - 1 but finite where omega vanishes).
std::vector<Polyline> singular_locus(const WeierstrassData& d, const MeshedDomain& mesh);

/// Symmetric Hausdorff distance between two polyline sets, sampling each
/// segment at `spacing`.
double hausdorff_distance(const std::vector<Polyline>& a, const std::vector<Polyline>& b,
                          double spacing = 1e-3);

enum class MeshFormat { Obj, Ply, Csv, Json };

/// Flat-front meshes also write `<path>.hermitian.json`.
void export_mesh(const SurfaceMesh& s, MeshFormat format, const std::string& path);

MeshFormat parse_mesh_format(const std::string& name);

}  // namespace weierlab
