#pragma once

#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "weierlab/geodesy.hpp"
#include "weierlab/mesh.hpp"
#include "weierlab/mtriple.hpp"
#include "weierlab/sphere.hpp"

namespace weierlab {

/// |g| < L on the domain.
struct Bounded {
  double L = 1.0;
};

/// g omits every value in the set.
struct Omits {
  std::vector<ExtComplex> values;
};

using PropertySpec = std::variant<Bounded, Omits>;

/// Throws `Error(InvalidArgument)` unless L > 0 or the omitted values are
/// nonempty and pairwise distinct.
void validate_property(const PropertySpec& prop);

struct PropertyReport {
  std::string kind;
  bool pass = false;
  /// Max |g| (bounded) or min chordal distance to the omitted set (omits).
  double extreme = 0.0;
  Complex at;
  /// Omits: index of the closest omitted value.
  int closest_value = -1;
  double delta = 0.0;
  /// Nodes with |g| > L - 2 delta (bounded) or chi < 2 delta (omits).
  std::vector<Complex> near_attainment;
  std::size_t samples = 0;
};

/// Samples g on the lattice and boundary nodes of the mesh; the graded rings
/// around punctures only serve the distance field. Bounded passes when
/// max |g| < L; Omits passes when the chordal distance from g to every
/// omitted value stays above `delta`.
PropertyReport property_check(const MeroExpr& g, const PropertySpec& prop,
                              const MeshedDomain& mesh, double delta = 1e-3);

/// C = sqrt(2m) L (1 + L^2)^{m/2} for Bounded; no constant for Omits.
std::optional<double> curvature_constant(const PropertySpec& prop, int m);

struct EstimateOptions {
  /// Relative slack on C^2 for the one-sided mesh distance error.
  double tolerance = 0.05;
  double delta = 1e-3;
  /// Only lattice nodes whose coordinates are multiples of the stride are
  /// sampled; used to compare nested meshes on a common node set.
  int sample_stride = 1;
};

struct EstimateReport {
  double sup = 0.0;
  Complex argmax;
  int argmax_node = -1;
  double distance_at_argmax = 0.0;
  double curvature_at_argmax = 0.0;
  std::optional<double> C;
  std::optional<double> C2;
  double tolerance = 0.05;
  /// "pass", "fail" or "empirical_only".
  std::string verdict;
  int resolution = 0;
  std::size_t samples = 0;
  PropertyReport property;

  bool failed() const { return verdict == "fail"; }
};

/// sup over interior nodes of |K| d^2 with d the mesh distance to the
/// boundary, against C^2 (1 + tolerance) when the constant is known.
/// Throws `Error(PropertyViolated)` if g fails the property on the mesh and
/// `Error(MeshTooCoarse)` if too few interior nodes remain.
EstimateReport verify_estimate(const MTriple& t, const PropertySpec& prop, const MeshedDomain& mesh,
                               const EstimateOptions& opts = {});

struct RefinementStudy {
  std::vector<int> resolutions;
  /// Sup over all interior nodes of each mesh.
  std::vector<double> sup_all;
  /// Sup over the nodes of the coarsest lattice, shared by every mesh.
  std::vector<double> sup_common;
  std::vector<EstimateReport> reports;
  std::optional<double> C2;
  /// sup_common never increases by more than `noise` (relative).
  bool nonincreasing(double noise = 1e-12) const;
};

/// Runs `verify_estimate` on nested meshes; each resolution must be a
/// multiple of the first.
RefinementStudy estimate_refinement(const MTriple& t, const PropertySpec& prop,
                                    const std::vector<int>& resolutions,
                                    const MeshOptions& mesh_opts = {},
                                    const EstimateOptions& opts = {});

/// (C minus the alphas, dz / prod(z - alpha_j), z, m) on a truncated plane.
/// Needs m + 1 pairwise distinct alphas.
MTriple optimal_example(int m, const std::vector<Complex>& alphas, double outer_radius = 0.0);

struct FujimotoReport {
  double sup = 0.0;
  Complex argmax;
  double eta = 0.0;
  double R = 0.0;
  int q = 0;
  std::size_t samples = 0;
};

/// sup over nodes with |z| < R of
///   |f'| / ((1 + |f|^2) prod chi(f, alpha_j)^{1 - eta}) * (R^2 - |z|^2) / R.
/// X must contain infinity and at least three values; 0 < eta < (q - 2)/q.
FujimotoReport fujimoto_ratio(const MeroExpr& f, const std::vector<ExtComplex>& X, double eta,
                              double R, const MeshedDomain& mesh);

struct NormalityReport {
  std::string label;
  Disk compact;
  std::vector<int> indices;
  std::vector<double> sups;
  std::vector<Complex> argmax;
  /// Least-squares slope of log sup against log index.
  double slope = 0.0;
  /// "bounded" or "unbounded-growth".
  std::string verdict;
};

using Family = std::function<MeroExpr(int)>;

/// Per-member sup of the spherical gradient over a square grid restricted to
/// the compact disk. Growth is declared when the log-log slope exceeds 0.25.
NormalityReport marty_sup(const Family& family, const std::vector<int>& indices,
                          const Disk& compact, int grid, const std::string& label = "");

inline constexpr double kMartyGrowthSlope = 0.25;

struct ZalcmanResult {
  /// f(z) = h(phi(z / R)) with phi the recentring automorphism.
  MeroExpr rescaled;
  /// h composed with phi.
  MeroExpr recentred;
  double R = 0.0;
  Complex z0;
  bool recentred_applied = false;
  /// max of ((1 - |z|^2) / 2) |grad h|_e over the disk.
  double chordal_max = 0.0;
  /// |grad f|_e(0), equal to 1 up to rounding.
  double gradient_at_zero = 0.0;
  /// Largest |grad f|_e(z) - 1 / (1 - (|z|/R)^2) over the grid.
  double envelope_excess = 0.0;
  int grid = 0;
};

/// Moves the maximum of the chordal gradient to 0 with the automorphism
/// (z - z0)/(z conj(z0) - 1), sets R = |grad|_e(0) and returns h(. / R).
/// Throws `Error(Precondition)` for constant h or a maximum on the rim.
ZalcmanResult zalcman_rescale(const MeroExpr& h, int grid = 300);

}  // namespace weierlab
