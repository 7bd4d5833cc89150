#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "weierlab/mesh.hpp"
#include "weierlab/mtriple.hpp"

namespace weierlab {

/// Conformal length of a polyline: adaptive Simpson per segment.
/// Throws `Error(NonFinite)` on a non-finite integrand sample.
double path_length(const Density& density, std::span<const Complex> polyline,
                   double rel_tol = 1e-10);

/// Multi-source Dijkstra over the mesh graph. Throws `Error(Disconnected)`
/// if some node cannot be reached.
std::vector<double> graph_distances(const MeshedDomain& mesh, std::span<const int> sources);

/// Graph distance from every node to the nearest boundary-adjacent or
/// puncture-adjacent node. Overestimates the conformal distance to the
/// (truncated) boundary and decreases toward it under refinement.
std::vector<double> boundary_distance_field(const MeshedDomain& mesh);

/// Distance on the unit disk for the metric 2|dz|/(1-|z|^2).
double hyperbolic_distance(Complex z1, Complex z2);

struct CompletenessTarget {
  enum class Kind { Puncture, BoundaryPoint, Infinity };
  Kind kind = Kind::Puncture;
  /// Puncture or boundary point; unit direction for Infinity.
  Complex point{0.0, 0.0};

  static CompletenessTarget puncture(Complex p) { return {Kind::Puncture, p}; }
  static CompletenessTarget boundary(Complex p) { return {Kind::BoundaryPoint, p}; }
  /// Direction 0 picks the ray from the domain centre that stays farthest
  /// from the punctures.
  static CompletenessTarget infinity(Complex direction = {0.0, 0.0}) {
    return {Kind::Infinity, direction};
  }
};

std::string to_string(CompletenessTarget::Kind kind);

struct CompletenessReport {
  CompletenessTarget target;
  Complex start;
  /// Unit direction of the straight probe path.
  Complex direction;
  std::vector<double> eps;
  /// Truncated lengths L(eps), nondecreasing as eps decreases.
  std::vector<double> lengths;
  /// "log": L = A log(1/eps) + B; "power": L = A eps^{-p} + B.
  std::string model = "log";
  double slope = 0.0;
  double intercept = 0.0;
  double exponent = 0.0;
  /// RMS residual of the fit.
  double residual = 0.0;
  /// Fitted slope (or exponent) on the first and last n-1 levels.
  double window_first = 0.0;
  double window_last = 0.0;
  bool stable = false;
  bool divergence = false;
};

/// Integrates the density along a straight path toward the target, cut off
/// at distance eps (or at |z - centre| = 1/eps for Infinity), and fits the
/// growth of L(eps). Divergence evidence requires a positive slope whose
/// first- and last-window fits agree within 10%.
///
/// `eps_levels` must be strictly decreasing with at least three entries, the
/// smallest >= 1e-8.
CompletenessReport completeness_probe(const Density& density, const DomainSpec& domain,
                                      const CompletenessTarget& target,
                                      std::span<const double> eps_levels,
                                      std::optional<Complex> start = std::nullopt);

/// Same, with the metric density of a triple. Toward Infinity on a truncated
/// plane the probe runs past the truncation radius.
CompletenessReport completeness_probe(const MTriple& t, const CompletenessTarget& target,
                                      std::span<const double> eps_levels,
                                      std::optional<Complex> start = std::nullopt);

}  // namespace weierlab
