#pragma once

#include <variant>
#include <vector>

#include "weierlab/ext_complex.hpp"

namespace weierlab {

struct Disk {
  Complex center{0.0, 0.0};
  double radius = 1.0;
};

struct Annulus {
  Complex center{0.0, 0.0};
  double inner_radius = 0.5;
  double outer_radius = 1.0;
};

/// Axis-aligned rectangle given by its lower-left and upper-right corners.
struct Rectangle {
  Complex lower_left{-1.0, -1.0};
  Complex upper_right{1.0, 1.0};
};

/// The plane truncated to |z| < outer_radius; stands in for C (minus
/// punctures) on a finite mesh.
struct TruncatedPlane {
  double outer_radius = 10.0;
};

using Region = std::variant<Disk, Annulus, Rectangle, TruncatedPlane>;

/// A planar region with finitely many punctures strictly inside it.
class DomainSpec {
 public:
  /// Validates the region and puncture list; throws `Error(InvalidArgument)`.
  explicit DomainSpec(Region region, std::vector<Complex> punctures = {});

  const Region& region() const noexcept { return region_; }
  const std::vector<Complex>& punctures() const noexcept { return punctures_; }

  /// Open region membership, ignoring punctures.
  bool region_contains(Complex z) const;
  /// Region membership excluding points within `exclusion` of a puncture.
  bool contains(Complex z, double exclusion = 0.0) const;
  /// Euclidean distance from z to the region boundary (positive inside).
  double boundary_distance(Complex z) const;
  /// Index of a puncture within `tol` of z, or -1.
  int puncture_near(Complex z, double tol) const;

  /// Symmetry center used for lattices and default base points.
  Complex center() const;
  /// Half the side of the smallest centered square containing the region.
  double half_extent() const;
  bool is_simply_connected() const;
  const char* type_name() const;

 private:
  Region region_;
  std::vector<Complex> punctures_;
};

}  // namespace weierlab
