#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "weierlab/domain.hpp"

namespace weierlab {

/// Conformal density, length per unit |dz|.
using Density = std::function<double(Complex)>;

enum NodeFlag : std::uint8_t {
  kInterior = 1,
  kBoundaryAdjacent = 2,
  kPunctureAdjacent = 4,
};

struct MeshNode {
  Complex z;
  std::uint8_t flags = kInterior;
  /// Local sample spacing, used when wiring refinement nodes.
  double spacing = 0.0;
  /// Lattice coordinates, or kNotLattice for ring nodes.
  int li = kNotLattice, lj = kNotLattice;

  static constexpr int kNotLattice = -(1 << 30);
  bool on_lattice() const noexcept { return li != kNotLattice; }
};

struct MeshEdge {
  int a = 0, b = 0;
  double weight = 0.0;
};

struct MeshOptions {
  /// Relative inset of the ghost boundary ring.
  double boundary_inset = 1e-3;
  /// Radius of the innermost puncture ring.
  double puncture_exclusion = 1e-4;
  int ring_nodes = 32;
  /// Ghost nodes connect to lattice nodes within 2.3 spacings; nodes shared
  /// with coarser nested lattices (down to this resolution) use the coarser
  /// spacing, so a mesh contains every boundary edge of those meshes.
  int ghost_reach_resolution = 100;
  /// Worker threads for edge quadrature; 0 means hardware concurrency.
  int jobs = 1;
};

/// Square lattice centred on the domain centre. Lattices built with
/// resolutions n and 2n share the nodes of the coarser one.
struct LatticeInfo {
  Complex origin;
  double spacing = 0.0;
  /// Lattice coordinates range over [-half, half] on both axes.
  int half = 0;
  std::vector<int> index;

  int node(int i, int j) const {
    if (i < -half || i > half || j < -half || j > half) return -1;
    return index[static_cast<std::size_t>((i + half) * (2 * half + 1) + (j + half))];
  }
  Complex position(int i, int j) const { return origin + spacing * Complex(i, j); }
};

/// Weighted graph over sample points of a domain. Edge weights are the
/// conformal lengths of the straight segments (4-point Gauss-Legendre).
class MeshedDomain {
 public:
  MeshedDomain(DomainSpec domain, int resolution, std::vector<MeshNode> nodes,
               std::vector<MeshEdge> edges, LatticeInfo lattice);

  const DomainSpec& domain() const noexcept { return domain_; }
  int resolution() const noexcept { return resolution_; }
  const std::vector<MeshNode>& nodes() const noexcept { return nodes_; }
  const std::vector<MeshEdge>& edges() const noexcept { return edges_; }
  const LatticeInfo& lattice() const noexcept { return lattice_; }
  std::size_t size() const noexcept { return nodes_.size(); }

  struct Neighbor {
    int node;
    double weight;
  };
  std::span<const Neighbor> neighbors(int i) const {
    return {adj_.data() + offsets_[i], adj_.data() + offsets_[i + 1]};
  }

  /// Closest node to z (Euclidean).
  int nearest_node(Complex z) const;

  /// CSV exports: `id,x,y,flags` and `i,j,weight`.
  void write_nodes_csv(const std::string& path) const;
  void write_edges_csv(const std::string& path) const;

 private:
  DomainSpec domain_;
  int resolution_;
  std::vector<MeshNode> nodes_;
  std::vector<MeshEdge> edges_;
  LatticeInfo lattice_;
  std::vector<int> offsets_;
  std::vector<Neighbor> adj_;
};

/// Builds the distance graph: a lattice of spacing 2*half_extent/resolution
/// joined with a 16-neighbour stencil, a ghost ring just inside the outer
/// boundary, and geometric rings around each puncture down to the exclusion
/// radius. Throws `Error(NonFinite)` if the density is not positive and
/// finite at a node or quadrature point.
MeshedDomain build_mesh(const DomainSpec& domain, const Density& density, int resolution,
                        const MeshOptions& opts = {});

}  // namespace weierlab
