#include "weierlab/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <limits>
#include <numbers>
#include <thread>
#include <unordered_map>

#include "weierlab/errors.hpp"
#include "weierlab/quadrature.hpp"

namespace weierlab {
namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

constexpr double kConnectFactor = 2.3;

// The region shrunk by the ghost-ring inset. Ghost nodes sit on its boundary.
struct Truncation {
  struct Circle {
    Complex c;
    double r;
    bool outer;
    int count;
  };
  std::vector<Circle> circles;
  bool rect = false;
  double x0 = 0, x1 = 0, y0 = 0, y1 = 0;

  Truncation(const DomainSpec& d, double inset, int resolution) {
    const int n_outer = 8 * resolution;
    std::visit(overloaded{
                   [&](const Disk& k) {
                     circles.push_back({k.center, (1 - inset) * k.radius, true, n_outer});
                   },
                   [&](const Annulus& a) {
                     circles.push_back({a.center, (1 - inset) * a.outer_radius, true, n_outer});
                     int n_in = std::max(16, static_cast<int>(std::lround(
                                                 n_outer * a.inner_radius / a.outer_radius)));
                     circles.push_back({a.center, (1 + inset) * a.inner_radius, false, n_in});
                   },
                   [&](const Rectangle& r) {
                     rect = true;
                     double w = r.upper_right.real() - r.lower_left.real();
                     double hh = r.upper_right.imag() - r.lower_left.imag();
                     double d = inset * 0.5 * std::min(w, hh);
                     x0 = r.lower_left.real() + d;
                     x1 = r.upper_right.real() - d;
                     y0 = r.lower_left.imag() + d;
                     y1 = r.upper_right.imag() - d;
                   },
                   [&](const TruncatedPlane& t) {
                     circles.push_back({Complex(0, 0), (1 - inset) * t.outer_radius, true, n_outer});
                   },
               },
               d.region());
  }

  double distance(Complex z) const {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& c : circles) {
      double r = modulus(z - c.c);
      best = std::min(best, c.outer ? c.r - r : r - c.r);
    }
    if (rect) {
      best = std::min({best, z.real() - x0, x1 - z.real(), z.imag() - y0, y1 - z.imag()});
    }
    return best;
  }

  std::vector<Complex> ghosts(double h) const {
    std::vector<Complex> out;
    for (const auto& c : circles) {
      for (int k = 0; k < c.count; ++k) {
        out.push_back(c.c + std::polar(c.r, 2 * std::numbers::pi * k / c.count));
      }
    }
    if (rect) {
      const Complex corners[4] = {{x0, y0}, {x1, y0}, {x1, y1}, {x0, y1}};
      for (int s = 0; s < 4; ++s) {
        Complex a = corners[s], b = corners[(s + 1) % 4];
        int n = std::max(2, static_cast<int>(std::ceil(std::abs(b - a) / (0.4 * h))));
        for (int k = 0; k < n; ++k) out.push_back(a + (b - a) * (double(k) / n));
      }
    }
    return out;
  }
};

double segment_point_distance(Complex a, Complex b, Complex p) {
  Complex ab = b - a;
  double len2 = std::norm(ab);
  double t = len2 > 0 ? std::clamp(((p - a) * std::conj(ab)).real() / len2, 0.0, 1.0) : 0.0;
  return modulus(a + t * ab - p);
}

std::uint64_t cell_key(long ix, long iy) {
  return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(ix)) << 32) |
         static_cast<std::uint32_t>(iy);
}

double gauss4_segment(const Density& density, Complex a, Complex b) {
  return modulus(b - a) *
         gauss_legendre4([&](double t) { return density(a + t * (b - a)); }, 0.0, 1.0);
}

// Edges whose end densities differ by more than this factor are split until
// the 4-point rule converges; a single panel underestimates steep growth.
constexpr double kSteepRatio = 1.05;

double refine_gauss4(const Density& density, Complex a, Complex b, double whole, int depth) {
  Complex m = 0.5 * (a + b);
  double left = gauss4_segment(density, a, m);
  double right = gauss4_segment(density, m, b);
  double sum = left + right;
  if (depth <= 0 || std::abs(sum - whole) <= 1e-11 * sum) return sum;
  return refine_gauss4(density, a, m, left, depth - 1) +
         refine_gauss4(density, m, b, right, depth - 1);
}

double composite_gauss4(const Density& density, Complex a, Complex b) {
  return refine_gauss4(density, a, b, gauss4_segment(density, a, b), 30);
}

}  // namespace

MeshedDomain::MeshedDomain(DomainSpec domain, int resolution, std::vector<MeshNode> nodes,
                           std::vector<MeshEdge> edges, LatticeInfo lattice)
    : domain_(std::move(domain)),
      resolution_(resolution),
      nodes_(std::move(nodes)),
      edges_(std::move(edges)),
      lattice_(std::move(lattice)) {
  offsets_.assign(nodes_.size() + 1, 0);
  for (const auto& e : edges_) {
    ++offsets_[e.a + 1];
    ++offsets_[e.b + 1];
  }
  for (std::size_t i = 0; i < nodes_.size(); ++i) offsets_[i + 1] += offsets_[i];
  adj_.resize(offsets_.back());
  std::vector<int> fill(offsets_.begin(), offsets_.end() - 1);
  for (const auto& e : edges_) {
    adj_[fill[e.a]++] = {e.b, e.weight};
    adj_[fill[e.b]++] = {e.a, e.weight};
  }
}

int MeshedDomain::nearest_node(Complex z) const {
  int best = -1;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    double d = std::norm(nodes_[i].z - z);
    if (d < best_d) {
      best_d = d;
      best = static_cast<int>(i);
    }
  }
  return best;
}

namespace {

std::string flag_name(std::uint8_t f) {
  if (f & kPunctureAdjacent) return "puncture_adjacent";
  if (f & kBoundaryAdjacent) return "boundary_adjacent";
  return "interior";
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::Io, "cannot open " + path + " for writing");
  return out;
}

}  // namespace

void MeshedDomain::write_nodes_csv(const std::string& path) const {
  auto out = open_out(path);
  out << "id,x,y,flags\n";
  char buf[96];
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%zu,%.17g,%.17g,", i, nodes_[i].z.real(), nodes_[i].z.imag());
    out << buf << flag_name(nodes_[i].flags) << '\n';
  }
  if (!out) throw Error(ErrorCode::Io, "write failed: " + path);
}

void MeshedDomain::write_edges_csv(const std::string& path) const {
  auto out = open_out(path);
  out << "i,j,weight\n";
  char buf[96];
  for (const auto& e : edges_) {
    std::snprintf(buf, sizeof buf, "%d,%d,%.17g\n", e.a, e.b, e.weight);
    out << buf;
  }
  if (!out) throw Error(ErrorCode::Io, "write failed: " + path);
}

MeshedDomain build_mesh(const DomainSpec& domain, const Density& density, int resolution,
                        const MeshOptions& opts) {
  if (resolution < 4) throw Error(ErrorCode::InvalidArgument, "resolution must be at least 4");
  if (!(opts.puncture_exclusion > 0)) {
    throw Error(ErrorCode::InvalidArgument, "puncture exclusion radius must be positive");
  }
  const Truncation trunc(domain, opts.boundary_inset, resolution);
  const double h = 2.0 * domain.half_extent() / resolution;
  const auto& punctures = domain.punctures();

  std::vector<double> zone(punctures.size());
  for (std::size_t k = 0; k < punctures.size(); ++k) {
    double r = std::min(2.0 * h, 0.5 * trunc.distance(punctures[k]));
    for (std::size_t l = 0; l < punctures.size(); ++l) {
      if (l != k) r = std::min(r, 0.3 * std::abs(punctures[k] - punctures[l]));
    }
    if (!(r > opts.puncture_exclusion)) {
      throw Error(ErrorCode::InvalidArgument,
                  "puncture too close to the boundary or another puncture for the exclusion radius");
    }
    zone[k] = r;
  }

  std::vector<MeshNode> nodes;
  LatticeInfo lat;
  lat.origin = domain.center();
  lat.spacing = h;
  lat.half = resolution / 2 + 2;
  const int side = 2 * lat.half + 1;
  lat.index.assign(static_cast<std::size_t>(side) * side, -1);
  for (int i = -lat.half; i <= lat.half; ++i) {
    for (int j = -lat.half; j <= lat.half; ++j) {
      Complex z = lat.position(i, j);
      if (trunc.distance(z) <= 0.05 * h) continue;
      bool clear = true;
      for (std::size_t k = 0; k < punctures.size() && clear; ++k) {
        clear = std::abs(z - punctures[k]) >= zone[k] + 0.05 * h;
      }
      if (!clear) continue;
      lat.index[static_cast<std::size_t>((i + lat.half) * side + (j + lat.half))] =
          static_cast<int>(nodes.size());
      nodes.push_back({z, kInterior, h, i, j});
    }
  }
  for (Complex z : trunc.ghosts(h)) nodes.push_back({z, kBoundaryAdjacent, h});

  const int nr = std::max(8, opts.ring_nodes);
  const double ratio = 1.0 - 2.0 * std::numbers::pi / nr;
  for (std::size_t k = 0; k < punctures.size(); ++k) {
    int rings = static_cast<int>(
        std::ceil(std::log(zone[k] / opts.puncture_exclusion) / std::log(1.0 / ratio)));
    rings = std::max(rings, 1);
    for (int r = 0; r <= rings; ++r) {
      double radius = zone[k] * std::pow(opts.puncture_exclusion / zone[k], double(r) / rings);
      double spacing = r == 0 ? h : 2.0 * std::numbers::pi * radius / nr;
      std::uint8_t flags = r == rings ? kPunctureAdjacent : kInterior;
      double phase = (r % 2) * std::numbers::pi / nr;
      for (int a = 0; a < nr; ++a) {
        nodes.push_back({punctures[k] + std::polar(radius, phase + 2 * std::numbers::pi * a / nr),
                         flags, spacing});
      }
    }
  }

  const double tol = -1e-9 * domain.half_extent();
  auto segment_ok = [&](Complex a, Complex b) {
    for (int s = 1; s < 8; ++s) {
      if (trunc.distance(a + (b - a) * (s / 8.0)) < tol) return false;
    }
    for (Complex p : punctures) {
      double near = std::min(modulus(a - p), modulus(b - p));
      if (segment_point_distance(a, b, p) < 0.7 * near) return false;
    }
    return true;
  };

  std::vector<MeshEdge> edges;
  static constexpr int kStencil[8][2] = {{1, 0}, {0, 1},  {1, 1}, {1, -1},
                                         {2, 1}, {1, 2}, {2, -1}, {1, -2}};
  for (const auto& n : nodes) {
    if (!n.on_lattice()) continue;
    int a = lat.node(n.li, n.lj);
    for (const auto& off : kStencil) {
      int b = lat.node(n.li + off[0], n.lj + off[1]);
      if (b >= 0 && segment_ok(n.z, nodes[b].z)) edges.push_back({a, b, 0.0});
    }
  }

  // Ghost-lattice edges. A node that also lies on the lattice of resolution
  // n / 2^k gets the reach of that coarser lattice, so every boundary edge of
  // a nested coarser mesh (down to the reference resolution) reappears here.
  const int max_level = std::max(
      1, resolution / std::max(1, std::min(resolution, opts.ghost_reach_resolution)));
  auto level_of = [&](int i, int j) {
    int level = 1;
    while (level < max_level && i % (2 * level) == 0 && j % (2 * level) == 0) level *= 2;
    return level;
  };
  const int span = static_cast<int>(std::ceil(kConnectFactor * max_level));
  for (std::size_t g = 0; g < nodes.size(); ++g) {
    if (!(nodes[g].flags & kBoundaryAdjacent)) continue;
    Complex rel = (nodes[g].z - lat.origin) / h;
    int ci = static_cast<int>(std::lround(rel.real()));
    int cj = static_cast<int>(std::lround(rel.imag()));
    for (int i = ci - span; i <= ci + span; ++i) {
      for (int j = cj - span; j <= cj + span; ++j) {
        int q = lat.node(i, j);
        if (q < 0) continue;
        double d = modulus(nodes[q].z - nodes[g].z);
        if (d <= kConnectFactor * h * level_of(i, j) && segment_ok(nodes[g].z, nodes[q].z)) {
          edges.push_back({static_cast<int>(g), q, 0.0});
        }
      }
    }
  }

  const double cell = kConnectFactor * h;
  std::unordered_map<std::uint64_t, std::vector<int>> grid;
  auto cell_of = [&](Complex z) {
    return std::pair<long, long>{static_cast<long>(std::floor((z.real() - lat.origin.real()) / cell)),
                                 static_cast<long>(std::floor((z.imag() - lat.origin.imag()) / cell))};
  };
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    auto [cx, cy] = cell_of(nodes[i].z);
    grid[cell_key(cx, cy)].push_back(static_cast<int>(i));
  }
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const MeshNode& ni = nodes[i];
    if (ni.on_lattice()) continue;
    auto [cx, cy] = cell_of(ni.z);
    for (long dx = -1; dx <= 1; ++dx) {
      for (long dy = -1; dy <= 1; ++dy) {
        auto it = grid.find(cell_key(cx + dx, cy + dy));
        if (it == grid.end()) continue;
        for (int j : it->second) {
          const MeshNode& nj = nodes[j];
          if (static_cast<std::size_t>(j) == i) continue;
          if (!nj.on_lattice() && static_cast<std::size_t>(j) < i) continue;
          if ((ni.flags & kBoundaryAdjacent) && (nj.flags & kBoundaryAdjacent)) continue;
          if ((ni.flags & kBoundaryAdjacent) && nj.on_lattice()) continue;
          double d = modulus(ni.z - nj.z);
          if (d <= 0 || d > kConnectFactor * std::min(ni.spacing, nj.spacing)) continue;
          if (segment_ok(ni.z, nj.z)) edges.push_back({static_cast<int>(i), j, 0.0});
        }
      }
    }
  }

  std::vector<double> node_density(nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    double v = density(nodes[i].z);
    if (!std::isfinite(v) || !(v > 0)) {
      char buf[128];
      std::snprintf(buf, sizeof buf, "density not positive and finite at node (%.6g, %.6g)",
                    nodes[i].z.real(), nodes[i].z.imag());
      throw Error(ErrorCode::NonFinite, buf);
    }
    node_density[i] = v;
  }

  unsigned jobs = opts.jobs > 0 ? static_cast<unsigned>(opts.jobs)
                                : std::max(1u, std::thread::hardware_concurrency());
  jobs = std::min<unsigned>(jobs, std::max<std::size_t>(1, edges.size() / 4096));
  auto weigh = [&](std::size_t begin, std::size_t end) {
    for (std::size_t e = begin; e < end; ++e) {
      const int a = edges[e].a, b = edges[e].b;
      double lo = std::min(node_density[a], node_density[b]);
      double hi = std::max(node_density[a], node_density[b]);
      double w = hi > kSteepRatio * lo ? composite_gauss4(density, nodes[a].z, nodes[b].z)
                                       : gauss4_segment(density, nodes[a].z, nodes[b].z);
      if (!std::isfinite(w) || !(w > 0)) {
        throw Error(ErrorCode::NonFinite, "density not positive and finite on a mesh edge");
      }
      edges[e].weight = w;
    }
  };
  if (jobs <= 1) {
    weigh(0, edges.size());
  } else {
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(jobs);
    std::size_t chunk = (edges.size() + jobs - 1) / jobs;
    for (unsigned t = 0; t < jobs; ++t) {
      pool.emplace_back([&, t] {
        try {
          weigh(std::min(edges.size(), t * chunk), std::min(edges.size(), (t + 1) * chunk));
        } catch (...) {
          errors[t] = std::current_exception();
        }
      });
    }
    for (auto& th : pool) th.join();
    for (auto& err : errors) {
      if (err) std::rethrow_exception(err);
    }
  }

  return MeshedDomain(domain, resolution, std::move(nodes), std::move(edges), std::move(lat));
}

}  // namespace weierlab
