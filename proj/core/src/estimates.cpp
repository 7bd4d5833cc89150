#include "weierlab/estimates.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>

#include "weierlab/errors.hpp"

namespace weierlab {
namespace {

constexpr std::size_t kMaxNearPoints = 32;

std::string point_text(Complex z) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "(%.6g, %.6g)", z.real(), z.imag());
  return buf;
}

ExtComplex eval_at(const MeroExpr& e, Complex z) {
  if (auto v = e.try_eval(z)) return *v;
  return eval_ext(e, z);
}

bool sampled_for_property(const MeshNode& n) {
  return n.on_lattice() || (n.flags & kBoundaryAdjacent);
}

// Maximises a function of one complex variable with a Nelder-Mead simplex.
Complex nelder_mead_max(const std::function<double(Complex)>& fn, Complex start, double size) {
  std::array<Complex, 3> p{start, start + Complex(size, 0), start + Complex(0, size)};
  std::array<double, 3> v;
  for (int k = 0; k < 3; ++k) v[k] = -fn(p[k]);
  for (int it = 0; it < 400; ++it) {
    std::array<int, 3> idx{0, 1, 2};
    std::sort(idx.begin(), idx.end(), [&](int a, int b) { return v[a] < v[b]; });
    auto [best, mid, worst] = idx;
    if (std::abs(p[worst] - p[best]) < 1e-14 * (1 + std::abs(p[best]))) break;
    Complex centroid = 0.5 * (p[best] + p[mid]);
    Complex refl = centroid + (centroid - p[worst]);
    double fr = -fn(refl);
    if (fr < v[best]) {
      Complex exp = centroid + 2.0 * (centroid - p[worst]);
      double fe = -fn(exp);
      if (fe < fr) {
        p[worst] = exp;
        v[worst] = fe;
      } else {
        p[worst] = refl;
        v[worst] = fr;
      }
    } else if (fr < v[mid]) {
      p[worst] = refl;
      v[worst] = fr;
    } else {
      Complex con = centroid + 0.5 * (p[worst] - centroid);
      double fc = -fn(con);
      if (fc < v[worst]) {
        p[worst] = con;
        v[worst] = fc;
      } else {
        for (int k : {mid, worst}) {
          p[k] = p[best] + 0.5 * (p[k] - p[best]);
          v[k] = -fn(p[k]);
        }
      }
    }
  }
  int best = static_cast<int>(std::min_element(v.begin(), v.end()) - v.begin());
  return p[best];
}

EstimateReport estimate_from_field(const MTriple& t, const PropertySpec& prop,
                                   const MeshedDomain& mesh, const std::vector<double>& dist,
                                   const PropertyReport& prop_report, const EstimateOptions& opts,
                                   int stride) {
  EstimateReport rep;
  rep.tolerance = opts.tolerance;
  rep.resolution = mesh.resolution();
  rep.property = prop_report;
  for (std::size_t i = 0; i < mesh.size(); ++i) {
    const MeshNode& n = mesh.nodes()[i];
    if (n.flags != kInterior) continue;
    if (stride > 1 && (!n.on_lattice() || n.li % stride != 0 || n.lj % stride != 0)) continue;
    ++rep.samples;
    double k = t.curvature(n.z);
    double v = std::abs(k) * dist[i] * dist[i];
    if (v > rep.sup || rep.argmax_node < 0) {
      rep.sup = v;
      rep.argmax = n.z;
      rep.argmax_node = static_cast<int>(i);
      rep.distance_at_argmax = dist[i];
      rep.curvature_at_argmax = k;
    }
  }
  if (rep.samples < 16) {
    throw Error(ErrorCode::MeshTooCoarse, "too few interior mesh nodes for the estimate");
  }
  rep.C = curvature_constant(prop, t.m());
  if (rep.C) {
    rep.C2 = *rep.C * *rep.C;
    rep.verdict = rep.sup <= *rep.C2 * (1.0 + opts.tolerance) ? "pass" : "fail";
  } else {
    rep.verdict = "empirical_only";
  }
  return rep;
}

}  // namespace

void validate_property(const PropertySpec& prop) {
  if (const auto* b = std::get_if<Bounded>(&prop)) {
    if (!(b->L > 0) || !std::isfinite(b->L)) {
      throw Error(ErrorCode::InvalidArgument, "bound L must be positive and finite");
    }
    return;
  }
  const auto& values = std::get<Omits>(prop).values;
  if (values.empty()) throw Error(ErrorCode::InvalidArgument, "omitted set must be nonempty");
  for (std::size_t i = 0; i < values.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      if (!(chordal(values[i], values[j]) > 0)) {
        throw Error(ErrorCode::InvalidArgument, "omitted values must be pairwise distinct");
      }
    }
  }
}

PropertyReport property_check(const MeroExpr& g, const PropertySpec& prop,
                              const MeshedDomain& mesh, double delta) {
  if (!(delta > 0)) throw Error(ErrorCode::InvalidArgument, "delta must be positive");
  validate_property(prop);
  PropertyReport rep;
  rep.delta = delta;
  if (const auto* b = std::get_if<Bounded>(&prop)) {
    rep.kind = "bounded";
    rep.extreme = -1.0;
    for (const auto& n : mesh.nodes()) {
      if (!sampled_for_property(n)) continue;
      ++rep.samples;
      ExtComplex v = eval_at(g, n.z);
      double mag = v.is_infinite() ? std::numeric_limits<double>::infinity() : std::abs(v.value());
      if (mag > rep.extreme) {
        rep.extreme = mag;
        rep.at = n.z;
      }
      if (mag > b->L - 2 * delta && rep.near_attainment.size() < kMaxNearPoints) {
        rep.near_attainment.push_back(n.z);
      }
    }
    rep.pass = rep.extreme < b->L;
    return rep;
  }
  const auto& values = std::get<Omits>(prop).values;
  rep.kind = "omits";
  rep.extreme = std::numeric_limits<double>::infinity();
  for (const auto& n : mesh.nodes()) {
    if (!sampled_for_property(n)) continue;
    ++rep.samples;
    ExtComplex v = eval_at(g, n.z);
    bool near = false;
    for (std::size_t k = 0; k < values.size(); ++k) {
      double c = chordal(v, values[k]);
      if (c < rep.extreme) {
        rep.extreme = c;
        rep.at = n.z;
        rep.closest_value = static_cast<int>(k);
      }
      near = near || c < 2 * delta;
    }
    if (near && rep.near_attainment.size() < kMaxNearPoints) rep.near_attainment.push_back(n.z);
  }
  rep.pass = rep.extreme > delta;
  return rep;
}

std::optional<double> curvature_constant(const PropertySpec& prop, int m) {
  if (m < 1) throw Error(ErrorCode::InvalidArgument, "m must be a positive integer");
  validate_property(prop);
  if (const auto* b = std::get_if<Bounded>(&prop)) {
    return std::sqrt(2.0 * m) * b->L * std::pow(1.0 + b->L * b->L, 0.5 * m);
  }
  return std::nullopt;
}

EstimateReport verify_estimate(const MTriple& t, const PropertySpec& prop, const MeshedDomain& mesh,
                               const EstimateOptions& opts) {
  PropertyReport pr = property_check(t.g(), prop, mesh, opts.delta);
  if (!pr.pass) {
    throw Error(ErrorCode::PropertyViolated,
                "g violates the " + pr.kind + " property near " + point_text(pr.at));
  }
  auto dist = boundary_distance_field(mesh);
  return estimate_from_field(t, prop, mesh, dist, pr, opts, std::max(1, opts.sample_stride));
}

bool RefinementStudy::nonincreasing(double noise) const {
  for (std::size_t k = 1; k < sup_common.size(); ++k) {
    if (sup_common[k] > sup_common[k - 1] * (1.0 + noise)) return false;
  }
  return true;
}

RefinementStudy estimate_refinement(const MTriple& t, const PropertySpec& prop,
                                    const std::vector<int>& resolutions,
                                    const MeshOptions& mesh_opts, const EstimateOptions& opts) {
  if (resolutions.empty()) throw Error(ErrorCode::InvalidArgument, "no resolutions given");
  RefinementStudy study;
  study.resolutions = resolutions;
  const int base = resolutions.front();
  // Ghost edges must nest across the study for the common-node sup to be monotone.
  MeshOptions nested = mesh_opts;
  nested.ghost_reach_resolution = base;
  for (int res : resolutions) {
    if (res % base != 0) {
      throw Error(ErrorCode::InvalidArgument, "resolutions must be multiples of the first");
    }
    auto mesh = build_mesh(t.domain(), [&](Complex z) { return t.metric_density(z); }, res,
                           nested);
    PropertyReport pr = property_check(t.g(), prop, mesh, opts.delta);
    if (!pr.pass) {
      throw Error(ErrorCode::PropertyViolated,
                  "g violates the " + pr.kind + " property near " + point_text(pr.at));
    }
    auto dist = boundary_distance_field(mesh);
    auto all = estimate_from_field(t, prop, mesh, dist, pr, opts, 1);
    auto common = estimate_from_field(t, prop, mesh, dist, pr, opts, res / base);
    study.sup_all.push_back(all.sup);
    study.sup_common.push_back(common.sup);
    study.C2 = all.C2;
    study.reports.push_back(std::move(all));
  }
  return study;
}

MTriple optimal_example(int m, const std::vector<Complex>& alphas, double outer_radius) {
  if (m < 1) throw Error(ErrorCode::InvalidArgument, "m must be a positive integer");
  if (alphas.size() != static_cast<std::size_t>(m) + 1) {
    throw Error(ErrorCode::InvalidArgument, "the optimal example needs m + 1 values");
  }
  double reach = 0.0;
  for (std::size_t i = 0; i < alphas.size(); ++i) {
    reach = std::max(reach, std::abs(alphas[i]));
    for (std::size_t j = 0; j < i; ++j) {
      if (alphas[i] == alphas[j]) throw Error(ErrorCode::InvalidArgument, "duplicate alphas");
    }
  }
  double R = outer_radius > 0 ? outer_radius : std::max(10.0, 4.0 * reach + 2.0);
  if (!(R > reach)) throw Error(ErrorCode::InvalidArgument, "outer radius must enclose the alphas");
  MeroExpr den = MeroExpr::constant(1.0);
  for (Complex a : alphas) den = den * (MeroExpr::variable() - MeroExpr::constant(a));
  return make_triple(DomainSpec(TruncatedPlane{R}, alphas), MeroExpr::constant(1.0) / den,
                     MeroExpr::variable(), m);
}

FujimotoReport fujimoto_ratio(const MeroExpr& f, const std::vector<ExtComplex>& X, double eta,
                              double R, const MeshedDomain& mesh) {
  FujimotoReport rep;
  rep.q = static_cast<int>(X.size());
  rep.eta = eta;
  rep.R = R;
  bool has_inf = std::any_of(X.begin(), X.end(), [](const ExtComplex& v) { return v.is_infinite(); });
  if (rep.q < 3 || !has_inf) {
    throw Error(ErrorCode::Precondition, "X needs at least three values including infinity");
  }
  validate_property(Omits{X});
  double limit = (rep.q - 2.0) / rep.q;
  if (!(eta > 0) || !(eta < limit)) {
    char buf[128];
    std::snprintf(buf, sizeof buf, "eta must lie in (0, %.6g) for q = %d", limit, rep.q);
    throw Error(ErrorCode::Precondition, buf);
  }
  if (!(R > 0)) throw Error(ErrorCode::InvalidArgument, "R must be positive");
  SphericalGradient grad(f);
  const double scale = 2.0 * std::sqrt(2.0);
  for (const auto& n : mesh.nodes()) {
    double r2 = std::norm(n.z);
    if (!(r2 < R * R)) continue;
    ++rep.samples;
    ExtComplex v = eval_at(f, n.z);
    double prod = 1.0;
    for (const auto& a : X) {
      double c = chordal(v, a);
      if (!(c > 0)) {
        throw Error(ErrorCode::PropertyViolated, "f attains an excluded value at " + point_text(n.z));
      }
      prod *= std::pow(c, 1.0 - eta);
    }
    // |f'| / (1 + |f|^2) equals the spherical gradient over 2 sqrt 2.
    double ratio = grad(n.z) / scale / prod * (R * R - r2) / R;
    if (ratio > rep.sup) {
      rep.sup = ratio;
      rep.argmax = n.z;
    }
  }
  return rep;
}

NormalityReport marty_sup(const Family& family, const std::vector<int>& indices,
                          const Disk& compact, int grid, const std::string& label) {
  if (grid < 2) throw Error(ErrorCode::InvalidArgument, "grid must be at least 2");
  if (indices.empty()) throw Error(ErrorCode::InvalidArgument, "no family indices");
  NormalityReport rep;
  rep.label = label;
  rep.compact = compact;
  rep.indices = indices;
  std::vector<Complex> pts;
  const double step = 2.0 * compact.radius / grid;
  for (int i = -grid / 2; i <= grid / 2; ++i) {
    for (int j = -grid / 2; j <= grid / 2; ++j) {
      Complex z = compact.center + step * Complex(i, j);
      if (std::abs(z - compact.center) <= compact.radius) pts.push_back(z);
    }
  }
  std::vector<double> lx, ly;
  for (int n : indices) {
    SphericalGradient grad(family(n));
    double best = 0.0;
    Complex at = compact.center;
    for (Complex z : pts) {
      double v = grad(z);
      if (!std::isfinite(v)) throw Error(ErrorCode::NonFinite, "spherical gradient not finite");
      if (v > best) {
        best = v;
        at = z;
      }
    }
    rep.sups.push_back(best);
    rep.argmax.push_back(at);
    if (best > 0 && n > 0) {
      lx.push_back(std::log(static_cast<double>(n)));
      ly.push_back(std::log(best));
    }
  }
  if (lx.size() >= 2) {
    double mx = 0, my = 0;
    for (std::size_t k = 0; k < lx.size(); ++k) {
      mx += lx[k];
      my += ly[k];
    }
    mx /= lx.size();
    my /= ly.size();
    double sxy = 0, sxx = 0;
    for (std::size_t k = 0; k < lx.size(); ++k) {
      sxy += (lx[k] - mx) * (ly[k] - my);
      sxx += (lx[k] - mx) * (lx[k] - mx);
    }
    rep.slope = sxx > 0 ? sxy / sxx : 0.0;
  }
  rep.verdict = rep.slope > kMartyGrowthSlope ? "unbounded-growth" : "bounded";
  return rep;
}

ZalcmanResult zalcman_rescale(const MeroExpr& h, int grid) {
  if (h.is_constant()) throw Error(ErrorCode::Precondition, "h must be nonconstant");
  if (grid < 8) throw Error(ErrorCode::InvalidArgument, "search grid must be at least 8");
  ZalcmanResult out;
  out.grid = grid;
  SphericalGradient grad(h);
  auto chordal_grad = [&](Complex z) {
    double r2 = std::norm(z);
    if (!(r2 < 1.0)) return -1.0;
    return 0.5 * (1.0 - r2) * grad(z);
  };
  const double step = 2.0 / grid;
  double best = -1.0;
  Complex at;
  for (int i = -grid / 2; i <= grid / 2; ++i) {
    for (int j = -grid / 2; j <= grid / 2; ++j) {
      Complex z = step * Complex(i, j);
      if (!(std::norm(z) < 1.0)) continue;
      double v = chordal_grad(z);
      if (v > best) {
        best = v;
        at = z;
      }
    }
  }
  if (!(best > 0)) throw Error(ErrorCode::Precondition, "h has vanishing gradient on the grid");
  if (std::abs(at) > 1.0 - 2.0 * step) {
    throw Error(ErrorCode::Precondition, "the chordal gradient peaks on the rim of the disk");
  }
  Complex refined = nelder_mead_max(chordal_grad, at, 0.5 * step);
  if (chordal_grad(refined) >= best) at = refined;
  out.z0 = at;

  MeroExpr recentred = h;
  if (std::abs(at) > 0.0) {
    recentred = compose(h, MobiusMap::disk_swap(at).as_expr());
    out.recentred_applied = true;
  }
  SphericalGradient grad_t(recentred);
  out.R = grad_t(0.0);
  out.chordal_max = 0.5 * out.R;
  out.recentred = recentred;
  out.rescaled = compose(recentred, MeroExpr::constant(1.0 / out.R) * MeroExpr::variable());

  SphericalGradient grad_f(out.rescaled);
  out.gradient_at_zero = grad_f(0.0);
  out.envelope_excess = -std::numeric_limits<double>::infinity();
  for (int i = -grid / 2; i <= grid / 2; ++i) {
    for (int j = -grid / 2; j <= grid / 2; ++j) {
      Complex w = step * Complex(i, j);
      double r2 = std::norm(w);
      if (!(r2 < 1.0)) continue;
      double excess = grad_f(out.R * w) - 1.0 / (1.0 - r2);
      out.envelope_excess = std::max(out.envelope_excess, excess);
    }
  }
  return out;
}

}  // namespace weierlab
