#include "weierlab/surfaces.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numbers>
#include <sstream>

#include "weierlab/errors.hpp"
#include "weierlab/mtriple.hpp"
#include "weierlab/quadrature.hpp"
#include "weierlab/rational.hpp"
#include "weierlab/sphere.hpp"
#include "surface_detail.hpp"

namespace weierlab {
namespace detail {

std::string point_str(Complex z) {
  std::ostringstream os;
  os.precision(6);
  os << '(' << z.real() << ", " << z.imag() << ')';
  return os.str();
}

ExtComplex Evaluator::ext(Complex z) const {
  if (auto v = compiled_(z)) return *v;
  return eval_ext(expr_, z);
}

Complex Evaluator::finite(Complex z) const {
  if (auto v = compiled_(z)) return *v;
  ExtComplex v = eval_ext(expr_, z);
  if (v.is_infinite()) throw Error(ErrorCode::PoleOnPath, "integrand pole at " + point_str(z));
  return v.value();
}

std::vector<Evaluator> integrand(const WeierstrassData& d) {
  std::vector<Evaluator> out;
  const Complex i(0.0, 1.0);
  auto one = MeroExpr::constant(1.0);
  if (auto* m = std::get_if<MinimalData>(&d.data)) {
    MeroExpr g2 = m->g.pow(2);
    out.emplace_back((one - g2) * m->f);
    out.emplace_back(MeroExpr::constant(i) * (one + g2) * m->f);
    out.emplace_back(MeroExpr::constant(2.0) * m->g * m->f);
  } else if (auto* x = std::get_if<MaxfaceData>(&d.data)) {
    MeroExpr g2 = x->g.pow(2);
    out.emplace_back(MeroExpr::constant(-2.0) * x->g * x->f);
    out.emplace_back((one + g2) * x->f);
    out.emplace_back(MeroExpr::constant(i) * (one - g2) * x->f);
  } else if (auto* a = std::get_if<ImproperAffineData>(&d.data)) {
    out.emplace_back(a->F * derivative(a->G));
  } else {
    throw Error(ErrorCode::Precondition, "flat fronts have no vector integrand");
  }
  return out;
}

Eigen::Vector3cd eval_form(const std::vector<Evaluator>& form, Complex z) {
  Eigen::Vector3cd v = Eigen::Vector3cd::Zero();
  for (std::size_t k = 0; k < form.size(); ++k) v[static_cast<Eigen::Index>(k)] = form[k].finite(z);
  return v;
}

Eigen::Vector3cd segment_integral(const std::vector<Evaluator>& form, Complex a, Complex b,
                                  double rel_tol) {
  if (a == b) return Eigen::Vector3cd::Zero();
  Complex dz = b - a;
  try {
    return adaptive_simpson(
        [&](double t) -> Eigen::Vector3cd { return eval_form(form, a + t * dz) * dz; }, 0.0, 1.0,
        rel_tol);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::NonFinite) {
      throw Error(ErrorCode::PoleOnPath,
                  "integrand not finite on segment " + point_str(a) + " -> " + point_str(b));
    }
    throw;
  }
}

Eigen::Matrix2cd FlatForms::coefficient(Complex z) const {
  Eigen::Matrix2cd A;
  A << Complex(0.0), theta.finite(z), omega.finite(z), Complex(0.0);
  return A;
}

Eigen::Matrix2cd transport(const FlatForms& forms, Complex a, Complex b, double step) {
  Eigen::Matrix2cd L = Eigen::Matrix2cd::Identity();
  double len = std::abs(b - a);
  if (len == 0.0) return L;
  int n = std::max(1, static_cast<int>(std::ceil(len / step)));
  Complex dz = (b - a) / static_cast<double>(n);
  for (int k = 0; k < n; ++k) {
    Complex z0 = a + static_cast<double>(k) * dz;
    Eigen::Matrix2cd A0 = forms.coefficient(z0) * dz;
    Eigen::Matrix2cd Am = forms.coefficient(z0 + 0.5 * dz) * dz;
    Eigen::Matrix2cd A1 = forms.coefficient(z0 + dz) * dz;
    Eigen::Matrix2cd k1 = L * A0;
    Eigen::Matrix2cd k2 = (L + 0.5 * k1) * Am;
    Eigen::Matrix2cd k3 = (L + 0.5 * k2) * Am;
    Eigen::Matrix2cd k4 = (L + k3) * A1;
    L += (k1 + 2.0 * k2 + 2.0 * k3 + k4) / 6.0;
  }
  if (!L.allFinite()) {
    throw Error(ErrorCode::PoleOnPath,
                "lift not finite on segment " + point_str(a) + " -> " + point_str(b));
  }
  return L;
}

Eigen::Vector3d ball_point(const Eigen::Matrix2cd& psi) {
  double a = psi(0, 0).real(), c = psi(1, 1).real();
  Complex b = psi(0, 1);
  double x0 = 0.5 * (a + c);
  return Eigen::Vector3d(b.real(), b.imag(), 0.5 * (a - c)) / (1.0 + x0);
}

void require_holomorphic(const DomainSpec& domain, const MeroExpr& e, const char* name) {
  if (!e.is_rational()) return;
  for (Complex p : critical_points(e)) {
    if (!domain.contains(p, 1e-9)) continue;
    if (local_order(e, p) < 0) {
      throw Error(ErrorCode::NonHolomorphic, std::string(name) + " has a pole at " + point_str(p));
    }
  }
}

void check_segment_inside(const DomainSpec& domain, Complex a, Complex b) {
  for (int k = 0; k <= 16; ++k) {
    Complex z = a + (b - a) * (k / 16.0);
    if (!domain.contains(z)) {
      throw Error(ErrorCode::Precondition,
                  "straight path from the base point leaves the domain at " + point_str(z));
    }
  }
}

}  // namespace detail

using namespace detail;

namespace {

const double kTiny = 1e-300;

struct Tree {
  int root = -1;
  std::vector<int> parent;
  std::vector<int> order;
};

Tree spanning_tree(const MeshedDomain& mesh, Complex base) {
  Tree t;
  t.root = mesh.nearest_node(base);
  t.parent.assign(mesh.size(), -2);
  t.parent[static_cast<std::size_t>(t.root)] = -1;
  std::deque<int> queue{t.root};
  while (!queue.empty()) {
    int u = queue.front();
    queue.pop_front();
    t.order.push_back(u);
    for (const auto& nb : mesh.neighbors(u)) {
      if (t.parent[static_cast<std::size_t>(nb.node)] != -2) continue;
      t.parent[static_cast<std::size_t>(nb.node)] = u;
      queue.push_back(nb.node);
    }
  }
  if (t.order.size() != mesh.size()) {
    throw Error(ErrorCode::Disconnected, "mesh graph is disconnected");
  }
  return t;
}

bool adjacent(const MeshedDomain& mesh, int a, int b) {
  for (const auto& nb : mesh.neighbors(a)) {
    if (nb.node == b) return true;
  }
  return false;
}

/// Lattice (1,0) and (0,1) mesh edges that are not tree edges.
template <class F>
void for_each_seam_edge(const MeshedDomain& mesh, const Tree& t, F&& f) {
  const auto& lat = mesh.lattice();
  for (std::size_t k = 0; k < mesh.size(); ++k) {
    const auto& n = mesh.nodes()[k];
    if (!n.on_lattice()) continue;
    int a = static_cast<int>(k);
    for (int dir = 0; dir < 2; ++dir) {
      int b = lat.node(n.li + (dir == 0), n.lj + (dir == 1));
      if (b < 0) continue;
      if (t.parent[static_cast<std::size_t>(b)] == a || t.parent[k] == b) continue;
      if (!adjacent(mesh, a, b)) continue;
      f(a, b);
    }
  }
}

void base_setup(SurfaceMesh& s, const MeshedDomain& mesh, const char* cls) {
  s.surface_class = cls;
  const std::size_t n = mesh.size();
  s.params.resize(n);
  s.li.resize(n);
  s.lj.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    s.params[k] = mesh.nodes()[k].z;
    s.li[k] = mesh.nodes()[k].li;
    s.lj[k] = mesh.nodes()[k].lj;
  }
  s.positions.assign(n, Eigen::Vector3d::Zero());
  s.density.assign(n, 0.0);
  s.curvature.assign(n, 0.0);
  s.singular.assign(n, 0);
  s.gauss.assign(n, ExtComplex(0.0));
  s.aux_metric.assign(n, 0.0);

  const auto& lat = mesh.lattice();
  const auto& dom = mesh.domain();
  for (int i = -lat.half; i < lat.half; ++i) {
    for (int j = -lat.half; j < lat.half; ++j) {
      int a = lat.node(i, j), b = lat.node(i + 1, j), c = lat.node(i + 1, j + 1),
          e = lat.node(i, j + 1);
      if (a < 0 || b < 0 || c < 0 || e < 0) continue;
      Complex lo = lat.position(i, j), hi = lat.position(i + 1, j + 1);
      if (!dom.contains(0.5 * (lo + hi))) continue;
      bool holds_puncture = false;
      for (Complex p : dom.punctures()) {
        holds_puncture = holds_puncture || (p.real() >= lo.real() && p.real() <= hi.real() &&
                                            p.imag() >= lo.imag() && p.imag() <= hi.imag());
      }
      if (holds_puncture) continue;
      s.faces.push_back({a, b, c});
      s.faces.push_back({a, c, e});
    }
  }
}

/// Spanning-tree integration of a vector 1-form; returns the integral at every node.
std::vector<Eigen::Vector3cd> integrate_tree(const WeierstrassData& d, const MeshedDomain& mesh,
                                             const std::vector<Evaluator>& form, double rel_tol,
                                             double& seam) {
  Tree t = spanning_tree(mesh, d.base);
  std::vector<Eigen::Vector3cd> I(mesh.size());
  Complex root_z = mesh.nodes()[static_cast<std::size_t>(t.root)].z;
  check_segment_inside(d.domain, d.base, root_z);
  I[static_cast<std::size_t>(t.root)] = segment_integral(form, d.base, root_z, rel_tol);
  for (std::size_t k = 1; k < t.order.size(); ++k) {
    auto u = static_cast<std::size_t>(t.order[k]);
    auto p = static_cast<std::size_t>(t.parent[u]);
    I[u] = I[p] + segment_integral(form, mesh.nodes()[p].z, mesh.nodes()[u].z, rel_tol);
  }
  seam = 0.0;
  for_each_seam_edge(mesh, t, [&](int a, int b) {
    auto ua = static_cast<std::size_t>(a), ub = static_cast<std::size_t>(b);
    Eigen::Vector3cd step = segment_integral(form, mesh.nodes()[ua].z, mesh.nodes()[ub].z, rel_tol);
    seam = std::max(seam, (I[ub] - I[ua] - step).real().norm());
  });
  return I;
}

template <class Alt>
const Alt& expect_class(const WeierstrassData& d, const char* name) {
  const Alt* p = std::get_if<Alt>(&d.data);
  if (!p) {
    throw Error(ErrorCode::InvalidArgument,
                std::string("expected ") + name + " data, got " + class_name(d));
  }
  return *p;
}

void fill_triple_diagnostics(SurfaceMesh& s, const MTriple& t) {
  for (std::size_t k = 0; k < s.size(); ++k) {
    Complex z = s.params[k];
    s.density[k] = t.metric_density(z);
    s.curvature[k] = t.curvature(z);
    s.gauss[k] = t.gauss_map(z);
  }
}

}  // namespace

const char* class_name(const WeierstrassData& d) {
  switch (d.data.index()) {
    case 0: return "minimal";
    case 1: return "maxface";
    case 2: return "improper_affine";
    default: return "flat_front";
  }
}

void validate(const WeierstrassData& d) {
  if (!d.domain.contains(d.base)) {
    throw Error(ErrorCode::InvalidArgument, "base point " + point_str(d.base) + " outside the domain");
  }
  if (auto* m = std::get_if<MinimalData>(&d.data)) {
    make_triple(d.domain, m->f, m->g, 2);
  } else if (auto* x = std::get_if<MaxfaceData>(&d.data)) {
    make_triple(d.domain, x->f, x->g, 2);
    if (x->g.is_constant()) {
      auto v = x->g.try_eval(0.0);
      if (v && std::abs(std::abs(*v) - 1.0) < 1e-12) {
        throw Error(ErrorCode::Degenerate, "maxface Gauss map has |g| identically 1");
      }
    }
  } else if (auto* a = std::get_if<ImproperAffineData>(&d.data)) {
    require_holomorphic(d.domain, a->F, "F");
    require_holomorphic(d.domain, a->G, "G");
  } else {
    const auto& ff = std::get<FlatFrontData>(d.data);
    require_holomorphic(d.domain, ff.omega, "omega");
    require_holomorphic(d.domain, ff.theta, "theta");
  }
}

SurfaceMesh synth_minimal(const WeierstrassData& d, const MeshedDomain& mesh,
                          const SynthOptions& opts) {
  const auto& m = expect_class<MinimalData>(d, "minimal");
  validate(d);
  MTriple t = make_triple(d.domain, m.f, m.g, 2);
  SurfaceMesh s;
  base_setup(s, mesh, "minimal");
  auto I = integrate_tree(d, mesh, integrand(d), opts.rel_tol, s.seam_mismatch);
  for (std::size_t k = 0; k < s.size(); ++k) s.positions[k] = I[k].real();
  fill_triple_diagnostics(s, t);
  return s;
}

SurfaceMesh synth_maxface(const WeierstrassData& d, const MeshedDomain& mesh,
                          const SynthOptions& opts) {
  const auto& x = expect_class<MaxfaceData>(d, "maxface");
  validate(d);
  MTriple t = make_triple(d.domain, x.f, x.g, 2);
  SurfaceMesh s;
  base_setup(s, mesh, "maxface");
  s.lorentzian = true;
  auto I = integrate_tree(d, mesh, integrand(d), opts.rel_tol, s.seam_mismatch);
  for (std::size_t k = 0; k < s.size(); ++k) s.positions[k] = I[k].real();
  fill_triple_diagnostics(s, t);
  for (std::size_t k = 0; k < s.size(); ++k) {
    const ExtComplex& g = s.gauss[k];
    double ratio = -1.0;  // (1 - |g|^2) / (1 + |g|^2) at infinity
    if (g.is_finite()) {
      double g2 = std::norm(g.value());
      ratio = (1.0 - g2) / (1.0 + g2);
      s.singular[k] = std::abs(std::sqrt(g2) - 1.0) < kSingularBand;
    }
    s.aux_metric[k] = s.density[k] * s.density[k] * ratio * ratio;
  }
  return s;
}

SurfaceMesh synth_improper_affine(const WeierstrassData& d, const MeshedDomain& mesh,
                                  const SynthOptions& opts) {
  const auto& a = expect_class<ImproperAffineData>(d, "improper affine");
  validate(d);
  SurfaceMesh s;
  base_setup(s, mesh, "improper_affine");
  auto I = integrate_tree(d, mesh, integrand(d), opts.rel_tol, s.seam_mismatch);
  Evaluator F(a.F), G(a.G), dF(derivative(a.F)), dG(derivative(a.G)),
      ddF(derivative(derivative(a.F))), ddG(derivative(derivative(a.G)));
  for (std::size_t k = 0; k < s.size(); ++k) {
    Complex z = s.params[k];
    Complex f = F.finite(z), g = G.finite(z), fp = dF.finite(z), gp = dG.finite(z);
    double P = std::norm(fp) + std::norm(gp);
    if (!(P > kTiny)) {
      throw Error(ErrorCode::Degenerate, "dF and dG both vanish at " + point_str(z));
    }
    Complex x = g + std::conj(f);
    double height = 0.5 * (std::norm(g) - std::norm(f)) + (g * f - 2.0 * I[k][0]).real();
    s.positions[k] = Eigen::Vector3d(x.real(), x.imag(), height);
    Complex W = ddF.finite(z) * gp - fp * ddG.finite(z);
    s.density[k] = std::sqrt(2.0 * P);
    s.curvature[k] = -std::norm(W) / (P * P * P);
    s.gauss[k] = std::norm(gp) > 0.0 ? ExtComplex(fp / gp) : ExtComplex::infinity();
    s.aux_metric[k] = std::norm(gp) - std::norm(fp);
    double af = std::sqrt(std::norm(fp)), ag = std::sqrt(std::norm(gp));
    s.singular[k] = std::abs(af - ag) < kSingularBand * (af + ag);
  }
  return s;
}

SurfaceMesh synth_flatfront(const WeierstrassData& d, const MeshedDomain& mesh,
                            const SynthOptions& opts) {
  const auto& ff = expect_class<FlatFrontData>(d, "flat front");
  validate(d);
  if (!(opts.step > 0.0)) throw Error(ErrorCode::InvalidArgument, "step must be positive");
  if (opts.step > 1e-2 * 2.0 * d.domain.half_extent()) {
    throw Error(ErrorCode::InvalidArgument, "step exceeds 1e-2 of the domain diameter");
  }
  FlatForms forms{Evaluator(ff.omega), Evaluator(ff.theta)};
  Evaluator dw(derivative(ff.omega)), dt(derivative(ff.theta));

  SurfaceMesh s;
  base_setup(s, mesh, "flat_front");
  Tree t = spanning_tree(mesh, d.base);
  std::vector<Eigen::Matrix2cd> L(mesh.size());
  std::vector<double> arc(mesh.size(), 0.0);
  auto root = static_cast<std::size_t>(t.root);
  check_segment_inside(d.domain, d.base, mesh.nodes()[root].z);
  L[root] = transport(forms, d.base, mesh.nodes()[root].z, opts.step);
  arc[root] = std::abs(mesh.nodes()[root].z - d.base);
  for (std::size_t k = 1; k < t.order.size(); ++k) {
    auto u = static_cast<std::size_t>(t.order[k]);
    auto p = static_cast<std::size_t>(t.parent[u]);
    Complex a = mesh.nodes()[p].z, b = mesh.nodes()[u].z;
    L[u] = L[p] * transport(forms, a, b, opts.step);
    arc[u] = arc[p] + std::abs(b - a);
  }
  for_each_seam_edge(mesh, t, [&](int a, int b) {
    auto ua = static_cast<std::size_t>(a), ub = static_cast<std::size_t>(b);
    Eigen::Matrix2cd T = transport(forms, mesh.nodes()[ua].z, mesh.nodes()[ub].z, opts.step);
    s.seam_mismatch = std::max(s.seam_mismatch, (L[ub] - L[ua] * T).norm());
  });

  s.hermitian.resize(mesh.size());
  for (std::size_t k = 0; k < s.size(); ++k) {
    Complex z = s.params[k];
    double drift = std::abs(L[k].determinant() - 1.0);
    s.det_drift = std::max(s.det_drift, drift);
    if (arc[k] > 0.0) s.det_drift_rate = std::max(s.det_drift_rate, drift / arc[k]);
    Eigen::Matrix2cd psi = L[k] * L[k].adjoint();
    s.hermitian[k] = psi;
    s.positions[k] = ball_point(psi);

    Complex w = forms.omega.finite(z), th = forms.theta.finite(z);
    double P = std::norm(w) + std::norm(th);
    if (!(P > kTiny)) {
      throw Error(ErrorCode::Degenerate, "omega and theta both vanish at " + point_str(z));
    }
    Complex W = dt.finite(z) * w - th * dw.finite(z);
    s.density[k] = std::sqrt(P);
    s.curvature[k] = -2.0 * std::norm(W) / (P * P * P);
    s.gauss[k] = std::norm(w) > 0.0 ? ExtComplex(th / w) : ExtComplex::infinity();
    double aw = std::sqrt(std::norm(w)), at = std::sqrt(std::norm(th));
    s.singular[k] = std::abs(at - aw) < kSingularBand * (at + aw);
  }
  if (s.det_drift > opts.max_det_drift) {
    throw Error(ErrorCode::DetDrift, "det L drifted by " + std::to_string(s.det_drift) +
                                         "; reduce the step");
  }
  return s;
}

SurfaceMesh synthesize(const WeierstrassData& d, const MeshedDomain& mesh,
                       const SynthOptions& opts) {
  switch (d.data.index()) {
    case 0: return synth_minimal(d, mesh, opts);
    case 1: return synth_maxface(d, mesh, opts);
    case 2: return synth_improper_affine(d, mesh, opts);
    default: return synth_flatfront(d, mesh, opts);
  }
}

Eigen::Matrix2cd direct_lift(const WeierstrassData& d, Complex z, const SynthOptions& opts) {
  const auto& ff = expect_class<FlatFrontData>(d, "flat front");
  FlatForms forms{Evaluator(ff.omega), Evaluator(ff.theta)};
  check_segment_inside(d.domain, d.base, z);
  return transport(forms, d.base, z, opts.step);
}

Eigen::Vector3d direct_position(const WeierstrassData& d, Complex z, const SynthOptions& opts) {
  if (std::holds_alternative<FlatFrontData>(d.data)) {
    Eigen::Matrix2cd L = direct_lift(d, z, opts);
    return ball_point(L * L.adjoint());
  }
  check_segment_inside(d.domain, d.base, z);
  Eigen::Vector3cd I = segment_integral(integrand(d), d.base, z, opts.rel_tol);
  if (auto* a = std::get_if<ImproperAffineData>(&d.data)) {
    Complex f = Evaluator(a->F).finite(z), g = Evaluator(a->G).finite(z);
    Complex x = g + std::conj(f);
    return {x.real(), x.imag(), 0.5 * (std::norm(g) - std::norm(f)) + (g * f - 2.0 * I[0]).real()};
  }
  return I.real();
}

Polyline circle_polyline(Complex center, double radius, int n) {
  if (n < 3 || !(radius > 0.0)) throw Error(ErrorCode::InvalidArgument, "bad circle polyline");
  Polyline out;
  out.reserve(static_cast<std::size_t>(n) + 1);
  for (int k = 0; k < n; ++k) {
    out.push_back(center + std::polar(radius, 2.0 * std::numbers::pi * k / n));
  }
  out.push_back(out.front());
  return out;
}

PeriodResidual period_residuals(const WeierstrassData& d, const Polyline& cycle,
                                const SynthOptions& opts) {
  if (cycle.size() < 3) throw Error(ErrorCode::InvalidArgument, "cycle needs at least 3 points");
  Polyline c = cycle;
  if (c.back() != c.front()) c.push_back(c.front());
  PeriodResidual r;
  r.surface_class = class_name(d);
  r.cycle = c;
  if (auto* ff = std::get_if<FlatFrontData>(&d.data)) {
    FlatForms forms{Evaluator(ff->omega), Evaluator(ff->theta)};
    Eigen::Matrix2cd M = Eigen::Matrix2cd::Identity();
    for (std::size_t k = 0; k + 1 < c.size(); ++k) M = M * transport(forms, c[k], c[k + 1], opts.step);
    r.monodromy_deviation = M - Eigen::Matrix2cd::Identity();
    r.norm = r.monodromy_deviation.norm();
    return r;
  }
  auto form = integrand(d);
  Eigen::Vector3cd total = Eigen::Vector3cd::Zero();
  for (std::size_t k = 0; k + 1 < c.size(); ++k) {
    total += segment_integral(form, c[k], c[k + 1], opts.rel_tol);
  }
  std::size_t n = std::holds_alternative<ImproperAffineData>(d.data) ? 1 : 3;
  for (std::size_t k = 0; k < n; ++k) r.residual.push_back(total[static_cast<Eigen::Index>(k)].real());
  double sq = 0.0;
  for (double v : r.residual) sq += v * v;
  r.norm = std::sqrt(sq);
  return r;
}

}  // namespace weierlab
