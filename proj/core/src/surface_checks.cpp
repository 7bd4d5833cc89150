#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <memory>
#include <unordered_map>

#include <Eigen/Geometry>
#include <nlohmann/json.hpp>

#include "weierlab/errors.hpp"
#include "weierlab/sphere.hpp"
#include "weierlab/surfaces.hpp"
#include "surface_detail.hpp"

namespace weierlab {

using namespace detail;

namespace {

/// Lattice vertex with two neighbours on each side along both axes.
struct Stencil {
  std::size_t c;
  std::array<std::size_t, 4> u, v;  // offsets -2, -1, +1, +2
};

std::vector<Stencil> stencils(const MeshedDomain& mesh) {
  std::vector<Stencil> out;
  const auto& lat = mesh.lattice();
  const int off[4] = {-2, -1, 1, 2};
  for (std::size_t k = 0; k < mesh.size(); ++k) {
    const auto& n = mesh.nodes()[k];
    if (!n.on_lattice()) continue;
    Stencil st{k, {}, {}};
    bool full = true;
    for (int q = 0; q < 4 && full; ++q) {
      int a = lat.node(n.li + off[q], n.lj), b = lat.node(n.li, n.lj + off[q]);
      full = a >= 0 && b >= 0;
      st.u[static_cast<std::size_t>(q)] = static_cast<std::size_t>(a);
      st.v[static_cast<std::size_t>(q)] = static_cast<std::size_t>(b);
    }
    if (full) out.push_back(st);
  }
  return out;
}

/// Fourth-order central first derivative.
Eigen::Vector3d d1(const std::vector<Eigen::Vector3d>& P, const std::array<std::size_t, 4>& s,
                   double h) {
  return (P[s[0]] - 8.0 * P[s[1]] + 8.0 * P[s[2]] - P[s[3]]) / (12.0 * h);
}

void require_matching(const SurfaceMesh& s, const MeshedDomain& mesh) {
  if (s.size() != mesh.size()) {
    throw Error(ErrorCode::InvalidArgument, "surface mesh does not match the domain mesh");
  }
}

}  // namespace

ImmersionReport immersion_check(const SurfaceMesh& s, const WeierstrassData& d,
                                const MeshedDomain& mesh, double band) {
  const bool lorentz = std::holds_alternative<MaxfaceData>(d.data);
  if (!lorentz && !std::holds_alternative<MinimalData>(d.data)) {
    throw Error(ErrorCode::Precondition, "immersion check applies to minimal and maxface data");
  }
  require_matching(s, mesh);
  const double h = mesh.lattice().spacing;
  auto dot = [&](const Eigen::Vector3d& a, const Eigen::Vector3d& b) {
    return lorentz ? -a[0] * b[0] + a[1] * b[1] + a[2] * b[2] : a.dot(b);
  };
  ImmersionReport r;
  r.h = h;
  if (!lorentz) r.laplacian = 0.0;
  for (const auto& st : stencils(mesh)) {
    std::size_t k = st.c;
    double lam2 = lorentz ? s.aux_metric[k] : s.density[k] * s.density[k];
    if (lorentz) {
      const ExtComplex& g = s.gauss[k];
      if (g.is_infinite() || std::abs(std::abs(g.value()) - 1.0) < band) continue;
    }
    if (!(lam2 > 0.0)) continue;
    const auto& P = s.positions;
    Eigen::Vector3d pu = d1(P, st.u, h), pv = d1(P, st.v, h);
    double uu = dot(pu, pu), vv = dot(pv, pv), uv = dot(pu, pv);
    r.isothermal = std::max(r.isothermal, std::abs(uu - vv) / lam2);
    r.orthogonality = std::max(r.orthogonality, std::abs(uv) / lam2);
    r.metric = std::max(r.metric, std::abs(uu - lam2) / lam2);
    if (!lorentz) {
      Eigen::Vector3d lap =
          (P[st.u[1]] + P[st.u[2]] + P[st.v[1]] + P[st.v[2]] - 4.0 * P[k]) / (h * h);
      r.laplacian = std::max(*r.laplacian, lap.norm() / lam2);
    }
    ++r.samples;
  }
  if (r.samples == 0) {
    throw Error(ErrorCode::StencilOutOfDomain, "no vertex has a full finite-difference stencil");
  }
  return r;
}

double gauss_normal_check(const SurfaceMesh& s, const MeroExpr& g, const MeshedDomain& mesh) {
  if (s.surface_class != "minimal") {
    throw Error(ErrorCode::Precondition, "Gauss normal check applies to minimal surfaces");
  }
  require_matching(s, mesh);
  const double h = mesh.lattice().spacing;
  Evaluator gv(g);
  double worst = 0.0;
  std::size_t count = 0;
  for (const auto& st : stencils(mesh)) {
    Eigen::Vector3d pu = d1(s.positions, st.u, h), pv = d1(s.positions, st.v, h);
    Eigen::Vector3d n = pu.cross(pv);
    double scale = pu.norm() * pv.norm();
    if (!(n.norm() > 1e-12 * std::max(scale, 1e-300))) {
      throw Error(ErrorCode::Degenerate,
                  "degenerate normal at " + point_str(s.params[st.c]));
    }
    n.normalize();
    Eigen::Vector3d target = stereographic(gv.ext(s.params[st.c]));
    worst = std::max(worst, std::atan2(n.cross(target).norm(), n.dot(target)));
    ++count;
  }
  if (count == 0) {
    throw Error(ErrorCode::StencilOutOfDomain, "no vertex has a full finite-difference stencil");
  }
  return worst;
}

double nullity_residual(const WeierstrassData& d, const MeshedDomain& mesh) {
  const bool lorentz = std::holds_alternative<MaxfaceData>(d.data);
  if (!lorentz && !std::holds_alternative<MinimalData>(d.data)) {
    throw Error(ErrorCode::Precondition, "nullity applies to minimal and maxface integrands");
  }
  auto form = integrand(d);
  double worst = 0.0;
  for (const auto& node : mesh.nodes()) {
    Eigen::Vector3cd phi = eval_form(form, node.z);
    double size = phi.squaredNorm();
    if (!(size > 0.0)) continue;
    Complex q = (lorentz ? -phi[0] * phi[0] : phi[0] * phi[0]) + phi[1] * phi[1] + phi[2] * phi[2];
    worst = std::max(worst, std::abs(q) / size);
  }
  return worst;
}

std::vector<Polyline> singular_locus(const WeierstrassData& d, const MeshedDomain& mesh) {
  std::function<double(Complex)> indicator;
  if (auto* x = std::get_if<MaxfaceData>(&d.data)) {
    auto g = std::make_shared<Evaluator>(x->g);
    indicator = [g](Complex z) {
      ExtComplex v = g->ext(z);
      if (v.is_infinite()) {
        throw Error(ErrorCode::NonFinite, "indicator not finite at " + point_str(z));
      }
      return std::abs(v.value()) - 1.0;
    };
  } else if (auto* a = std::get_if<ImproperAffineData>(&d.data)) {
    auto dF = std::make_shared<Evaluator>(derivative(a->F));
    auto dG = std::make_shared<Evaluator>(derivative(a->G));
    indicator = [dF, dG](Complex z) { return std::abs(dF->finite(z)) - std::abs(dG->finite(z)); };
  } else if (auto* ff = std::get_if<FlatFrontData>(&d.data)) {
    auto w = std::make_shared<Evaluator>(ff->omega);
    auto t = std::make_shared<Evaluator>(ff->theta);
    indicator = [w, t](Complex z) { return std::abs(t->finite(z)) - std::abs(w->finite(z)); };
  } else {
    throw Error(ErrorCode::Precondition, "minimal surfaces have no singular locus");
  }

  const auto& lat = mesh.lattice();
  const int W = 2 * lat.half + 1;
  std::vector<double> val(static_cast<std::size_t>(W) * W, std::numeric_limits<double>::quiet_NaN());
  auto slot = [&](int i, int j) { return static_cast<std::size_t>((i + lat.half) * W + (j + lat.half)); };
  for (const auto& n : mesh.nodes()) {
    if (!n.on_lattice()) continue;
    double v = indicator(n.z);
    if (!std::isfinite(v)) throw Error(ErrorCode::NonFinite, "indicator not finite at " + point_str(n.z));
    val[slot(n.li, n.lj)] = v;
  }

  // Crossings are keyed by the lattice edge they lie on.
  auto key = [&](int i, int j, int dir) -> long long {
    return (static_cast<long long>(slot(i, j)) << 1) | dir;
  };
  std::unordered_map<long long, Complex> point;
  std::unordered_map<long long, std::vector<long long>> links;
  auto crossing = [&](int i, int j, int dir) {
    long long k = key(i, j, dir);
    if (!point.count(k)) {
      int i2 = i + (dir == 0), j2 = j + (dir == 1);
      double a = val[slot(i, j)], b = val[slot(i2, j2)];
      double t = a / (a - b);
      point[k] = lat.position(i, j) + t * (lat.position(i2, j2) - lat.position(i, j));
    }
    return k;
  };
  auto link = [&](long long p, long long q) {
    links[p].push_back(q);
    links[q].push_back(p);
  };

  for (int i = -lat.half; i < lat.half; ++i) {
    for (int j = -lat.half; j < lat.half; ++j) {
      if (lat.node(i, j) < 0 || lat.node(i + 1, j) < 0 || lat.node(i + 1, j + 1) < 0 ||
          lat.node(i, j + 1) < 0) {
        continue;
      }
      double v00 = val[slot(i, j)], v10 = val[slot(i + 1, j)], v11 = val[slot(i + 1, j + 1)],
             v01 = val[slot(i, j + 1)];
      bool s00 = v00 >= 0, s10 = v10 >= 0, s11 = v11 >= 0, s01 = v01 >= 0;
      std::vector<long long> cut;
      // Walk the cell boundary counter-clockwise: bottom, right, top, left.
      if (s00 != s10) cut.push_back(crossing(i, j, 0));
      if (s10 != s11) cut.push_back(crossing(i + 1, j, 1));
      if (s01 != s11) cut.push_back(crossing(i, j + 1, 0));
      if (s00 != s01) cut.push_back(crossing(i, j, 1));
      if (cut.size() == 2) {
        link(cut[0], cut[1]);
      } else if (cut.size() == 4) {
        bool centre = 0.25 * (v00 + v10 + v11 + v01) >= 0;
        if (centre == s00) {
          link(cut[0], cut[1]);
          link(cut[2], cut[3]);
        } else {
          link(cut[0], cut[3]);
          link(cut[1], cut[2]);
        }
      }
    }
  }

  std::vector<Polyline> out;
  std::unordered_map<long long, bool> used;
  auto walk = [&](long long start) {
    Polyline line{point[start]};
    used[start] = true;
    long long prev = -1, cur = start;
    for (;;) {
      long long next = -1;
      for (long long q : links[cur]) {
        if (q != prev && !used[q]) {
          next = q;
          break;
        }
      }
      if (next < 0) {
        for (long long q : links[cur]) {
          if (q == start && prev != -1 && q != prev) line.push_back(point[start]);
        }
        break;
      }
      used[next] = true;
      line.push_back(point[next]);
      prev = cur;
      cur = next;
    }
    out.push_back(std::move(line));
  };
  std::vector<long long> keys;
  keys.reserve(links.size());
  for (const auto& [k, _] : links) keys.push_back(k);
  std::sort(keys.begin(), keys.end());
  for (long long k : keys) {
    if (!used[k] && links[k].size() == 1) walk(k);
  }
  for (long long k : keys) {
    if (!used[k]) walk(k);
  }
  return out;
}

namespace {

double point_segment(Complex p, Complex a, Complex b) {
  Complex ab = b - a;
  double len2 = std::norm(ab);
  double t = len2 > 0 ? std::clamp(((p - a) * std::conj(ab)).real() / len2, 0.0, 1.0) : 0.0;
  return std::abs(p - (a + t * ab));
}

double directed(const std::vector<Polyline>& a, const std::vector<Polyline>& b, double spacing) {
  double worst = 0.0;
  auto nearest = [&](Complex p) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& line : b) {
      if (line.size() == 1) best = std::min(best, std::abs(p - line[0]));
      for (std::size_t k = 0; k + 1 < line.size(); ++k) {
        best = std::min(best, point_segment(p, line[k], line[k + 1]));
      }
    }
    return best;
  };
  for (const auto& line : a) {
    if (line.size() == 1) worst = std::max(worst, nearest(line[0]));
    for (std::size_t k = 0; k + 1 < line.size(); ++k) {
      int n = std::max(1, static_cast<int>(std::ceil(std::abs(line[k + 1] - line[k]) / spacing)));
      for (int s = 0; s <= n; ++s) {
        worst = std::max(worst, nearest(line[k] + (line[k + 1] - line[k]) * (double(s) / n)));
      }
    }
  }
  return worst;
}

}  // namespace

double hausdorff_distance(const std::vector<Polyline>& a, const std::vector<Polyline>& b,
                          double spacing) {
  if (!(spacing > 0.0)) throw Error(ErrorCode::InvalidArgument, "spacing must be positive");
  bool ea = a.empty(), eb = b.empty();
  if (ea && eb) return 0.0;
  if (ea || eb) return std::numeric_limits<double>::infinity();
  return std::max(directed(a, b, spacing), directed(b, a, spacing));
}

MeshFormat parse_mesh_format(const std::string& name) {
  if (name == "obj") return MeshFormat::Obj;
  if (name == "ply") return MeshFormat::Ply;
  if (name == "csv") return MeshFormat::Csv;
  if (name == "json") return MeshFormat::Json;
  throw Error(ErrorCode::InvalidArgument, "unknown mesh format '" + name + "'");
}

namespace {

nlohmann::json metadata(const SurfaceMesh& s) {
  nlohmann::json m;
  m["class"] = s.surface_class;
  m["lorentzian"] = s.lorentzian;
  if (s.lorentzian) {
    m["signature"] = "-++";
    m["timelike_axis"] = 0;
    m["density_metric"] = "(1+|g|^2)^2 |f|^2 |dz|^2, stored without the factor 1/2";
  }
  if (!s.hermitian.empty()) {
    m["model"] = "poincare_ball";
    m["minkowski"] = "x0=(a+c)/2, x1=Re b, x2=Im b, x3=(a-c)/2 for psi=[[a,b],[conj b,c]]";
    m["ball"] = "x_i/(1+x0)";
  }
  m["vertices"] = s.size();
  m["faces"] = s.faces.size();
  m["seam_mismatch"] = s.seam_mismatch;
  if (!s.hermitian.empty()) m["det_drift"] = s.det_drift;
  return m;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::Io, "cannot open " + path + " for writing");
  out.precision(17);
  return out;
}

void finish(std::ofstream& out, const std::string& path) {
  out.flush();
  if (!out) throw Error(ErrorCode::Io, "write failed for " + path);
}

void check_finite(const SurfaceMesh& s) {
  for (std::size_t k = 0; k < s.size(); ++k) {
    if (!s.positions[k].allFinite() || !std::isfinite(s.density[k]) ||
        !std::isfinite(s.curvature[k]) || !std::isfinite(s.aux_metric[k])) {
      throw Error(ErrorCode::NonFinite, "non-finite vertex data at vertex " + std::to_string(k));
    }
  }
}

}  // namespace

void export_mesh(const SurfaceMesh& s, MeshFormat format, const std::string& path) {
  if (s.size() == 0) throw Error(ErrorCode::Precondition, "empty surface mesh");
  check_finite(s);
  auto out = open_out(path);
  const auto meta = metadata(s);
  switch (format) {
    case MeshFormat::Obj: {
      out << "# weierlab " << s.surface_class << '\n';
      out << "# lorentzian: " << (s.lorentzian ? "true" : "false") << '\n';
      for (const auto& p : s.positions) out << "v " << p[0] << ' ' << p[1] << ' ' << p[2] << '\n';
      for (const auto& f : s.faces) out << "f " << f[0] + 1 << ' ' << f[1] + 1 << ' ' << f[2] + 1 << '\n';
      break;
    }
    case MeshFormat::Ply: {
      out << "ply\nformat ascii 1.0\n";
      out << "comment weierlab " << s.surface_class << '\n';
      out << "comment lorentzian " << (s.lorentzian ? "true" : "false") << '\n';
      out << "element vertex " << s.size() << '\n';
      out << "property double x\nproperty double y\nproperty double z\n";
      out << "element face " << s.faces.size() << '\n';
      out << "property list uchar int vertex_indices\nend_header\n";
      for (const auto& p : s.positions) out << p[0] << ' ' << p[1] << ' ' << p[2] << '\n';
      for (const auto& f : s.faces) out << "3 " << f[0] << ' ' << f[1] << ' ' << f[2] << '\n';
      break;
    }
    case MeshFormat::Csv: {
      out << "id,u,v,x,y,z,density,curvature,singular,gauss_re,gauss_im,gauss_inf,aux_metric\n";
      for (std::size_t k = 0; k < s.size(); ++k) {
        const auto& p = s.positions[k];
        const auto& g = s.gauss[k];
        Complex gv = g.is_finite() ? g.value() : Complex(0.0);
        out << k << ',' << s.params[k].real() << ',' << s.params[k].imag() << ',' << p[0] << ','
            << p[1] << ',' << p[2] << ',' << s.density[k] << ',' << s.curvature[k] << ','
            << int(s.singular[k]) << ',' << gv.real() << ',' << gv.imag() << ','
            << (g.is_infinite() ? 1 : 0) << ',' << s.aux_metric[k] << '\n';
      }
      break;
    }
    case MeshFormat::Json: {
      nlohmann::json j;
      j["metadata"] = meta;
      auto& verts = j["vertices"] = nlohmann::json::array();
      auto& params = j["params"] = nlohmann::json::array();
      auto& gauss = j["gauss"] = nlohmann::json::array();
      for (std::size_t k = 0; k < s.size(); ++k) {
        verts.push_back({s.positions[k][0], s.positions[k][1], s.positions[k][2]});
        params.push_back({s.params[k].real(), s.params[k].imag()});
        if (s.gauss[k].is_infinite()) {
          gauss.push_back("inf");
        } else {
          gauss.push_back({s.gauss[k].value().real(), s.gauss[k].value().imag()});
        }
      }
      j["faces"] = s.faces;
      j["density"] = s.density;
      j["curvature"] = s.curvature;
      j["singular"] = s.singular;
      j["aux_metric"] = s.aux_metric;
      out << j.dump(1) << '\n';
      break;
    }
  }
  finish(out, path);

  if (!s.hermitian.empty()) {
    std::string side = path + ".hermitian.json";
    auto hout = open_out(side);
    nlohmann::json h;
    h["metadata"] = meta;
    h["columns"] = {"a", "b_re", "b_im", "c"};
    auto& rows = h["psi"] = nlohmann::json::array();
    for (const auto& m : s.hermitian) {
      if (!m.allFinite()) throw Error(ErrorCode::NonFinite, "non-finite Hermitian vertex");
      rows.push_back({m(0, 0).real(), m(0, 1).real(), m(0, 1).imag(), m(1, 1).real()});
    }
    hout << h.dump(1) << '\n';
    finish(hout, side);
  }
}

}  // namespace weierlab
