#include <algorithm>
#include <cmath>
#include <filesystem>
#include <random>
#include <sstream>

#include "app.hpp"
#include "config.hpp"
#include "weierlab/estimates.hpp"
#include "weierlab/geodesy.hpp"
#include "weierlab/mesh.hpp"
#include "weierlab/mtriple.hpp"
#include "weierlab/sphere.hpp"
#include "weierlab/surfaces.hpp"

namespace weierlab::cli {

namespace {

namespace fs = std::filesystem;

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

std::string out_path(const RunConfig& c, const std::string& name) {
  return (fs::path(c.out_dir) / name).string();
}

MeshOptions mesh_options(const RunConfig& c) {
  MeshOptions o;
  o.jobs = c.jobs;
  return o;
}

Complex default_base(const DomainSpec& d) {
  if (const auto* a = std::get_if<Annulus>(&d.region())) {
    return a->center + 0.5 * (a->inner_radius + a->outer_radius);
  }
  return d.center();
}

DomainSpec read_domain(const Node& root) {
  return root.has("domain") ? root.at("domain").domain() : DomainSpec(Disk{});
}

MTriple read_triple(const Node& root) {
  return make_triple(read_domain(root), root.at("f").expr(), root.at("g").expr(),
                     root.at("m").positive_integer());
}

Json triple_json(const MTriple& t) {
  return {{"domain", to_json(t.domain())},
          {"f", t.f().to_string()},
          {"g", t.g().to_string()},
          {"m", t.m()}};
}

Json regularity_json(const RegularityReport& r) {
  Json entries = Json::array();
  for (const auto& e : r.entries) {
    entries.push_back({{"point", to_json(e.point)},
                       {"order_f", e.order_f},
                       {"order_g", e.order_g},
                       {"ok", e.ok},
                       {"verdict", e.verdict}});
  }
  return {{"entries", entries}, {"overall", r.overall}, {"checked", r.checked}};
}

Json property_json(const PropertyReport& p) {
  Json j = {{"kind", p.kind},
            {"pass", p.pass},
            {"extreme", p.extreme},
            {"at", to_json(p.at)},
            {"delta", p.delta},
            {"samples", p.samples},
            {"near_attainment", p.near_attainment.size()}};
  if (p.closest_value >= 0) j["closest_value"] = p.closest_value;
  return j;
}

Json estimate_json(const EstimateReport& r) {
  Json j = {{"sup", r.sup},
            {"argmax", to_json(r.argmax)},
            {"argmax_node", r.argmax_node},
            {"distance_at_argmax", r.distance_at_argmax},
            {"curvature_at_argmax", r.curvature_at_argmax},
            {"tolerance", r.tolerance},
            {"verdict", r.verdict},
            {"resolution", r.resolution},
            {"samples", r.samples},
            {"property", property_json(r.property)}};
  j["C"] = r.C ? Json(*r.C) : Json(nullptr);
  j["C2"] = r.C2 ? Json(*r.C2) : Json(nullptr);
  return j;
}

Json completeness_json(const CompletenessReport& r) {
  return {{"target", {{"kind", to_string(r.target.kind)}, {"point", to_json(r.target.point)}}},
          {"start", to_json(r.start)},
          {"direction", to_json(r.direction)},
          {"eps", r.eps},
          {"lengths", r.lengths},
          {"model", r.model},
          {"slope", r.slope},
          {"intercept", r.intercept},
          {"exponent", r.exponent},
          {"residual", r.residual},
          {"window_first", r.window_first},
          {"window_last", r.window_last},
          {"stable", r.stable},
          {"divergence", r.divergence},
          {"verdict", r.divergence ? "evidence of divergence" : "no evidence of divergence"}};
}

Json polyline_json(const Polyline& p) {
  Json j = Json::array();
  for (Complex z : p) j.push_back(to_json(z));
  return j;
}

void write_mesh_csv(const RunConfig& c, const MeshedDomain& mesh) {
  mesh.write_nodes_csv(out_path(c, "nodes.csv"));
  mesh.write_edges_csv(out_path(c, "edges.csv"));
}

const std::vector<double> kDefaultEps{1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6};

// ---------------------------------------------------------------- triple

CommandResult triple_check(const RunConfig& c) {
  Node root(c.input, "");
  DomainSpec domain = read_domain(root);
  MeroExpr f = root.at("f").expr(), g = root.at("g").expr();
  int m = root.at("m").positive_integer();
  double h = root.has("h") ? root.at("h").positive() : 1e-3;
  double tol = root.has("tolerance") ? root.at("tolerance").positive() : 1e-4;
  int samples = root.integer_or("samples", 8);
  if (samples < 0) root.at("samples").fail("expected a nonnegative integer");

  CommandResult res;
  RegularityReport reg = check_regularity(domain, f, g, m);
  Json& r = res.report;
  r["regularity"] = regularity_json(reg);
  if (!reg.overall) {
    r["verdict"] = "fail";
    res.exit_code = kExitVerdict;
    res.summary = "triple check: regularity violated";
    return res;
  }
  MTriple t(domain, f, g, m);
  r["triple"] = triple_json(t);

  std::vector<Complex> points;
  points.push_back(root.has("base") ? root.at("base").complex() : default_base(domain));
  if (root.has("points")) {
    auto extra = root.at("points").complex_list();
    points.insert(points.end(), extra.begin(), extra.end());
  }
  std::mt19937_64 rng(c.seed);
  double ext = domain.half_extent();
  std::uniform_real_distribution<double> U(-ext, ext);
  const double clearance = 0.1;
  for (int k = 0, tries = 0; k < samples && tries < 100000; ++tries) {
    Complex z = domain.center() + Complex(U(rng), U(rng));
    if (!domain.contains(z, clearance) || domain.boundary_distance(z) < clearance) continue;
    points.push_back(z);
    ++k;
  }

  Json pts = Json::array();
  double worst = 0.0;
  for (Complex z : points) {
    double K = t.curvature(z);
    double Kfd = t.curvature_fd(z, h, true);
    double rel = std::abs(K - Kfd) / std::max(std::abs(K), 1e-8);
    worst = std::max(worst, rel);
    pts.push_back({{"z", to_json(z)},
                   {"metric_density", t.metric_density(z)},
                   {"curvature", K},
                   {"curvature_fd", Kfd},
                   {"relative_error", rel}});
  }
  r["points"] = pts;
  r["h"] = h;
  r["tolerance"] = tol;
  r["max_relative_error"] = worst;
  bool pass = worst <= tol;
  r["verdict"] = pass ? "pass" : "fail";
  res.exit_code = pass ? kExitOk : kExitVerdict;
  res.summary = "triple check: " + std::string(pass ? "pass" : "fail") + ", K(base) = " +
                fmt(pts[0]["curvature"].get<double>()) + ", max oracle error " + fmt(worst);
  return res;
}

CommandResult triple_curvature(const RunConfig& c) {
  Node root(c.input, "");
  MTriple t = read_triple(root);
  std::vector<Complex> points;
  if (root.has("points")) {
    points = root.at("points").complex_list();
  } else {
    points.push_back(default_base(t.domain()));
  }
  CommandResult res;
  Json pts = Json::array();
  for (Complex z : points) {
    pts.push_back({{"z", to_json(z)},
                   {"metric_density", t.metric_density(z)},
                   {"curvature", t.curvature(z)},
                   {"gauss_map", to_json(t.gauss_map(z))}});
  }
  res.report["triple"] = triple_json(t);
  res.report["regularity"] = regularity_json(t.regularity());
  res.report["points"] = pts;
  res.summary = "triple curvature: " + std::to_string(points.size()) + " point(s)";
  return res;
}

// -------------------------------------------------------------- estimate

CommandResult estimate_verify(const RunConfig& c) {
  Node root(c.input, "");
  MTriple t = read_triple(root);
  PropertySpec prop = root.at("property").property();
  int resolution = root.has("resolution") ? root.at("resolution").positive_integer() : 100;
  EstimateOptions eo;
  if (root.has("tolerance")) eo.tolerance = root.at("tolerance").positive();
  if (root.has("delta")) eo.delta = root.at("delta").positive();

  const MTriple* tp = &t;
  Density density = [tp](Complex z) { return tp->metric_density(z); };
  MeshedDomain mesh = build_mesh(t.domain(), density, resolution, mesh_options(c));
  EstimateReport rep = verify_estimate(t, prop, mesh, eo);
  write_mesh_csv(c, mesh);

  CommandResult res;
  Json& r = res.report;
  r["triple"] = triple_json(t);
  r["property"] = to_json(prop);
  r["estimate"] = estimate_json(rep);
  r["verdict"] = rep.verdict;
  if (root.has("refinement")) {
    std::vector<int> levels = root.at("refinement").integer_list();
    RefinementStudy st = estimate_refinement(t, prop, levels, mesh_options(c), eo);
    Json reports = Json::array();
    for (const auto& e : st.reports) reports.push_back(estimate_json(e));
    r["refinement"] = {{"resolutions", st.resolutions},
                       {"sup_all", st.sup_all},
                       {"sup_common", st.sup_common},
                       {"nonincreasing", st.nonincreasing()},
                       {"reports", reports}};
    if (std::any_of(st.reports.begin(), st.reports.end(),
                    [](const EstimateReport& e) { return e.failed(); })) {
      r["verdict"] = "fail";
    }
  }
  res.exit_code = r["verdict"] == "fail" ? kExitVerdict : kExitOk;
  res.summary = "estimate verify: " + r["verdict"].get<std::string>() + ", sup |K| d^2 = " +
                fmt(rep.sup) + (rep.C2 ? ", C^2 = " + fmt(*rep.C2) : std::string());
  return res;
}

// --------------------------------------------------------------- surface

struct CycleSpec {
  Json description;
  Polyline polyline;
};

std::vector<CycleSpec> read_cycles(const Node& root, const WeierstrassData& d) {
  std::vector<CycleSpec> out;
  if (root.has("cycles")) {
    Node list = root.at("cycles");
    for (std::size_t i = 0; i < list.size(); ++i) {
      Node cy = list.at(i);
      if (cy.has("points")) {
        auto pts = cy.at("points").complex_list();
        out.push_back({{{"points", polyline_json(pts)}}, pts});
      } else {
        Complex center = cy.at("center").complex();
        double radius = cy.at("radius").positive();
        int n = cy.has("n") ? cy.at("n").positive_integer() : 256;
        out.push_back({{{"center", to_json(center)}, {"radius", radius}, {"n", n}},
                       circle_polyline(center, radius, n)});
      }
    }
    return out;
  }
  const DomainSpec& dom = d.domain;
  auto add_circle = [&](Complex center, double radius) {
    out.push_back({{{"center", to_json(center)}, {"radius", radius}, {"n", 256}},
                   circle_polyline(center, radius, 256)});
  };
  if (const auto* a = std::get_if<Annulus>(&dom.region())) {
    add_circle(a->center, 0.5 * (a->inner_radius + a->outer_radius));
  }
  const auto& ps = dom.punctures();
  for (std::size_t i = 0; i < ps.size(); ++i) {
    double r = dom.boundary_distance(ps[i]);
    for (std::size_t j = 0; j < ps.size(); ++j) {
      if (j != i) r = std::min(r, std::abs(ps[i] - ps[j]));
    }
    add_circle(ps[i], 0.5 * r);
  }
  return out;
}

Json periods_json(const WeierstrassData& d, const std::vector<CycleSpec>& cycles,
                  const SynthOptions& so, double* worst) {
  Json out = Json::array();
  for (const auto& cy : cycles) {
    PeriodResidual p = period_residuals(d, cy.polyline, so);
    Json j = {{"cycle", cy.description}, {"residual", p.residual}, {"norm", p.norm}};
    if (std::holds_alternative<FlatFrontData>(d.data)) {
      Json m = Json::array();
      for (int r = 0; r < 2; ++r) {
        Json row = Json::array();
        for (int col = 0; col < 2; ++col) row.push_back(to_json(p.monodromy_deviation(r, col)));
        m.push_back(row);
      }
      j["monodromy_deviation"] = m;
    }
    if (worst) *worst = std::max(*worst, p.norm);
    out.push_back(j);
  }
  return out;
}

SynthOptions synth_options(const Node& root) {
  SynthOptions so;
  if (root.has("rel_tol")) so.rel_tol = root.at("rel_tol").positive();
  if (root.has("step")) so.step = root.at("step").positive();
  if (root.has("max_det_drift")) so.max_det_drift = root.at("max_det_drift").positive();
  return so;
}

Json data_json(const WeierstrassData& d) {
  Json j = {{"class", class_name(d)}, {"domain", to_json(d.domain)}, {"base", to_json(d.base)}};
  std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, MinimalData> || std::is_same_v<T, MaxfaceData>) {
          j["f"] = x.f.to_string();
          j["g"] = x.g.to_string();
        } else if constexpr (std::is_same_v<T, ImproperAffineData>) {
          j["F"] = x.F.to_string();
          j["G"] = x.G.to_string();
        } else {
          j["omega"] = x.omega.to_string();
          j["theta"] = x.theta.to_string();
        }
      },
      d.data);
  return j;
}

Json locus_json(const std::vector<Polyline>& locus) {
  Json j = Json::array();
  for (const auto& p : locus) j.push_back(polyline_json(p));
  return j;
}

bool has_singular_set(const WeierstrassData& d) {
  return !std::holds_alternative<MinimalData>(d.data);
}

const Density kUnitDensity = [](Complex) { return 1.0; };

CommandResult surface_synth(const RunConfig& c) {
  Node root(c.input, "");
  WeierstrassData d = surface_data(root);
  validate(d);
  int resolution = root.has("resolution") ? root.at("resolution").positive_integer() : 200;
  SynthOptions so = synth_options(root);
  double tol = root.has("tolerance") ? root.at("tolerance").positive() : 1e-3;
  double normal_tol = root.has("normal_tolerance") ? root.at("normal_tolerance").positive() : 1e-2;
  double band = root.has("band") ? root.at("band").positive() : 0.1;
  std::vector<std::string> formats{"obj", "ply"};
  if (root.has("formats")) {
    Node list = root.at("formats");
    formats.clear();
    for (std::size_t i = 0; i < list.size(); ++i) {
      formats.push_back(list.at(i).string());
      try {
        parse_mesh_format(formats.back());
      } catch (const Error& e) {
        list.at(i).fail(e.what());
      }
    }
  }

  MeshedDomain mesh = build_mesh(d.domain, kUnitDensity, resolution, mesh_options(c));
  SurfaceMesh s = synthesize(d, mesh, so);

  CommandResult res;
  Json& r = res.report;
  r["surface"] = data_json(d);
  r["resolution"] = resolution;
  Json inv = {{"seam_mismatch", s.seam_mismatch},
              {"vertices", s.size()},
              {"faces", s.faces.size()},
              {"tolerance", tol}};
  bool pass = true;
  if (std::holds_alternative<FlatFrontData>(d.data)) {
    inv["det_drift"] = s.det_drift;
    inv["det_drift_rate"] = s.det_drift_rate;
  }
  if (std::holds_alternative<MinimalData>(d.data) || std::holds_alternative<MaxfaceData>(d.data)) {
    ImmersionReport im = immersion_check(s, d, mesh, band);
    inv["immersion"] = {{"isothermal", im.isothermal},
                        {"orthogonality", im.orthogonality},
                        {"metric", im.metric},
                        {"samples", im.samples},
                        {"h", im.h},
                        {"band", band}};
    pass = pass && im.isothermal <= tol && im.orthogonality <= tol && im.metric <= tol;
    if (im.laplacian) {
      inv["immersion"]["laplacian"] = *im.laplacian;
      pass = pass && *im.laplacian <= tol;
    }
    inv["nullity"] = nullity_residual(d, mesh);
  }
  if (const auto* md = std::get_if<MinimalData>(&d.data)) {
    double angle = gauss_normal_check(s, md->g, mesh);
    inv["gauss_normal_angle"] = angle;
    inv["normal_tolerance"] = normal_tol;
    pass = pass && angle <= normal_tol;
  }
  r["invariants"] = inv;
  r["periods"] = periods_json(d, read_cycles(root, d), so, nullptr);
  r["singular_locus"] = has_singular_set(d) ? locus_json(singular_locus(d, mesh)) : Json::array();

  Json files = Json::array();
  for (const auto& name : formats) {
    std::string path = out_path(c, "mesh." + name);
    export_mesh(s, parse_mesh_format(name), path);
    files.push_back(fs::path(path).filename().string());
    if (std::holds_alternative<FlatFrontData>(d.data)) {
      files.push_back(fs::path(path).filename().string() + ".hermitian.json");
    }
  }
  write_mesh_csv(c, mesh);
  files.push_back("nodes.csv");
  files.push_back("edges.csv");
  r["files"] = files;
  r["verdict"] = pass ? "pass" : "fail";
  res.exit_code = pass ? kExitOk : kExitVerdict;
  res.summary = std::string("surface synth (") + class_name(d) + "): " + (pass ? "pass" : "fail") +
                ", " + std::to_string(s.size()) + " vertices";
  return res;
}

CommandResult surface_periods(const RunConfig& c) {
  Node root(c.input, "");
  WeierstrassData d = surface_data(root);
  validate(d);
  SynthOptions so = synth_options(root);
  CommandResult res;
  double worst = 0.0;
  auto cycles = read_cycles(root, d);
  res.report["surface"] = data_json(d);
  res.report["periods"] = periods_json(d, cycles, so, &worst);
  res.report["max_norm"] = worst;
  res.summary = "surface periods: " + std::to_string(cycles.size()) + " cycle(s), max norm " +
                fmt(worst);
  return res;
}

CommandResult surface_singular(const RunConfig& c) {
  Node root(c.input, "");
  WeierstrassData d = surface_data(root);
  validate(d);
  int resolution = root.has("resolution") ? root.at("resolution").positive_integer() : 200;
  MeshedDomain mesh = build_mesh(d.domain, kUnitDensity, resolution, mesh_options(c));
  auto locus = singular_locus(d, mesh);
  CommandResult res;
  res.report["surface"] = data_json(d);
  res.report["resolution"] = resolution;
  res.report["singular_locus"] = locus_json(locus);
  if (root.has("reference")) {
    Node ref = root.at("reference");
    Polyline circle = circle_polyline(ref.at("center").complex(), ref.at("radius").positive(),
                                      ref.has("n") ? ref.at("n").positive_integer() : 4096);
    res.report["hausdorff_to_reference"] = hausdorff_distance(locus, {circle});
  }
  res.summary = "surface singular: " + std::to_string(locus.size()) + " component(s)";
  return res;
}

// ----------------------------------------------------------------- probe

/// Replaces the identifier `n` in a family template by a parenthesised
/// integer.
std::string instantiate(const std::string& tmpl, int n) {
  std::string out;
  auto ident = [](char ch) { return std::isalnum(static_cast<unsigned char>(ch)) || ch == '_'; };
  for (std::size_t i = 0; i < tmpl.size(); ++i) {
    bool alone = tmpl[i] == 'n' && (i == 0 || !ident(tmpl[i - 1])) &&
                 (i + 1 == tmpl.size() || !ident(tmpl[i + 1]));
    out += alone ? "(" + std::to_string(n) + ")" : std::string(1, tmpl[i]);
  }
  return out;
}

CommandResult probe_marty(const RunConfig& c) {
  Node root(c.input, "");
  std::string tmpl = root.at("family").string();
  std::vector<int> indices{1, 10, 100};
  if (root.has("indices")) indices = root.at("indices").integer_list();
  Disk compact{0.0, 0.5};
  if (root.has("compact")) {
    Node k = root.at("compact");
    if (k.has("center")) compact.center = k.at("center").complex();
    compact.radius = k.at("radius").positive();
  }
  int grid = root.has("grid") ? root.at("grid").positive_integer() : 201;
  try {
    parse_mero(instantiate(tmpl, 1));
  } catch (const Error& e) {
    root.at("family").fail(std::string("bad family template: ") + e.what());
  }
  Family fam = [tmpl](int n) { return parse_mero(instantiate(tmpl, n)); };
  NormalityReport rep = marty_sup(fam, indices, compact, grid, tmpl);
  CommandResult res;
  Json argmax = Json::array();
  for (Complex z : rep.argmax) argmax.push_back(to_json(z));
  res.report["normality"] = {
      {"label", rep.label},
      {"compact", {{"center", to_json(rep.compact.center)}, {"radius", rep.compact.radius}}},
      {"indices", rep.indices},
      {"sups", rep.sups},
      {"argmax", argmax},
      {"slope", rep.slope},
      {"grid", grid},
      {"verdict", rep.verdict}};
  res.summary = "probe marty: " + rep.verdict + ", slope " + fmt(rep.slope);
  return res;
}

CommandResult probe_zalcman(const RunConfig& c) {
  Node root(c.input, "");
  MeroExpr h = root.at("h").expr();
  int grid = root.has("grid") ? root.at("grid").positive_integer() : 300;
  double tol = root.has("tolerance") ? root.at("tolerance").positive() : 1e-9;
  ZalcmanResult z = zalcman_rescale(h, grid);
  bool pass = std::abs(z.gradient_at_zero - 1.0) <= tol && z.envelope_excess <= tol;
  CommandResult res;
  res.report["zalcman"] = {{"h", h.to_string()},
                           {"rescaled", z.rescaled.to_string()},
                           {"recentred", z.recentred.to_string()},
                           {"R", z.R},
                           {"z0", to_json(z.z0)},
                           {"recentred_applied", z.recentred_applied},
                           {"chordal_max", z.chordal_max},
                           {"gradient_at_zero", z.gradient_at_zero},
                           {"envelope_excess", z.envelope_excess},
                           {"grid", z.grid},
                           {"tolerance", tol}};
  res.report["verdict"] = pass ? "pass" : "fail";
  res.exit_code = pass ? kExitOk : kExitVerdict;
  res.summary = "probe zalcman: R = " + fmt(z.R) + ", |grad f|_e(0) = " + fmt(z.gradient_at_zero);
  return res;
}

CommandResult probe_fujimoto(const RunConfig& c) {
  Node root(c.input, "");
  MeroExpr f = root.at("f").expr();
  std::vector<ExtComplex> X;
  Node vals = root.at("values");
  for (std::size_t i = 0; i < vals.size(); ++i) X.push_back(vals.at(i).ext_complex());
  double eta = root.at("eta").positive();
  double R = root.at("R").positive();
  DomainSpec domain = root.has("domain") ? root.at("domain").domain() : DomainSpec(Disk{0.0, R});
  int resolution = root.has("resolution") ? root.at("resolution").positive_integer() : 200;
  MeshedDomain mesh = build_mesh(domain, kUnitDensity, resolution, mesh_options(c));
  FujimotoReport rep = fujimoto_ratio(f, X, eta, R, mesh);
  CommandResult res;
  Json xs = Json::array();
  for (const auto& v : X) xs.push_back(to_json(v));
  res.report["fujimoto"] = {{"f", f.to_string()},   {"values", xs},
                            {"sup", rep.sup},       {"argmax", to_json(rep.argmax)},
                            {"eta", rep.eta},       {"R", rep.R},
                            {"q", rep.q},           {"samples", rep.samples},
                            {"resolution", resolution}};
  res.summary = "probe fujimoto: sup " + fmt(rep.sup);
  return res;
}

CompletenessTarget read_target(const Node& n) {
  if (n.has("puncture")) return CompletenessTarget::puncture(n.at("puncture").complex());
  if (n.has("boundary")) return CompletenessTarget::boundary(n.at("boundary").complex());
  if (n.has("infinity")) return CompletenessTarget::infinity(n.at("infinity").complex());
  n.fail("expected one of puncture, boundary, infinity");
}

CommandResult probe_completeness(const RunConfig& c) {
  Node root(c.input, "");
  MTriple t = read_triple(root);
  CompletenessTarget target = read_target(root.at("target"));
  std::vector<double> eps = root.has("eps") ? root.at("eps").number_list() : kDefaultEps;
  std::optional<Complex> start;
  if (root.has("start")) start = root.at("start").complex();
  CompletenessReport rep = completeness_probe(t, target, eps, start);
  CommandResult res;
  res.report["triple"] = triple_json(t);
  res.report["completeness"] = completeness_json(rep);
  res.summary = "probe completeness: " + rep.model + " slope " + fmt(rep.slope) + ", " +
                res.report["completeness"]["verdict"].get<std::string>();
  return res;
}

// --------------------------------------------------------------- example

CommandResult example_optimal(const RunConfig& c) {
  Node root(c.input, "");
  int m = root.at("m").positive_integer();
  std::vector<Complex> alphas = root.at("alphas").complex_list();
  double outer = root.number_or("outer_radius", 0.0);
  double delta = root.has("delta") ? root.at("delta").positive() : 1e-3;
  int resolution = root.has("resolution") ? root.at("resolution").positive_integer() : 100;
  MTriple t = optimal_example(m, alphas, outer);

  Omits omitted;
  for (Complex a : alphas) omitted.values.emplace_back(a);
  omitted.values.push_back(ExtComplex::infinity());
  MeshedDomain mesh = build_mesh(t.domain(), kUnitDensity, resolution, mesh_options(c));
  PropertyReport pr = property_check(t.g(), omitted, mesh, delta);
  write_mesh_csv(c, mesh);

  CommandResult res;
  Json& r = res.report;
  r["triple"] = triple_json(t);
  r["regularity"] = regularity_json(t.regularity());
  r["omitted_values"] = to_json(PropertySpec(omitted))["omits"];
  r["omitted_count"] = omitted.values.size();
  r["property"] = property_json(pr);
  if (root.has("completeness") ? root.at("completeness").boolean() : true) {
    std::vector<double> eps = root.has("eps") ? root.at("eps").number_list() : kDefaultEps;
    Json probes = Json::array();
    for (Complex a : alphas) {
      probes.push_back(completeness_json(completeness_probe(t, CompletenessTarget::puncture(a), eps)));
    }
    r["completeness"] = probes;
  }
  bool pass = pr.pass && t.regularity().overall &&
              omitted.values.size() == static_cast<std::size_t>(m + 2);
  r["verdict"] = pass ? "pass" : "fail";
  res.exit_code = pass ? kExitOk : kExitVerdict;
  res.summary = "example optimal: omits " + std::to_string(omitted.values.size()) +
                " values, min chordal distance " + fmt(pr.extreme);
  return res;
}

}  // namespace

CommandResult execute(const RunConfig& c) {
  const std::string key = c.command + " " + c.action;
  if (key == "triple check") return triple_check(c);
  if (key == "triple curvature") return triple_curvature(c);
  if (key == "estimate verify") return estimate_verify(c);
  if (key == "surface synth") return surface_synth(c);
  if (key == "surface periods") return surface_periods(c);
  if (key == "surface singular") return surface_singular(c);
  if (key == "probe marty") return probe_marty(c);
  if (key == "probe zalcman") return probe_zalcman(c);
  if (key == "probe fujimoto") return probe_fujimoto(c);
  if (key == "probe completeness") return probe_completeness(c);
  if (key == "example optimal") return example_optimal(c);
  throw Error(ErrorCode::InvalidArgument, "unknown subcommand '" + key + "'");
}

}  // namespace weierlab::cli
