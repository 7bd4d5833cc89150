#include "config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace weierlab::cli {

namespace {

std::string escape_token(const std::string& key) {
  std::string out;
  for (char c : key) {
    if (c == '~') {
      out += "~0";
    } else if (c == '/') {
      out += "~1";
    } else {
      out += c;
    }
  }
  return out;
}

}  // namespace

bool Node::has(const std::string& key) const { return j_->is_object() && j_->contains(key); }

Node Node::at(const std::string& key) const {
  if (!j_->is_object()) fail("expected an object");
  auto it = j_->find(key);
  std::string p = pointer_ + "/" + escape_token(key);
  if (it == j_->end()) throw SchemaError(p, "missing required field");
  return Node(*it, p);
}

Node Node::at(std::size_t index) const {
  if (!j_->is_array()) fail("expected an array");
  std::string p = pointer_ + "/" + std::to_string(index);
  if (index >= j_->size()) throw SchemaError(p, "index out of range");
  return Node((*j_)[index], p);
}

std::size_t Node::size() const {
  if (!j_->is_array()) fail("expected an array");
  return j_->size();
}

void Node::fail(const std::string& what) const { throw SchemaError(pointer_, what); }

double Node::number() const {
  if (!j_->is_number()) fail("expected a number");
  double v = j_->get<double>();
  if (!std::isfinite(v)) fail("expected a finite number");
  return v;
}

double Node::positive() const {
  double v = number();
  if (!(v > 0.0)) fail("expected a positive number");
  return v;
}

int Node::integer() const {
  if (!j_->is_number_integer()) fail("expected an integer");
  return j_->get<int>();
}

int Node::positive_integer() const {
  int v = integer();
  if (v < 1) fail("expected a positive integer");
  return v;
}

std::string Node::string() const {
  if (!j_->is_string()) fail("expected a string");
  return j_->get<std::string>();
}

bool Node::boolean() const {
  if (!j_->is_boolean()) fail("expected true or false");
  return j_->get<bool>();
}

Complex Node::complex() const {
  if (j_->is_number()) return {number(), 0.0};
  if (!j_->is_array() || j_->size() != 2) fail("expected a number or [re, im]");
  return {at(0).number(), at(1).number()};
}

ExtComplex Node::ext_complex() const {
  if (j_->is_string()) {
    if (j_->get<std::string>() == "inf") return ExtComplex::infinity();
    fail("expected \"inf\", a number or [re, im]");
  }
  return ExtComplex(complex());
}

MeroExpr Node::expr() const {
  std::string src = string();
  try {
    return parse_mero(src);
  } catch (const Error& e) {
    fail(std::string("bad expression: ") + e.what());
  }
}

DomainSpec Node::domain() const {
  if (!j_->is_object()) fail("expected an object");
  std::string type = at("type").string();
  Region region;
  if (type == "disk") {
    Disk d;
    if (has("center")) d.center = at("center").complex();
    if (has("radius")) d.radius = at("radius").positive();
    region = d;
  } else if (type == "annulus") {
    Annulus a;
    if (has("center")) a.center = at("center").complex();
    a.inner_radius = at("inner_radius").positive();
    a.outer_radius = at("outer_radius").positive();
    region = a;
  } else if (type == "rectangle") {
    region = Rectangle{at("lower_left").complex(), at("upper_right").complex()};
  } else if (type == "plane") {
    region = TruncatedPlane{at("outer_radius").positive()};
  } else {
    at("type").fail("unknown domain type '" + type + "'");
  }
  std::vector<Complex> punctures;
  if (has("punctures")) punctures = at("punctures").complex_list();
  try {
    return DomainSpec(region, punctures);
  } catch (const Error& e) {
    fail(e.what());
  }
}

PropertySpec Node::property() const {
  if (!j_->is_object() || j_->size() != 1) fail("expected {\"bounded\": L} or {\"omits\": [...]}");
  PropertySpec p;
  if (has("bounded")) {
    p = Bounded{at("bounded").positive()};
  } else if (has("omits")) {
    Node list = at("omits");
    Omits o;
    for (std::size_t i = 0; i < list.size(); ++i) o.values.push_back(list.at(i).ext_complex());
    p = o;
  } else {
    fail("expected {\"bounded\": L} or {\"omits\": [...]}");
  }
  try {
    validate_property(p);
  } catch (const Error& e) {
    fail(e.what());
  }
  return p;
}

std::vector<Complex> Node::complex_list() const {
  std::vector<Complex> out;
  for (std::size_t i = 0; i < size(); ++i) out.push_back(at(i).complex());
  return out;
}

std::vector<double> Node::number_list() const {
  std::vector<double> out;
  for (std::size_t i = 0; i < size(); ++i) out.push_back(at(i).number());
  return out;
}

std::vector<int> Node::integer_list() const {
  std::vector<int> out;
  for (std::size_t i = 0; i < size(); ++i) out.push_back(at(i).integer());
  return out;
}

double Node::number_or(const std::string& key, double fallback) const {
  return has(key) ? at(key).number() : fallback;
}

int Node::integer_or(const std::string& key, int fallback) const {
  return has(key) ? at(key).integer() : fallback;
}

std::string Node::string_or(const std::string& key, const std::string& fallback) const {
  return has(key) ? at(key).string() : fallback;
}

Json load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open config '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return Json::parse(ss.str());
  } catch (const Json::parse_error& e) {
    throw SchemaError("", std::string("config is not valid JSON: ") + e.what());
  }
}

WeierstrassData surface_data(const Node& root) {
  DomainSpec domain = root.has("domain") ? root.at("domain").domain() : DomainSpec(Disk{});
  std::string cls = root.at("class").string();
  SurfaceClass data;
  if (cls == "minimal") {
    data = MinimalData{root.at("f").expr(), root.at("g").expr()};
  } else if (cls == "maxface") {
    data = MaxfaceData{root.at("f").expr(), root.at("g").expr()};
  } else if (cls == "improper_affine") {
    data = ImproperAffineData{root.at("F").expr(), root.at("G").expr()};
  } else if (cls == "flat_front") {
    data = FlatFrontData{root.at("omega").expr(), root.at("theta").expr()};
  } else {
    root.at("class").fail("unknown surface class '" + cls + "'");
  }
  Complex base = domain.center();
  if (const auto* a = std::get_if<Annulus>(&domain.region())) {
    base = a->center + 0.5 * (a->inner_radius + a->outer_radius);
  }
  if (root.has("base")) base = root.at("base").complex();
  if (!domain.contains(base)) root.at("base").fail("base point outside the domain");
  return WeierstrassData{std::move(data), std::move(domain), base};
}

Json to_json(Complex z) { return Json::array({z.real(), z.imag()}); }

Json to_json(const ExtComplex& v) {
  if (v.is_infinite()) return "inf";
  return to_json(v.value());
}

Json to_json(const DomainSpec& d) {
  Json j;
  std::visit(
      [&](const auto& r) {
        using R = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<R, Disk>) {
          j = {{"type", "disk"}, {"center", to_json(r.center)}, {"radius", r.radius}};
        } else if constexpr (std::is_same_v<R, Annulus>) {
          j = {{"type", "annulus"},
               {"center", to_json(r.center)},
               {"inner_radius", r.inner_radius},
               {"outer_radius", r.outer_radius}};
        } else if constexpr (std::is_same_v<R, Rectangle>) {
          j = {{"type", "rectangle"},
               {"lower_left", to_json(r.lower_left)},
               {"upper_right", to_json(r.upper_right)}};
        } else {
          j = {{"type", "plane"}, {"outer_radius", r.outer_radius}};
        }
      },
      d.region());
  j["punctures"] = Json::array();
  for (Complex p : d.punctures()) j["punctures"].push_back(to_json(p));
  return j;
}

Json to_json(const PropertySpec& p) {
  if (const auto* b = std::get_if<Bounded>(&p)) return {{"bounded", b->L}};
  Json list = Json::array();
  for (const auto& v : std::get<Omits>(p).values) list.push_back(to_json(v));
  return {{"omits", list}};
}

}  // namespace weierlab::cli
