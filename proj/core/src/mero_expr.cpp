#include "weierlab/mero_expr.hpp"

#include <unordered_map>
#include <charconv>
#include <cmath>
#include <numbers>

#include "weierlab/errors.hpp"

namespace weierlab {

struct MeroExpr::Node {
  Kind kind;
  Complex value{};
  int exponent = 0;
  std::shared_ptr<const Node> a;
  std::shared_ptr<const Node> b;
  bool rational = true;
  bool constant = true;
  std::size_t count = 1;
};

using NodePtr = std::shared_ptr<const MeroExpr::Node>;

// Grants the free functions in this file access to the node pointer.
class ExprAccess {
 public:
  static const NodePtr& node(const MeroExpr& e) { return e.node_; }
  static MeroExpr wrap(NodePtr n) { return MeroExpr(std::move(n)); }
};

namespace {

using Kind = MeroExpr::Kind;

NodePtr make_leaf(Kind kind, Complex value) {
  auto n = std::make_shared<MeroExpr::Node>();
  n->kind = kind;
  n->value = value;
  n->constant = (kind == Kind::Constant);
  return n;
}

NodePtr make_node(Kind kind, NodePtr a, NodePtr b, int exponent = 0) {
  auto n = std::make_shared<MeroExpr::Node>();
  n->kind = kind;
  n->exponent = exponent;
  n->rational = a->rational && (!b || b->rational) && kind != Kind::Exp;
  n->constant = a->constant && (!b || b->constant);
  n->count = 1 + a->count + (b ? b->count : 0);
  n->a = std::move(a);
  n->b = std::move(b);
  return n;
}

bool is_const(const NodePtr& n, Complex v) { return n->kind == Kind::Constant && n->value == v; }
bool is_const(const NodePtr& n) { return n->kind == Kind::Constant; }

// Plain complex product and quotient (Smith). Callers check finiteness, so
// the inf/nan recovery of the library operators is not needed on hot paths.
inline Complex cmul(Complex x, Complex y) {
  return {x.real() * y.real() - x.imag() * y.imag(), x.real() * y.imag() + x.imag() * y.real()};
}

inline Complex cdiv(Complex x, Complex y) {
  double a = x.real(), b = x.imag(), c = y.real(), d = y.imag();
  if (std::abs(c) >= std::abs(d)) {
    double r = d / c, den = c + d * r;
    return {(a + b * r) / den, (b - a * r) / den};
  }
  double r = c / d, den = c * r + d;
  return {(a * r + b) / den, (b * r - a) / den};
}

Complex ipow(Complex base, int k) {
  bool invert = k < 0;
  unsigned e = invert ? static_cast<unsigned>(-static_cast<long>(k)) : static_cast<unsigned>(k);
  Complex result(1.0, 0.0);
  while (e) {
    if (e & 1u) result = cmul(result, base);
    e >>= 1u;
    if (e) base = cmul(base, base);
  }
  return invert ? cdiv(Complex(1.0, 0.0), result) : result;
}

bool finite(Complex c) { return std::isfinite(c.real()) && std::isfinite(c.imag()); }

bool try_eval_node(const MeroExpr::Node* n, Complex z, Complex& out) noexcept {
  Complex x, y;
  switch (n->kind) {
    case Kind::Constant: out = n->value; return true;
    case Kind::Variable: out = z; return true;
    case Kind::Neg:
      if (!try_eval_node(n->a.get(), z, x)) return false;
      out = -x;
      return true;
    case Kind::Exp:
      if (!try_eval_node(n->a.get(), z, x)) return false;
      out = std::exp(x);
      return finite(out);
    case Kind::Pow:
      if (!try_eval_node(n->a.get(), z, x)) return false;
      if (n->exponent < 0 && x == Complex(0.0, 0.0)) return false;
      out = ipow(x, n->exponent);
      return finite(out);
    default: break;
  }
  if (!try_eval_node(n->a.get(), z, x) || !try_eval_node(n->b.get(), z, y)) return false;
  switch (n->kind) {
    case Kind::Add: out = x + y; break;
    case Kind::Sub: out = x - y; break;
    case Kind::Mul: out = cmul(x, y); break;
    case Kind::Div:
      if (y == Complex(0.0, 0.0)) return false;
      out = cdiv(x, y);
      break;
    default: return false;
  }
  return finite(out);
}

// Evaluation state on the sphere; `Indeterminate` never escapes eval_ext.
struct Val {
  enum class State { Finite, Infinite, Indeterminate } state = State::Finite;
  Complex v{};
  static Val fin(Complex c) {
    if (!finite(c)) return inf();
    return {State::Finite, c};
  }
  static Val inf() { return {State::Infinite, {}}; }
  static Val indet() { return {State::Indeterminate, {}}; }
  bool is_zero() const { return state == State::Finite && v == Complex(0.0, 0.0); }
  bool is_inf() const { return state == State::Infinite; }
};

ExtComplex resolve_limit(const NodePtr& n, Complex z, const LocalOrderOptions& opts);

Val eval_node(const NodePtr& n, Complex z, const LocalOrderOptions& opts) {
  using S = Val::State;
  Val r;
  switch (n->kind) {
    case Kind::Constant: return Val::fin(n->value);
    case Kind::Variable: return Val::fin(z);
    case Kind::Neg: {
      Val x = eval_node(n->a, z, opts);
      r = x.is_inf() ? Val::inf() : Val::fin(-x.v);
      break;
    }
    case Kind::Exp: {
      Val x = eval_node(n->a, z, opts);
      if (x.is_inf()) {
        throw Error(ErrorCode::Indeterminate, "exp evaluated at an essential singularity");
      }
      Complex e = std::exp(x.v);
      if (!finite(e)) throw Error(ErrorCode::NonFinite, "exp overflow");
      r = Val::fin(e);
      break;
    }
    case Kind::Pow: {
      Val x = eval_node(n->a, z, opts);
      int k = n->exponent;
      if (k == 0) {
        r = Val::fin(1.0);
      } else if (x.is_inf()) {
        r = k > 0 ? Val::inf() : Val::fin(0.0);
      } else if (x.is_zero()) {
        r = k > 0 ? Val::fin(0.0) : Val::inf();
      } else {
        r = Val::fin(ipow(x.v, k));
      }
      break;
    }
    default: {
      Val x = eval_node(n->a, z, opts);
      Val y = eval_node(n->b, z, opts);
      switch (n->kind) {
        case Kind::Add:
        case Kind::Sub:
          if (x.is_inf() && y.is_inf()) {
            r = Val::indet();
          } else if (x.is_inf() || y.is_inf()) {
            r = Val::inf();
          } else {
            r = Val::fin(n->kind == Kind::Add ? x.v + y.v : x.v - y.v);
          }
          break;
        case Kind::Mul:
          if ((x.is_inf() && y.is_zero()) || (x.is_zero() && y.is_inf())) {
            r = Val::indet();
          } else if (x.is_inf() || y.is_inf()) {
            r = Val::inf();
          } else {
            r = Val::fin(x.v * y.v);
          }
          break;
        case Kind::Div:
          if ((x.is_zero() && y.is_zero()) || (x.is_inf() && y.is_inf())) {
            r = Val::indet();
          } else if (x.is_inf() || y.is_zero()) {
            r = Val::inf();
          } else if (y.is_inf()) {
            r = Val::fin(0.0);
          } else {
            r = Val::fin(x.v / y.v);
          }
          break;
        default: break;
      }
    }
  }
  if (r.state == S::Indeterminate) {
    if (!n->rational) {
      throw Error(ErrorCode::Indeterminate,
                  "indeterminate form inside a non-rational subtree");
    }
    ExtComplex lim = resolve_limit(n, z, opts);
    return lim.is_infinite() ? Val::inf() : Val::fin(lim.value());
  }
  return r;
}

// Local limit of a rational subtree at an indeterminate site. The finite case
// uses the mean over a small circle, which is exact for functions holomorphic
// in the enclosed disk up to the trapezoidal aliasing error.
ExtComplex resolve_limit(const NodePtr& n, Complex z, const LocalOrderOptions& opts) {
  MeroExpr sub = ExprAccess::wrap(n);
  int order = 0;
  try {
    order = local_order(sub, z, opts);
  } catch (const Error& err) {
    throw Error(ErrorCode::Indeterminate,
                std::string("indeterminate form could not be resolved: ") + err.what());
  }
  if (order > 0) return ExtComplex(0.0);
  if (order < 0) return ExtComplex::infinity();
  const double r = opts.radii.size() > 1 ? opts.radii[1] : opts.radii.front();
  constexpr int kSamples = 32;
  Complex sum(0.0, 0.0);
  for (int j = 0; j < kSamples; ++j) {
    double t = 2.0 * std::numbers::pi * (j + 0.5) / kSamples;
    Val v = eval_node(n, z + std::polar(r, t), opts);
    if (v.state != Val::State::Finite) {
      throw Error(ErrorCode::Indeterminate, "singular sample while resolving a limit");
    }
    sum += v.v;
  }
  return ExtComplex(sum / static_cast<double>(kSamples));
}

bool equal_nodes(const NodePtr& x, const NodePtr& y) noexcept {
  if (x == y) return true;
  if (!x || !y) return false;
  if (x->kind != y->kind) return false;
  switch (x->kind) {
    case Kind::Constant: return x->value == y->value;
    case Kind::Variable: return true;
    case Kind::Pow: return x->exponent == y->exponent && equal_nodes(x->a, y->a);
    case Kind::Neg:
    case Kind::Exp: return equal_nodes(x->a, y->a);
    default: return equal_nodes(x->a, y->a) && equal_nodes(x->b, y->b);
  }
}

// ---------------------------------------------------------------------------
// Printing

int precedence(const NodePtr& n) {
  switch (n->kind) {
    case Kind::Add:
    case Kind::Sub: return 1;
    case Kind::Mul:
    case Kind::Div: return 2;
    case Kind::Pow: return 3;
    default: return 4;
  }
}

std::string format_real(double x) {
  char buf[400];
  auto res = std::to_chars(buf, buf + sizeof(buf), x, std::chars_format::fixed);
  if (res.ec != std::errc()) {
    throw Error(ErrorCode::InvalidArgument, "constant out of printable range");
  }
  return std::string(buf, res.ptr);
}

std::string format_constant(Complex c) {
  const double re = c.real(), im = c.imag();
  if (im == 0.0 && !std::signbit(re)) return format_real(re);
  if (re == 0.0 && im == 1.0) return "i";
  std::string out = "(";
  if (im == 0.0) return out + "-" + format_real(-re) + ")";
  if (re != 0.0) {
    out += re < 0 ? "-" + format_real(-re) : format_real(re);
    out += im < 0 ? "-" : "+";
  } else if (im < 0) {
    out += "-";
  }
  double mag = std::abs(im);
  if (mag != 1.0) out += format_real(mag) + "*";
  return out + "i)";
}

void print_node(const NodePtr& n, std::string& out);

void print_wrapped(const NodePtr& n, bool parens, std::string& out) {
  if (parens) out += '(';
  print_node(n, out);
  if (parens) out += ')';
}

void print_node(const NodePtr& n, std::string& out) {
  switch (n->kind) {
    case Kind::Constant: out += format_constant(n->value); return;
    case Kind::Variable: out += 'z'; return;
    case Kind::Neg:
      out += '-';
      print_wrapped(n->a, precedence(n->a) < 4, out);
      return;
    case Kind::Exp:
      out += "exp(";
      print_node(n->a, out);
      out += ')';
      return;
    case Kind::Pow:
      print_wrapped(n->a, precedence(n->a) < 4 || n->a->kind == Kind::Neg, out);
      out += '^';
      out += std::to_string(n->exponent);
      return;
    default: break;
  }
  const int p = precedence(n);
  print_wrapped(n->a, precedence(n->a) < p, out);
  switch (n->kind) {
    case Kind::Add: out += '+'; break;
    case Kind::Sub: out += '-'; break;
    case Kind::Mul: out += '*'; break;
    default: out += '/'; break;
  }
  print_wrapped(n->b, precedence(n->b) <= p, out);
}

// ---------------------------------------------------------------------------
// Derivative and substitution

MeroExpr diff(const MeroExpr& e) {
  switch (e.kind()) {
    case Kind::Constant: return MeroExpr::constant(0.0);
    case Kind::Variable: return MeroExpr::constant(1.0);
    case Kind::Add: return diff(e.lhs()) + diff(e.rhs());
    case Kind::Sub: return diff(e.lhs()) - diff(e.rhs());
    case Kind::Mul: return diff(e.lhs()) * e.rhs() + e.lhs() * diff(e.rhs());
    case Kind::Div: {
      MeroExpr u = e.lhs(), v = e.rhs();
      return (diff(u) * v - u * diff(v)) / v.pow(2);
    }
    case Kind::Neg: return -diff(e.lhs());
    case Kind::Pow: {
      int k = e.exponent();
      if (k == 0) return MeroExpr::constant(0.0);
      MeroExpr u = e.lhs();
      return MeroExpr::constant(static_cast<double>(k)) * u.pow(k - 1) * diff(u);
    }
    case Kind::Exp: return e * diff(e.lhs());
  }
  return MeroExpr::constant(0.0);
}

MeroExpr substitute(const MeroExpr& e, const MeroExpr& inner) {
  if (e.is_constant()) return e;
  switch (e.kind()) {
    case Kind::Variable: return inner;
    case Kind::Add: return substitute(e.lhs(), inner) + substitute(e.rhs(), inner);
    case Kind::Sub: return substitute(e.lhs(), inner) - substitute(e.rhs(), inner);
    case Kind::Mul: return substitute(e.lhs(), inner) * substitute(e.rhs(), inner);
    case Kind::Div: return substitute(e.lhs(), inner) / substitute(e.rhs(), inner);
    case Kind::Neg: return -substitute(e.lhs(), inner);
    case Kind::Pow: return substitute(e.lhs(), inner).pow(e.exponent());
    case Kind::Exp: return MeroExpr::exp(substitute(e.lhs(), inner));
    default: return e;
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// MeroExpr members

MeroExpr::MeroExpr() : node_(make_leaf(Kind::Variable, {})) {}

MeroExpr MeroExpr::constant(Complex c) {
  if (!finite(c)) throw Error(ErrorCode::NonFinite, "non-finite constant");
  return MeroExpr(make_leaf(Kind::Constant, c));
}

MeroExpr MeroExpr::raw_binary(Kind kind, const MeroExpr& lhs, const MeroExpr& rhs) {
  if (kind != Kind::Add && kind != Kind::Sub && kind != Kind::Mul && kind != Kind::Div) {
    throw Error(ErrorCode::InvalidArgument, "raw_binary: not a binary kind");
  }
  return MeroExpr(make_node(kind, lhs.node_, rhs.node_));
}

MeroExpr MeroExpr::raw_neg(const MeroExpr& operand) {
  return MeroExpr(make_node(Kind::Neg, operand.node_, nullptr));
}

MeroExpr MeroExpr::raw_pow(const MeroExpr& base, int exponent) {
  return MeroExpr(make_node(Kind::Pow, base.node_, nullptr, exponent));
}

MeroExpr MeroExpr::raw_exp(const MeroExpr& operand) {
  return MeroExpr(make_node(Kind::Exp, operand.node_, nullptr));
}

MeroExpr MeroExpr::pow(int k) const {
  if (k == 0) return constant(1.0);
  if (k == 1) return *this;
  if (is_const(node_)) {
    Complex c = node_->value;
    if (!(k < 0 && c == Complex(0.0, 0.0))) {
      Complex v = ipow(c, k);
      if (finite(v)) return constant(v);
    }
  }
  if (node_->kind == Kind::Pow) {
    long combined = static_cast<long>(node_->exponent) * k;
    if (combined > -(1L << 30) && combined < (1L << 30)) {
      return MeroExpr(node_->a).pow(static_cast<int>(combined));
    }
  }
  return raw_pow(*this, k);
}

MeroExpr MeroExpr::exp(const MeroExpr& operand) {
  if (is_const(operand.node_)) {
    Complex v = std::exp(operand.node_->value);
    if (finite(v)) return constant(v);
  }
  return raw_exp(operand);
}

MeroExpr operator+(const MeroExpr& a, const MeroExpr& b) {
  if (is_const(a.node_) && is_const(b.node_)) return MeroExpr::constant(a.node_->value + b.node_->value);
  if (is_const(a.node_, 0.0)) return b;
  if (is_const(b.node_, 0.0)) return a;
  return MeroExpr::raw_binary(Kind::Add, a, b);
}

MeroExpr operator-(const MeroExpr& a, const MeroExpr& b) {
  if (is_const(a.node_) && is_const(b.node_)) return MeroExpr::constant(a.node_->value - b.node_->value);
  if (is_const(b.node_, 0.0)) return a;
  if (is_const(a.node_, 0.0)) return -b;
  return MeroExpr::raw_binary(Kind::Sub, a, b);
}

MeroExpr operator*(const MeroExpr& a, const MeroExpr& b) {
  if (is_const(a.node_) && is_const(b.node_)) return MeroExpr::constant(a.node_->value * b.node_->value);
  if (is_const(a.node_, 0.0) || is_const(b.node_, 0.0)) return MeroExpr::constant(0.0);
  if (is_const(a.node_, 1.0)) return b;
  if (is_const(b.node_, 1.0)) return a;
  if (is_const(a.node_, -1.0)) return -b;
  if (is_const(b.node_, -1.0)) return -a;
  return MeroExpr::raw_binary(Kind::Mul, a, b);
}

MeroExpr operator/(const MeroExpr& a, const MeroExpr& b) {
  if (is_const(b.node_, 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "division by the zero constant");
  }
  if (is_const(a.node_) && is_const(b.node_)) return MeroExpr::constant(a.node_->value / b.node_->value);
  if (is_const(a.node_, 0.0)) return MeroExpr::constant(0.0);
  if (is_const(b.node_, 1.0)) return a;
  return MeroExpr::raw_binary(Kind::Div, a, b);
}

MeroExpr operator-(const MeroExpr& a) {
  if (is_const(a.node_)) return MeroExpr::constant(-a.node_->value);
  if (a.node_->kind == Kind::Neg) return MeroExpr(a.node_->a);
  return MeroExpr::raw_neg(a);
}

MeroExpr::Kind MeroExpr::kind() const noexcept { return node_->kind; }
Complex MeroExpr::constant_value() const noexcept { return node_->value; }
int MeroExpr::exponent() const noexcept { return node_->exponent; }

MeroExpr MeroExpr::lhs() const {
  if (!node_->a) throw Error(ErrorCode::InvalidArgument, "leaf has no operands");
  return MeroExpr(node_->a);
}

MeroExpr MeroExpr::rhs() const {
  if (!node_->b) throw Error(ErrorCode::InvalidArgument, "node has no right operand");
  return MeroExpr(node_->b);
}

bool MeroExpr::is_rational() const noexcept { return node_->rational; }
bool MeroExpr::is_constant() const noexcept { return node_->constant; }
std::size_t MeroExpr::node_count() const noexcept { return node_->count; }

CompiledExpr::CompiledExpr(const MeroExpr& e) {
  std::unordered_map<const MeroExpr::Node*, int> slot;
  auto emit = [&](auto&& self, const MeroExpr::Node* n) -> int {
    if (auto it = slot.find(n); it != slot.end()) return it->second;
    Instr ins{n->kind};
    ins.value = n->value;
    ins.exponent = n->exponent;
    if (n->a) ins.a = self(self, n->a.get());
    if (n->b) ins.b = self(self, n->b.get());
    code_.push_back(ins);
    int id = static_cast<int>(code_.size()) - 1;
    slot.emplace(n, id);
    return id;
  };
  emit(emit, ExprAccess::node(e).get());
}

std::optional<Complex> CompiledExpr::operator()(Complex z) const noexcept {
  constexpr std::size_t kInline = 64;
  std::array<Complex, kInline> small;
  std::vector<Complex> large;
  Complex* r = small.data();
  if (code_.size() > kInline) {
    large.resize(code_.size());
    r = large.data();
  }
  for (std::size_t i = 0; i < code_.size(); ++i) {
    const Instr& ins = code_[i];
    Complex out;
    switch (ins.kind) {
      case Kind::Constant: out = ins.value; break;
      case Kind::Variable: out = z; break;
      case Kind::Neg: out = -r[ins.a]; break;
      case Kind::Exp: out = std::exp(r[ins.a]); break;
      case Kind::Pow:
        if (ins.exponent < 0 && r[ins.a] == Complex(0.0, 0.0)) return std::nullopt;
        out = ipow(r[ins.a], ins.exponent);
        break;
      case Kind::Add: out = r[ins.a] + r[ins.b]; break;
      case Kind::Sub: out = r[ins.a] - r[ins.b]; break;
      case Kind::Mul: out = cmul(r[ins.a], r[ins.b]); break;
      case Kind::Div:
        if (r[ins.b] == Complex(0.0, 0.0)) return std::nullopt;
        out = cdiv(r[ins.a], r[ins.b]);
        break;
    }
    if (!finite(out)) return std::nullopt;
    r[i] = out;
  }
  if (code_.empty()) return std::nullopt;
  return r[code_.size() - 1];
}

std::optional<Complex> MeroExpr::try_eval(Complex z) const noexcept {
  Complex out;
  if (!try_eval_node(node_.get(), z, out)) return std::nullopt;
  return out;
}

ExtComplex MeroExpr::eval(Complex z, const LocalOrderOptions& opts) const {
  return eval_ext(*this, z, opts);
}

std::string MeroExpr::to_string() const {
  std::string out;
  print_node(node_, out);
  return out;
}

bool MeroExpr::structurally_equal(const MeroExpr& other) const noexcept {
  return equal_nodes(node_, other.node_);
}

// ---------------------------------------------------------------------------
// Free functions

ExtComplex eval_ext(const MeroExpr& e, Complex z, const LocalOrderOptions& opts) {
  if (!finite(z)) throw Error(ErrorCode::NonFinite, "evaluation point must be finite");
  if (auto v = e.try_eval(z)) return ExtComplex(*v);
  Val v = eval_node(ExprAccess::node(e), z, opts);
  if (v.is_inf()) return ExtComplex::infinity();
  return ExtComplex(v.v);
}

MeroExpr derivative(const MeroExpr& e) { return diff(e); }

MeroExpr compose(const MeroExpr& outer, const MeroExpr& inner) { return substitute(outer, inner); }

double local_order_slope(const MeroExpr& e, Complex z0, const LocalOrderOptions& opts) {
  if (!e.is_rational()) {
    throw Error(ErrorCode::Precondition, "local_order requires a rational expression");
  }
  if (opts.radii.size() < 2 || opts.angles < 1) {
    throw Error(ErrorCode::InvalidArgument, "local_order needs at least two radii");
  }
  // Offset angle avoids landing on axis-aligned special points.
  constexpr double kPhase = 0.3183098861837907;
  std::vector<double> xs, ys;
  for (double r : opts.radii) {
    double acc = 0.0;
    for (int j = 0; j < opts.angles; ++j) {
      double t = kPhase + 2.0 * std::numbers::pi * j / opts.angles;
      Complex p = z0 + std::polar(r, t);
      Val v = eval_node(ExprAccess::node(e), p, opts);
      double mag = v.state == Val::State::Finite ? std::abs(v.v) : 0.0;
      if (v.state != Val::State::Finite || mag == 0.0 || !std::isfinite(std::log(mag))) {
        throw Error(ErrorCode::OrderUndetermined,
                    "local_order: singular or zero sample near the point");
      }
      acc += std::log(mag);
    }
    xs.push_back(std::log(r));
    ys.push_back(acc / opts.angles);
  }
  const double n = static_cast<double>(xs.size());
  double mx = 0, my = 0;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    mx += xs[k];
    my += ys[k];
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    sxx += (xs[k] - mx) * (xs[k] - mx);
    sxy += (xs[k] - mx) * (ys[k] - my);
  }
  return sxy / sxx;
}

int local_order(const MeroExpr& e, Complex z0, const LocalOrderOptions& opts) {
  double slope = local_order_slope(e, z0, opts);
  double rounded = std::round(slope);
  if (std::abs(slope - rounded) > opts.snap_tolerance) {
    throw Error(ErrorCode::OrderUndetermined,
                "local_order: fitted slope " + std::to_string(slope) + " is not near an integer");
  }
  return static_cast<int>(rounded);
}

}  // namespace weierlab
