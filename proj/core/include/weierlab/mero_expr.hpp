#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "weierlab/ext_complex.hpp"

namespace weierlab {

/// Numerical knobs for local order detection and 0/0 resolution.
struct LocalOrderOptions {
  std::vector<double> radii{1e-3, 1e-4, 1e-5};
  /// Maximum distance of the fitted log-slope from an integer.
  double snap_tolerance = 0.2;
  /// Sample angles per circle.
  int angles = 8;
};

/// Immutable expression tree for a meromorphic function of one variable `z`.
///
/// Nodes are shared between trees, so copying a `MeroExpr` is cheap and
/// expressions may be evaluated concurrently from many threads.
///
/// The arithmetic operators and `pow`/`exp` fold constants and drop neutral
/// elements (`0+x`, `1*x`, `x^1`, ...). The parser does not fold, so a parsed
/// tree mirrors the source text.
class MeroExpr {
 public:
  enum class Kind { Constant, Variable, Add, Sub, Mul, Div, Neg, Pow, Exp };

  /// The identity expression `z`.
  MeroExpr();

  static MeroExpr constant(Complex c);
  static MeroExpr variable() { return MeroExpr(); }

  /// Structural constructors without folding (parser output).
  static MeroExpr raw_binary(Kind kind, const MeroExpr& lhs, const MeroExpr& rhs);
  static MeroExpr raw_neg(const MeroExpr& operand);
  static MeroExpr raw_pow(const MeroExpr& base, int exponent);
  static MeroExpr raw_exp(const MeroExpr& operand);

  MeroExpr pow(int exponent) const;
  static MeroExpr exp(const MeroExpr& operand);

  friend MeroExpr operator+(const MeroExpr& a, const MeroExpr& b);
  friend MeroExpr operator-(const MeroExpr& a, const MeroExpr& b);
  friend MeroExpr operator*(const MeroExpr& a, const MeroExpr& b);
  friend MeroExpr operator/(const MeroExpr& a, const MeroExpr& b);
  friend MeroExpr operator-(const MeroExpr& a);

  Kind kind() const noexcept;
  /// Constant value; only meaningful for `Kind::Constant`.
  Complex constant_value() const noexcept;
  /// Integer exponent; only meaningful for `Kind::Pow`.
  int exponent() const noexcept;
  /// Operands. `lhs()` is the single operand of Neg/Pow/Exp.
  MeroExpr lhs() const;
  MeroExpr rhs() const;

  /// True when the tree has no `exp` node.
  bool is_rational() const noexcept;
  /// True when the tree does not mention `z`.
  bool is_constant() const noexcept;
  std::size_t node_count() const noexcept;

  /// Plain double-precision evaluation. Returns nullopt if any operation hits
  /// an exact division by zero or produces a non-finite intermediate.
  std::optional<Complex> try_eval(Complex z) const noexcept;

  /// Value on the extended plane; see `eval_ext`.
  ExtComplex eval(Complex z, const LocalOrderOptions& opts = {}) const;

  /// Printed form in the input grammar.
  std::string to_string() const;

  bool structurally_equal(const MeroExpr& other) const noexcept;

  struct Node;

 private:
  explicit MeroExpr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;

  friend class ExprAccess;
};

/// Flat instruction list for repeated plain evaluation of one expression.
/// Shared subtrees are evaluated once. Same semantics as `MeroExpr::try_eval`.
class CompiledExpr {
 public:
  CompiledExpr() = default;
  explicit CompiledExpr(const MeroExpr& e);

  std::optional<Complex> operator()(Complex z) const noexcept;
  std::size_t size() const noexcept { return code_.size(); }

 private:
  struct Instr {
    MeroExpr::Kind kind;
    int a = -1, b = -1;
    int exponent = 0;
    Complex value{};
  };
  std::vector<Instr> code_;
};

/// Parses the expression grammar
///
///     expr   := term (('+'|'-') term)*
///     term   := factor (('*'|'/') factor)*
///     factor := atom ('^' integer)?
///     atom   := number | 'i' | 'z' | 'exp' '(' expr ')' | '(' expr ')' | '-' atom
///
/// Numbers are plain decimal literals; integers accept a leading minus sign.
/// Throws `Error(Syntax)` or `Error(UnknownIdentifier)` carrying the byte offset.
MeroExpr parse_mero(std::string_view src);

/// Evaluates `e` at `z` on the Riemann sphere. Poles give infinity. A 0/0,
/// inf/inf, 0*inf or inf-inf site inside a rational subtree is replaced by the
/// local limit of that subtree; otherwise `Error(Indeterminate)` is thrown.
ExtComplex eval_ext(const MeroExpr& e, Complex z, const LocalOrderOptions& opts = {});

/// Exact symbolic derivative d/dz.
MeroExpr derivative(const MeroExpr& e);

/// Substitutes `inner` for every occurrence of `z` in `outer`.
MeroExpr compose(const MeroExpr& outer, const MeroExpr& inner);

/// Order of `e` at `z0`: positive for a zero, negative for a pole, 0 otherwise.
/// Estimated as the least-squares slope of log|e| against log r over the
/// configured radii. `e` must be rational.
int local_order(const MeroExpr& e, Complex z0, const LocalOrderOptions& opts = {});

/// Fitted slope before rounding, for diagnostics.
double local_order_slope(const MeroExpr& e, Complex z0, const LocalOrderOptions& opts = {});

}  // namespace weierlab
