#include <cctype>
#include <charconv>
#include <climits>
#include <string>

#include "weierlab/errors.hpp"
#include "weierlab/mero_expr.hpp"

namespace weierlab {
namespace {

class Parser {
 public:
  explicit Parser(std::string_view src) : src_(src) {}

  MeroExpr parse() {
    MeroExpr e = expr();
    skip_ws();
    if (pos_ != src_.size()) fail("unexpected trailing input");
    return e;
  }

 private:
  using Kind = MeroExpr::Kind;

  [[noreturn]] void fail(const std::string& msg) const {
    throw Error(ErrorCode::Syntax, msg + " at byte " + std::to_string(pos_), pos_);
  }

  void skip_ws() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < src_.size() && src_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }

  MeroExpr expr() {
    MeroExpr lhs = term();
    for (;;) {
      if (accept('+')) {
        lhs = MeroExpr::raw_binary(Kind::Add, lhs, term());
      } else if (accept('-')) {
        lhs = MeroExpr::raw_binary(Kind::Sub, lhs, term());
      } else {
        return lhs;
      }
    }
  }

  MeroExpr term() {
    MeroExpr lhs = factor();
    for (;;) {
      if (accept('*')) {
        lhs = MeroExpr::raw_binary(Kind::Mul, lhs, factor());
      } else if (accept('/')) {
        lhs = MeroExpr::raw_binary(Kind::Div, lhs, factor());
      } else {
        return lhs;
      }
    }
  }

  MeroExpr factor() {
    MeroExpr base = atom();
    if (accept('^')) return MeroExpr::raw_pow(base, integer());
    return base;
  }

  int integer() {
    skip_ws();
    std::size_t start = pos_;
    bool negative = false;
    if (pos_ < src_.size() && src_[pos_] == '-') {
      negative = true;
      ++pos_;
    }
    std::size_t digits = pos_;
    while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    if (pos_ == digits) {
      pos_ = start;
      fail("expected integer exponent");
    }
    long value = 0;
    auto res = std::from_chars(src_.data() + digits, src_.data() + pos_, value);
    if (res.ec != std::errc() || value > INT_MAX) {
      pos_ = start;
      fail("exponent out of range");
    }
    return static_cast<int>(negative ? -value : value);
  }

  MeroExpr atom() {
    skip_ws();
    if (pos_ >= src_.size()) fail("unexpected end of input");
    char c = src_[pos_];
    if (c == '(') {
      ++pos_;
      MeroExpr e = expr();
      expect(')');
      return e;
    }
    if (c == '-') {
      ++pos_;
      return MeroExpr::raw_neg(atom());
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t start = pos_;
      while (pos_ < src_.size() &&
             (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) {
        ++pos_;
      }
      std::string_view ident = src_.substr(start, pos_ - start);
      if (ident == "z") return MeroExpr::variable();
      if (ident == "i") return MeroExpr::constant(Complex(0.0, 1.0));
      if (ident == "exp") {
        expect('(');
        MeroExpr arg = expr();
        expect(')');
        return MeroExpr::raw_exp(arg);
      }
      throw Error(ErrorCode::UnknownIdentifier,
                  "unknown identifier '" + std::string(ident) + "' at byte " + std::to_string(start),
                  start);
    }
    fail(std::string("unexpected character '") + c + "'");
  }

  // Decimal literal: digits ['.' digits] | '.' digits
  MeroExpr number() {
    std::size_t start = pos_;
    auto digit = [&](std::size_t p) {
      return p < src_.size() && std::isdigit(static_cast<unsigned char>(src_[p]));
    };
    std::size_t int_digits = 0;
    while (digit(pos_)) {
      ++pos_;
      ++int_digits;
    }
    std::size_t frac_digits = 0;
    if (pos_ < src_.size() && src_[pos_] == '.') {
      ++pos_;
      while (digit(pos_)) {
        ++pos_;
        ++frac_digits;
      }
    }
    if (int_digits + frac_digits == 0) {
      pos_ = start;
      fail("malformed number");
    }
    double value = 0.0;
    auto res = std::from_chars(src_.data() + start, src_.data() + pos_, value,
                               std::chars_format::fixed);
    if (res.ec != std::errc() || res.ptr != src_.data() + pos_) {
      pos_ = start;
      fail("malformed number");
    }
    return MeroExpr::constant(value);
  }

  std::string_view src_;
  std::size_t pos_ = 0;
};

}  // namespace

MeroExpr parse_mero(std::string_view src) { return Parser(src).parse(); }

}  // namespace weierlab
