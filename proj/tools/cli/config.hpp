#pragma once

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "weierlab/domain.hpp"
#include "weierlab/errors.hpp"
#include "weierlab/estimates.hpp"
#include "weierlab/mero_expr.hpp"
#include "weierlab/surfaces.hpp"

namespace weierlab::cli {

using Json = nlohmann::json;

/// Config validation failure; `pointer` is the JSON pointer of the field.
class SchemaError : public Error {
 public:
  SchemaError(std::string pointer, const std::string& what)
      : Error(ErrorCode::Schema, pointer + ": " + what), pointer_(std::move(pointer)) {}
  const std::string& pointer() const noexcept { return pointer_; }

 private:
  std::string pointer_;
};

/// Read-only view of a config node that remembers where it sits.
class Node {
 public:
  Node(const Json& j, std::string pointer) : j_(&j), pointer_(std::move(pointer)) {}

  const Json& json() const noexcept { return *j_; }
  const std::string& pointer() const noexcept { return pointer_; }

  bool has(const std::string& key) const;
  Node at(const std::string& key) const;
  Node at(std::size_t index) const;
  std::size_t size() const;

  [[noreturn]] void fail(const std::string& what) const;

  double number() const;
  double positive() const;
  int integer() const;
  int positive_integer() const;
  std::string string() const;
  bool boolean() const;
  /// [re, im] or a bare real.
  Complex complex() const;
  /// A complex value or the string "inf".
  ExtComplex ext_complex() const;
  MeroExpr expr() const;
  DomainSpec domain() const;
  PropertySpec property() const;
  std::vector<Complex> complex_list() const;
  std::vector<double> number_list() const;
  std::vector<int> integer_list() const;

  double number_or(const std::string& key, double fallback) const;
  int integer_or(const std::string& key, int fallback) const;
  std::string string_or(const std::string& key, const std::string& fallback) const;

 private:
  const Json* j_;
  std::string pointer_;
};

/// Parses a config document; a syntax error is a schema error at "".
Json load_config(const std::string& path);

/// Surface data with the class selected by the "class" key.
WeierstrassData surface_data(const Node& root);

Json to_json(Complex z);
Json to_json(const ExtComplex& v);
Json to_json(const DomainSpec& d);
Json to_json(const PropertySpec& p);

}  // namespace weierlab::cli
