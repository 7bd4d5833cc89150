#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace weierlab {

enum class ErrorCode {
  Syntax,
  UnknownIdentifier,
  Indeterminate,
  OrderUndetermined,
  InvalidArgument,
  Precondition,
  RegularityViolation,
  NonHolomorphic,
  Puncture,
  StencilOutOfDomain,
  NonFinite,
  Disconnected,
  PropertyViolated,
  MeshTooCoarse,
  DetDrift,
  PoleOnPath,
  Degenerate,
  Io,
  Schema,
};

const char* to_string(ErrorCode code);

/// Single exception type for the library; `code()` is stable and is what the
/// CLI serializes into its machine-readable error objects.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what);
  Error(ErrorCode code, const std::string& what, std::size_t byte_offset);

  ErrorCode code() const noexcept { return code_; }
  /// Byte offset into the source text, set for parse errors only.
  std::optional<std::size_t> offset() const noexcept { return offset_; }

 private:
  ErrorCode code_;
  std::optional<std::size_t> offset_;
};

}  // namespace weierlab
