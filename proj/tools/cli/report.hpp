#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

namespace weierlab::cli {

/// Sorted keys, two-space indent, doubles printed with 17 significant digits.
/// Throws `Error(NonFinite)` naming the JSON pointer of a NaN or infinity.
std::string canonical_json(const nlohmann::json& j);

/// 64-bit FNV-1a.
std::uint64_t fnv1a(std::string_view bytes);

/// "fnv1a64:" followed by 16 hex digits of the canonical config text.
std::string config_hash(const nlohmann::json& config);

/// Writes the canonical form; refuses non-finite values before touching the
/// file.
void emit_report(const nlohmann::json& report, const std::string& path);

}  // namespace weierlab::cli
