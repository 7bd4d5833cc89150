#include "report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "weierlab/errors.hpp"

namespace weierlab::cli {

namespace {

void indent(std::string& out, int depth) { out.append(static_cast<std::size_t>(2 * depth), ' '); }

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  std::string s(buf);
  if (s.find_first_of(".e") == std::string::npos) s += ".0";
  return s;
}

void write(const nlohmann::json& j, std::string& out, int depth, const std::string& pointer) {
  switch (j.type()) {
    case nlohmann::json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ",\n";
        first = false;
        indent(out, depth + 1);
        out += nlohmann::json(it.key()).dump();
        out += ": ";
        write(it.value(), out, depth + 1, pointer + "/" + it.key());
      }
      out += "\n";
      indent(out, depth);
      out += "}";
      return;
    }
    case nlohmann::json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      out += "[\n";
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) out += ",\n";
        indent(out, depth + 1);
        write(j[i], out, depth + 1, pointer + "/" + std::to_string(i));
      }
      out += "\n";
      indent(out, depth);
      out += "]";
      return;
    }
    case nlohmann::json::value_t::number_float: {
      double v = j.get<double>();
      if (!std::isfinite(v)) {
        throw Error(ErrorCode::NonFinite,
                    "refusing to serialize non-finite value at '" + pointer + "'");
      }
      out += format_double(v);
      return;
    }
    default:
      out += j.dump();
  }
}

}  // namespace

std::string canonical_json(const nlohmann::json& j) {
  std::string out;
  write(j, out, 0, "");
  out += "\n";
  return out;
}

std::uint64_t fnv1a(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

std::string config_hash(const nlohmann::json& config) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "fnv1a64:%016llx",
                static_cast<unsigned long long>(fnv1a(canonical_json(config))));
  return buf;
}

void emit_report(const nlohmann::json& report, const std::string& path) {
  std::string text = canonical_json(report);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::Io, "cannot write '" + path + "'");
  out << text;
  if (!out) throw Error(ErrorCode::Io, "write failed for '" + path + "'");
}

}  // namespace weierlab::cli
