#include "weierlab/errors.hpp"

namespace weierlab {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::Syntax: return "syntax";
    case ErrorCode::UnknownIdentifier: return "unknown_identifier";
    case ErrorCode::Indeterminate: return "indeterminate";
    case ErrorCode::OrderUndetermined: return "order_undetermined";
    case ErrorCode::InvalidArgument: return "invalid_argument";
    case ErrorCode::Precondition: return "precondition";
    case ErrorCode::RegularityViolation: return "regularity_violation";
    case ErrorCode::NonHolomorphic: return "non_holomorphic";
    case ErrorCode::Puncture: return "puncture";
    case ErrorCode::StencilOutOfDomain: return "stencil_out_of_domain";
    case ErrorCode::NonFinite: return "non_finite";
    case ErrorCode::Disconnected: return "disconnected";
    case ErrorCode::PropertyViolated: return "property_violated";
    case ErrorCode::MeshTooCoarse: return "mesh_too_coarse";
    case ErrorCode::DetDrift: return "det_drift";
    case ErrorCode::PoleOnPath: return "pole_on_path";
    case ErrorCode::Degenerate: return "degenerate";
    case ErrorCode::Io: return "io";
    case ErrorCode::Schema: return "schema";
  }
  return "unknown";
}

Error::Error(ErrorCode code, const std::string& what)
    : std::runtime_error(what), code_(code) {}

Error::Error(ErrorCode code, const std::string& what, std::size_t byte_offset)
    : std::runtime_error(what), code_(code), offset_(byte_offset) {}

}  // namespace weierlab
