#include "netmon/error.hpp"

namespace netmon {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::invalid_edge: return "invalid-edge";
    case ErrorCode::incomplete_attributes: return "incomplete-attributes";
    case ErrorCode::unknown_category: return "unknown-category";
    case ErrorCode::empty_window: return "empty-window";
    case ErrorCode::inhomogeneous_stream: return "inhomogeneous-stream";
    case ErrorCode::dimension_mismatch: return "dimension-mismatch";
    case ErrorCode::singular_design: return "singular-design";
    case ErrorCode::separation: return "separation";
    case ErrorCode::numerically_singular: return "numerically-singular";
    case ErrorCode::initialization: return "initialization";
    case ErrorCode::insufficient_reference: return "insufficient-reference";
    case ErrorCode::calibration_range: return "calibration-range";
    case ErrorCode::nonstationary: return "nonstationary";
    case ErrorCode::invalid_argument: return "invalid-argument";
    case ErrorCode::parse: return "parse";
    case ErrorCode::io: return "io";
  }
  return "unknown";
}

}  // namespace netmon
