#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace netmon {

enum class ErrorCode {
  invalid_edge,
  incomplete_attributes,
  unknown_category,
  empty_window,
  inhomogeneous_stream,
  dimension_mismatch,
  singular_design,
  separation,
  numerically_singular,
  initialization,
  insufficient_reference,
  calibration_range,
  nonstationary,
  invalid_argument,
  parse,
  io,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Every failure raised by the library carries one of the codes above so that
/// callers (and tests) can branch on the kind without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

}  // namespace netmon
