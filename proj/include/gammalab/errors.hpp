#pragma once

#include <stdexcept>
#include <string>

namespace gammalab {

/// Stable error codes shared with the C API and the CLI exit-code mapping.
enum class ErrorCode : int {
  invalid_argument = 10,
  non_power_of_two = 11,
  dimension_mismatch = 12,
  kernel_inadmissible = 13,
  degenerate_moment = 14,
  under_resolved = 15,
  insufficient_resolution = 16,
  out_of_analytic_range = 17,
  ill_conditioned_fit = 18,
  truncation_failure = 19,
  io_error = 20,
  internal = 21,
};

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

inline void require(bool ok, ErrorCode code, const std::string& what) {
  if (!ok) fail(code, what);
}

}  // namespace gammalab
