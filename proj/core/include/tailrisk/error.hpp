#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace tailrisk {

enum class ErrorCode {
  invalid_argument,
  // catalog
  file_not_found,
  malformed_header,
  no_valid_rows,
  empty_catalog,
  // powerlaw
  out_of_support,
  empty_sample,
  degenerate_sample,
  too_few_distinct_values,
  empty_segment,
  mismatched_fits,
  empty_extreme_tail,
  too_few_points,
  // lgcp
  length_mismatch,
  nonfinite_gradient,
  adaptation_failure,
  // cli
  invalid_range,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Every failure raised by the library carries one of the codes above so that
/// callers (and the CLI exit status) can branch on the kind of failure.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

namespace detail {

inline void require(bool condition, ErrorCode code, const char* message) {
  if (!condition) throw Error(code, message);
}

}  // namespace detail
}  // namespace tailrisk
