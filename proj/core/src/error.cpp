#include "tailrisk/error.hpp"

namespace tailrisk {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::invalid_argument: return "invalid-argument";
    case ErrorCode::file_not_found: return "file-not-found";
    case ErrorCode::malformed_header: return "malformed-header";
    case ErrorCode::no_valid_rows: return "no-valid-rows";
    case ErrorCode::empty_catalog: return "empty-catalog";
    case ErrorCode::out_of_support: return "out-of-support";
    case ErrorCode::empty_sample: return "empty-sample";
    case ErrorCode::degenerate_sample: return "degenerate-sample";
    case ErrorCode::too_few_distinct_values: return "too-few-distinct-values";
    case ErrorCode::empty_segment: return "empty-segment";
    case ErrorCode::mismatched_fits: return "mismatched-fits";
    case ErrorCode::empty_extreme_tail: return "empty-extreme-tail";
    case ErrorCode::too_few_points: return "too-few-points";
    case ErrorCode::length_mismatch: return "length-mismatch";
    case ErrorCode::nonfinite_gradient: return "nonfinite-gradient";
    case ErrorCode::adaptation_failure: return "adaptation-failure";
    case ErrorCode::invalid_range: return "invalid-range";
  }
  return "unknown";
}

}  // namespace tailrisk
