#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace btk {

enum class ErrorCode {
  negative_valuation,
  division_by_zero,
  not_prime,
  prime_mismatch,
  parse_error,
  singular_matrix,
  not_in_b,
  not_in_i,
  not_in_subgroup,
  zero_vector,
  equal_ends,
  not_distinct,
  distance_mismatch,
  vertex_not_on_apartment,
  domain_too_small,
  radius_too_small,
  capacity,
  invalid_local_aut,
  unknown_suite,
  internal,
};

constexpr std::string_view error_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::negative_valuation: return "NEGATIVE_VALUATION";
    case ErrorCode::division_by_zero: return "DIVISION_BY_ZERO";
    case ErrorCode::not_prime: return "NOT_PRIME";
    case ErrorCode::prime_mismatch: return "PRIME_MISMATCH";
    case ErrorCode::parse_error: return "PARSE_ERROR";
    case ErrorCode::singular_matrix: return "SINGULAR_MATRIX";
    case ErrorCode::not_in_b: return "NOT_IN_B";
    case ErrorCode::not_in_i: return "NOT_IN_I";
    case ErrorCode::not_in_subgroup: return "NOT_IN_SUBGROUP";
    case ErrorCode::zero_vector: return "ZERO_VECTOR";
    case ErrorCode::equal_ends: return "EQUAL_ENDS";
    case ErrorCode::not_distinct: return "NOT_DISTINCT";
    case ErrorCode::distance_mismatch: return "DISTANCE_MISMATCH";
    case ErrorCode::vertex_not_on_apartment: return "VERTEX_NOT_ON_APARTMENT";
    case ErrorCode::domain_too_small: return "DOMAIN_TOO_SMALL";
    case ErrorCode::radius_too_small: return "RADIUS_TOO_SMALL";
    case ErrorCode::capacity: return "CAPACITY";
    case ErrorCode::invalid_local_aut: return "INVALID_LOCAL_AUT";
    case ErrorCode::unknown_suite: return "UNKNOWN_SUITE";
    case ErrorCode::internal: return "INTERNAL";
  }
  return "UNKNOWN";
}

/// Every failure raised by the library carries one of the codes above.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(error_name(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

}  // namespace btk
