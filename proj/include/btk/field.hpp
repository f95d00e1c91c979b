#pragma once

#include <concepts>
#include <cstdint>
#include <string>
#include <string_view>

#include "btk/error.hpp"
#include "btk/laurent.hpp"
#include "btk/qp.hpp"
#include "btk/valuation.hpp"

namespace btk {

/// The operations every scalar backend provides. Scalars carry their prime.
template <class S>
concept LocalScalar = std::regular<S> && requires(const S& x, const S& y, std::uint32_t p, std::int64_t k, unsigned n) {
  { S::zero(p) } -> std::same_as<S>;
  { S::one(p) } -> std::same_as<S>;
  { S::from_int(p, 3L) } -> std::same_as<S>;
  { S::uniformizer_pow(p, k) } -> std::same_as<S>;
  { S::parse(p, std::string_view{}) } -> std::same_as<S>;
  { x.prime() } -> std::same_as<std::uint32_t>;
  { x.is_zero() } -> std::same_as<bool>;
  { x.valuation() } -> std::same_as<Valuation>;
  { x.residue() } -> std::same_as<std::uint32_t>;
  { x.truncate(n) } -> std::same_as<S>;
  { x.frac() } -> std::same_as<S>;
  { x.unit_part() } -> std::same_as<S>;
  { x.inverse() } -> std::same_as<S>;
  { x + y } -> std::same_as<S>;
  { x - y } -> std::same_as<S>;
  { x * y } -> std::same_as<S>;
  { x / y } -> std::same_as<S>;
  { -x } -> std::same_as<S>;
  { compare(x, y) } -> std::same_as<int>;
  { x.str() } -> std::same_as<std::string>;
};

enum class Backend { qp, laurent };

inline bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

/// Which local field: Q_p or F_p((t)). The residue field is always Z/p, so q = p.
struct FieldConfig {
  Backend backend = Backend::qp;
  std::uint32_t p = 2;

  static FieldConfig make(Backend backend, std::uint64_t p) {
    if (!is_prime(p) || p > 0xFFFFFFFFULL) fail(ErrorCode::not_prime, std::to_string(p) + " is not a prime");
    return FieldConfig{backend, static_cast<std::uint32_t>(p)};
  }

  std::uint32_t q() const { return p; }
};

inline std::string_view backend_name(Backend b) { return b == Backend::qp ? "qp" : "laurent"; }

inline Backend parse_backend(std::string_view s) {
  if (s == "qp") return Backend::qp;
  if (s == "laurent") return Backend::laurent;
  fail(ErrorCode::parse_error, "unknown backend '" + std::string(s) + "'");
}

template <LocalScalar S>
Valuation valuation(const S& x) {
  return x.valuation();
}

template <LocalScalar S>
std::uint32_t residue(const S& x) {
  return x.residue();
}

template <LocalScalar S>
S truncate(const S& x, unsigned n) {
  return x.truncate(n);
}

template <LocalScalar S>
bool is_integral(const S& x) {
  return x.valuation() >= Valuation(0);
}

template <LocalScalar S>
bool is_unit(const S& x) {
  return x.valuation() == Valuation(0);
}

/// Residue-class representative sum_i digit_i * uniformizer^i for index < p^n, digits base p.
template <LocalScalar S>
S residue_representative(std::uint32_t p, unsigned n, std::uint64_t index) {
  std::vector<std::uint32_t> digits(n, 0);
  for (unsigned i = 0; i < n; ++i) {
    digits[i] = static_cast<std::uint32_t>(index % p);
    index /= p;
  }
  return S::from_digits(p, digits);
}

}  // namespace btk
