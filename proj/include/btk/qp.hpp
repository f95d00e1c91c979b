#pragma once

// Exact elements of Q_p, stored as reduced rationals. Every field value has
// exactly one representation, so == is field equality.

#include <gmpxx.h>

#include <cstdint>
#include <functional>
#include <string>
#include <string_view>

#include "btk/error.hpp"
#include "btk/valuation.hpp"

namespace btk {

class Qp {
 public:
  static constexpr const char* backend_name = "qp";

  Qp() = default;
  Qp(std::uint32_t p, mpq_class value) : value_(std::move(value)), p_(p) { value_.canonicalize(); }

  static Qp from_int(std::uint32_t p, long n) { return Qp(p, mpq_class(n)); }
  static Qp zero(std::uint32_t p) { return from_int(p, 0); }
  static Qp one(std::uint32_t p) { return from_int(p, 1); }
  static Qp uniformizer(std::uint32_t p) { return from_int(p, static_cast<long>(p)); }

  /// p^k for any integer k.
  static Qp uniformizer_pow(std::uint32_t p, std::int64_t k) {
    mpz_class power;
    mpz_ui_pow_ui(power.get_mpz_t(), p, static_cast<unsigned long>(k < 0 ? -k : k));
    if (k >= 0) return Qp(p, mpq_class(power));
    return Qp(p, mpq_class(mpz_class(1), power));
  }

  /// sum of digits[i] * p^i; digits are residues in [0, p).
  template <class Digits>
  static Qp from_digits(std::uint32_t p, const Digits& digits) {
    mpz_class acc = 0;
    for (auto it = digits.rbegin(); it != digits.rend(); ++it) acc = acc * p + *it;
    return Qp(p, mpq_class(acc));
  }

  std::uint32_t prime() const { return p_; }
  const mpq_class& value() const { return value_; }

  bool is_zero() const { return value_ == 0; }

  Valuation valuation() const {
    if (is_zero()) return Valuation::infinity();
    return Valuation(multiplicity(value_.get_num()) - multiplicity(value_.get_den()));
  }

  /// Image in the residue field o/p = Z/p.
  std::uint32_t residue() const {
    Valuation v = valuation();
    if (v < Valuation(0)) fail(ErrorCode::negative_valuation, "residue of " + str());
    if (v > Valuation(0)) return 0;
    unsigned long num = mpz_fdiv_ui(value_.get_num_mpz_t(), p_);
    unsigned long den = mpz_fdiv_ui(value_.get_den_mpz_t(), p_);
    mpz_class inv;
    mpz_class den_z(den), p_z(p_);
    mpz_invert(inv.get_mpz_t(), den_z.get_mpz_t(), p_z.get_mpz_t());
    return static_cast<std::uint32_t>((num * inv.get_ui()) % p_);
  }

  /// Canonical representative of x mod p^n: an integer in [0, p^n).
  Qp truncate(unsigned n) const {
    if (valuation() < Valuation(0)) fail(ErrorCode::negative_valuation, "truncate of " + str());
    if (n == 0 || is_zero()) return zero(p_);
    mpz_class modulus;
    mpz_ui_pow_ui(modulus.get_mpz_t(), p_, n);
    mpz_class inv;
    mpz_invert(inv.get_mpz_t(), value_.get_den_mpz_t(), modulus.get_mpz_t());
    mpz_class r = value_.get_num() * inv;
    mpz_fdiv_r(r.get_mpz_t(), r.get_mpz_t(), modulus.get_mpz_t());
    return Qp(p_, mpq_class(r));
  }

  /// Canonical representative of the class of x in F/o: zero, or a/p^k with 0 < a < p^k.
  Qp frac() const {
    Valuation v = valuation();
    if (v >= Valuation(0)) return zero(p_);
    const auto k = static_cast<unsigned>(-v.value());
    Qp lifted = (*this * uniformizer_pow(p_, k)).truncate(k);
    return lifted * uniformizer_pow(p_, -static_cast<std::int64_t>(k));
  }

  /// x / p^v(x); a unit of o.
  Qp unit_part() const {
    if (is_zero()) fail(ErrorCode::division_by_zero, "unit part of 0");
    return *this * uniformizer_pow(p_, -valuation().value());
  }

  Qp inverse() const {
    if (is_zero()) fail(ErrorCode::division_by_zero, "inverse of 0");
    return Qp(p_, 1 / value_);
  }

  friend Qp operator+(const Qp& x, const Qp& y) { return Qp(join(x, y), x.value_ + y.value_); }
  friend Qp operator-(const Qp& x, const Qp& y) { return Qp(join(x, y), x.value_ - y.value_); }
  friend Qp operator*(const Qp& x, const Qp& y) { return Qp(join(x, y), x.value_ * y.value_); }
  friend Qp operator/(const Qp& x, const Qp& y) {
    if (y.is_zero()) fail(ErrorCode::division_by_zero, "division by 0");
    return Qp(join(x, y), x.value_ / y.value_);
  }
  Qp operator-() const { return Qp(p_, -value_); }
  Qp& operator+=(const Qp& y) { return *this = *this + y; }
  Qp& operator-=(const Qp& y) { return *this = *this - y; }
  Qp& operator*=(const Qp& y) { return *this = *this * y; }

  friend bool operator==(const Qp& x, const Qp& y) { return x.value_ == y.value_; }

  /// Deterministic total order on canonical forms (denominator, then numerator).
  friend int compare(const Qp& x, const Qp& y) {
    int c = cmp(x.value_.get_den(), y.value_.get_den());
    if (c == 0) c = cmp(x.value_.get_num(), y.value_.get_num());
    return c < 0 ? -1 : (c > 0 ? 1 : 0);
  }

  std::string str() const { return value_.get_str(); }

  /// Accepts "n" or "n/d" with an optional leading ASCII or Unicode minus sign.
  static Qp parse(std::uint32_t p, std::string_view text) {
    std::string s;
    for (std::size_t i = 0; i < text.size(); ++i) {
      if (text.compare(i, 3, "\xE2\x88\x92") == 0) {
        s.push_back('-');
        i += 2;
      } else if (text[i] != ' ' && text[i] != '\t') {
        s.push_back(text[i]);
      }
    }
    if (s.empty()) fail(ErrorCode::parse_error, "empty scalar");
    auto slash = s.find('/');
    auto valid_int = [](std::string_view t, bool allow_sign) {
      if (allow_sign && !t.empty() && (t[0] == '-' || t[0] == '+')) t.remove_prefix(1);
      if (t.empty()) return false;
      for (char ch : t)
        if (ch < '0' || ch > '9') return false;
      return true;
    };
    std::string num = s.substr(0, slash);
    std::string den = slash == std::string::npos ? "1" : s.substr(slash + 1);
    if (!valid_int(num, true) || !valid_int(den, false)) fail(ErrorCode::parse_error, "bad rational '" + std::string(text) + "'");
    if (num[0] == '+') num.erase(0, 1);
    mpz_class n(num), d(den);
    if (d == 0) fail(ErrorCode::division_by_zero, "zero denominator in '" + std::string(text) + "'");
    return Qp(p, mpq_class(n, d));
  }

  std::size_t hash() const {
    return std::hash<std::string>{}(value_.get_str(16));
  }

 private:
  std::int64_t multiplicity(const mpz_class& n) const {
    if (n == 0) return 0;
    mpz_class rest, prime(p_);
    return static_cast<std::int64_t>(mpz_remove(rest.get_mpz_t(), n.get_mpz_t(), prime.get_mpz_t()));
  }

  static std::uint32_t join(const Qp& x, const Qp& y) {
    if (x.p_ != y.p_ && x.p_ != 0 && y.p_ != 0) fail(ErrorCode::prime_mismatch, "operands over different primes");
    return x.p_ != 0 ? x.p_ : y.p_;
  }

  mpq_class value_;
  std::uint32_t p_ = 0;
};

}  // namespace btk
