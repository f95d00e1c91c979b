#pragma once

// Exact elements of F_p((t)) restricted to rational functions N/D over F_p,
// kept reduced with D monic. The uniformizer is t.

#include <cctype>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "btk/error.hpp"
#include "btk/poly.hpp"
#include "btk/valuation.hpp"

namespace btk {

class Laurent {
 public:
  static constexpr const char* backend_name = "laurent";

  Laurent() = default;
  Laurent(std::uint32_t p, detail::FpPoly num, detail::FpPoly den) : num_(std::move(num)), den_(std::move(den)), p_(p) {
    canonicalize();
  }

  static Laurent from_int(std::uint32_t p, long n) {
    long r = n % static_cast<long>(p);
    if (r < 0) r += p;
    return Laurent(p, r == 0 ? detail::FpPoly{} : detail::FpPoly{static_cast<detail::Coeff>(r)}, {1});
  }
  static Laurent zero(std::uint32_t p) { return Laurent(p, {}, {1}); }
  static Laurent one(std::uint32_t p) { return from_int(p, 1); }
  static Laurent uniformizer(std::uint32_t p) { return Laurent(p, {0, 1}, {1}); }

  static Laurent uniformizer_pow(std::uint32_t p, std::int64_t k) {
    detail::FpPoly mono(static_cast<std::size_t>(k < 0 ? -k : k) + 1, 0);
    mono.back() = 1;
    if (k >= 0) return Laurent(p, mono, {1});
    return Laurent(p, {1}, mono);
  }

  template <class Digits>
  static Laurent from_digits(std::uint32_t p, const Digits& digits) {
    detail::FpPoly f(digits.begin(), digits.end());
    for (auto& c : f) c %= p;
    detail::trim(f);
    return Laurent(p, f, {1});
  }

  std::uint32_t prime() const { return p_; }
  const detail::FpPoly& numerator() const { return num_; }
  const detail::FpPoly& denominator() const { return den_; }

  bool is_zero() const { return num_.empty(); }

  Valuation valuation() const {
    if (is_zero()) return Valuation::infinity();
    return Valuation(detail::low_degree(num_) - detail::low_degree(den_));
  }

  std::uint32_t residue() const {
    Valuation v = valuation();
    if (v < Valuation(0)) fail(ErrorCode::negative_valuation, "residue of " + str());
    if (v > Valuation(0)) return 0;
    const auto nl = static_cast<std::size_t>(detail::low_degree(num_));
    const auto dl = static_cast<std::size_t>(detail::low_degree(den_));
    return detail::mod_mul(num_[nl], detail::mod_inv(den_[dl], p_), p_);
  }

  /// Canonical representative of x mod t^n: a polynomial of degree < n.
  Laurent truncate(unsigned n) const {
    if (valuation() < Valuation(0)) fail(ErrorCode::negative_valuation, "truncate of " + str());
    if (n == 0 || is_zero()) return zero(p_);
    const int k = detail::low_degree(den_);
    detail::FpPoly num = detail::poly_unshift(num_, k);
    detail::FpPoly den = detail::poly_unshift(den_, k);
    // power series long division: num / den mod t^n, den(0) != 0
    const detail::Coeff d0_inv = detail::mod_inv(den[0], p_);
    detail::FpPoly q(n, 0);
    for (unsigned i = 0; i < n; ++i) {
      detail::Coeff acc = i < num.size() ? num[i] : 0;
      for (unsigned j = 1; j <= i && j < den.size(); ++j) acc = detail::mod_sub(acc, detail::mod_mul(den[j], q[i - j], p_), p_);
      q[i] = detail::mod_mul(acc, d0_inv, p_);
    }
    detail::trim(q);
    return Laurent(p_, q, {1});
  }

  /// Canonical representative of the class of x in F/o: a sum of strictly negative powers of t.
  Laurent frac() const {
    Valuation v = valuation();
    if (v >= Valuation(0)) return zero(p_);
    const auto k = static_cast<unsigned>(-v.value());
    Laurent lifted = (*this * uniformizer_pow(p_, k)).truncate(k);
    return lifted * uniformizer_pow(p_, -static_cast<std::int64_t>(k));
  }

  Laurent unit_part() const {
    if (is_zero()) fail(ErrorCode::division_by_zero, "unit part of 0");
    return *this * uniformizer_pow(p_, -valuation().value());
  }

  Laurent inverse() const {
    if (is_zero()) fail(ErrorCode::division_by_zero, "inverse of 0");
    return Laurent(p_, den_, num_);
  }

  friend Laurent operator+(const Laurent& x, const Laurent& y) {
    const auto p = join(x, y);
    if (x.den_ == y.den_) return Laurent(p, detail::poly_add(x.num_, y.num_, p), x.den_);
    return Laurent(p, detail::poly_add(detail::poly_mul(x.num_, y.den_, p), detail::poly_mul(y.num_, x.den_, p), p),
                   detail::poly_mul(x.den_, y.den_, p));
  }
  friend Laurent operator-(const Laurent& x, const Laurent& y) { return x + (-y); }
  friend Laurent operator*(const Laurent& x, const Laurent& y) {
    const auto p = join(x, y);
    return Laurent(p, detail::poly_mul(x.num_, y.num_, p), detail::poly_mul(x.den_, y.den_, p));
  }
  friend Laurent operator/(const Laurent& x, const Laurent& y) {
    if (y.is_zero()) fail(ErrorCode::division_by_zero, "division by 0");
    return x * y.inverse();
  }
  Laurent operator-() const {
    Laurent r = *this;
    r.num_ = detail::poly_neg(num_, p_);
    return r;
  }
  Laurent& operator+=(const Laurent& y) { return *this = *this + y; }
  Laurent& operator-=(const Laurent& y) { return *this = *this - y; }
  Laurent& operator*=(const Laurent& y) { return *this = *this * y; }

  friend bool operator==(const Laurent& x, const Laurent& y) { return x.num_ == y.num_ && x.den_ == y.den_; }

  friend int compare(const Laurent& x, const Laurent& y) {
    int c = detail::poly_compare(x.den_, y.den_);
    return c != 0 ? c : detail::poly_compare(x.num_, y.num_);
  }

  /// "t^-2 + 1 + 2*t^3" when the denominator is a power of t, otherwise "(N)/(D)".
  std::string str() const {
    if (is_zero()) return "0";
    const int k = detail::low_degree(den_);
    if (static_cast<std::size_t>(k) + 1 == den_.size()) return terms_str(num_, -k);
    return "(" + terms_str(num_, 0) + ")/(" + terms_str(den_, 0) + ")";
  }

  static Laurent parse(std::uint32_t p, std::string_view text) {
    auto split = text.find(")/(");
    if (split != std::string_view::npos) {
      std::string_view lhs = strip(text.substr(0, split + 1));
      std::string_view rhs = strip(text.substr(split + 2));
      if (lhs.size() < 2 || rhs.size() < 2 || lhs.front() != '(' || rhs.back() != ')')
        fail(ErrorCode::parse_error, "bad fraction '" + std::string(text) + "'");
      Laurent den = parse_terms(p, rhs.substr(1, rhs.size() - 2));
      Laurent num = parse_terms(p, lhs.substr(1, lhs.size() - 2));
      if (den.is_zero()) fail(ErrorCode::division_by_zero, "zero denominator in '" + std::string(text) + "'");
      return num / den;
    }
    std::string_view body = strip(text);
    if (body.size() >= 2 && body.front() == '(' && body.back() == ')') body = body.substr(1, body.size() - 2);
    return parse_terms(p, body);
  }

  std::size_t hash() const {
    std::size_t h = 0;
    for (auto c : num_) h = h * 1000003U + c;
    for (auto c : den_) h = h * 998244353U + c;
    return h;
  }

 private:
  void canonicalize() {
    if (den_.empty()) fail(ErrorCode::division_by_zero, "zero denominator");
    for (auto& c : num_) c %= p_;
    for (auto& c : den_) c %= p_;
    detail::trim(num_);
    detail::trim(den_);
    if (den_.empty()) fail(ErrorCode::division_by_zero, "zero denominator");
    if (num_.empty()) {
      den_ = {1};
      return;
    }
    detail::FpPoly g = detail::poly_gcd(num_, den_, p_);
    if (g.size() > 1) {
      num_ = detail::poly_divmod(num_, g, p_).first;
      den_ = detail::poly_divmod(den_, g, p_).first;
    }
    const detail::Coeff lead_inv = detail::mod_inv(den_.back(), p_);
    if (lead_inv != 1) {
      num_ = detail::poly_scale(num_, lead_inv, p_);
      den_ = detail::poly_scale(den_, lead_inv, p_);
    }
  }

  static std::string terms_str(const detail::FpPoly& f, int offset) {
    std::string out;
    for (std::size_t i = 0; i < f.size(); ++i) {
      if (f[i] == 0) continue;
      const long e = static_cast<long>(i) + offset;
      if (!out.empty()) out += " + ";
      if (e == 0) {
        out += std::to_string(f[i]);
        continue;
      }
      if (f[i] != 1) out += std::to_string(f[i]) + "*";
      out += "t";
      if (e != 1) out += "^" + std::to_string(e);
    }
    return out.empty() ? "0" : out;
  }

  static std::string_view strip(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
  }

  // term := [int ['*']] 't' ['^' int] | int ; terms joined by '+' / '-'
  static Laurent parse_terms(std::uint32_t p, std::string_view text) {
    std::string s;
    for (std::size_t i = 0; i < text.size(); ++i) {
      if (text.compare(i, 3, "\xE2\x88\x92") == 0) {
        s.push_back('-');
        i += 2;
      } else if (!std::isspace(static_cast<unsigned char>(text[i]))) {
        s.push_back(text[i]);
      }
    }
    if (s.empty()) fail(ErrorCode::parse_error, "empty scalar");
    auto bad = [&] { fail(ErrorCode::parse_error, "bad Laurent expression '" + std::string(text) + "'"); };
    std::size_t pos = 0;
    auto read_int = [&](long& out) {
      std::size_t start = pos;
      bool neg = false;
      if (pos < s.size() && (s[pos] == '-' || s[pos] == '+')) neg = s[pos++] == '-';
      std::size_t digits = pos;
      unsigned long long v = 0;
      while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) {
        v = v * 10 + static_cast<unsigned>(s[pos] - '0');
        if (v > (1ULL << 40)) bad();
        ++pos;
      }
      if (pos == digits) {
        pos = start;
        return false;
      }
      out = neg ? -static_cast<long>(v) : static_cast<long>(v);
      return true;
    };
    Laurent acc = zero(p);
    bool first = true;
    while (pos < s.size()) {
      long sign = 1;
      if (s[pos] == '+' || s[pos] == '-') {
        sign = s[pos] == '-' ? -1 : 1;
        ++pos;
      } else if (!first) {
        bad();
      }
      first = false;
      long coeff = 1;
      bool have_coeff = read_int(coeff);
      bool have_t = false;
      long exp = 0;
      if (have_coeff && pos < s.size() && s[pos] == '*') {
        ++pos;
        if (pos >= s.size() || s[pos] != 't') bad();
      }
      if (pos < s.size() && s[pos] == 't') {
        have_t = true;
        ++pos;
        exp = 1;
        if (pos < s.size() && s[pos] == '^') {
          ++pos;
          if (!read_int(exp)) bad();
        }
      }
      if (!have_coeff && !have_t) bad();
      acc += from_int(p, sign * (coeff % static_cast<long>(p))) * uniformizer_pow(p, exp);
    }
    return acc;
  }

  static std::uint32_t join(const Laurent& x, const Laurent& y) {
    if (x.p_ != y.p_ && x.p_ != 0 && y.p_ != 0) fail(ErrorCode::prime_mismatch, "operands over different primes");
    return x.p_ != 0 ? x.p_ : y.p_;
  }

  detail::FpPoly num_;
  detail::FpPoly den_{1};
  std::uint32_t p_ = 0;
};

}  // namespace btk
