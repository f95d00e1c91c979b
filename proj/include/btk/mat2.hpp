#pragma once

#include <array>
#include <ostream>
#include <string>
#include <string_view>

#include "btk/error.hpp"
#include "btk/field.hpp"

namespace btk {

/// Invertible 2x2 matrix [[a, b], [c, d]] over a local field.
///
/// Products and inverses of invertible matrices stay invertible, so the
/// determinant check only runs at the boundaries (`checked`, `parse`).
template <LocalScalar S>
struct Mat2 {
  S a, b, c, d;

  static Mat2 checked(S a, S b, S c, S d) {
    Mat2 m{std::move(a), std::move(b), std::move(c), std::move(d)};
    if (m.det().is_zero()) fail(ErrorCode::singular_matrix, "determinant is 0 for " + m.str());
    return m;
  }

  static Mat2 identity(std::uint32_t p) { return {S::one(p), S::zero(p), S::zero(p), S::one(p)}; }
  static Mat2 diag(S x, S y) {
    const auto p = x.prime();
    return {std::move(x), S::zero(p), S::zero(p), std::move(y)};
  }
  static Mat2 scalar(const S& z) { return diag(z, z); }

  std::uint32_t prime() const { return a.prime(); }

  S det() const { return a * d - b * c; }
  S trace() const { return a + d; }

  Mat2 inverse() const {
    S delta = det();
    if (delta.is_zero()) fail(ErrorCode::singular_matrix, "inverse of singular matrix");
    S inv = delta.inverse();
    return {d * inv, -b * inv, -c * inv, a * inv};
  }

  Mat2 scaled(const S& z) const { return {a * z, b * z, c * z, d * z}; }

  /// Smallest entry valuation (finite for an invertible matrix).
  Valuation min_valuation() const {
    return min(min(a.valuation(), b.valuation()), min(c.valuation(), d.valuation()));
  }

  bool is_integral() const { return min_valuation() >= Valuation(0); }

  std::array<const S*, 4> entries() const { return {&a, &b, &c, &d}; }

  friend Mat2 operator*(const Mat2& x, const Mat2& y) {
    return {x.a * y.a + x.b * y.c, x.a * y.b + x.b * y.d, x.c * y.a + x.d * y.c, x.c * y.b + x.d * y.d};
  }

  friend bool operator==(const Mat2&, const Mat2&) = default;

  /// "a,b;c,d"
  std::string str() const { return a.str() + "," + b.str() + ";" + c.str() + "," + d.str(); }

  static Mat2 parse(std::uint32_t p, std::string_view text) {
    auto semi = text.find(';');
    if (semi == std::string_view::npos || text.find(';', semi + 1) != std::string_view::npos)
      fail(ErrorCode::parse_error, "matrix must look like 'a,b;c,d', got '" + std::string(text) + "'");
    auto row = [&](std::string_view r, S& x, S& y) {
      auto comma = r.find(',');
      if (comma == std::string_view::npos || r.find(',', comma + 1) != std::string_view::npos)
        fail(ErrorCode::parse_error, "matrix row must look like 'x,y', got '" + std::string(r) + "'");
      x = S::parse(p, r.substr(0, comma));
      y = S::parse(p, r.substr(comma + 1));
    };
    Mat2 m;
    row(text.substr(0, semi), m.a, m.b);
    row(text.substr(semi + 1), m.c, m.d);
    return checked(m.a, m.b, m.c, m.d);
  }

  friend std::ostream& operator<<(std::ostream& os, const Mat2& m) { return os << m.str(); }
};

/// The permutation matrix s = [[0, 1], [1, 0]].
template <LocalScalar S>
Mat2<S> swap_matrix(std::uint32_t p) {
  return {S::zero(p), S::one(p), S::one(p), S::zero(p)};
}

}  // namespace btk
