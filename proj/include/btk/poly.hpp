#pragma once

// Dense univariate polynomials over Z/p, the building block of the Laurent
// backend. Coefficients are stored low degree first with no trailing zeros,
// so the zero polynomial is the empty vector.

#include <algorithm>
#include <cstdint>
#include <utility>
#include <vector>

#include "btk/error.hpp"

namespace btk::detail {

using Coeff = std::uint32_t;
using FpPoly = std::vector<Coeff>;

inline Coeff mod_mul(Coeff x, Coeff y, Coeff p) {
  return static_cast<Coeff>(static_cast<std::uint64_t>(x) * y % p);
}

inline Coeff mod_add(Coeff x, Coeff y, Coeff p) {
  std::uint64_t s = static_cast<std::uint64_t>(x) + y;
  return static_cast<Coeff>(s >= p ? s - p : s);
}

inline Coeff mod_sub(Coeff x, Coeff y, Coeff p) { return x >= y ? x - y : static_cast<Coeff>(x + static_cast<std::uint64_t>(p) - y); }

inline Coeff mod_pow(Coeff base, std::uint64_t exp, Coeff p) {
  std::uint64_t result = 1 % p;
  std::uint64_t b = base % p;
  while (exp != 0) {
    if (exp & 1U) result = result * b % p;
    b = b * b % p;
    exp >>= 1U;
  }
  return static_cast<Coeff>(result);
}

/// Inverse in Z/p for prime p (Fermat).
inline Coeff mod_inv(Coeff x, Coeff p) {
  if (x % p == 0) fail(ErrorCode::division_by_zero, "inverse of 0 in Z/p");
  return mod_pow(x, p - 2, p);
}

inline void trim(FpPoly& f) {
  while (!f.empty() && f.back() == 0) f.pop_back();
}

inline int degree(const FpPoly& f) { return static_cast<int>(f.size()) - 1; }

/// Index of the lowest nonzero coefficient; -1 for the zero polynomial.
inline int low_degree(const FpPoly& f) {
  for (std::size_t i = 0; i < f.size(); ++i)
    if (f[i] != 0) return static_cast<int>(i);
  return -1;
}

inline FpPoly poly_add(const FpPoly& f, const FpPoly& g, Coeff p) {
  FpPoly r(std::max(f.size(), g.size()), 0);
  for (std::size_t i = 0; i < f.size(); ++i) r[i] = f[i];
  for (std::size_t i = 0; i < g.size(); ++i) r[i] = mod_add(r[i], g[i], p);
  trim(r);
  return r;
}

inline FpPoly poly_neg(const FpPoly& f, Coeff p) {
  FpPoly r(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) r[i] = f[i] == 0 ? 0 : p - f[i];
  return r;
}

inline FpPoly poly_sub(const FpPoly& f, const FpPoly& g, Coeff p) { return poly_add(f, poly_neg(g, p), p); }

inline FpPoly poly_mul(const FpPoly& f, const FpPoly& g, Coeff p) {
  if (f.empty() || g.empty()) return {};
  std::vector<std::uint64_t> acc(f.size() + g.size() - 1, 0);
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (f[i] == 0) continue;
    for (std::size_t j = 0; j < g.size(); ++j) acc[i + j] = (acc[i + j] + static_cast<std::uint64_t>(f[i]) * g[j]) % p;
  }
  FpPoly r(acc.size());
  for (std::size_t i = 0; i < acc.size(); ++i) r[i] = static_cast<Coeff>(acc[i]);
  trim(r);
  return r;
}

inline FpPoly poly_scale(const FpPoly& f, Coeff s, Coeff p) {
  FpPoly r(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) r[i] = mod_mul(f[i], s, p);
  trim(r);
  return r;
}

/// Multiplication by t^k, k >= 0.
inline FpPoly poly_shift(const FpPoly& f, int k) {
  if (f.empty()) return {};
  FpPoly r(static_cast<std::size_t>(k), 0);
  r.insert(r.end(), f.begin(), f.end());
  return r;
}

/// Exact division by t^k; the caller guarantees low_degree(f) >= k.
inline FpPoly poly_unshift(const FpPoly& f, int k) {
  if (f.empty()) return {};
  return FpPoly(f.begin() + k, f.end());
}

inline std::pair<FpPoly, FpPoly> poly_divmod(const FpPoly& f, const FpPoly& g, Coeff p) {
  if (g.empty()) fail(ErrorCode::division_by_zero, "polynomial division by 0");
  FpPoly rem = f;
  if (rem.size() < g.size()) return {{}, rem};
  FpPoly quo(rem.size() - g.size() + 1, 0);
  const Coeff lead_inv = mod_inv(g.back(), p);
  for (std::size_t top = rem.size(); top >= g.size(); --top) {
    const std::size_t i = top - 1;
    Coeff q = mod_mul(rem[i], lead_inv, p);
    std::size_t shift = i - (g.size() - 1);
    quo[shift] = q;
    if (q == 0) continue;
    for (std::size_t j = 0; j < g.size(); ++j) rem[shift + j] = mod_sub(rem[shift + j], mod_mul(q, g[j], p), p);
  }
  trim(quo);
  trim(rem);
  return {quo, rem};
}

inline FpPoly poly_monic(const FpPoly& f, Coeff p) {
  if (f.empty()) return f;
  return poly_scale(f, mod_inv(f.back(), p), p);
}

inline FpPoly poly_gcd(FpPoly f, FpPoly g, Coeff p) {
  while (!g.empty()) {
    FpPoly r = poly_divmod(f, g, p).second;
    f = std::move(g);
    g = std::move(r);
  }
  return poly_monic(f, p);
}

/// Total order: by degree, then coefficients from the top down.
inline int poly_compare(const FpPoly& f, const FpPoly& g) {
  if (f.size() != g.size()) return f.size() < g.size() ? -1 : 1;
  for (std::size_t i = f.size(); i-- > 0;)
    if (f[i] != g[i]) return f[i] < g[i] ? -1 : 1;
  return 0;
}

}  // namespace btk::detail
