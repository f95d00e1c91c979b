#pragma once

// Seeded generators for scalars, matrices, vertices and ends. Everything is
// driven by one std::mt19937_64 so a seed reproduces a whole run.

#include <cstdint>
#include <random>

#include "btk/tree.hpp"

namespace btk {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform in [lo, hi].
  std::int64_t range(std::int64_t lo, std::int64_t hi) {
    return lo + static_cast<std::int64_t>(engine_() % static_cast<std::uint64_t>(hi - lo + 1));
  }
  bool chance(std::uint64_t one_in) { return engine_() % one_in == 0; }

 private:
  std::mt19937_64 engine_;
};

/// Digits r_0 + r_1 w + ... + r_{len-1} w^{len-1} with random residues.
template <LocalScalar S>
S random_digits(std::uint32_t p, Rng& rng, int len, bool unit) {
  S out = S::zero(p);
  for (int k = 0; k < len; ++k) {
    std::int64_t r = (k == 0 && unit) ? rng.range(1, p - 1) : rng.range(0, p - 1);
    out += S::from_int(p, r) * S::uniformizer_pow(p, k);
  }
  return out;
}

/// A unit that is usually not a polynomial in w (a quotient of two digit strings).
template <LocalScalar S>
S random_unit(std::uint32_t p, Rng& rng) {
  S num = random_digits<S>(p, rng, 4, true);
  if (rng.chance(2)) return num;
  return num / random_digits<S>(p, rng, 3, true);
}

template <LocalScalar S>
S random_with_valuation(std::uint32_t p, Rng& rng, std::int64_t v) {
  return random_unit<S>(p, rng) * S::uniformizer_pow(p, v);
}

/// Zero with probability 1/zero_one_in, else valuation uniform in [vmin, vmax].
template <LocalScalar S>
S random_scalar(std::uint32_t p, Rng& rng, std::int64_t vmin, std::int64_t vmax, std::uint64_t zero_one_in = 8) {
  if (zero_one_in > 0 && rng.chance(zero_one_in)) return S::zero(p);
  return random_with_valuation<S>(p, rng, rng.range(vmin, vmax));
}

template <LocalScalar S>
Mat2<S> random_matrix(std::uint32_t p, Rng& rng, std::int64_t vmin = -5, std::int64_t vmax = 5) {
  for (;;) {
    Mat2<S> g{random_scalar<S>(p, rng, vmin, vmax), random_scalar<S>(p, rng, vmin, vmax),
              random_scalar<S>(p, rng, vmin, vmax), random_scalar<S>(p, rng, vmin, vmax)};
    if (!g.det().is_zero()) return g;
  }
}

/// Integral with unit determinant.
template <LocalScalar S>
Mat2<S> random_k(std::uint32_t p, Rng& rng) {
  for (;;) {
    Mat2<S> g{random_scalar<S>(p, rng, 0, 3), random_scalar<S>(p, rng, 0, 3), random_scalar<S>(p, rng, 0, 3),
              random_scalar<S>(p, rng, 0, 3)};
    if (!g.det().is_zero() && is_unit(g.det())) return g;
  }
}

/// Unit diagonal, integral upper-right, lower-left in the maximal ideal.
template <LocalScalar S>
Mat2<S> random_iwahori(std::uint32_t p, Rng& rng) {
  return {random_unit<S>(p, rng), random_scalar<S>(p, rng, 0, 3), random_scalar<S>(p, rng, 1, 4), random_unit<S>(p, rng)};
}

template <LocalScalar S>
Mat2<S> random_borel(std::uint32_t p, Rng& rng, std::int64_t vmin = -5, std::int64_t vmax = 5) {
  return {random_scalar<S>(p, rng, vmin, vmax, 0), random_scalar<S>(p, rng, vmin, vmax),
          S::zero(p), random_scalar<S>(p, rng, vmin, vmax, 0)};
}

/// A mix of generic matrices and elements of K and I, scaled by a random
/// central element so projective tests see non-normalized representatives.
template <LocalScalar S>
Mat2<S> random_pgl2(std::uint32_t p, Rng& rng) {
  Mat2<S> g;
  switch (rng.range(0, 3)) {
    case 0: g = random_k<S>(p, rng); break;
    case 1: g = random_iwahori<S>(p, rng); break;
    case 2: g = random_borel<S>(p, rng, -3, 3); break;
    default: g = random_matrix<S>(p, rng, -3, 3); break;
  }
  return g.scaled(random_with_valuation<S>(p, rng, rng.range(-2, 2)));
}

/// g x0 for a random g, so vertices at varied depth and offset.
template <LocalScalar S>
Vertex<S> random_vertex(std::uint32_t p, Rng& rng, std::int64_t vmin = -3, std::int64_t vmax = 3) {
  return act(random_matrix<S>(p, rng, vmin, vmax), base_vertex<S>(p));
}

/// [1:0] with probability 1/8, else [u:1] with u zero or of valuation in [vmin, vmax].
template <LocalScalar S>
End<S> random_end(std::uint32_t p, Rng& rng, std::int64_t vmin = -3, std::int64_t vmax = 3) {
  if (rng.chance(8)) return omega<S>(p);
  return end_canonical(random_scalar<S>(p, rng, vmin, vmax), S::one(p));
}

}  // namespace btk
