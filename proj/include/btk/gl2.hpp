#pragma once

// Subgroups of GL2(F) and the classical matrix decompositions: Iwasawa (BK),
// Cartan (K diag K), Bruhat (B u BsB), Levi (NT) and the Iwahori factorization.
// Every decomposition is exact; recompose_* multiplies the factors back out.

#include <algorithm>
#include <array>
#include <cstdint>
#include <string>
#include <utility>
#include <variant>

#include "btk/mat2.hpp"

namespace btk {

enum class SubgroupTag { B, N, NPRIME, T, Z, K, I };

constexpr std::array<SubgroupTag, 7> all_subgroup_tags = {SubgroupTag::B, SubgroupTag::N, SubgroupTag::NPRIME, SubgroupTag::T,
                                                          SubgroupTag::Z, SubgroupTag::K, SubgroupTag::I};

constexpr std::string_view tag_name(SubgroupTag tag) {
  switch (tag) {
    case SubgroupTag::B: return "B";
    case SubgroupTag::N: return "N";
    case SubgroupTag::NPRIME: return "NPRIME";
    case SubgroupTag::T: return "T";
    case SubgroupTag::Z: return "Z";
    case SubgroupTag::K: return "K";
    case SubgroupTag::I: return "I";
  }
  return "?";
}

inline SubgroupTag parse_subgroup_tag(std::string_view s) {
  for (auto tag : all_subgroup_tags)
    if (tag_name(tag) == s) return tag;
  fail(ErrorCode::parse_error, "unknown subgroup '" + std::string(s) + "'");
}

template <LocalScalar S>
bool member(const Mat2<S>& g, SubgroupTag tag) {
  const auto p = g.prime();
  const S one = S::one(p);
  switch (tag) {
    case SubgroupTag::B: return g.c.is_zero();
    case SubgroupTag::N: return g.c.is_zero() && g.a == one && g.d == one;
    case SubgroupTag::NPRIME: return g.b.is_zero() && g.a == one && g.d == one;
    case SubgroupTag::T: return g.b.is_zero() && g.c.is_zero();
    case SubgroupTag::Z: return g.b.is_zero() && g.c.is_zero() && g.a == g.d;
    case SubgroupTag::K: return g.is_integral() && is_unit(g.det());
    case SubgroupTag::I:
      return g.is_integral() && is_unit(g.a) && is_unit(g.d) && g.c.valuation() >= Valuation(1) && is_unit(g.det());
  }
  return false;
}

// ---------------------------------------------------------------------------
// Iwasawa

template <LocalScalar S>
struct IwasawaForm {
  Mat2<S> b;  // upper triangular
  Mat2<S> k;  // in K
};

/// g = b k. The bottom row (c, d) of g is cleared against the entry of smaller
/// valuation (ties go to d); that entry then becomes the only bottom entry of b.
template <LocalScalar S>
IwasawaForm<S> iwasawa(const Mat2<S>& g) {
  const auto p = g.prime();
  const S zero = S::zero(p);
  const S one = S::one(p);
  Mat2<S> k;
  if (g.c.valuation() < g.d.valuation()) {
    k = {zero, -one, one, g.d / g.c};
  } else {
    k = {one, zero, g.c / g.d, one};
  }
  Mat2<S> b = g * k.inverse();
  b.c = zero;  // exact already; keeps the representation literally triangular
  return {std::move(b), std::move(k)};
}

template <LocalScalar S>
Mat2<S> recompose(const IwasawaForm<S>& f) {
  return f.b * f.k;
}

// ---------------------------------------------------------------------------
// Cartan

template <LocalScalar S>
struct CartanForm {
  Mat2<S> k1;
  std::int64_t a = 0;  // a <= b
  std::int64_t b = 0;
  Mat2<S> k2;
};

/// Elementary divisor valuations (a, b), a <= b, read off without factoring:
/// a is the smallest entry valuation and a + b = v(det g).
template <LocalScalar S>
std::pair<std::int64_t, std::int64_t> elementary_divisors(const Mat2<S>& g) {
  const std::int64_t a = g.min_valuation().value();
  const std::int64_t b = g.det().valuation().value() - a;
  return {a, b};
}

/// Smith normal form over o with the row and column operations recorded:
/// g = k1 diag(w^a, w^b) k2.
template <LocalScalar S>
CartanForm<S> cartan(const Mat2<S>& g) {
  const auto p = g.prime();
  const S zero = S::zero(p);
  const S one = S::one(p);
  // Invariant throughout: g = left * work * right, left and right in K.
  Mat2<S> left = Mat2<S>::identity(p);
  Mat2<S> right = Mat2<S>::identity(p);
  Mat2<S> work = g;
  const Mat2<S> s = swap_matrix<S>(p);

  // pivot: first entry in reading order of minimal valuation, moved to (1,1)
  const Valuation vmin = work.min_valuation();
  int pivot = 0;
  for (int i = 0; i < 4; ++i) {
    if (work.entries()[static_cast<std::size_t>(i)]->valuation() == vmin) {
      pivot = i;
      break;
    }
  }
  if (pivot / 2 == 1) {  // bottom row: swap rows
    work = s * work;
    left = left * s;
  }
  if (pivot % 2 == 1) {  // right column: swap columns
    work = work * s;
    right = s * right;
  }
  // clear (2,1) with a row operation and (1,2) with a column operation;
  // the multipliers are integral because work.a has minimal valuation.
  const S row_mult = work.c / work.a;
  const Mat2<S> row_op{one, zero, -row_mult, one};
  const Mat2<S> row_op_inv{one, zero, row_mult, one};
  work = row_op * work;
  left = left * row_op_inv;
  const S col_mult = work.b / work.a;
  const Mat2<S> col_op{one, -col_mult, zero, one};
  const Mat2<S> col_op_inv{one, col_mult, zero, one};
  work = work * col_op;
  right = col_op_inv * right;

  const std::int64_t ea = work.a.valuation().value();
  const std::int64_t eb = work.d.valuation().value();
  const Mat2<S> units = Mat2<S>::diag(work.a.unit_part(), work.d.unit_part());
  CartanForm<S> out;
  out.k1 = left;
  out.a = ea;
  out.b = eb;
  out.k2 = units * right;
  return out;
}

template <LocalScalar S>
Mat2<S> cartan_middle(std::uint32_t p, std::int64_t a, std::int64_t b) {
  return Mat2<S>::diag(S::uniformizer_pow(p, a), S::uniformizer_pow(p, b));
}

template <LocalScalar S>
Mat2<S> recompose(const CartanForm<S>& f) {
  return f.k1 * cartan_middle<S>(f.k1.prime(), f.a, f.b) * f.k2;
}

// ---------------------------------------------------------------------------
// Bruhat

template <LocalScalar S>
struct BruhatSmallCell {
  Mat2<S> b;
};

template <LocalScalar S>
struct BruhatBigCell {
  Mat2<S> b1;
  Mat2<S> b2;
};

template <LocalScalar S>
using BruhatForm = std::variant<BruhatSmallCell<S>, BruhatBigCell<S>>;

/// g in B, or g = b1 s b2 with b1 unipotent when c != 0.
template <LocalScalar S>
BruhatForm<S> bruhat(const Mat2<S>& g) {
  if (g.c.is_zero()) return BruhatSmallCell<S>{g};
  const auto p = g.prime();
  const S zero = S::zero(p);
  const S one = S::one(p);
  Mat2<S> b1{one, g.a / g.c, zero, one};
  Mat2<S> b2{g.c, g.d, zero, -g.det() / g.c};
  return BruhatBigCell<S>{std::move(b1), std::move(b2)};
}

template <LocalScalar S>
Mat2<S> recompose(const BruhatForm<S>& f) {
  if (const auto* small = std::get_if<BruhatSmallCell<S>>(&f)) return small->b;
  const auto& big = std::get<BruhatBigCell<S>>(f);
  return big.b1 * swap_matrix<S>(big.b1.prime()) * big.b2;
}

// ---------------------------------------------------------------------------
// Levi

template <LocalScalar S>
struct LeviForm {
  Mat2<S> n;
  Mat2<S> t;
};

template <LocalScalar S>
LeviForm<S> levi(const Mat2<S>& b) {
  if (!member(b, SubgroupTag::B)) fail(ErrorCode::not_in_b, b.str() + " is not upper triangular");
  const auto p = b.prime();
  const S zero = S::zero(p);
  const S one = S::one(p);
  return {Mat2<S>{one, b.b / b.d, zero, one}, Mat2<S>::diag(b.a, b.d)};
}

template <LocalScalar S>
Mat2<S> recompose(const LeviForm<S>& f) {
  return f.n * f.t;
}

// ---------------------------------------------------------------------------
// Iwahori factorization

using IwahoriOrdering = std::array<SubgroupTag, 3>;

inline bool is_valid_ordering(const IwahoriOrdering& o) {
  IwahoriOrdering sorted = o;
  std::sort(sorted.begin(), sorted.end());
  IwahoriOrdering expected = {SubgroupTag::N, SubgroupTag::NPRIME, SubgroupTag::T};
  std::sort(expected.begin(), expected.end());
  return sorted == expected;
}

inline std::array<IwahoriOrdering, 6> all_iwahori_orderings() {
  IwahoriOrdering o = {SubgroupTag::N, SubgroupTag::NPRIME, SubgroupTag::T};
  std::sort(o.begin(), o.end());
  std::array<IwahoriOrdering, 6> out;
  std::size_t i = 0;
  do {
    out[i++] = o;
  } while (std::next_permutation(o.begin(), o.end()));
  return out;
}

namespace detail {

template <LocalScalar S>
Mat2<S> upper_unipotent(const S& x) {
  const auto p = x.prime();
  return {S::one(p), x, S::zero(p), S::one(p)};
}

template <LocalScalar S>
Mat2<S> lower_unipotent(const S& y) {
  const auto p = y.prime();
  return {S::one(p), S::zero(p), y, S::one(p)};
}

// Peels one factor off the left of i: given i = F * rest with F in the
// subgroup `tag` and rest in the product of the remaining two subgroups (in
// order), returns F. Closed forms come from multiplying out the six
// triangular products; a and d of i are units, so every division is by a unit.
template <LocalScalar S>
Mat2<S> leading_factor(const Mat2<S>& i, const IwahoriOrdering& order) {
  using T = SubgroupTag;
  const S delta = i.det();
  const auto [f1, f2, f3] = order;
  if (f1 == T::NPRIME) {
    // L * (D U) or L * (U D): the first column of rest is (u, 0) and of L*rest is (u, y u)
    return lower_unipotent(i.c / i.a);
  }
  if (f1 == T::N) {
    // U * (D L) or U * (L D): the second row of rest is (v y, v), so x = b / d
    return upper_unipotent(i.b / i.d);
  }
  // f1 == T
  if (f2 == T::NPRIME) return Mat2<S>::diag(i.a, delta / i.a);  // D L U: u = a, v = det / a
  return Mat2<S>::diag(delta / i.d, i.d);                          // D U L: v = d, u = det / d
}

}  // namespace detail

/// i = f1 f2 f3 with each factor in I intersected with the subgroup named by `ordering`.
template <LocalScalar S>
std::array<Mat2<S>, 3> iwahori_factor(const Mat2<S>& i, const IwahoriOrdering& ordering) {
  if (!member(i, SubgroupTag::I)) fail(ErrorCode::not_in_i, i.str() + " is not in the Iwahori subgroup");
  if (!is_valid_ordering(ordering)) fail(ErrorCode::parse_error, "ordering must be a permutation of NPRIME, T, N");
  Mat2<S> f1 = detail::leading_factor(i, ordering);
  Mat2<S> rest = f1.inverse() * i;
  IwahoriOrdering tail = {ordering[1], ordering[2], ordering[0]};
  Mat2<S> f2 = detail::leading_factor(rest, tail);
  Mat2<S> f3 = f2.inverse() * rest;
  // clean the structural zeros so each factor is literally in its subgroup
  const auto p = i.prime();
  auto clean = [&](Mat2<S>& f, SubgroupTag tag) {
    if (tag == SubgroupTag::N) f.c = S::zero(p);
    if (tag == SubgroupTag::NPRIME) f.b = S::zero(p);
    if (tag == SubgroupTag::T) f.b = f.c = S::zero(p);
  };
  clean(f1, ordering[0]);
  clean(f2, ordering[1]);
  clean(f3, ordering[2]);
  return {std::move(f1), std::move(f2), std::move(f3)};
}

/// Whether a factor lies in I intersected with `tag`.
template <LocalScalar S>
bool iwahori_part_member(const Mat2<S>& f, SubgroupTag tag) {
  return member(f, SubgroupTag::I) && member(f, tag);
}

template <LocalScalar S>
Mat2<S> recompose(const std::array<Mat2<S>, 3>& f) {
  return f[0] * f[1] * f[2];
}

// ---------------------------------------------------------------------------
// PGL2

/// Canonical representative of g modulo the centre: the smallest entry
/// valuation is 0 and the first entry (reading order) of that valuation is 1.
template <LocalScalar S>
struct ProjMat {
  Mat2<S> rep;
  friend bool operator==(const ProjMat&, const ProjMat&) = default;
};

template <LocalScalar S>
ProjMat<S> proj_normalize(const Mat2<S>& g) {
  const Valuation vmin = g.min_valuation();
  for (const S* e : g.entries()) {
    if (e->valuation() == vmin) return {g.scaled(e->inverse())};
  }
  fail(ErrorCode::internal, "matrix without a minimal entry");
}

template <LocalScalar S>
bool proj_eq(const Mat2<S>& g, const Mat2<S>& h) {
  return proj_normalize(g) == proj_normalize(h);
}

}  // namespace btk
