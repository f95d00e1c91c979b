#pragma once

// Tree-automorphism geometry realized on PGL2(F): classification of
// automorphisms, constructive weak 2-transitivity witnesses, and the
// geometric decompositions (Iwasawa, Cartan, Bruhat, Levi, Iwahori) whose
// factors are described by what they fix in the tree rather than by their
// matrix entries.

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "btk/tree.hpp"

namespace btk {

// ---------------------------------------------------------------------------
// Distinguished elements

template <LocalScalar S>
Mat2<S> tau_pow(std::uint32_t p, std::int64_t n) {
  return Mat2<S>::diag(S::one(p), S::uniformizer_pow(p, n));
}

template <LocalScalar S>
struct AlphaTau {
  Mat2<S> alpha;  // x_n -> x_-n
  Mat2<S> tau;    // x_n -> x_n+1
};

/// alpha = s and tau = diag(1, w), checked on x_n for |n| <= 4.
template <LocalScalar S>
AlphaTau<S> alpha_tau(std::uint32_t p) {
  AlphaTau<S> out{swap_matrix<S>(p), tau_pow<S>(p, 1)};
  for (std::int64_t n = -4; n <= 4; ++n) {
    if (!(act(out.alpha, standard_vertex<S>(p, n)) == standard_vertex<S>(p, -n)) ||
        !(act(out.tau, standard_vertex<S>(p, n)) == standard_vertex<S>(p, n + 1)))
      fail(ErrorCode::internal, "alpha/tau do not act as reflection/translation at n = " + std::to_string(n));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Classification

/// d(x, g x), computed from the conjugate h_x^-1 g h_x.
template <LocalScalar S>
std::int64_t displacement(const Mat2<S>& g, const Vertex<S>& x) {
  const Mat2<S> h = lattice_basis(x);
  const auto [a, b] = elementary_divisors(h.inverse() * g * h);
  return b - a;
}

template <LocalScalar S>
struct Elliptic {
  Vertex<S> fixed_vertex;
};

template <LocalScalar S>
struct Inversion {
  Edge<S> edge;
};

template <LocalScalar S>
struct Hyperbolic {
  std::int64_t length = 0;
  Path<S> axis_window;  // g^-1 y ... y ... g y for the axis vertex y nearest x0
};

template <LocalScalar S>
using AutClass = std::variant<Elliptic<S>, Inversion<S>, Hyperbolic<S>>;

namespace detail {

// Walks from `start` to a neighbour with strictly smaller displacement until
// the displacement reaches `target`. The displacement of a tree isometry grows
// by 2 per step away from its minimal set, so each step moves one closer.
template <LocalScalar S>
std::optional<Vertex<S>> descend_displacement(const Mat2<S>& g, Vertex<S> start, std::int64_t target, std::int64_t max_steps) {
  std::int64_t f = displacement(g, start);
  for (std::int64_t step = 0; f > target && step < max_steps; ++step) {
    bool moved = false;
    for (auto& n : neighbors(start)) {
      std::int64_t fn = displacement(g, n);
      if (fn < f) {
        start = std::move(n);
        f = fn;
        moved = true;
        break;
      }
    }
    if (!moved) break;
  }
  if (f == target) return start;
  return std::nullopt;
}

}  // namespace detail

/// Newton polygon criterion: hyperbolic iff v(tr g) < v(det g) / 2, with
/// translation length v(det g) - 2 v(tr g); otherwise an inversion iff v(det g)
/// is odd, else elliptic.
template <LocalScalar S>
AutClass<S> classify(const Mat2<S>& g) {
  const auto p = g.prime();
  const Vertex<S> x0 = base_vertex<S>(p);
  const std::int64_t vdet = g.det().valuation().value();
  const S tr = g.trace();
  const std::int64_t start_disp = displacement(g, x0);

  if (!tr.is_zero() && 2 * tr.valuation().value() < vdet) {
    const std::int64_t length = vdet - 2 * tr.valuation().value();
    auto axis = detail::descend_displacement(g, x0, length, start_disp);
    if (!axis) fail(ErrorCode::internal, "no axis vertex found for hyperbolic " + g.str());
    Path<S> window = geodesic(act(g.inverse(), *axis), act(g, *axis));
    return Hyperbolic<S>{length, std::move(window)};
  }
  if (vdet % 2 != 0) {
    auto x = detail::descend_displacement(g, x0, 1, start_disp);
    if (!x) fail(ErrorCode::internal, "no inverted edge found for " + g.str());
    Vertex<S> gx = act(g, *x);
    if (!(act(g, gx) == *x)) fail(ErrorCode::internal, g.str() + " has displacement 1 at " + x->str() + " but is not an inversion");
    return Inversion<S>{Edge<S>::make(*x, gx)};
  }
  const std::int64_t radius = (start_disp + 1) / 2 + 1;
  if (auto x = detail::descend_displacement(g, x0, 0, radius)) return Elliptic<S>{*x};
  for (const auto& v : ball(x0, 8))
    if (displacement(g, v) == 0) return Elliptic<S>{v};
  fail(ErrorCode::internal, "no fixed vertex within radius 8 for elliptic " + g.str());
}

template <LocalScalar S>
std::string_view aut_kind(const AutClass<S>& c) {
  if (std::holds_alternative<Elliptic<S>>(c)) return "elliptic";
  if (std::holds_alternative<Inversion<S>>(c)) return "inversion";
  return "hyperbolic";
}

template <LocalScalar S>
std::int64_t translation_length(const AutClass<S>& c) {
  if (const auto* h = std::get_if<Hyperbolic<S>>(&c)) return h->length;
  return std::holds_alternative<Inversion<S>>(c) ? 1 : 0;
}

// ---------------------------------------------------------------------------
// Weak 2-transitivity witnesses

/// k in K with k(x_r) = v, r = d(x0, v), taken from the Cartan form of v's basis.
template <LocalScalar S>
Mat2<S> sphere_frame(const Vertex<S>& v) {
  return cartan(lattice_basis(v)).k1;
}

/// g fixing x with g(y) = z.
template <LocalScalar S>
Mat2<S> sphere_witness(const Vertex<S>& x, const Vertex<S>& y, const Vertex<S>& z) {
  if (distance(x, y) != distance(x, z))
    fail(ErrorCode::distance_mismatch, y.str() + " and " + z.str() + " are not on one sphere around " + x.str());
  const auto p = x.c.prime();
  if (y == z) return Mat2<S>::identity(p);
  const Mat2<S> h = lattice_basis(x);
  const Mat2<S> h_inv = h.inverse();
  const Mat2<S> ky = sphere_frame(act(h_inv, y));
  const Mat2<S> kz = sphere_frame(act(h_inv, z));
  Mat2<S> g = h * kz * ky.inverse() * h_inv;
  if (!(act(g, x) == x) || !(act(g, y) == z)) fail(ErrorCode::internal, "sphere witness failed verification");
  return g;
}

/// g with g(x1) = y1 and g(x2) = y2: move x1 to y1, then rotate about y1.
template <LocalScalar S>
Mat2<S> weak2_witness(const Vertex<S>& x1, const Vertex<S>& x2, const Vertex<S>& y1, const Vertex<S>& y2) {
  if (distance(x1, x2) != distance(y1, y2))
    fail(ErrorCode::distance_mismatch, "d(" + x1.str() + "," + x2.str() + ") != d(" + y1.str() + "," + y2.str() + ")");
  const auto p = x1.c.prime();
  if (x1 == y1 && x2 == y2) return Mat2<S>::identity(p);
  const Mat2<S> move = lattice_basis(y1) * lattice_basis(x1).inverse();
  const Vertex<S> moved = act(move, x2);
  Mat2<S> g = sphere_witness(y1, moved, y2) * move;
  if (!(act(g, x1) == y1) || !(act(g, x2) == y2)) fail(ErrorCode::internal, "weak 2-transitivity witness failed verification");
  return g;
}

namespace detail {

template <LocalScalar S>
std::pair<S, S> end_vector(const End<S>& w) {
  const auto p = w.u.prime();
  if (w.at_infinity) return {S::one(p), S::zero(p)};
  return {w.u, S::one(p)};
}

// A matrix sending x0 to v, [1:0] to e1 and [0:1] to e2; v must lie on the
// apartment (e1, e2).
template <LocalScalar S>
Mat2<S> apartment_frame(const Vertex<S>& v, const End<S>& e1, const End<S>& e2) {
  auto [u1, v1] = end_vector(e1);
  auto [u2, v2] = end_vector(e2);
  const Mat2<S> frame{u1, u2, v1, v2};
  const Vertex<S> pulled = act(frame.inverse(), v);
  if (!pulled.c.is_zero()) fail(ErrorCode::internal, "apartment frame does not pull " + v.str() + " back to the standard apartment");
  return frame * tau_pow<S>(v.c.prime(), pulled.m);
}

}  // namespace detail

/// g with g(x) = y, g(w1) = s1 and g(w2) = s2.
template <LocalScalar S>
Mat2<S> end_pair_witness(const Vertex<S>& x, const End<S>& w1, const End<S>& w2, const Vertex<S>& y, const End<S>& s1,
                         const End<S>& s2) {
  if (w1 == w2 || s1 == s2) fail(ErrorCode::equal_ends, "end pairs must consist of distinct ends");
  if (!on_apartment(x, w1, w2)) fail(ErrorCode::vertex_not_on_apartment, x.str() + " is not on (" + w1.str() + "," + w2.str() + ")");
  if (!on_apartment(y, s1, s2)) fail(ErrorCode::vertex_not_on_apartment, y.str() + " is not on (" + s1.str() + "," + s2.str() + ")");
  Mat2<S> g = detail::apartment_frame(y, s1, s2) * detail::apartment_frame(x, w1, w2).inverse();
  if (!(act(g, x) == y) || !(act(g, w1) == s1) || !(act(g, w2) == s2)) fail(ErrorCode::internal, "end pair witness failed verification");
  return g;
}

/// For an edge and an end, exactly one endpoint lies on the ray from the other toward the end.
template <LocalScalar S>
struct EdgeEndOrientation {
  Vertex<S> from;     // the endpoint whose ray is followed
  Vertex<S> through;  // the endpoint lying on [from, end)
};

template <LocalScalar S>
EdgeEndOrientation<S> edge_end_orientation(const Edge<S>& e, const End<S>& sigma) {
  const bool v_on_ray_from_u = step_toward(e.u, sigma) == e.v;
  const bool u_on_ray_from_v = step_toward(e.v, sigma) == e.u;
  if (v_on_ray_from_u == u_on_ray_from_v) fail(ErrorCode::internal, "edge/end orientation is not exclusive for " + e.str());
  if (v_on_ray_from_u) return {e.u, e.v};
  return {e.v, e.u};
}

/// Membership in H-hat on PGL2: diagonal with entries of equal valuation. The
/// finite check on x_k, |k| <= window, is a consequence and is verified too.
template <LocalScalar S>
bool fixes_standard_apartment(const Mat2<S>& g, std::int64_t window) {
  const bool algebraic = g.b.is_zero() && g.c.is_zero() && g.a.valuation() == g.d.valuation();
  bool finite = true;
  for (std::int64_t k = -window; k <= window && finite; ++k) {
    const Vertex<S> xk = standard_vertex<S>(g.prime(), k);
    finite = act(g, xk) == xk;
  }
  if (algebraic && !finite) fail(ErrorCode::internal, "diagonal unit-ratio matrix moves the standard apartment");
  return algebraic && finite;
}

// ---------------------------------------------------------------------------
// Geometric subgroups

enum class GeoTag {
  k_x0,                 // fixes x0
  borel,                // stabilizes [1:0]
  borel_prime,          // stabilizes [0:1]
  unipotent,            // stabilizes [1:0] and fixes some x_i
  iwahori,              // fixes x0 and x1
  iwahori_borel,        // iwahori and borel
  iwahori_borel_prime,  // iwahori and borel_prime
  torus,                // a power of tau
  apartment_fixer,      // fixes every x_k
  alpha,                // the reflection alpha
};

constexpr std::string_view geo_tag_name(GeoTag tag) {
  switch (tag) {
    case GeoTag::k_x0: return "K_x0";
    case GeoTag::borel: return "B";
    case GeoTag::borel_prime: return "B'";
    case GeoTag::unipotent: return "N";
    case GeoTag::iwahori: return "I";
    case GeoTag::iwahori_borel: return "I&B";
    case GeoTag::iwahori_borel_prime: return "I&B'";
    case GeoTag::torus: return "T";
    case GeoTag::apartment_fixer: return "H";
    case GeoTag::alpha: return "alpha";
  }
  return "?";
}

/// For b stabilizing [1:0]: the shift n and a start j with b(x_i) = x_{i+n} for all i >= j.
struct EndTranslation {
  std::int64_t shift = 0;
  std::int64_t from = 0;
};

template <LocalScalar S>
EndTranslation end_translation(const Mat2<S>& b) {
  const auto p = b.prime();
  if (!stabilizes_end(b, omega<S>(p))) fail(ErrorCode::not_in_subgroup, b.str() + " does not stabilize [1:0]");
  // b maps [x_j, w) onto [b x_j, w); once b x_j is some x_m both rays are the
  // standard ray and the shift is m - j from there on.
  for (std::int64_t j = 0; j < 4096; ++j) {
    const Vertex<S> image = act(b, standard_vertex<S>(p, j));
    if (image.c.is_zero()) return {image.m - j, j};
  }
  fail(ErrorCode::internal, "ray toward [1:0] never merges for " + b.str());
}

template <LocalScalar S>
bool geo_member(const Mat2<S>& g, GeoTag tag) {
  const auto p = g.prime();
  const Vertex<S> x0 = base_vertex<S>(p);
  const Vertex<S> x1 = standard_vertex<S>(p, 1);
  auto fixes_edge = [&] { return act(g, x0) == x0 && act(g, x1) == x1; };
  switch (tag) {
    case GeoTag::k_x0: return act(g, x0) == x0;
    case GeoTag::borel: return stabilizes_end(g, omega<S>(p));
    case GeoTag::borel_prime: return stabilizes_end(g, omega_prime<S>(p));
    case GeoTag::unipotent: {
      if (!stabilizes_end(g, omega<S>(p))) return false;
      const EndTranslation t = end_translation(g);
      return t.shift == 0 && act(g, standard_vertex<S>(p, t.from)) == standard_vertex<S>(p, t.from);
    }
    case GeoTag::iwahori: return fixes_edge();
    case GeoTag::iwahori_borel: return fixes_edge() && stabilizes_end(g, omega<S>(p));
    case GeoTag::iwahori_borel_prime: return fixes_edge() && stabilizes_end(g, omega_prime<S>(p));
    case GeoTag::torus: {
      if (!g.b.is_zero() || !g.c.is_zero()) return false;
      const std::int64_t n = g.d.valuation().value() - g.a.valuation().value();
      return proj_eq(g, tau_pow<S>(p, n));
    }
    case GeoTag::apartment_fixer: return fixes_standard_apartment(g, 4);
    case GeoTag::alpha: return proj_eq(g, swap_matrix<S>(p));
  }
  return false;
}

template <LocalScalar S>
struct GeoFactor {
  Mat2<S> matrix;
  GeoTag tag;
};

template <LocalScalar S>
struct GeoFactors {
  std::vector<GeoFactor<S>> factors;
  std::int64_t index = 0;   // Cartan: n with g in K tau^n K; Levi: the tau exponent
  bool alpha_cell = false;  // Bruhat / Iwahori double cosets: whether alpha appears
};

template <LocalScalar S>
Mat2<S> recompose(const GeoFactors<S>& f) {
  Mat2<S> out = f.factors.front().matrix;
  for (std::size_t i = 1; i < f.factors.size(); ++i) out = out * f.factors[i].matrix;
  return out;
}

/// Recomposition is projectively equal to g and every factor lies in its subgroup.
template <LocalScalar S>
bool geo_verified(const Mat2<S>& g, const GeoFactors<S>& f) {
  if (f.factors.empty() || !proj_eq(recompose(f), g)) return false;
  for (const auto& factor : f.factors)
    if (!geo_member(factor.matrix, factor.tag)) return false;
  return true;
}

namespace detail {

// An element of K sending [1:0] to w.
template <LocalScalar S>
Mat2<S> end_mover(const End<S>& w) {
  const auto p = w.u.prime();
  const S zero = S::zero(p);
  const S one = S::one(p);
  if (w.at_infinity) return Mat2<S>::identity(p);
  if (is_integral(w.u)) return {w.u, one, one, zero};
  return {one, zero, w.u.inverse(), one};
}

template <LocalScalar S>
void require(const Mat2<S>& g, GeoTag tag, std::string_view op) {
  if (!geo_member(g, tag))
    fail(ErrorCode::not_in_subgroup, std::string(op) + ": " + g.str() + " is not in " + std::string(geo_tag_name(tag)));
}

}  // namespace detail

/// g = k b with k fixing x0 and b stabilizing [1:0].
template <LocalScalar S>
GeoFactors<S> iwasawa_geo(const Mat2<S>& g) {
  const auto p = g.prime();
  const Mat2<S> k = detail::end_mover(act(g, omega<S>(p)));
  return {{{k, GeoTag::k_x0}, {k.inverse() * g, GeoTag::borel}}, 0, false};
}

/// g = k1 tau^n k2 with k1, k2 fixing x0 and n = d(x0, g x0).
template <LocalScalar S>
GeoFactors<S> cartan_geo(const Mat2<S>& g) {
  const auto p = g.prime();
  const Vertex<S> image = act(g, base_vertex<S>(p));
  const std::int64_t n = distance(base_vertex<S>(p), image);
  const Mat2<S> k1 = sphere_frame(image);  // k1(x_n) = g(x0)
  const Mat2<S> t = tau_pow<S>(p, n);
  const Mat2<S> k2 = tau_pow<S>(p, -n) * k1.inverse() * g;
  return {{{k1, GeoTag::k_x0}, {t, GeoTag::torus}, {k2, GeoTag::k_x0}}, n, false};
}

enum class BruhatMethod { crossroad, unipotent };

/// g in B-hat, or g = n alpha b with n in N-hat and b in B-hat. The crossroad
/// method follows the geometric construction; the unipotent method writes the
/// N-hat part down directly. The two agree modulo H-hat.
template <LocalScalar S>
GeoFactors<S> bruhat_geo(const Mat2<S>& g, BruhatMethod method = BruhatMethod::crossroad) {
  const auto p = g.prime();
  const End<S> w = omega<S>(p);
  const End<S> w_prime = omega_prime<S>(p);
  const End<S> sigma = act(g, w);
  if (sigma == w) return {{{g, GeoTag::borel}}, 0, false};
  Mat2<S> n = Mat2<S>::identity(p);
  if (method == BruhatMethod::unipotent) {
    n = detail::upper_unipotent(sigma.u);
  } else if (!(sigma == w_prime)) {
    const Vertex<S> meet = crossroad(w, w_prime, sigma);
    n = end_pair_witness(meet, w, w_prime, meet, w, sigma);
  }
  const Mat2<S> alpha = swap_matrix<S>(p);
  const Mat2<S> b = alpha.inverse() * n.inverse() * g;
  return {{{n, GeoTag::unipotent}, {alpha, GeoTag::alpha}, {b, GeoTag::borel}}, 0, true};
}

/// b = tau^n h with h in N-hat.
template <LocalScalar S>
GeoFactors<S> levi_geo(const Mat2<S>& b) {
  detail::require(b, GeoTag::borel, "levi_geo");
  const auto p = b.prime();
  const EndTranslation t = end_translation(b);
  return {{{tau_pow<S>(p, t.shift), GeoTag::torus}, {tau_pow<S>(p, -t.shift) * b, GeoTag::unipotent}}, t.shift, false};
}

/// i = (i h) h^-1 with i h in I-hat & B-hat and h^-1 in I-hat & B-hat'.
template <LocalScalar S>
GeoFactors<S> iwahori_geo(const Mat2<S>& i) {
  detail::require(i, GeoTag::iwahori, "iwahori_geo");
  const auto p = i.prime();
  const Vertex<S> x0 = base_vertex<S>(p);
  const End<S> w = omega<S>(p);
  const End<S> w_prime = omega_prime<S>(p);
  const End<S> sigma = act(i.inverse(), w);
  const Mat2<S> h = end_pair_witness(x0, w_prime, w, x0, w_prime, sigma);
  return {{{i * h, GeoTag::iwahori_borel}, {h.inverse(), GeoTag::iwahori_borel_prime}}, 0, false};
}

/// k in I-hat, or k = i alpha j with i, j in I-hat.
template <LocalScalar S>
GeoFactors<S> k_double_coset(const Mat2<S>& k) {
  detail::require(k, GeoTag::k_x0, "k_double_coset");
  const auto p = k.prime();
  const Vertex<S> x1 = standard_vertex<S>(p, 1);
  const Vertex<S> image = act(k, x1);
  if (image == x1) return {{{k, GeoTag::iwahori}}, 0, false};
  const Mat2<S> i = weak2_witness(standard_vertex<S>(p, -1), x1, image, x1);
  const Mat2<S> alpha = swap_matrix<S>(p);
  return {{{i, GeoTag::iwahori}, {alpha, GeoTag::alpha}, {alpha.inverse() * i.inverse() * k, GeoTag::iwahori}}, 0, true};
}

/// g = i b or g = i alpha b with i in I-hat and b in B-hat, decided by which
/// endpoint of {x0, x1} lies on the ray from the other toward g([1:0]).
template <LocalScalar S>
GeoFactors<S> iwahori_borel_geo(const Mat2<S>& g) {
  const auto p = g.prime();
  const Vertex<S> x0 = base_vertex<S>(p);
  const Vertex<S> x1 = standard_vertex<S>(p, 1);
  const End<S> w = omega<S>(p);
  const End<S> sigma = act(g, w);
  const auto orientation = edge_end_orientation(Edge<S>::make(x0, x1), sigma);
  if (orientation.from == x0) {
    const Mat2<S> i = detail::end_mover(sigma);
    return {{{i, GeoTag::iwahori}, {i.inverse() * g, GeoTag::borel}}, 0, false};
  }
  const Mat2<S> i = end_pair_witness(x1, omega_prime<S>(p), w, x1, sigma, w);
  const Mat2<S> alpha = swap_matrix<S>(p);
  return {{{i, GeoTag::iwahori}, {alpha, GeoTag::alpha}, {alpha.inverse() * i.inverse() * g, GeoTag::borel}}, 0, true};
}

// ---------------------------------------------------------------------------
// Index of consecutive ray stabilizers

template <LocalScalar S>
struct NkReport {
  std::int64_t k = 0;
  std::uint32_t q = 0;
  std::vector<Mat2<S>> elements;
  bool elements_fix_ray = false;  // every element fixes x_k..x_{k+4} and [1:0]
  std::vector<Vertex<S>> orbit;   // orbit of x_{k-1}
  std::size_t orbit_size = 0;
  bool orbit_is_target = false;   // orbit == S(x_k, 1) - {x_{k+1}}
  bool success = false;
};

/// The q elements [[1, r w^-k], [0, 1]] fix [x_k, w) pointwise; their orbit on
/// x_{k-1} must be all q neighbours of x_k other than x_{k+1}.
template <LocalScalar S>
NkReport<S> nk_orbit_check(std::uint32_t p, std::int64_t k) {
  NkReport<S> report;
  report.k = k;
  report.q = p;
  for (std::uint32_t r = 0; r < p; ++r)
    report.elements.push_back(detail::upper_unipotent(S::from_int(p, r) * S::uniformizer_pow(p, -k)));

  report.elements_fix_ray = true;
  for (const auto& n : report.elements) {
    if (!stabilizes_end(n, omega<S>(p))) report.elements_fix_ray = false;
    for (std::int64_t j = k; j <= k + 4; ++j)
      if (!(act(n, standard_vertex<S>(p, j)) == standard_vertex<S>(p, j))) report.elements_fix_ray = false;
  }

  std::set<Vertex<S>> orbit{standard_vertex<S>(p, k - 1)};
  std::vector<Vertex<S>> frontier{standard_vertex<S>(p, k - 1)};
  while (!frontier.empty()) {
    std::vector<Vertex<S>> next;
    for (const auto& v : frontier)
      for (const auto& n : report.elements) {
        Vertex<S> image = act(n, v);
        if (orbit.insert(image).second) next.push_back(std::move(image));
      }
    frontier = std::move(next);
  }
  report.orbit.assign(orbit.begin(), orbit.end());
  report.orbit_size = orbit.size();

  std::set<Vertex<S>> target;
  for (auto& n : neighbors(standard_vertex<S>(p, k)))
    if (!(n == standard_vertex<S>(p, k + 1))) target.insert(std::move(n));
  report.orbit_is_target = orbit == target;
  report.success = report.elements_fix_ray && report.orbit_is_target && report.orbit_size == p;
  return report;
}

}  // namespace btk
