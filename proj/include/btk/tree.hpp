#pragma once

// The Bruhat-Tits tree of PGL2(F).
//
// A vertex is a homothety class of o-lattices in F^2. Every class contains
// exactly one lattice with basis columns (1, 0) and (c, w^m) where c is the
// canonical representative of a class in F/o, so the pair (m, c) is the
// vertex key. The standard apartment is x_n = (n, 0) = [o e1 + o w^n e2].
//
// In these coordinates the neighbour of (m, c) with larger m is
// (m + 1, frac(w c)), the unique step toward the end w = [1:0]; the other q
// neighbours are (m - 1, frac((c + r) / w)) for residues r.

#include <algorithm>
#include <cstdint>
#include <map>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "btk/gl2.hpp"

namespace btk {

template <LocalScalar S>
struct Vertex {
  std::int64_t m = 0;
  S c;

  friend bool operator==(const Vertex& x, const Vertex& y) { return x.m == y.m && x.c == y.c; }
  friend bool operator<(const Vertex& x, const Vertex& y) {
    if (x.m != y.m) return x.m < y.m;
    return compare(x.c, y.c) < 0;
  }

  /// "(m;c)"
  std::string str() const { return "(" + std::to_string(m) + ";" + c.str() + ")"; }

  static Vertex parse(std::uint32_t p, std::string_view text) {
    while (!text.empty() && text.front() == ' ') text.remove_prefix(1);
    while (!text.empty() && text.back() == ' ') text.remove_suffix(1);
    auto semi = text.find(';');
    if (text.size() < 5 || text.front() != '(' || text.back() != ')' || semi == std::string_view::npos)
      fail(ErrorCode::parse_error, "vertex must look like '(m;c)', got '" + std::string(text) + "'");
    std::string m_text(text.substr(1, semi - 1));
    std::int64_t m = 0;
    try {
      std::size_t used = 0;
      m = std::stoll(m_text, &used);
      if (used != m_text.size()) throw std::invalid_argument(m_text);
    } catch (const std::exception&) {
      fail(ErrorCode::parse_error, "bad vertex level '" + m_text + "'");
    }
    S c = S::parse(p, text.substr(semi + 1, text.size() - semi - 2));
    if (!(c.frac() == c)) fail(ErrorCode::parse_error, "vertex offset " + c.str() + " is not a canonical class in F/o");
    return {m, c};
  }

  friend std::ostream& operator<<(std::ostream& os, const Vertex& v) { return os << v.str(); }
};

template <LocalScalar S>
using Path = std::vector<Vertex<S>>;

template <LocalScalar S>
struct Edge {
  Vertex<S> u, v;  // u < v

  static Edge make(Vertex<S> x, Vertex<S> y) {
    if (y < x) std::swap(x, y);
    return {std::move(x), std::move(y)};
  }

  bool contains(const Vertex<S>& x) const { return x == u || x == v; }

  friend bool operator==(const Edge&, const Edge&) = default;
  friend bool operator<(const Edge& x, const Edge& y) {
    if (!(x.u == y.u)) return x.u < y.u;
    return x.v < y.v;
  }

  std::string str() const { return "{" + u.str() + "," + v.str() + "}"; }
};

/// A point [u : v] of P^1(F), stored as [1 : 0] or [u : 1].
template <LocalScalar S>
struct End {
  bool at_infinity = true;  // [1 : 0]
  S u;                      // meaningful only when !at_infinity

  friend bool operator==(const End& x, const End& y) {
    if (x.at_infinity || y.at_infinity) return x.at_infinity == y.at_infinity;
    return x.u == y.u;
  }
  friend bool operator<(const End& x, const End& y) {
    if (x.at_infinity != y.at_infinity) return x.at_infinity;
    return !x.at_infinity && compare(x.u, y.u) < 0;
  }

  std::string str() const { return at_infinity ? std::string("[1:0]") : "[" + u.str() + ":1]"; }

  static End parse(std::uint32_t p, std::string_view text);
};

template <LocalScalar S>
End<S> end_canonical(const S& u, const S& v) {
  if (v.is_zero()) {
    if (u.is_zero()) fail(ErrorCode::zero_vector, "end of the zero vector");
    return {true, S::zero(u.prime())};
  }
  return {false, u / v};
}

template <LocalScalar S>
End<S> End<S>::parse(std::uint32_t p, std::string_view text) {
  while (!text.empty() && text.front() == ' ') text.remove_prefix(1);
  while (!text.empty() && text.back() == ' ') text.remove_suffix(1);
  auto colon = text.find(':');
  if (text.size() < 5 || text.front() != '[' || text.back() != ']' || colon == std::string_view::npos)
    fail(ErrorCode::parse_error, "end must look like '[u:v]', got '" + std::string(text) + "'");
  return end_canonical(S::parse(p, text.substr(1, colon - 1)), S::parse(p, text.substr(colon + 1, text.size() - colon - 2)));
}

template <LocalScalar S>
End<S> omega(std::uint32_t p) {
  return {true, S::zero(p)};
}

template <LocalScalar S>
End<S> omega_prime(std::uint32_t p) {
  return {false, S::zero(p)};
}

// ---------------------------------------------------------------------------
// Vertices and lattices

template <LocalScalar S>
Vertex<S> standard_vertex(std::uint32_t p, std::int64_t n) {
  return {n, S::zero(p)};
}

template <LocalScalar S>
Vertex<S> base_vertex(std::uint32_t p) {
  return standard_vertex<S>(p, 0);
}

/// Basis matrix [[1, c], [0, w^m]] of the distinguished lattice in the class.
template <LocalScalar S>
Mat2<S> lattice_basis(const Vertex<S>& x) {
  const auto p = x.c.prime();
  return {S::one(p), x.c, S::zero(p), S::uniformizer_pow(p, x.m)};
}

/// Class of the lattice spanned by the columns of g. Constant on g K and on F^x g.
template <LocalScalar S>
Vertex<S> vertex_of_lattice(const Mat2<S>& g) {
  // column operations (right multiplication by K) make the basis upper triangular
  const Mat2<S> b = iwasawa(g).b;
  const S ratio = b.d / b.a;
  const std::int64_t m = ratio.valuation().value();
  const S c = (b.b / (b.a * ratio.unit_part())).frac();
  return {m, c};
}

template <LocalScalar S>
Vertex<S> act(const Mat2<S>& g, const Vertex<S>& x) {
  return vertex_of_lattice(g * lattice_basis(x));
}

template <LocalScalar S>
Edge<S> act(const Mat2<S>& g, const Edge<S>& e) {
  return Edge<S>::make(act(g, e.u), act(g, e.v));
}

template <LocalScalar S>
End<S> act(const Mat2<S>& g, const End<S>& w) {
  if (w.at_infinity) return end_canonical(g.a, g.c);
  return end_canonical(g.a * w.u + g.b, g.c * w.u + g.d);
}

/// Vertex adjacency read off from index-q sublattices: the q + 1 classes g_x M
/// for M in {diag(1, w)} u {[[w, r], [0, 1]] : r = 0..p-1}. The first entry is
/// the step toward [1:0]; the rest follow residue order.
template <LocalScalar S>
std::vector<Vertex<S>> neighbors(const Vertex<S>& x) {
  const auto p = x.c.prime();
  const Mat2<S> basis = lattice_basis(x);
  std::vector<Vertex<S>> out;
  out.reserve(p + 1);
  out.push_back(vertex_of_lattice(basis * Mat2<S>::diag(S::one(p), S::uniformizer(p))));
  for (std::uint32_t r = 0; r < p; ++r) {
    Mat2<S> sub{S::uniformizer(p), S::from_int(p, r), S::zero(p), S::one(p)};
    out.push_back(vertex_of_lattice(basis * sub));
  }
  return out;
}

/// d(x, y) = b - a for the elementary divisors (a, b) of g_x^-1 g_y.
template <LocalScalar S>
std::int64_t distance(const Vertex<S>& x, const Vertex<S>& y) {
  const auto [a, b] = elementary_divisors(lattice_basis(x).inverse() * lattice_basis(y));
  return b - a;
}

template <LocalScalar S>
bool adjacent(const Vertex<S>& x, const Vertex<S>& y) {
  return distance(x, y) == 1;
}

/// Neighbour one step closer to [1:0].
template <LocalScalar S>
Vertex<S> parent(const Vertex<S>& x) {
  return {x.m + 1, (x.c * S::uniformizer(x.c.prime())).frac()};
}

/// Vertices toward [1:0] from x and y meet; the geodesic goes up from x to
/// the meeting point and down to y.
template <LocalScalar S>
Path<S> geodesic(const Vertex<S>& x, const Vertex<S>& y) {
  Path<S> up_x{x}, up_y{y};
  while (up_x.back().m < up_y.back().m) up_x.push_back(parent(up_x.back()));
  while (up_y.back().m < up_x.back().m) up_y.push_back(parent(up_y.back()));
  while (!(up_x.back() == up_y.back())) {
    up_x.push_back(parent(up_x.back()));
    up_y.push_back(parent(up_y.back()));
  }
  up_y.pop_back();
  up_x.insert(up_x.end(), up_y.rbegin(), up_y.rend());
  return up_x;
}

/// Vertices at distance exactly r from x, in breadth-first order.
template <LocalScalar S>
std::vector<Vertex<S>> sphere(const Vertex<S>& x, std::int64_t r) {
  std::vector<Vertex<S>> layer{x};
  std::vector<Vertex<S>> previous;
  for (std::int64_t k = 0; k < r; ++k) {
    std::vector<Vertex<S>> next;
    std::set<Vertex<S>> prev_set(previous.begin(), previous.end());
    for (const auto& v : layer)
      for (auto& n : neighbors(v))
        if (!prev_set.contains(n)) next.push_back(std::move(n));
    previous = std::move(layer);
    layer = std::move(next);
  }
  return layer;
}

/// ball(x, r) as spheres 0..r concatenated.
template <LocalScalar S>
std::vector<Vertex<S>> ball(const Vertex<S>& x, std::int64_t r) {
  std::vector<Vertex<S>> out;
  for (std::int64_t k = 0; k <= r; ++k) {
    auto s = sphere(x, k);
    out.insert(out.end(), s.begin(), s.end());
  }
  return out;
}

/// B(eta, r): vertices within r of either endpoint.
template <LocalScalar S>
std::vector<Vertex<S>> ball(const Edge<S>& e, std::int64_t r) {
  std::vector<Vertex<S>> out = ball(e.u, r);
  std::set<Vertex<S>> seen(out.begin(), out.end());
  for (auto& v : ball(e.v, r))
    if (seen.insert(v).second) out.push_back(std::move(v));
  return out;
}

/// Edges with both endpoints in `vertices`, sorted.
template <LocalScalar S>
std::vector<Edge<S>> edges_within(const std::vector<Vertex<S>>& vertices) {
  std::set<Vertex<S>> members(vertices.begin(), vertices.end());
  std::set<Edge<S>> edges;
  for (const auto& v : vertices)
    for (const auto& n : neighbors(v))
      if (members.contains(n)) edges.insert(Edge<S>::make(v, n));
  return {edges.begin(), edges.end()};
}

// ---------------------------------------------------------------------------
// Ends

/// Whether x lies on the apartment joining [1:0] and [u:1]: c = w^m u mod o.
template <LocalScalar S>
bool on_apartment_from_infinity(const Vertex<S>& x, const S& u) {
  const auto p = x.c.prime();
  return (x.c - S::uniformizer_pow(p, x.m) * u).valuation() >= Valuation(0);
}

/// The neighbour of x on the ray [x, w).
template <LocalScalar S>
Vertex<S> step_toward(const Vertex<S>& x, const End<S>& w) {
  if (w.at_infinity || !on_apartment_from_infinity(x, w.u)) return parent(x);
  const auto p = x.c.prime();
  return {x.m - 1, (S::uniformizer_pow(p, x.m - 1) * w.u).frac()};
}

/// First L + 1 vertices of the ray [x, w).
template <LocalScalar S>
Path<S> halfline(const Vertex<S>& x, const End<S>& w, std::int64_t length) {
  Path<S> out{x};
  for (std::int64_t i = 0; i < length; ++i) out.push_back(step_toward(out.back(), w));
  return out;
}

template <LocalScalar S>
bool stabilizes_end(const Mat2<S>& g, const End<S>& w) {
  return act(g, w) == w;
}

/// Whether x lies on the apartment joining two distinct ends.
template <LocalScalar S>
bool on_apartment(const Vertex<S>& x, const End<S>& w1, const End<S>& w2) {
  return !(step_toward(x, w1) == step_toward(x, w2));
}

/// The vertex of the apartment (w1, w2) closest to the base vertex.
template <LocalScalar S>
Vertex<S> apartment_center(const End<S>& w1, const End<S>& w2) {
  if (w1 == w2) fail(ErrorCode::equal_ends, "apartment needs two distinct ends, got " + w1.str() + " twice");
  Vertex<S> cur = base_vertex<S>(w1.u.prime());
  for (;;) {
    Vertex<S> s1 = step_toward(cur, w1);
    if (!(s1 == step_toward(cur, w2))) return cur;
    cur = std::move(s1);
  }
}

/// Window of radius r of the apartment from w1 to w2, centred at the vertex nearest x0.
template <LocalScalar S>
Path<S> apartment_window(const End<S>& w1, const End<S>& w2, std::int64_t radius) {
  const Vertex<S> center = apartment_center(w1, w2);
  Path<S> toward1 = halfline(center, w1, radius);
  Path<S> toward2 = halfline(center, w2, radius);
  Path<S> out(toward1.rbegin(), toward1.rend());
  out.insert(out.end(), toward2.begin() + 1, toward2.end());
  return out;
}

/// The median of three distinct ends: walk from x0 in the direction shared by
/// two of the three rays until all three rays leave in different directions.
template <LocalScalar S>
Vertex<S> crossroad(const End<S>& w1, const End<S>& w2, const End<S>& w3) {
  if (w1 == w2 || w1 == w3 || w2 == w3) fail(ErrorCode::not_distinct, "crossroad needs three distinct ends");
  Vertex<S> cur = base_vertex<S>(w1.u.prime());
  for (;;) {
    Vertex<S> s1 = step_toward(cur, w1);
    Vertex<S> s2 = step_toward(cur, w2);
    Vertex<S> s3 = step_toward(cur, w3);
    if (s1 == s2 || s1 == s3) {
      cur = std::move(s1);
    } else if (s2 == s3) {
      cur = std::move(s2);
    } else {
      return cur;
    }
  }
}

// ---------------------------------------------------------------------------
// Export

/// Ball around x as an undirected DOT graph, vertices and edges in breadth-first order.
template <LocalScalar S>
std::string ball_dot(const Vertex<S>& x, std::int64_t r) {
  std::vector<Vertex<S>> vertices = ball(x, r);
  std::map<Vertex<S>, std::size_t> index;
  std::ostringstream os;
  os << "graph ball {\n";
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    index.emplace(vertices[i], i);
    os << "  v" << i << " [label=\"" << vertices[i].str() << "\"];\n";
  }
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    for (const auto& n : neighbors(vertices[i])) {
      auto it = index.find(n);
      if (it != index.end() && it->second > i) os << "  v" << i << " -- v" << it->second << ";\n";
    }
  }
  os << "}\n";
  return os.str();
}

}  // namespace btk
