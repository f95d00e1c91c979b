#pragma once

// Finite-ball automorphisms and the local PGL2 test: an automorphism belongs
// to level e when on every ball B(eta, e) around an edge it agrees with some
// element of PGL2(F).

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "btk/geometry.hpp"

namespace btk {

template <LocalScalar S>
using BallCenter = std::variant<Vertex<S>, Edge<S>>;

template <LocalScalar S>
std::vector<Vertex<S>> ball(const BallCenter<S>& center, std::int64_t r) {
  return std::visit([&](const auto& c) { return ball(c, r); }, center);
}

/// A bijection from ball(center, radius) onto another ball of the same radius
/// preserving adjacency.
template <LocalScalar S>
struct LocalAut {
  std::uint32_t p = 0;
  BallCenter<S> center;
  std::int64_t radius = 0;
  std::map<Vertex<S>, Vertex<S>> mapping;

  bool contains(const Vertex<S>& v) const { return mapping.contains(v); }

  const Vertex<S>& operator()(const Vertex<S>& v) const {
    auto it = mapping.find(v);
    if (it == mapping.end()) fail(ErrorCode::domain_too_small, v.str() + " is outside the local automorphism's domain");
    return it->second;
  }

  std::vector<Vertex<S>> domain() const {
    std::vector<Vertex<S>> out;
    out.reserve(mapping.size());
    for (const auto& [k, v] : mapping) out.push_back(k);
    return out;
  }
};

template <LocalScalar S>
LocalAut<S> restrict_to_ball(const Mat2<S>& g, const BallCenter<S>& center, std::int64_t radius) {
  LocalAut<S> f{g.prime(), center, radius, {}};
  for (auto& v : ball(center, radius)) {
    Vertex<S> image = act(g, v);
    f.mapping.emplace(std::move(v), std::move(image));
  }
  return f;
}

/// Throws INVALID_LOCAL_AUT unless the domain is exactly the stated ball, the
/// map is injective, distances are preserved and the image is the ball of the
/// same radius around the image of the center.
template <LocalScalar S>
void validate(const LocalAut<S>& f) {
  auto bad = [](const std::string& why) { fail(ErrorCode::invalid_local_aut, why); };
  if (f.radius < 0) bad("negative radius");
  const std::vector<Vertex<S>> expected = ball(f.center, f.radius);
  if (expected.size() != f.mapping.size()) bad("domain has " + std::to_string(f.mapping.size()) + " vertices, ball has " + std::to_string(expected.size()));
  for (const auto& v : expected)
    if (!f.contains(v)) bad(v.str() + " is in the ball but not mapped");
  std::set<Vertex<S>> image;
  for (const auto& [from, to] : f.mapping)
    if (!image.insert(to).second) bad("two vertices map to " + to.str());
  const auto dom = f.domain();
  for (std::size_t i = 0; i < dom.size(); ++i)
    for (std::size_t j = i + 1; j < dom.size(); ++j)
      if (distance(dom[i], dom[j]) != distance(f(dom[i]), f(dom[j])))
        bad("distance between " + dom[i].str() + " and " + dom[j].str() + " is not preserved");
  const BallCenter<S> image_center = std::visit(
      [&](const auto& c) -> BallCenter<S> {
        if constexpr (std::is_same_v<std::decay_t<decltype(c)>, Vertex<S>>)
          return f(c);
        else
          return Edge<S>::make(f(c.u), f(c.v));
      },
      f.center);
  for (const auto& v : ball(image_center, f.radius))
    if (!image.contains(v)) bad("image misses " + v.str());
}

// JSON: {"backend": "qp", "p": 5, "center": "(0;0)" or ["(0;0)","(1;0)"],
//        "radius": 2, "map": [["(0;0)","(0;0)"], ...]}

template <LocalScalar S>
nlohmann::ordered_json to_json(const LocalAut<S>& f) {
  nlohmann::ordered_json j;
  j["backend"] = S::backend_name;
  j["p"] = f.p;
  if (const auto* v = std::get_if<Vertex<S>>(&f.center))
    j["center"] = v->str();
  else {
    const auto& e = std::get<Edge<S>>(f.center);
    j["center"] = {e.u.str(), e.v.str()};
  }
  j["radius"] = f.radius;
  auto pairs = nlohmann::ordered_json::array();
  for (const auto& [from, to] : f.mapping) pairs.push_back({from.str(), to.str()});
  j["map"] = std::move(pairs);
  return j;
}

template <LocalScalar S>
LocalAut<S> local_aut_from_json(const nlohmann::json& j) {
  try {
    if (j.at("backend").get<std::string>() != S::backend_name)
      fail(ErrorCode::invalid_local_aut, "backend mismatch: file says " + j.at("backend").get<std::string>());
    LocalAut<S> f;
    f.p = j.at("p").get<std::uint32_t>();
    if (!is_prime(f.p)) fail(ErrorCode::not_prime, std::to_string(f.p) + " is not prime");
    const auto& c = j.at("center");
    if (c.is_string()) {
      f.center = Vertex<S>::parse(f.p, c.get<std::string>());
    } else {
      if (!c.is_array() || c.size() != 2) fail(ErrorCode::invalid_local_aut, "center must be a vertex or a pair of vertices");
      Vertex<S> u = Vertex<S>::parse(f.p, c[0].get<std::string>());
      Vertex<S> v = Vertex<S>::parse(f.p, c[1].get<std::string>());
      if (!adjacent(u, v)) fail(ErrorCode::invalid_local_aut, "center pair is not an edge");
      f.center = Edge<S>::make(u, v);
    }
    f.radius = j.at("radius").get<std::int64_t>();
    for (const auto& pair : j.at("map")) {
      if (!pair.is_array() || pair.size() != 2) fail(ErrorCode::invalid_local_aut, "map entries must be [from, to] pairs");
      Vertex<S> from = Vertex<S>::parse(f.p, pair[0].get<std::string>());
      Vertex<S> to = Vertex<S>::parse(f.p, pair[1].get<std::string>());
      if (!f.mapping.emplace(std::move(from), std::move(to)).second)
        fail(ErrorCode::invalid_local_aut, "vertex " + pair[0].get<std::string>() + " mapped twice");
    }
    validate(f);
    return f;
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::parse_error, std::string("local automorphism JSON: ") + e.what());
  }
}

// ---------------------------------------------------------------------------
// Matching a finite ball against PGL2

/// Upper bound on the stabilizer candidates (p - 1) p^(3e + 1) enumerated per edge.
inline constexpr std::uint64_t kMatchCandidateLimit = 400000;

inline std::uint64_t match_candidate_count(std::uint32_t p, std::int64_t e) {
  std::uint64_t count = p - 1;
  for (std::int64_t k = 0; k < 3 * e + 1; ++k) {
    count *= p;
    if (count > kMatchCandidateLimit) return count;
  }
  return count;
}

namespace detail {

template <LocalScalar S>
struct MatchSearch {
  std::uint32_t p;
  std::int64_t e;
  // layers[j]: vertices at distance j + 1 from x0 (x0 itself in layer 0) with
  // their required images
  std::vector<std::vector<std::pair<Mat2<S>, Vertex<S>>>> layers;
  std::vector<S> digit_scalars;  // from_int(r) for r = 0..p-1

  bool layer_ok(const Mat2<S>& i, std::size_t j) const {
    for (const auto& [basis, want] : layers[j])
      if (!(vertex_of_lattice(i * basis) == want)) return false;
    return true;
  }

  // Entries are fixed one w-adic digit at a time; entries mod w^(j+1)
  // already determine the action on ball(x0, j + 1).
  std::optional<Mat2<S>> extend(const S& beta, const S& gamma, const S& delta, std::int64_t j) const {
    const S wj = S::uniformizer_pow(p, j);
    for (std::uint32_t db = 0; db < p; ++db)
      for (std::uint32_t dc = 0; dc < (j == 0 ? 1u : p); ++dc)
        for (std::uint32_t dd = (j == 0 ? 1u : 0u); dd < p; ++dd) {
          const S b = beta + digit_scalars[db] * wj;
          const S c = gamma + digit_scalars[dc] * wj;
          const S d = delta + digit_scalars[dd] * wj;
          const Mat2<S> candidate{S::one(p), b, c, d};
          if (!layer_ok(candidate, static_cast<std::size_t>(j))) continue;
          if (j == e) return candidate;
          if (auto found = extend(b, c, d, j + 1)) return found;
        }
    return std::nullopt;
  }
};

}  // namespace detail

/// Some g' in PGL2(F) agreeing with f on B(eta, e), or nullopt when none exists.
/// The edge stabilizer is searched modulo w^(e+1) after moving eta and its
/// image to {x0, x1} with weak 2-transitivity witnesses.
template <LocalScalar S>
std::optional<Mat2<S>> pgl2_match_on_ball(const LocalAut<S>& f, const Edge<S>& eta, std::int64_t e) {
  if (e < 0) fail(ErrorCode::invalid_local_aut, "level must be non-negative");
  const std::uint32_t p = f.p;
  if (match_candidate_count(p, e) > kMatchCandidateLimit)
    fail(ErrorCode::capacity, "stabilizer search for p = " + std::to_string(p) + ", e = " + std::to_string(e) + " exceeds " +
                                  std::to_string(kMatchCandidateLimit) + " candidates");
  const std::vector<Vertex<S>> region = ball(eta, e);
  for (const auto& v : region)
    if (!f.contains(v)) fail(ErrorCode::domain_too_small, "B(" + eta.str() + ", " + std::to_string(e) + ") leaves the domain at " + v.str());

  const Vertex<S> x0 = base_vertex<S>(p);
  const Vertex<S> x1 = standard_vertex<S>(p, 1);
  const Mat2<S> to_eta = weak2_witness(x0, x1, eta.u, eta.v);
  const Mat2<S> to_image = weak2_witness(x0, x1, f(eta.u), f(eta.v));
  const Mat2<S> from_image = to_image.inverse();

  detail::MatchSearch<S> search{p, e, {}, {}};
  search.layers.resize(static_cast<std::size_t>(e) + 1);
  for (std::uint32_t r = 0; r < p; ++r) search.digit_scalars.push_back(S::from_int(p, r));
  for (const auto& z : ball(Edge<S>::make(x0, x1), e)) {
    const std::int64_t layer = std::max<std::int64_t>(distance(z, x0) - 1, 0);
    search.layers[static_cast<std::size_t>(layer)].emplace_back(lattice_basis(z), act(from_image, f(act(to_eta, z))));
  }
  const auto stabilizer_part = search.extend(S::zero(p), S::zero(p), S::zero(p), 0);
  if (!stabilizer_part) return std::nullopt;
  Mat2<S> g = to_image * *stabilizer_part * to_eta.inverse();
  for (const auto& v : region)
    if (!(act(g, v) == f(v))) fail(ErrorCode::internal, "matched element disagrees with the local automorphism at " + v.str());
  return g;
}

template <LocalScalar S>
struct GhatVerdict {
  bool locally_pgl2 = true;
  std::optional<Edge<S>> violation;
  std::size_t edges_tested = 0;
};

/// Runs pgl2_match_on_ball on every edge eta with B(eta, e) inside the domain,
/// in sorted edge order, stopping at the first edge without a match.
template <LocalScalar S>
GhatVerdict<S> ghat_local_test(const LocalAut<S>& f, std::int64_t e) {
  if (e < 0) fail(ErrorCode::invalid_local_aut, "level must be non-negative");
  if (f.radius < e + 1)
    fail(ErrorCode::radius_too_small, "radius " + std::to_string(f.radius) + " < e + 1 = " + std::to_string(e + 1));
  GhatVerdict<S> verdict;
  for (const auto& eta : edges_within(f.domain())) {
    const auto region = ball(eta, e);
    if (!std::all_of(region.begin(), region.end(), [&](const Vertex<S>& v) { return f.contains(v); })) continue;
    ++verdict.edges_tested;
    if (!pgl2_match_on_ball(f, eta, e)) {
      verdict.locally_pgl2 = false;
      verdict.violation = eta;
      return verdict;
    }
  }
  return verdict;
}

// ---------------------------------------------------------------------------
// Grafts: ball bijections outside PGL2 at level 1

template <LocalScalar S>
struct GraftSearch {
  std::size_t induced_order = 0;     // permutations of B({x0,x1}, 1) induced by the edge stabilizer
  std::size_t bijection_count = 0;   // adjacency-preserving bijections of B({x0,x1}, 1) fixing x0 and x1
  bool induced_is_full = false;
  std::optional<LocalAut<S>> graft;  // on ball(x0, 2), agreeing with no PGL2 element on B({x0,x1}, 1)
};

/// Compares the permutation group induced on B({x0,x1}, 1) by the Iwahori
/// subgroup (enumerated modulo w^2) with all (p!)^2 bijections permuting the
/// two sides, and grafts the first bijection outside the group onto ball(x0, 2).
template <LocalScalar S>
GraftSearch<S> find_graft(std::uint32_t p) {
  const Vertex<S> x0 = base_vertex<S>(p);
  const Vertex<S> x1 = standard_vertex<S>(p, 1);
  std::vector<Vertex<S>> side0, side1;
  for (auto& n : neighbors(x0))
    if (!(n == x1)) side0.push_back(std::move(n));
  for (auto& n : neighbors(x1))
    if (!(n == x0)) side1.push_back(std::move(n));
  const std::size_t q = p;

  auto index_of = [](const std::vector<Vertex<S>>& side, const Vertex<S>& v) -> std::size_t {
    auto it = std::find(side.begin(), side.end(), v);
    if (it == side.end()) fail(ErrorCode::internal, "stabilizer element moved a side vertex off its side");
    return static_cast<std::size_t>(it - side.begin());
  };

  std::set<std::vector<std::size_t>> induced;
  const std::uint64_t per_entry = static_cast<std::uint64_t>(p) * p;  // residues mod w^2
  for (std::uint64_t ib = 0; ib < per_entry; ++ib)
    for (std::uint64_t ic = 0; ic < p; ++ic)
      for (std::uint64_t id = 0; id < per_entry; ++id) {
        if (id % p == 0) continue;
        const Mat2<S> i{S::one(p), residue_representative<S>(p, 2, ib), residue_representative<S>(p, 1, ic) * S::uniformizer(p),
                        residue_representative<S>(p, 2, id)};
        std::vector<std::size_t> perm;
        for (const auto& v : side0) perm.push_back(index_of(side0, act(i, v)));
        for (const auto& v : side1) perm.push_back(index_of(side1, act(i, v)));
        induced.insert(std::move(perm));
      }

  GraftSearch<S> out;
  out.induced_order = induced.size();
  std::vector<std::size_t> pi0(q), pi1(q);
  std::iota(pi0.begin(), pi0.end(), 0);
  std::optional<std::pair<std::vector<std::size_t>, std::vector<std::size_t>>> outside;
  do {
    std::iota(pi1.begin(), pi1.end(), 0);
    do {
      ++out.bijection_count;
      std::vector<std::size_t> perm = pi0;
      perm.insert(perm.end(), pi1.begin(), pi1.end());
      if (!outside && !induced.contains(perm)) outside.emplace(pi0, pi1);
    } while (std::next_permutation(pi1.begin(), pi1.end()));
  } while (std::next_permutation(pi0.begin(), pi0.end()));
  out.induced_is_full = !outside.has_value();
  if (!outside) return out;

  LocalAut<S> f{p, x0, 2, {}};
  f.mapping.emplace(x0, x0);
  f.mapping.emplace(x1, x1);
  for (std::size_t k = 0; k < q; ++k) {
    f.mapping.emplace(side0[k], side0[outside->first[k]]);
    f.mapping.emplace(side1[k], side1[outside->second[k]]);
  }
  // vertices two steps out through side0 follow a rotation about x0
  for (const auto& n : side0) {
    const Mat2<S> rotation = sphere_witness(x0, n, f(n));
    for (const auto& child : neighbors(n))
      if (!(child == x0)) f.mapping.emplace(child, act(rotation, child));
  }
  validate(f);
  out.graft = std::move(f);
  return out;
}

// ---------------------------------------------------------------------------
// Congruence principle

/// g = lambda (1 + w^m X) for a unit lambda and integral X.
template <LocalScalar S>
bool congruent_to_identity(const Mat2<S>& g, std::int64_t m) {
  const Mat2<S> r = proj_normalize(g).rep;
  const Valuation level(m);
  return r.a == S::one(r.prime()) && r.b.valuation() >= level && r.c.valuation() >= level &&
         (r.d - S::one(r.prime())).valuation() >= level;
}

template <LocalScalar S>
bool fixes_ball(const Mat2<S>& g, const Vertex<S>& center, std::int64_t r) {
  for (const auto& v : ball(center, r))
    if (!(act(g, v) == v)) return false;
  return true;
}

}  // namespace btk
