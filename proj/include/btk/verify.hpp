#pragma once

// Seeded property suites. Each returns a report whose JSON form depends only
// on the suite, the field and the parameters; wall time is kept out of it.

#include <array>
#include <chrono>
#include <cstdint>
#include <functional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "btk/geometry.hpp"
#include "btk/gl2.hpp"
#include "btk/local_aut.hpp"
#include "btk/oracle.hpp"
#include "btk/random.hpp"

namespace btk {

inline constexpr std::array<std::string_view, 10> kSuiteNames = {
    "cartan-distance", "decomp-recompose", "sphere-transitivity", "geo-decomp", "nk-index",
    "ghat-local",      "crossroad",        "classify-oracle",     "regularity", "stabilizers"};

/// Negative radius/cases/level mean "use the suite's default".
struct VerifyParams {
  std::uint32_t p = 3;
  std::uint64_t seed = 0;
  std::int64_t radius = -1;
  std::int64_t cases = -1;
  std::int64_t level = -1;
};

struct VerifyFailure {
  std::size_t index = 0;
  std::string reproduce;
  std::string message;
};

struct VerifyReport {
  std::string suite;
  std::string backend;
  std::uint32_t p = 0;
  std::uint64_t seed = 0;
  std::size_t cases = 0;
  std::vector<std::string> notes;
  std::vector<VerifyFailure> failures;
  double wall_seconds = 0;

  bool passed() const { return failures.empty(); }

  nlohmann::ordered_json to_json() const {
    nlohmann::ordered_json j;
    j["suite"] = suite;
    j["backend"] = backend;
    j["p"] = p;
    j["seed"] = seed;
    j["cases"] = cases;
    j["passed"] = passed();
    j["notes"] = notes;
    auto list = nlohmann::ordered_json::array();
    for (const auto& f : failures) list.push_back({{"case", f.index}, {"reproduce", f.reproduce}, {"message", f.message}});
    j["failures"] = std::move(list);
    return j;
  }
};

namespace detail {

// Runs one case, turning a false check or an exception into a failure entry.
class CaseRunner {
 public:
  explicit CaseRunner(VerifyReport& report) : report_(report) {}

  void run(const std::string& reproduce, const std::function<std::string()>& body) {
    const std::size_t index = report_.cases++;
    try {
      std::string problem = body();
      if (!problem.empty()) report_.failures.push_back({index, reproduce, std::move(problem)});
    } catch (const Error& e) {
      report_.failures.push_back({index, reproduce, std::string(error_name(e.code())) + ": " + e.what()});
    }
  }

 private:
  VerifyReport& report_;
};

inline std::int64_t pick(std::int64_t value, std::int64_t fallback) { return value < 0 ? fallback : value; }

template <LocalScalar S>
std::string matrix_arg(const Mat2<S>& g) {
  return "--matrix '" + g.str() + "'";
}

template <LocalScalar S>
Vertex<S> random_walk(const Vertex<S>& start, std::int64_t length, Rng& rng) {
  Vertex<S> here = start;
  std::optional<Vertex<S>> previous;
  for (std::int64_t k = 0; k < length; ++k) {
    std::vector<Vertex<S>> options;
    for (auto& n : neighbors(here))
      if (!previous || !(n == *previous)) options.push_back(std::move(n));
    previous = here;
    here = options[static_cast<std::size_t>(rng.range(0, static_cast<std::int64_t>(options.size()) - 1))];
  }
  return here;
}

// ---------------------------------------------------------------------------

template <LocalScalar S>
void suite_cartan_distance(VerifyReport& report, const VerifyParams& params) {
  const std::int64_t radius = pick(params.radius, 4);
  const oracle::BfsDistances<S> bfs(ball(base_vertex<S>(params.p), radius));
  const auto& vs = bfs.vertices();
  std::size_t mismatches = 0;
  for (std::size_t i = 0; i < vs.size(); ++i) {
    const auto reference = bfs.from(i);
    for (std::size_t j = i; j < vs.size(); ++j) {
      const std::int64_t d = distance(vs[i], vs[j]);
      ++report.cases;
      if (d != reference[j] && mismatches++ < 20)
        report.failures.push_back({report.cases - 1, "btk distance --x '" + vs[i].str() + "' --y '" + vs[j].str() + "'",
                                   "elementary divisors give " + std::to_string(d) + ", BFS gives " + std::to_string(reference[j])});
    }
  }
  report.notes.push_back(std::to_string(vs.size()) + " vertices in ball(x0, " + std::to_string(radius) + ")");
}

template <LocalScalar S>
void suite_decomp_recompose(VerifyReport& report, const VerifyParams& params) {
  const auto p = params.p;
  Rng rng(params.seed);
  CaseRunner runner(report);
  const std::int64_t cases = pick(params.cases, 1000);
  for (std::int64_t n = 0; n < cases; ++n) {
    const Mat2<S> g = random_matrix<S>(p, rng, -5, 5);
    const Mat2<S> i = random_iwahori<S>(p, rng);
    runner.run(matrix_arg(g) + " --iwahori '" + i.str() + "'", [&]() -> std::string {
      using T = SubgroupTag;
      const auto iw = iwasawa(g);
      if (!(recompose(iw) == g) || !member(iw.b, T::B) || !member(iw.k, T::K)) return "iwasawa";
      const auto ca = cartan(g);
      if (!(recompose(ca) == g) || !member(ca.k1, T::K) || !member(ca.k2, T::K) || ca.a > ca.b ||
          std::pair(ca.a, ca.b) != elementary_divisors(g))
        return "cartan";
      const auto br = bruhat(g);
      if (!(recompose(br) == g)) return "bruhat recomposition";
      if (const auto* big = std::get_if<BruhatBigCell<S>>(&br)) {
        if (g.c.is_zero() || !member(big->b1, T::B) || !member(big->b2, T::B)) return "bruhat big cell";
      } else if (!g.c.is_zero()) {
        return "bruhat small cell";
      }
      const auto le = levi(iw.b);
      if (!(recompose(le) == iw.b) || !member(le.n, T::N) || !member(le.t, T::T)) return "levi";
      for (const auto& order : all_iwahori_orderings()) {
        const auto f = iwahori_factor(i, order);
        if (!(recompose(f) == i)) return "iwahori recomposition";
        for (std::size_t k = 0; k < 3; ++k)
          if (!iwahori_part_member(f[k], order[k])) return "iwahori membership";
        // factoring i^-1 in the reversed order and inverting gives the same factors
        const auto g_inv = iwahori_factor(i.inverse(), IwahoriOrdering{order[2], order[1], order[0]});
        if (!(g_inv[2].inverse() == f[0]) || !(g_inv[1].inverse() == f[1]) || !(g_inv[0].inverse() == f[2]))
          return "iwahori uniqueness";
      }
      return {};
    });
  }
}

template <LocalScalar S>
void suite_sphere_transitivity(VerifyReport& report, const VerifyParams& params) {
  const auto p = params.p;
  const Vertex<S> x0 = base_vertex<S>(p);
  CaseRunner runner(report);
  const std::int64_t radius = pick(params.radius, 3);
  for (std::int64_t r = 1; r <= radius; ++r) {
    const auto shell = sphere(x0, r);
    for (const auto& y : shell)
      for (const auto& z : shell)
        runner.run("btk witness --kind sphere --x '" + x0.str() + "' --y '" + y.str() + "' --z '" + z.str() + "'", [&]() -> std::string {
          const Mat2<S> g = sphere_witness(x0, y, z);
          return act(g, x0) == x0 && act(g, y) == z ? "" : "witness does not verify";
        });
  }
  Rng rng(params.seed);
  const std::int64_t cases = pick(params.cases, 200);
  for (std::int64_t n = 0; n < cases; ++n) {
    const std::int64_t d = rng.range(0, 4);
    const Vertex<S> x1 = random_vertex<S>(p, rng);
    const Vertex<S> x2 = random_walk(x1, d, rng);
    const Vertex<S> y1 = random_vertex<S>(p, rng);
    const Vertex<S> y2 = random_walk(y1, d, rng);
    runner.run("btk witness --kind weak2 --x1 '" + x1.str() + "' --x2 '" + x2.str() + "' --y1 '" + y1.str() + "' --y2 '" + y2.str() + "'",
               [&]() -> std::string {
                 const Mat2<S> g = weak2_witness(x1, x2, y1, y2);
                 return act(g, x1) == y1 && act(g, x2) == y2 ? "" : "witness does not verify";
               });
  }
}

template <LocalScalar S>
void suite_geo_decomp(VerifyReport& report, const VerifyParams& params) {
  const auto p = params.p;
  const Vertex<S> x0 = base_vertex<S>(p);
  const Vertex<S> x1 = standard_vertex<S>(p, 1);
  Rng rng(params.seed);
  CaseRunner runner(report);
  const std::int64_t cases = pick(params.cases, 500);
  for (std::int64_t n = 0; n < cases; ++n) {
    const Mat2<S> g = random_pgl2<S>(p, rng);
    const Mat2<S> i = random_iwahori<S>(p, rng).scaled(random_unit<S>(p, rng));
    const Mat2<S> k = random_k<S>(p, rng);
    const Mat2<S> k_left = random_k<S>(p, rng);
    const Mat2<S> k_right = random_k<S>(p, rng);
    runner.run(matrix_arg(g) + " --iwahori '" + i.str() + "' --k '" + k.str() + "'", [&]() -> std::string {
      const auto iw = iwasawa_geo(g);
      if (!geo_verified(g, iw)) return "iwasawa_geo";
      const auto ca = cartan_geo(g);
      if (!geo_verified(g, ca) || ca.index != distance(x0, act(g, x0))) return "cartan_geo";
      if (cartan_geo(Mat2<S>(k_left * g * k_right)).index != ca.index) return "cartan_geo index not K-bi-invariant";
      const auto br = bruhat_geo(g);
      if (!geo_verified(g, br) || br.alpha_cell == stabilizes_end(g, omega<S>(p))) return "bruhat_geo";
      const auto br2 = bruhat_geo(g, BruhatMethod::unipotent);
      if (!geo_verified(g, br2)) return "bruhat_geo (unipotent route)";
      if (br.alpha_cell && !fixes_standard_apartment(Mat2<S>(br.factors[0].matrix.inverse() * br2.factors[0].matrix), 6))
        return "bruhat_geo N-parts differ outside H";
      const Mat2<S> b = iw.factors[1].matrix;
      const auto le = levi_geo(b);
      if (!geo_verified(b, le)) return "levi_geo";
      const auto ih = iwahori_geo(i);
      if (!geo_verified(i, ih)) return "iwahori_geo";
      const auto kd = k_double_coset(k);
      if (!geo_verified(k, kd) || kd.alpha_cell == (act(k, x1) == x1)) return "k_double_coset";
      const auto ib = iwahori_borel_geo(g);
      if (!geo_verified(g, ib)) return "iwahori_borel_geo";
      return {};
    });
  }
  // N-part uniqueness modulo H on elements outside the Borel
  const std::int64_t pairs = std::min<std::int64_t>(cases, 200);
  for (std::int64_t n = 0; n < pairs; ++n) {
    Mat2<S> g = random_matrix<S>(p, rng, -3, 3);
    while (stabilizes_end(g, omega<S>(p))) g = random_matrix<S>(p, rng, -3, 3);
    runner.run(matrix_arg(g), [&]() -> std::string {
      const auto first = bruhat_geo(g, BruhatMethod::crossroad);
      const auto second = bruhat_geo(g, BruhatMethod::unipotent);
      if (!first.alpha_cell || !second.alpha_cell) return "expected the N alpha B cell";
      const Mat2<S> quotient = first.factors[0].matrix.inverse() * second.factors[0].matrix;
      return fixes_standard_apartment(quotient, 6) ? "" : "N-parts differ by " + quotient.str() + ", not in H";
    });
  }
  // (I & B) and (I & B') meet in H: Iwahori elements stabilizing both ends fix the apartment
  for (std::int64_t n = 0; n < std::min<std::int64_t>(cases, 200); ++n) {
    Mat2<S> t = random_iwahori<S>(p, rng);
    if (rng.chance(2)) t.b = S::zero(p);
    if (rng.chance(2)) t.c = S::zero(p);
    runner.run(matrix_arg(t), [&]() -> std::string {
      const bool in_both = geo_member(t, GeoTag::iwahori_borel) && geo_member(t, GeoTag::iwahori_borel_prime);
      return !in_both || fixes_standard_apartment(t, 6) ? "" : "intersection element does not fix the apartment";
    });
  }
}

template <LocalScalar S>
void suite_nk_index(VerifyReport& report, const VerifyParams& params) {
  CaseRunner runner(report);
  const std::int64_t reach = pick(params.radius, 2);
  for (std::int64_t k = -reach; k <= reach; ++k)
    runner.run("--k " + std::to_string(k), [&]() -> std::string {
      const auto r = nk_orbit_check<S>(params.p, k);
      report.notes.push_back("orbit size " + std::to_string(r.orbit_size) + " at k = " + std::to_string(k));
      if (!r.elements_fix_ray) return "an element moves [x_k, w)";
      if (!r.orbit_is_target) return "orbit is not the neighbours of x_k below x_k+1";
      return r.orbit_size == params.p ? "" : "orbit size " + std::to_string(r.orbit_size);
    });
}

template <LocalScalar S>
void suite_ghat_local(VerifyReport& report, const VerifyParams& params) {
  const auto p = params.p;
  const Vertex<S> x0 = base_vertex<S>(p);
  Rng rng(params.seed);
  CaseRunner runner(report);
  const std::int64_t radius = pick(params.radius, 3);
  const std::int64_t top_level = pick(params.level, std::min<std::int64_t>(2, radius - 1));
  const std::int64_t cases = pick(params.cases, 200);
  for (std::int64_t n = 0; n < cases; ++n) {
    const Mat2<S> g = random_pgl2<S>(p, rng);
    runner.run(matrix_arg(g), [&]() -> std::string {
      const LocalAut<S> f = restrict_to_ball(g, BallCenter<S>(x0), radius);
      for (std::int64_t e = 1; e <= top_level; ++e) {
        const auto verdict = ghat_local_test(f, e);
        if (!verdict.locally_pgl2) return "restriction rejected at e = " + std::to_string(e) + " on " + verdict.violation->str();
      }
      return {};
    });
  }

  // congruence principle: lambda (1 + w^m X) fixes ball(x0, m)
  const unsigned digits = p <= 3 ? 2 : 1;
  std::uint64_t per_entry = 1;
  for (unsigned k = 0; k < digits; ++k) per_entry *= p;
  for (std::int64_t m = 1; m <= 2; ++m) {
    std::size_t checked = 0;
    const S wm = S::uniformizer_pow(p, m);
    std::uint64_t total = per_entry * per_entry * per_entry * per_entry;
    for (std::uint64_t code = 0; code < total; ++code) {
      std::uint64_t c = code;
      std::array<S, 4> x;
      for (auto& entry : x) {
        entry = residue_representative<S>(p, digits, c % per_entry) + S::uniformizer_pow(p, digits) * random_digits<S>(p, rng, 2, false);
        c /= per_entry;
      }
      const S lambda = random_unit<S>(p, rng);
      const Mat2<S> g = Mat2<S>{S::one(p) + wm * x[0], wm * x[1], wm * x[2], S::one(p) + wm * x[3]}.scaled(lambda);
      ++checked;
      runner.run(matrix_arg(g) + " --level " + std::to_string(m), [&]() -> std::string {
        if (!congruent_to_identity(g, m)) return "not recognised as congruent to the identity";
        return fixes_ball(g, x0, m) ? "" : "moves a vertex of ball(x0, " + std::to_string(m) + ")";
      });
    }
    report.notes.push_back("congruence level " + std::to_string(m) + ": " + std::to_string(checked) + " elements fix ball(x0, " +
                           std::to_string(m) + ")");
  }

  // grafted ball bijections at level 1
  if (p <= 5) {
    runner.run("btk ghat-test --find-graft --p " + std::to_string(p), [&]() -> std::string {
      const auto search = find_graft<S>(p);
      report.notes.push_back("edge stabilizer induces " + std::to_string(search.induced_order) + " of " +
                             std::to_string(search.bijection_count) + " bijections of B({x0,x1}, 1)");
      if (search.induced_is_full) {
        report.notes.push_back("induced group is the full adjacency-preserving stabilizer");
        return search.induced_order == search.bijection_count ? "" : "group order disagrees with the bijection count";
      }
      const auto verdict = ghat_local_test(*search.graft, 1);
      if (verdict.locally_pgl2) return "grafted bijection accepted at e = 1";
      report.notes.push_back("graft rejected with VIOLATION on " + verdict.violation->str());
      if (!ghat_local_test(*search.graft, 0).locally_pgl2) return "graft rejected at e = 0";
      return {};
    });
  }
}

template <LocalScalar S>
void suite_crossroad(VerifyReport& report, const VerifyParams& params) {
  const auto p = params.p;
  Rng rng(params.seed);
  CaseRunner runner(report);
  const std::int64_t cases = pick(params.cases, 300);
  for (std::int64_t n = 0; n < cases; ++n) {
    End<S> w1 = random_end<S>(p, rng), w2 = random_end<S>(p, rng), w3 = random_end<S>(p, rng);
    while (w2 == w1) w2 = random_end<S>(p, rng);
    while (w3 == w1 || w3 == w2) w3 = random_end<S>(p, rng);
    const bool equivariance = n < 100;
    const Mat2<S> g = random_matrix<S>(p, rng, -3, 3);
    runner.run("btk geodesic --crossroad '" + w1.str() + "' '" + w2.str() + "' '" + w3.str() + "'", [&]() -> std::string {
      const Vertex<S> c = crossroad(w1, w2, w3);
      const auto reference = oracle::apartment_intersection(w1, w2, w3);
      if (reference.size() != 1) return "oracle found " + std::to_string(reference.size()) + " common vertices";
      if (!(reference.front() == c)) return "crossroad " + c.str() + ", oracle " + reference.front().str();
      std::array<End<S>, 3> ends{w1, w2, w3};
      std::sort(ends.begin(), ends.end());
      do {
        if (!(crossroad(ends[0], ends[1], ends[2]) == c)) return "not invariant under permutation";
      } while (std::next_permutation(ends.begin(), ends.end()));
      if (equivariance && !(crossroad(act(g, w1), act(g, w2), act(g, w3)) == act(g, c)))
        return "not equivariant under " + g.str();
      return {};
    });
  }
}

template <LocalScalar S>
void suite_classify_oracle(VerifyReport& report, const VerifyParams& params) {
  const auto p = params.p;
  const Vertex<S> x0 = base_vertex<S>(p);
  Rng rng(params.seed);
  CaseRunner runner(report);
  const std::int64_t cases = pick(params.cases, 500);
  const std::int64_t search_radius = pick(params.radius, 8);
  std::size_t rejected = 0;
  std::array<std::size_t, 3> seen{};
  for (std::int64_t n = 0; n < cases; ++n) {
    Mat2<S> g = random_matrix<S>(p, rng, -3, 3);
    // keep the minimal set of g inside the oracle's search ball
    while (distance(x0, act(g, x0)) > 2 * search_radius) {
      ++rejected;
      g = random_matrix<S>(p, rng, -3, 3);
    }
    runner.run("btk classify " + matrix_arg(g), [&]() -> std::string {
      const AutClass<S> c = classify(g);
      const auto reference = oracle::classify_by_displacement(g, search_radius);
      const std::string_view kind = aut_kind(c);
      seen[c.index()]++;
      if (kind != reference.kind || translation_length(c) != reference.length)
        return std::string(kind) + " length " + std::to_string(translation_length(c)) + ", oracle " + std::string(reference.kind) +
               " length " + std::to_string(reference.length);
      if (const auto* e = std::get_if<Elliptic<S>>(&c); e && !(act(g, e->fixed_vertex) == e->fixed_vertex)) return "fixed vertex moves";
      if (const auto* e = std::get_if<Inversion<S>>(&c);
          e && !(act(g, e->edge.u) == e->edge.v && act(g, e->edge.v) == e->edge.u))
        return "edge is not inverted";
      return {};
    });
  }
  report.notes.push_back("elliptic " + std::to_string(seen[0]) + ", inversion " + std::to_string(seen[1]) + ", hyperbolic " +
                         std::to_string(seen[2]));
  report.notes.push_back(std::to_string(rejected) + " draws rejected for d(x0, g x0) > " + std::to_string(2 * search_radius));
}

template <LocalScalar S>
void suite_regularity(VerifyReport& report, const VerifyParams& params) {
  const auto p = params.p;
  Rng rng(params.seed);
  CaseRunner runner(report);
  const std::int64_t cases = pick(params.cases, 200);
  for (std::int64_t n = 0; n < cases; ++n) {
    const Vertex<S> x = random_vertex<S>(p, rng);
    runner.run("btk neighbors --x '" + x.str() + "'", [&]() -> std::string {
      const auto ns = neighbors(x);
      const std::set<Vertex<S>> distinct(ns.begin(), ns.end());
      if (ns.size() != p + 1 || distinct.size() != p + 1) return "expected " + std::to_string(p + 1) + " distinct neighbours";
      for (const auto& y : ns)
        if (distance(x, y) != 1) return y.str() + " is not adjacent";
      return {};
    });
  }
  std::int64_t expected = p + 1;
  for (std::int64_t r = 1; r <= pick(params.radius, 4); ++r, expected *= p)
    runner.run("btk ball --radius " + std::to_string(r), [&]() -> std::string {
      const auto size = static_cast<std::int64_t>(sphere(base_vertex<S>(p), r).size());
      return size == expected ? "" : "sphere has " + std::to_string(size) + " vertices, expected " + std::to_string(expected);
    });
}

template <LocalScalar S>
void suite_stabilizers(VerifyReport& report, const VerifyParams& params) {
  const auto p = params.p;
  const Vertex<S> x0 = base_vertex<S>(p);
  const Vertex<S> x1 = standard_vertex<S>(p, 1);
  Rng rng(params.seed);
  CaseRunner runner(report);
  const std::int64_t cases = pick(params.cases, 500);
  for (std::int64_t n = 0; n < cases; ++n) {
    const Mat2<S> g = random_pgl2<S>(p, rng);
    runner.run(matrix_arg(g), [&]() -> std::string {
      const Mat2<S> rep = proj_normalize(g).rep;
      const bool fixes_x0 = act(g, x0) == x0;
      if (fixes_x0 != member(rep, SubgroupTag::K)) return "K membership disagrees with fixing x0";
      if ((fixes_x0 && act(g, x1) == x1) != member(rep, SubgroupTag::I)) return "I membership disagrees with fixing {x0, x1}";
      if (stabilizes_end(g, omega<S>(p)) != member(rep, SubgroupTag::B)) return "B membership disagrees with stabilizing [1:0]";
      return {};
    });
  }
}

}  // namespace detail

template <LocalScalar S>
VerifyReport run_suite(std::string_view name, const VerifyParams& params) {
  if (!is_prime(params.p)) fail(ErrorCode::not_prime, std::to_string(params.p) + " is not prime");
  VerifyReport report;
  report.suite = std::string(name);
  report.backend = S::backend_name;
  report.p = params.p;
  report.seed = params.seed;
  const auto start = std::chrono::steady_clock::now();
  if (name == "cartan-distance") detail::suite_cartan_distance<S>(report, params);
  else if (name == "decomp-recompose") detail::suite_decomp_recompose<S>(report, params);
  else if (name == "sphere-transitivity") detail::suite_sphere_transitivity<S>(report, params);
  else if (name == "geo-decomp") detail::suite_geo_decomp<S>(report, params);
  else if (name == "nk-index") detail::suite_nk_index<S>(report, params);
  else if (name == "ghat-local") detail::suite_ghat_local<S>(report, params);
  else if (name == "crossroad") detail::suite_crossroad<S>(report, params);
  else if (name == "classify-oracle") detail::suite_classify_oracle<S>(report, params);
  else if (name == "regularity") detail::suite_regularity<S>(report, params);
  else if (name == "stabilizers") detail::suite_stabilizers<S>(report, params);
  else fail(ErrorCode::unknown_suite, "unknown suite '" + std::string(name) + "'");
  report.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

}  // namespace btk
