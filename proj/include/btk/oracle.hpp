#pragma once

// Reference computations that reach the same answers as the library by a
// different route. Used by the unit tests and the verification suites; not
// meant for production queries.

#include <cstdint>
#include <map>
#include <optional>
#include <queue>
#include <string_view>
#include <vector>

#include "btk/geometry.hpp"

namespace btk::oracle {

/// All-pairs graph distances inside a set of vertices closed under geodesics
/// (a ball), by breadth-first search over the neighbour relation.
template <LocalScalar S>
class BfsDistances {
 public:
  explicit BfsDistances(std::vector<Vertex<S>> vertices) : vertices_(std::move(vertices)) {
    for (std::size_t i = 0; i < vertices_.size(); ++i) index_.emplace(vertices_[i], i);
    adjacency_.resize(vertices_.size());
    for (std::size_t i = 0; i < vertices_.size(); ++i)
      for (const auto& n : neighbors(vertices_[i]))
        if (auto it = index_.find(n); it != index_.end()) adjacency_[i].push_back(it->second);
  }

  const std::vector<Vertex<S>>& vertices() const { return vertices_; }

  /// Distances from vertices()[source] to every vertex, -1 if unreachable.
  std::vector<std::int64_t> from(std::size_t source) const {
    std::vector<std::int64_t> dist(vertices_.size(), -1);
    std::queue<std::size_t> queue;
    dist[source] = 0;
    queue.push(source);
    while (!queue.empty()) {
      std::size_t u = queue.front();
      queue.pop();
      for (std::size_t v : adjacency_[u])
        if (dist[v] < 0) {
          dist[v] = dist[u] + 1;
          queue.push(v);
        }
    }
    return dist;
  }

 private:
  std::vector<Vertex<S>> vertices_;
  std::map<Vertex<S>, std::size_t> index_;
  std::vector<std::vector<std::size_t>> adjacency_;
};

template <LocalScalar S>
struct MinDisplacement {
  std::int64_t value = 0;
  Vertex<S> at;
};

/// min of d(x, g x) over ball(x0, radius), with d measured by the neighbour
/// BFS between x and g x. Subtrees are cut once the displacement stops
/// decreasing along a ray from x0 (displacement is convex along geodesics).
template <LocalScalar S>
MinDisplacement<S> min_displacement(const Mat2<S>& g, std::int64_t radius = 8) {
  const auto p = g.prime();
  auto disp = [&](const Vertex<S>& x) {
    const Vertex<S> gx = act(g, x);
    // climb toward [1:0] to a common level, then together until they meet
    Vertex<S> a = x;
    Vertex<S> b = gx;
    std::int64_t steps = 0;
    for (; a.m < b.m; ++steps) a = parent(a);
    for (; b.m < a.m; ++steps) b = parent(b);
    for (; !(a == b); steps += 2) {
      a = parent(a);
      b = parent(b);
    }
    return steps;
  };
  const Vertex<S> x0 = base_vertex<S>(p);
  MinDisplacement<S> best{disp(x0), x0};
  struct Item {
    Vertex<S> v;
    Vertex<S> from;
    std::int64_t f;
    std::int64_t depth;
  };
  std::vector<Item> stack;
  for (auto& n : neighbors(x0)) stack.push_back({n, x0, best.value, 1});
  while (!stack.empty() && best.value > 0) {
    Item item = std::move(stack.back());
    stack.pop_back();
    const std::int64_t f = disp(item.v);
    if (f < best.value || (f == best.value && item.v < best.at)) best = {f, item.v};
    if (f >= item.f || item.depth == radius) continue;
    for (auto& n : neighbors(item.v))
      if (!(n == item.from)) stack.push_back({n, item.v, f, item.depth + 1});
  }
  return best;
}

struct ClassOracle {
  std::string_view kind;
  std::int64_t length = 0;
};

/// Type and translation length from the displacement minimum alone: 0 means
/// elliptic; 1 with g^2 fixing the minimizer means an inverted edge;
/// anything else is a translation of that length.
template <LocalScalar S>
ClassOracle classify_by_displacement(const Mat2<S>& g, std::int64_t radius = 8) {
  const MinDisplacement<S> m = min_displacement(g, radius);
  if (m.value == 0) return {"elliptic", 0};
  if (m.value == 1 && act(g, act(g, m.at)) == m.at) return {"inversion", 1};
  return {"hyperbolic", m.value};
}

/// Whether the lattice class of x splits along the two lines of w1 and w2:
/// L = (L n l1) + (L n l2), compared through determinant valuations.
template <LocalScalar S>
bool lattice_splits(const Vertex<S>& x, const End<S>& w1, const End<S>& w2) {
  const Mat2<S> h = lattice_basis(x);
  const Mat2<S> h_inv = h.inverse();
  auto line_generator_valuation = [&](const End<S>& w) {
    const auto [u, v] = detail::end_vector(w);
    // smallest n with w^n (u, v) in L is -min valuation of h^-1 (u, v)
    const S c1 = h_inv.a * u + h_inv.b * v;
    const S c2 = h_inv.c * u + h_inv.d * v;
    return -min(c1.valuation(), c2.valuation()).value();
  };
  const auto [u1, v1] = detail::end_vector(w1);
  const auto [u2, v2] = detail::end_vector(w2);
  const std::int64_t n1 = line_generator_valuation(w1);
  const std::int64_t n2 = line_generator_valuation(w2);
  const std::int64_t split = n1 + n2 + (u1 * v2 - u2 * v1).valuation().value();
  return split == h.det().valuation().value();
}

/// The vertices of apartment(w1, w2) at offsets -reach..reach from the image
/// of x0 under the frame [v1 | v2] that lie on the two other pairwise
/// apartments, tested by lattice splitting.
template <LocalScalar S>
std::vector<Vertex<S>> apartment_intersection(const End<S>& w1, const End<S>& w2, const End<S>& w3, std::int64_t reach = 48) {
  const auto [u1, v1] = detail::end_vector(w1);
  const auto [u2, v2] = detail::end_vector(w2);
  const Mat2<S> frame{u1, u2, v1, v2};
  std::vector<Vertex<S>> out;
  for (std::int64_t k = -reach; k <= reach; ++k) {
    const Vertex<S> x = act(frame, standard_vertex<S>(u1.prime(), k));
    if (lattice_splits(x, w1, w3) && lattice_splits(x, w2, w3)) out.push_back(x);
  }
  return out;
}

}  // namespace btk::oracle
