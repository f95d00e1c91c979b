#include <gtest/gtest.h>

#include <algorithm>
#include <set>

#include "btk/btk.hpp"

using namespace btk;

namespace {

template <typename S>
class TreeTest : public ::testing::Test {};

using Backends = ::testing::Types<Qp, Laurent>;
TYPED_TEST_SUITE(TreeTest, Backends);

template <typename S>
Vertex<S> xn(std::uint32_t p, std::int64_t n) {
  return standard_vertex<S>(p, n);
}

TEST(Vertex, SyntaxRoundTripAndCanonicalCheck) {
  const auto v = Vertex<Qp>::parse(3, "(-2;4/9)");
  EXPECT_EQ(v.m, -2);
  EXPECT_EQ(v.str(), "(-2;4/9)");
  EXPECT_THROW(Vertex<Qp>::parse(3, "(0;1)"), Error);  // 1 is not a canonical class of F/o
  EXPECT_THROW(Vertex<Qp>::parse(3, "0;0"), Error);
  EXPECT_EQ(Vertex<Laurent>::parse(3, "(1;t^-1)").str(), "(1;t^-1)");
}

TEST(End, CanonicalForm) {
  EXPECT_EQ(End<Qp>::parse(3, "[2:0]"), omega<Qp>(3));
  EXPECT_EQ(End<Qp>::parse(3, "[2:4]"), End<Qp>::parse(3, "[1/2:1]"));
  EXPECT_THROW(End<Qp>::parse(3, "[0:0]"), Error);
}

TYPED_TEST(TreeTest, StandardApartment) {
  using S = TypeParam;
  for (std::uint32_t p : {2u, 3u, 5u}) {
    EXPECT_EQ(base_vertex<S>(p), xn<S>(p, 0));
    EXPECT_EQ(vertex_of_lattice(Mat2<S>::identity(p)), base_vertex<S>(p));
    for (std::int64_t n = -3; n <= 3; ++n) {
      EXPECT_EQ(vertex_of_lattice(Mat2<S>::diag(S::one(p), S::uniformizer_pow(p, n))), xn<S>(p, n));
      EXPECT_EQ(act(Mat2<S>::diag(S::one(p), S::uniformizer(p)), xn<S>(p, n)), xn<S>(p, n + 1));
      EXPECT_EQ(distance(base_vertex<S>(p), xn<S>(p, n)), n < 0 ? -n : n);
    }
    EXPECT_EQ(distance(xn<S>(p, 0), xn<S>(p, 5)), 5);
  }
}

TYPED_TEST(TreeTest, LatticeClassIgnoresBasisChange) {
  using S = TypeParam;
  Rng rng(8);
  for (int n = 0; n < 100; ++n) {
    const Mat2<S> g = random_matrix<S>(3, rng);
    const Mat2<S> k = random_k<S>(3, rng);
    EXPECT_EQ(vertex_of_lattice(g * k), vertex_of_lattice(g));
    EXPECT_EQ(vertex_of_lattice(g.scaled(random_scalar<S>(3, rng, -3, 3, 0))), vertex_of_lattice(g));
    EXPECT_EQ(act(k, base_vertex<S>(3)), base_vertex<S>(3));
  }
}

TEST(Neighbors, BaseVertexP3) {
  const auto ns = neighbors(base_vertex<Qp>(3));
  ASSERT_EQ(ns.size(), 4u);
  EXPECT_EQ(ns[0].str(), "(1;0)");
  EXPECT_EQ(ns[1].str(), "(-1;0)");
  EXPECT_EQ(ns[2].str(), "(-1;1/3)");
  EXPECT_EQ(ns[3].str(), "(-1;2/3)");
  EXPECT_EQ(neighbors(base_vertex<Qp>(2)).size(), 3u);
}

TYPED_TEST(TreeTest, NeighborsAreDistinctAndAdjacent) {
  using S = TypeParam;
  Rng rng(12);
  for (std::uint32_t p : {2u, 3u, 5u})
    for (int n = 0; n < 40; ++n) {
      const Vertex<S> x = random_vertex<S>(p, rng);
      const auto ns = neighbors(x);
      EXPECT_EQ(ns.size(), p + 1);
      EXPECT_EQ(std::set<Vertex<S>>(ns.begin(), ns.end()).size(), p + 1);
      for (const auto& y : ns) EXPECT_EQ(distance(x, y), 1);
      EXPECT_EQ(ns.front(), parent(x));
    }
}

TEST(Distance, InversionMatrixMovesX0ByOne) {
  const Mat2<Qp> g = Mat2<Qp>::parse(3, "0,1;3,0");
  EXPECT_EQ(distance(vertex_of_lattice(g), base_vertex<Qp>(3)), 1);
}

TYPED_TEST(TreeTest, SphereSizes) {
  using S = TypeParam;
  for (std::uint32_t p : {2u, 3u, 5u}) {
    EXPECT_EQ(ball(base_vertex<S>(p), 0).size(), 1u);
    std::size_t expected = p + 1;
    for (std::int64_t r = 1; r <= 4; ++r, expected *= p) EXPECT_EQ(sphere(base_vertex<S>(p), r).size(), expected);
  }
}

// The BFS oracle agrees with the elementary-divisor distance on ball(x0, 3).
TYPED_TEST(TreeTest, DistanceMatchesBfs) {
  using S = TypeParam;
  for (std::uint32_t p : {2u, 3u}) {
    const oracle::BfsDistances<S> bfs(ball(base_vertex<S>(p), 3));
    const auto& vs = bfs.vertices();
    for (std::size_t i = 0; i < vs.size(); ++i) {
      const auto ref = bfs.from(i);
      for (std::size_t j = 0; j < vs.size(); ++j) ASSERT_EQ(distance(vs[i], vs[j]), ref[j]);
    }
  }
}

TYPED_TEST(TreeTest, ActionIsAnIsometry) {
  using S = TypeParam;
  Rng rng(31);
  for (int n = 0; n < 100; ++n) {
    const Mat2<S> g = random_matrix<S>(3, rng);
    const Vertex<S> x = random_vertex<S>(3, rng);
    const Vertex<S> y = random_vertex<S>(3, rng);
    EXPECT_EQ(distance(act(g, x), act(g, y)), distance(x, y));
  }
}

TYPED_TEST(TreeTest, GeodesicIsAPath) {
  using S = TypeParam;
  Rng rng(2);
  const std::uint32_t p = 3;
  EXPECT_EQ(geodesic(xn<S>(p, 0), xn<S>(p, 3)), (Path<S>{xn<S>(p, 0), xn<S>(p, 1), xn<S>(p, 2), xn<S>(p, 3)}));
  for (int n = 0; n < 50; ++n) {
    const Vertex<S> x = random_vertex<S>(p, rng);
    const Vertex<S> y = random_vertex<S>(p, rng);
    const auto path = geodesic(x, y);
    EXPECT_EQ(path.front(), x);
    EXPECT_EQ(path.back(), y);
    EXPECT_EQ(static_cast<std::int64_t>(path.size()) - 1, distance(x, y));
    for (std::size_t i = 1; i < path.size(); ++i) EXPECT_TRUE(adjacent(path[i - 1], path[i]));
  }
}

TYPED_TEST(TreeTest, Halflines) {
  using S = TypeParam;
  const std::uint32_t p = 2;
  EXPECT_EQ(halfline(xn<S>(p, 0), omega<S>(p), 3), (Path<S>{xn<S>(p, 0), xn<S>(p, 1), xn<S>(p, 2), xn<S>(p, 3)}));
  EXPECT_EQ(halfline(xn<S>(p, 0), omega_prime<S>(p), 3), (Path<S>{xn<S>(p, 0), xn<S>(p, -1), xn<S>(p, -2), xn<S>(p, -3)}));
  EXPECT_EQ(halfline(xn<S>(p, 4), omega<S>(p), 0), Path<S>{xn<S>(p, 4)});
}

// Greedy half-line steps agree with "closest neighbour to a far vertex on the
// end's apartment window".
TYPED_TEST(TreeTest, HalflineMatchesFarVertexOracle) {
  using S = TypeParam;
  Rng rng(41);
  const std::uint32_t p = 3;
  for (int n = 0; n < 40; ++n) {
    const Vertex<S> x = random_vertex<S>(p, rng);
    const End<S> w = random_end<S>(p, rng);
    const End<S> other = w.at_infinity ? omega_prime<S>(p) : omega<S>(p);
    const auto window = apartment_window(other, w, 30);
    const Vertex<S> far = window.back();
    const Vertex<S> step = step_toward(x, w);
    std::int64_t best = -1;
    Vertex<S> best_v;
    for (const auto& y : neighbors(x)) {
      const std::int64_t d = distance(y, far);
      if (best < 0 || d < best) {
        best = d;
        best_v = y;
      }
    }
    EXPECT_EQ(step, best_v) << x.str() << " toward " << w.str();
  }
}

TYPED_TEST(TreeTest, StabilizesEnd) {
  using S = TypeParam;
  const std::uint32_t p = 3;
  Rng rng(6);
  EXPECT_FALSE(stabilizes_end(swap_matrix<S>(p), omega<S>(p)));
  for (int n = 0; n < 50; ++n) {
    const Mat2<S> b = random_borel<S>(p, rng);
    EXPECT_TRUE(stabilizes_end(b, omega<S>(p)));
    const Mat2<S> g = random_matrix<S>(p, rng);
    EXPECT_EQ(stabilizes_end(g, omega<S>(p)), g.c.is_zero());
  }
}

TEST(Apartments, Examples) {
  const std::uint32_t p = 3;
  EXPECT_EQ(apartment_window(omega_prime<Qp>(p), omega<Qp>(p), 2),
            (Path<Qp>{xn<Qp>(p, -2), xn<Qp>(p, -1), xn<Qp>(p, 0), xn<Qp>(p, 1), xn<Qp>(p, 2)}));
  EXPECT_THROW(apartment_window(omega<Qp>(p), omega<Qp>(p), 2), Error);
  EXPECT_EQ(crossroad(omega<Qp>(p), omega_prime<Qp>(p), End<Qp>::parse(p, "[1:1]")), base_vertex<Qp>(p));
  EXPECT_THROW(crossroad(omega<Qp>(p), omega<Qp>(p), omega_prime<Qp>(p)), Error);
}

TYPED_TEST(TreeTest, ApartmentWindowSymmetry) {
  using S = TypeParam;
  Rng rng(14);
  const std::uint32_t p = 2;
  for (int n = 0; n < 40; ++n) {
    const End<S> a = random_end<S>(p, rng);
    End<S> b = random_end<S>(p, rng);
    while (b == a) b = random_end<S>(p, rng);
    auto forward = apartment_window(a, b, 3);
    auto backward = apartment_window(b, a, 3);
    std::reverse(backward.begin(), backward.end());
    EXPECT_EQ(forward, backward);
    for (const auto& v : forward) EXPECT_TRUE(on_apartment(v, a, b));
  }
}

TYPED_TEST(TreeTest, CrossroadMatchesSplittingOracle) {
  using S = TypeParam;
  Rng rng(19);
  for (std::uint32_t p : {2u, 3u}) {
    for (int n = 0; n < 40; ++n) {
      const End<S> a = random_end<S>(p, rng);
      End<S> b = random_end<S>(p, rng), c = random_end<S>(p, rng);
      while (b == a) b = random_end<S>(p, rng);
      while (c == a || c == b) c = random_end<S>(p, rng);
      const auto reference = oracle::apartment_intersection(a, b, c);
      ASSERT_EQ(reference.size(), 1u);
      EXPECT_EQ(crossroad(a, b, c), reference.front());
      EXPECT_EQ(crossroad(c, a, b), reference.front());
    }
  }
}

TEST(BallDot, TenVerticesForP2Radius2) {
  const std::string dot = ball_dot(base_vertex<Qp>(2), 2);
  std::size_t labels = 0, edges = 0;
  for (std::size_t pos = 0; (pos = dot.find("label=", pos)) != std::string::npos; ++pos) ++labels;
  for (std::size_t pos = 0; (pos = dot.find(" -- ", pos)) != std::string::npos; ++pos) ++edges;
  EXPECT_EQ(labels, 10u);
  EXPECT_EQ(edges, 9u);
}

}  // namespace
