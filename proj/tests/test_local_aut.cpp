#include <gtest/gtest.h>

#include <fstream>

#include "btk/btk.hpp"

using namespace btk;

namespace {

template <typename S>
class LocalAutTest : public ::testing::Test {};

using Backends = ::testing::Types<Qp, Laurent>;
TYPED_TEST_SUITE(LocalAutTest, Backends);

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::internal;
}

nlohmann::json load_fixture(const std::string& name) {
  std::ifstream in(std::string(BTK_FIXTURE_DIR) + "/" + name);
  return nlohmann::json::parse(in);
}

template <typename S>
bool agrees_on(const Mat2<S>& g, const LocalAut<S>& f, const std::vector<Vertex<S>>& region) {
  for (const auto& v : region)
    if (!(act(g, v) == f(v))) return false;
  return true;
}

TYPED_TEST(LocalAutTest, IdentityRestrictionMatches) {
  using S = TypeParam;
  for (std::uint32_t p : {2u, 3u}) {
    const auto f = restrict_to_ball<S>(Mat2<S>::identity(p), base_vertex<S>(p), 2);
    validate(f);
    const auto eta = Edge<S>::make(base_vertex<S>(p), standard_vertex<S>(p, 1));
    const auto g = pgl2_match_on_ball(f, eta, 1);
    ASSERT_TRUE(g.has_value());
    EXPECT_TRUE(agrees_on(*g, f, ball(eta, 1)));
    EXPECT_TRUE(ghat_local_test(f, 1).locally_pgl2);
  }
}

TYPED_TEST(LocalAutTest, RandomRestrictionMatches) {
  using S = TypeParam;
  Rng rng(61);
  for (std::uint32_t p : {2u, 3u})
    for (int n = 0; n < 4; ++n) {
      const Mat2<S> g = random_pgl2<S>(p, rng);
      const Vertex<S> center = random_vertex<S>(p, rng);
      const auto f = restrict_to_ball<S>(g, center, 2);
      const auto eta = Edge<S>::make(center, neighbors(center).back());
      const auto h = pgl2_match_on_ball(f, eta, 1);
      ASSERT_TRUE(h.has_value());
      EXPECT_TRUE(agrees_on(*h, f, ball(eta, 1)));
      const auto verdict = ghat_local_test(f, 1);
      EXPECT_TRUE(verdict.locally_pgl2);
      EXPECT_GT(verdict.edges_tested, 0u);
    }
}

TEST(Graft, FixtureIsRejectedAtLevelOne) {
  const auto f = local_aut_from_json<Qp>(load_fixture("graft_p5_e1.json"));
  const auto verdict = ghat_local_test(f, 1);
  EXPECT_FALSE(verdict.locally_pgl2);
  ASSERT_TRUE(verdict.violation.has_value());
  EXPECT_EQ(*verdict.violation, Edge<Qp>::make(base_vertex<Qp>(5), standard_vertex<Qp>(5, 1)));
  EXPECT_TRUE(ghat_local_test(f, 0).locally_pgl2);
}

TEST(Graft, SearchReproducesFixture) {
  const auto search = find_graft<Qp>(5);
  EXPECT_FALSE(search.induced_is_full);
  EXPECT_EQ(search.bijection_count, 14400u);  // (5!)^2 side permutations
  EXPECT_LT(search.induced_order, search.bijection_count);
  ASSERT_TRUE(search.graft.has_value());
  EXPECT_EQ(nlohmann::json(to_json(*search.graft)), load_fixture("graft_p5_e1.json"));
}

TEST(Graft, SmallPrimes) {
  const auto two = find_graft<Qp>(2);
  EXPECT_TRUE(two.induced_is_full);
  EXPECT_EQ(two.induced_order, 4u);
  EXPECT_FALSE(two.graft.has_value());
  const auto three = find_graft<Qp>(3);
  EXPECT_EQ(three.bijection_count, 36u);
  ASSERT_TRUE(three.graft.has_value());
  EXPECT_FALSE(ghat_local_test(*three.graft, 1).locally_pgl2);
}

TEST(GhatErrors, Preconditions) {
  const auto f = restrict_to_ball<Qp>(Mat2<Qp>::identity(3), base_vertex<Qp>(3), 2);
  EXPECT_EQ(code_of([&] { ghat_local_test(f, 2); }), ErrorCode::radius_too_small);
  const auto far = Edge<Qp>::make(standard_vertex<Qp>(3, 2), standard_vertex<Qp>(3, 3));
  EXPECT_EQ(code_of([&] { pgl2_match_on_ball(f, far, 1); }), ErrorCode::domain_too_small);
  EXPECT_EQ(code_of([&] { f(standard_vertex<Qp>(3, 5)); }), ErrorCode::domain_too_small);
  const auto big = restrict_to_ball<Qp>(Mat2<Qp>::identity(7), base_vertex<Qp>(7), 3);
  const auto eta = Edge<Qp>::make(base_vertex<Qp>(7), standard_vertex<Qp>(7, 1));
  EXPECT_EQ(code_of([&] { pgl2_match_on_ball(big, eta, 2); }), ErrorCode::capacity);
}

TEST(LocalAutJson, RoundTripAndRejections) {
  const auto f = restrict_to_ball<Qp>(swap_matrix<Qp>(3), base_vertex<Qp>(3), 2);
  const auto j = to_json(f);
  const auto back = local_aut_from_json<Qp>(nlohmann::json::parse(j.dump()));
  EXPECT_EQ(back.mapping, f.mapping);
  EXPECT_EQ(back.radius, 2);

  auto collapse = nlohmann::json::parse(j.dump());
  collapse["map"][1][1] = collapse["map"][0][1];
  EXPECT_EQ(code_of([&] { local_aut_from_json<Qp>(collapse); }), ErrorCode::invalid_local_aut);

  auto missing = nlohmann::json::parse(j.dump());
  missing["map"].erase(0);
  EXPECT_EQ(code_of([&] { local_aut_from_json<Qp>(missing); }), ErrorCode::invalid_local_aut);

  auto wrong_backend = nlohmann::json::parse(j.dump());
  wrong_backend["backend"] = "laurent";
  EXPECT_EQ(code_of([&] { local_aut_from_json<Qp>(wrong_backend); }), ErrorCode::invalid_local_aut);

  EXPECT_EQ(code_of([&] { local_aut_from_json<Qp>(nlohmann::json{{"backend", "qp"}}); }), ErrorCode::parse_error);
}

// Swapping two neighbours of x0 while leaving their subtrees in place breaks distances.
TEST(LocalAutJson, RejectsNonIsometry) {
  auto f = restrict_to_ball<Qp>(Mat2<Qp>::identity(2), base_vertex<Qp>(2), 2);
  const auto ns = neighbors(base_vertex<Qp>(2));
  std::swap(f.mapping[ns[0]], f.mapping[ns[1]]);
  EXPECT_EQ(code_of([&] { validate(f); }), ErrorCode::invalid_local_aut);
}

TYPED_TEST(LocalAutTest, CongruencePrinciple) {
  using S = TypeParam;
  Rng rng(71);
  for (std::uint32_t p : {2u, 3u})
    for (int n = 0; n < 30; ++n) {
      const std::int64_t m = rng.range(1, 3);
      Mat2<S> x{random_scalar<S>(p, rng, 0, 3), random_scalar<S>(p, rng, 0, 3), random_scalar<S>(p, rng, 0, 3),
                random_scalar<S>(p, rng, 0, 3)};
      const S wm = S::uniformizer_pow(p, m);
      const Mat2<S> g{S::one(p) + wm * x.a, wm * x.b, wm * x.c, S::one(p) + wm * x.d};
      EXPECT_TRUE(congruent_to_identity(g, m));
      EXPECT_TRUE(fixes_ball(g, base_vertex<S>(p), m));
    }
  EXPECT_FALSE(congruent_to_identity(tau_pow<S>(2, 1), 1));
  EXPECT_FALSE(fixes_ball(swap_matrix<S>(3), base_vertex<S>(3), 1));
}

}  // namespace
