#include <gtest/gtest.h>

#include "btk/btk.hpp"

using namespace btk;

namespace {

template <typename S>
class FieldTest : public ::testing::Test {};

using Backends = ::testing::Types<Qp, Laurent>;
TYPED_TEST_SUITE(FieldTest, Backends);

TYPED_TEST(FieldTest, ValuationConventions) {
  using S = TypeParam;
  for (std::uint32_t p : {2u, 3u, 5u}) {
    EXPECT_TRUE(valuation(S::zero(p)).is_infinite());
    EXPECT_EQ(valuation(S::uniformizer(p)), Valuation(1));
    EXPECT_EQ(valuation(S::one(p)), Valuation(0));
    EXPECT_EQ(valuation(S::uniformizer_pow(p, -3)), Valuation(-3));
  }
}

TYPED_TEST(FieldTest, ValuationAxiomsOnRandomPairs) {
  using S = TypeParam;
  Rng rng(11);
  for (std::uint32_t p : {2u, 3u, 5u}) {
    for (int n = 0; n < 200; ++n) {
      const S x = random_scalar<S>(p, rng, -4, 4, 0);
      const S y = random_scalar<S>(p, rng, -4, 4, 0);
      EXPECT_EQ(valuation(x * y), valuation(x) + valuation(y));
      const Valuation lower = min(valuation(x), valuation(y));
      EXPECT_GE(valuation(x + y), lower);
      if (valuation(x) != valuation(y)) {
        EXPECT_EQ(valuation(x + y), lower);
      }
    }
  }
}

TYPED_TEST(FieldTest, ResidueOfUnitAndIdeal) {
  using S = TypeParam;
  EXPECT_EQ(residue(S::one(5)), 1u);
  EXPECT_EQ(residue(S::uniformizer(5)), 0u);
  EXPECT_THROW(
      {
        try {
          residue(S::uniformizer_pow(5, -1));
        } catch (const Error& e) {
          EXPECT_EQ(e.code(), ErrorCode::negative_valuation);
          throw;
        }
      },
      Error);
}

TYPED_TEST(FieldTest, TruncateIsMultiplicative) {
  using S = TypeParam;
  Rng rng(5);
  for (std::uint32_t p : {2u, 3u, 5u}) {
    for (int n = 0; n < 100; ++n) {
      const S x = random_scalar<S>(p, rng, 0, 4);
      const S y = random_scalar<S>(p, rng, 0, 4);
      for (unsigned k : {1u, 2u, 3u}) EXPECT_EQ(truncate(x * y, k), truncate(truncate(x, k) * truncate(y, k), k));
    }
  }
}

TYPED_TEST(FieldTest, ArithmeticAndParseRoundTrip) {
  using S = TypeParam;
  Rng rng(3);
  for (std::uint32_t p : {2u, 3u, 5u}) {
    for (int n = 0; n < 100; ++n) {
      const S x = random_scalar<S>(p, rng, -4, 4);
      const S y = random_scalar<S>(p, rng, -4, 4, 0);
      EXPECT_EQ((x / y) * y, x);
      EXPECT_EQ(x - x, S::zero(p));
      EXPECT_EQ(S::parse(p, x.str()), x);
    }
  }
}

TYPED_TEST(FieldTest, FracSplitsIntoPolarAndIntegralParts) {
  using S = TypeParam;
  Rng rng(9);
  for (std::uint32_t p : {2u, 3u, 5u}) {
    for (int n = 0; n < 100; ++n) {
      const S x = random_scalar<S>(p, rng, -4, 4);
      const S f = x.frac();
      EXPECT_TRUE(is_integral(x - f));
      EXPECT_EQ(f.frac(), f);
      if (!f.is_zero()) {
        EXPECT_LT(valuation(f), Valuation(0));
      }
    }
  }
}

TYPED_TEST(FieldTest, DivisionByZeroThrows) {
  using S = TypeParam;
  EXPECT_THROW(S::one(3) / S::zero(3), Error);
  EXPECT_THROW(S::zero(3).inverse(), Error);
}

TYPED_TEST(FieldTest, MixedPrimesRejected) {
  using S = TypeParam;
  EXPECT_THROW(S::one(3) + S::one(5), Error);
}

TEST(FieldConfig, RejectsNonPrime) {
  EXPECT_THROW(FieldConfig::make(Backend::qp, 4), Error);
  EXPECT_THROW(FieldConfig::make(Backend::laurent, 1), Error);
  EXPECT_EQ(FieldConfig::make(Backend::laurent, 7).q(), 7u);
}

TEST(QpExamples, Valuation45Over7In3Adics) { EXPECT_EQ(valuation(Qp::parse(3, "45/7")), Valuation(2)); }

TEST(QpExamples, Residues) {
  EXPECT_EQ(residue(Qp::parse(5, "7/3")), 4u);
  EXPECT_EQ(residue(Qp::parse(5, "5/2")), 0u);
}

TEST(QpExamples, Truncations) {
  EXPECT_EQ(truncate(Qp::parse(5, "1/3"), 2), Qp::from_int(5, 17));
  EXPECT_EQ(truncate(Qp::from_int(5, 125), 2), Qp::zero(5));
  EXPECT_EQ(truncate(Qp::zero(5), 4), Qp::zero(5));
}

TEST(QpExamples, FracCanonicalForm) { EXPECT_EQ(Qp::parse(3, "-5/27").frac(), Qp::parse(3, "22/27")); }

TEST(LaurentExamples, InverseOfOnePlusT) {
  // 1/(1+t) = 1 - t + t^2 - t^3 + ... and -1 = 4 in F_5
  const Laurent x = Laurent::parse(5, "1+t").inverse();
  EXPECT_EQ(truncate(x, 4), Laurent::parse(5, "1+4t+t^2+4t^3"));
}

TEST(LaurentExamples, NegativePowersRoundTrip) {
  const Laurent x = Laurent::parse(3, "2t^-2+t^-1+1");
  EXPECT_EQ(valuation(x), Valuation(-2));
  EXPECT_EQ(Laurent::parse(3, x.str()), x);
  EXPECT_EQ(x.frac(), Laurent::parse(3, "2t^-2+t^-1"));
}

TEST(Parse, MalformedScalarsRejected) {
  for (const char* bad : {"", "1/", "abc", "1/0"}) EXPECT_THROW(Qp::parse(3, bad), Error) << bad;
  for (const char* bad : {"", "t^", "x"}) EXPECT_THROW(Laurent::parse(3, bad), Error) << bad;
}

}  // namespace
