#include <gtest/gtest.h>

#include "congru/dvr.hpp"
#include "congru/error.hpp"

using namespace congru;

TEST(Dvr, PadicValuation) {
  Dvr o = Dvr::p_adic(5);
  EXPECT_EQ(o.from_int(250).valuation(), 3);
  EXPECT_EQ((o.from_int(3) / o.from_int(25)).valuation(), -2);
  EXPECT_FALSE(o.zero().valuation().has_value());
  EXPECT_TRUE(o.from_int(7).is_unit());
  EXPECT_TRUE(o.from_int(10).divides(o.from_int(50)));
  EXPECT_FALSE(o.from_int(25).divides(o.from_int(10)));
}

TEST(Dvr, RejectsComposite) { EXPECT_THROW(Dvr::p_adic(6), Error); }

TEST(Dvr, InterningGivesEqualHandles) {
  EXPECT_EQ(Dvr::p_adic(7), Dvr::p_adic(7));
  EXPECT_NE(Dvr::p_adic(7), Dvr::p_adic(11));
  EXPECT_NE(Dvr::p_adic(2), Dvr::power_series(2));
}

TEST(Dvr, PowerSeriesArithmetic) {
  for (std::uint64_t q : {2u, 3u, 4u, 9u, 16u}) {
    Dvr o = Dvr::power_series(q);
    const Scalar t = o.uniformizer();
    const Scalar one = o.one();
    const Scalar x = (t * t + one) / (t - one);
    EXPECT_EQ(x.valuation(), 0) << q;
    EXPECT_EQ((t * t * t / (t + one)).valuation(), 3);
    EXPECT_EQ(x * (t - one), t * t + one);
    EXPECT_EQ(x - x, o.zero());
    // characteristic p
    Scalar s = o.zero();
    for (std::uint64_t i = 0; i < o.prime(); ++i) s += one;
    EXPECT_TRUE(s.is_zero());
  }
}

TEST(Dvr, FieldMultiplicationIsConsistent) {
  // Brute-force check that every nonzero constant has an inverse.
  Dvr o = Dvr::power_series(8);
  for (int a = 1; a < 8; ++a) {
    Scalar x = o.from_int(a);
    if (x.is_zero()) continue;
    EXPECT_TRUE((x / x).is_one());
  }
}

TEST(Dvr, GenericConstantsBind) {
  Dvr o = Dvr::power_series(3);
  Scalar two(2);
  EXPECT_EQ(two + o.one(), o.zero());
  Dvr z = Dvr::p_adic(3);
  EXPECT_EQ((Scalar(6) * z.one()).valuation(), 1);
}

TEST(Dvr, MixingRingsThrows) {
  EXPECT_THROW(Dvr::p_adic(3).one() + Dvr::p_adic(5).one(), Error);
}

TEST(Dvr, DivisionByZeroThrows) {
  Dvr o = Dvr::p_adic(3);
  EXPECT_THROW(o.one() / o.zero(), Error);
}

TEST(IdealO, Printing) {
  EXPECT_EQ(IdealO::zero().to_string(), "(0)");
  EXPECT_EQ(IdealO::unit().to_string(), "(1)");
  EXPECT_EQ(IdealO::pi_power(1).to_string(), "(pi)");
  EXPECT_EQ(IdealO::pi_power(4).to_string(), "(pi^4)");
}

TEST(IdealO, Operations) {
  auto a = IdealO::pi_power(2), b = IdealO::pi_power(5);
  EXPECT_EQ(a * b, IdealO::pi_power(7));
  EXPECT_EQ(a + b, a);
  EXPECT_TRUE(b.is_contained_in(a));
  EXPECT_FALSE(a.is_contained_in(b));
  EXPECT_TRUE(IdealO::zero().is_contained_in(a));
  EXPECT_EQ(a * IdealO::zero(), IdealO::zero());
  EXPECT_EQ(IdealO::generated_by(Dvr::p_adic(3).from_int(18)), a);
  EXPECT_THROW(IdealO::generated_by(Dvr::p_adic(3).pi_power(-1)), Error);
}
