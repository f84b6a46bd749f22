#include <gtest/gtest.h>

#include <random>

#include "congru/error.hpp"
#include "congru/poly.hpp"

using namespace congru;

namespace {

PolyRing ring_xy(const Dvr& o) { return PolyRing(o, {"x", "y"}); }

Poly random_poly(const PolyRing& r, std::mt19937_64& rng, unsigned max_deg, int terms) {
  std::uniform_int_distribution<int> coef(-4, 4), pw(0, 2);
  std::uniform_int_distribution<unsigned> ex(0, max_deg);
  std::vector<Term> t;
  for (int k = 0; k < terms; ++k) {
    Monomial m;
    unsigned budget = max_deg;
    for (std::size_t i = 0; i < r.nvars(); ++i) {
      unsigned e = std::min(budget, ex(rng));
      m.e[i] = static_cast<std::uint8_t>(e);
      budget -= e;
    }
    t.push_back({m, r.dvr().from_int(coef(rng)) * r.dvr().pi_power(pw(rng))});
  }
  return Poly::from_terms(std::move(t));
}

bool all_zero(const PolyVec& v) {
  return std::all_of(v.begin(), v.end(), [](const Poly& p) { return p.is_zero(); });
}

}  // namespace

TEST(Parser, RoundTrip) {
  Dvr o = Dvr::p_adic(5);
  auto r = ring_xy(o);
  Poly f = r.parse("x*(x - pi^2) + 3*y^2 - 1");
  EXPECT_EQ(r.to_string(f), "x^2 + 3*y^2 - 25*x - 1");
  EXPECT_EQ(r.parse(r.to_string(f)), f);
  EXPECT_EQ(r.parse("(x+y)^2"), r.parse("x^2 + 2*x*y + y^2"));
  EXPECT_EQ(r.parse("x/5").terms().front().c.valuation(), -1);
  EXPECT_EQ(r.parse_scalar("pi^3/2").valuation(), 3);
}

TEST(Parser, PowerSeriesCoefficients) {
  Dvr o = Dvr::power_series(3);
  auto r = ring_xy(o);
  Poly f = r.parse("(1 + pi)*x - pi^2*y");
  EXPECT_EQ(r.parse(r.to_string(f)), f);
  EXPECT_EQ(r.parse("3*x"), Poly());
}

TEST(Parser, Errors) {
  auto r = ring_xy(Dvr::p_adic(3));
  for (const char* bad : {"", "x +", "z", "x^", "(x", "x/y", "x @ y", "x^999"}) {
    try {
      r.parse(bad);
      ADD_FAILURE() << bad;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::ParseError) << bad;
    }
  }
  EXPECT_THROW(PolyRing(Dvr::p_adic(3), {"pi"}), Error);
  EXPECT_THROW(PolyRing(Dvr::p_adic(3), {"x", "x"}), Error);
}

TEST(StdBasis, Principal) {
  auto r = ring_xy(Dvr::p_adic(3));
  auto b = std_basis({r.parse("x")}, MonomialOrder::global_degrevlex);
  ASSERT_EQ(b.elements().size(), 1u);
  EXPECT_EQ(b.elements()[0], r.parse("x"));
  EXPECT_EQ(normal_form(r.parse("pi"), b), r.parse("pi"));
}

TEST(StdBasis, LocalPrincipal) {
  auto r = ring_xy(Dvr::p_adic(3));
  auto b = std_basis({r.parse("x*(x - pi)")}, MonomialOrder::local_degrevlex);
  ASSERT_EQ(b.elements().size(), 1u);
  const Poly& g = b.elements()[0];
  EXPECT_TRUE(g == r.parse("x^2 - pi*x") || g == r.parse("pi*x - x^2"));
  EXPECT_EQ(g.local_lead().m, Monomial::variable(0));
  // x - x^2 = x (1 - x) generates (x) locally.
  auto l = std_basis({r.parse("x - x^2")}, MonomialOrder::local_degrevlex);
  EXPECT_TRUE(normal_form(r.parse("x"), l).is_zero());
  EXPECT_TRUE(normal_form(r.parse("x*y + x^3"), l).is_zero());
  EXPECT_FALSE(normal_form(r.parse("y"), l).is_zero());
}

TEST(StdBasis, GlobalDivisionExample) {
  auto r = ring_xy(Dvr::p_adic(5));
  auto b = std_basis({r.parse("x^2 - pi*x")}, MonomialOrder::global_degrevlex);
  EXPECT_EQ(normal_form(r.parse("x^2"), b), r.parse("pi*x"));
  EXPECT_TRUE(normal_form(r.parse("x^2 - pi*x"), b).is_zero());
}

TEST(StdBasis, RingBMembership) {
  for (Dvr o : {Dvr::p_adic(3), Dvr::power_series(2)}) {
    auto r = ring_xy(o);
    Ideal I(r, {r.parse("x*(x-pi)"), r.parse("y*(y-pi)"), r.parse("x*y")});
    EXPECT_TRUE(I.contains(r.parse("x*y*(y-pi)")));
    EXPECT_FALSE(I.contains(r.parse("x")));
    EXPECT_FALSE(I.contains(r.parse("pi*x")));
    EXPECT_TRUE(I.contains(r.parse("x^3 - pi^2*x")));
  }
}

TEST(StdBasis, CoefficientIdeals) {
  // (pi^2, pi x) contains pi^2 x but not pi x^0 or x.
  auto r = ring_xy(Dvr::p_adic(2));
  Ideal I(r, {r.parse("pi^2"), r.parse("pi*x")});
  EXPECT_TRUE(I.contains(r.parse("pi^2*y + pi*x*y")));
  EXPECT_FALSE(I.contains(r.parse("pi")));
  EXPECT_FALSE(I.contains(r.parse("x")));
  EXPECT_EQ(I.reduce(r.parse("pi^3 + 1")), r.parse("1"));
}

TEST(StdBasis, DegreeBound) {
  auto r = ring_xy(Dvr::p_adic(3));
  Limits tight{3, 64};
  try {
    std_basis({r.parse("x^2*y - pi"), r.parse("x*y^2 - x")}, MonomialOrder::global_degrevlex, tight);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DegreeBoundExceeded);
  }
}

class IdealProperty : public ::testing::TestWithParam<int> {};

TEST_P(IdealProperty, MembershipAndUniqueNormalForms) {
  std::mt19937_64 rng(GetParam());
  const Dvr o = GetParam() % 2 ? Dvr::p_adic(3) : Dvr::power_series(4);
  PolyRing r(o, {"x", "y", "z"});
  std::vector<Poly> gens;
  for (int i = 0; i < 3; ++i) gens.push_back(random_poly(r, rng, 2, 3));
  Ideal I(r, gens);
  for (const auto& g : I.basis().elements()) EXPECT_TRUE(g.lead().c == o.pi_power(*g.lead().c.valuation()));
  for (int trial = 0; trial < 12; ++trial) {
    Poly member;
    for (const auto& g : gens) member += random_poly(r, rng, 2, 2) * g;
    EXPECT_TRUE(I.contains(member));
    Poly f = random_poly(r, rng, 3, 4);
    Poly nf = I.reduce(f);
    EXPECT_EQ(I.reduce(f + member), nf);
    EXPECT_EQ(I.reduce(nf), nf);
    EXPECT_TRUE(I.contains(f - nf));
  }
}

INSTANTIATE_TEST_SUITE_P(Seeds, IdealProperty, ::testing::Range(1, 21));

TEST(Syzygy, KoszulRelation) {
  auto r = ring_xy(Dvr::p_adic(3));
  Ideal zero(r, {});
  PolyMatrix m(1, 2);
  m(0, 0) = r.parse("x");
  m(0, 1) = r.parse("y");
  LinearSystem ls(m, zero);
  const auto& s = ls.syzygies();
  ASSERT_EQ(s.cols(), 1u);
  const bool koszul = (s(0, 0) == r.parse("-y") && s(1, 0) == r.parse("x")) ||
                      (s(0, 0) == r.parse("y") && s(1, 0) == r.parse("-x"));
  EXPECT_TRUE(koszul);
  auto t = ls.solve({r.parse("x*y + pi*y")});
  ASSERT_TRUE(t.has_value());
  EXPECT_EQ(m.apply(*t)[0], r.parse("x*y + pi*y"));
  EXPECT_FALSE(ls.solve({r.parse("1 + x")}).has_value());
}

TEST(Syzygy, AnnihilatorInQuotient) {
  PolyRing r(Dvr::p_adic(5), {"x"});
  Ideal I(r, {r.parse("x*(x - pi)")});
  PolyMatrix m(1, 1);
  m(0, 0) = r.parse("x");
  auto s = syzygy_module(m, I);
  ASSERT_EQ(s.cols(), 1u);
  EXPECT_TRUE(I.contains(s(0, 0) - r.parse("x - pi")) || I.contains(s(0, 0) + r.parse("x - pi")));
}

TEST(Syzygy, IdentityHasNone) {
  auto r = ring_xy(Dvr::p_adic(3));
  Ideal zero(r, {});
  EXPECT_EQ(syzygy_module(PolyMatrix::identity(3, r.dvr().one()), zero).cols(), 0u);
}

TEST_P(IdealProperty, SyzygiesAreSoundAndLiftsSolve) {
  std::mt19937_64 rng(100 + GetParam());
  const Dvr o = GetParam() % 2 ? Dvr::p_adic(2) : Dvr::power_series(3);
  PolyRing r(o, {"x", "y"});
  Ideal I(r, {random_poly(r, rng, 2, 2)});
  PolyMatrix m(2, 3);
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 3; ++j) m(i, j) = random_poly(r, rng, 1, 2);
  LinearSystem ls(m, I);
  const auto s = ls.syzygies();
  for (std::size_t j = 0; j < s.cols(); ++j) EXPECT_TRUE(all_zero(I.reduce(m.apply(s.column(j)))));
  for (int trial = 0; trial < 5; ++trial) {
    PolyVec t{random_poly(r, rng, 1, 2), random_poly(r, rng, 1, 2), random_poly(r, rng, 1, 2)};
    PolyVec y = m.apply(t);
    auto sol = ls.solve(y);
    ASSERT_TRUE(sol.has_value());
    PolyVec diff = m.apply(*sol);
    for (std::size_t i = 0; i < 2; ++i) diff[i] -= y[i];
    EXPECT_TRUE(all_zero(I.reduce(diff)));
    // t - sol is a syzygy, so it lies in the span of the computed ones.
    PolyVec k(3);
    for (std::size_t j = 0; j < 3; ++j) k[j] = t[j] - (*sol)[j];
    LinearSystem span(s, I);
    EXPECT_TRUE(span.solve(k).has_value());
  }
}

TEST(Taylor, Examples) {
  PolyRing r(Dvr::p_adic(3), {"x", "y"});
  const Dvr& o = r.dvr();
  std::vector<Scalar> zero{o.zero(), o.zero()};
  auto t = taylor_division(r.parse("x"), zero);
  EXPECT_EQ(t.quotients[0], r.parse("1"));
  EXPECT_TRUE(t.remainder.is_zero());
  for (int n = 1; n <= 3; ++n) {
    std::vector<Scalar> pt{o.pi_power(n), o.zero()};
    auto d = taylor_division(r.parse("x*(x - pi^" + std::to_string(n) + ")"), pt);
    EXPECT_EQ(d.quotients[0], r.parse("x"));
    EXPECT_TRUE(d.remainder.is_zero());
  }
  auto c = taylor_division(r.parse("pi^2"), zero);
  EXPECT_TRUE(c.quotients[0].is_zero() && c.quotients[1].is_zero());
  EXPECT_EQ(c.remainder, o.pi_power(2));
}

TEST_P(IdealProperty, TaylorReconstruction) {
  std::mt19937_64 rng(500 + GetParam());
  PolyRing r(Dvr::p_adic(5), {"x", "y", "z"});
  const Dvr& o = r.dvr();
  std::vector<Scalar> pt{o.pi_power(1), o.from_int(-10), o.zero()};
  Poly f = random_poly(r, rng, 4, 6);
  auto d = taylor_division(f, pt);
  Poly rebuilt = Poly::constant(d.remainder);
  for (std::size_t i = 0; i < 3; ++i) rebuilt += d.quotients[i] * (r.variable(i) - Poly::constant(pt[i]));
  EXPECT_EQ(rebuilt, f);
  EXPECT_EQ(d.remainder, f.evaluate(pt));
}
