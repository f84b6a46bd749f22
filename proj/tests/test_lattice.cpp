#include <gtest/gtest.h>

#include <numeric>
#include <random>

#include "congru/error.hpp"
#include "congru/lattice.hpp"

using namespace congru;

namespace {

Matrix col(const Dvr& o, std::vector<long> v) {
  Matrix m(v.size(), 1);
  for (std::size_t i = 0; i < v.size(); ++i) m(i, 0) = o.from_int(v[i]);
  return m;
}

LatticeSplit standard_split(const Dvr& o, const Scalar& c) {
  // L = O u (+) O v, V1 = K u, V2 = K (u + c v)
  Matrix v2(2, 1);
  v2(0, 0) = o.one();
  v2(1, 0) = c;
  return {2, Matrix::identity(o, 2), col(o, {1, 0}), v2};
}

long p_valuation(long n, long p) {
  if (n == 0) return -1;
  long v = 0;
  while (n % p == 0) {
    n /= p;
    ++v;
  }
  return v;
}

}  // namespace

TEST(Lattice, RamanujanIndex) {
  Dvr o = Dvr::p_adic(691);
  auto s = standard_split(o, o.from_int(691));
  auto r = split_and_congruence(s);
  EXPECT_EQ(r.cong.to_string(), "O/pi");
  EXPECT_EQ(pairing_discriminant(s), IdealO::pi_power(1));
}

TEST(Lattice, SplitLatticeHasNoCongruences) {
  Dvr o = Dvr::p_adic(3);
  LatticeSplit s{2, Matrix::identity(o, 2), col(o, {1, 0}), col(o, {0, 1})};
  EXPECT_TRUE(split_and_congruence(s).cong.is_zero());
  EXPECT_EQ(pairing_discriminant(s), IdealO::unit());
}

TEST(Lattice, UniformizerPowers) {
  for (Dvr o : {Dvr::p_adic(5), Dvr::power_series(4)}) {
    for (int n = 1; n <= 4; ++n) {
      auto s = standard_split(o, o.pi_power(n));
      auto r = split_and_congruence(s);
      EXPECT_EQ(r.cong, FinOModule({static_cast<std::uint64_t>(n)}, 0));
      EXPECT_EQ(pairing_discriminant(s), IdealO::pi_power(n));
      std::swap(s.v1, s.v2);
      EXPECT_EQ(split_and_congruence(s).cong, r.cong);
    }
  }
}

TEST(Lattice, Errors) {
  Dvr o = Dvr::p_adic(3);
  LatticeSplit same{2, Matrix::identity(o, 2), col(o, {1, 0}), col(o, {2, 0})};
  EXPECT_THROW(split_and_congruence(same), Error);
  LatticeSplit degenerate{2, Matrix(2, 2), col(o, {1, 0}), col(o, {0, 1})};
  try {
    split_and_congruence(degenerate);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DegenerateLattice);
  }
  try {
    split_and_congruence(same);
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotADirectSum);
  }
}

TEST(Lattice, RandomPlanarSplitsMatchDeterminantOracle) {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<long> entry(-30, 30);
  const long p = 3;
  Dvr o = Dvr::p_adic(p);
  int checked = 0;
  while (checked < 200) {
    long a = entry(rng), b = entry(rng), c = entry(rng), d = entry(rng);
    if (a * d - b * c == 0 || (a == 0 && b == 0) || (c == 0 && d == 0)) continue;
    // Over Z: L = Z^2, L ∩ K w = Z * primitive(w); the index of L_1 + L_2 is |det|.
    long g1 = std::gcd(a, b), g2 = std::gcd(c, d);
    long det = (a / g1) * (d / g2) - (b / g1) * (c / g2);
    LatticeSplit s{2, Matrix::identity(o, 2), col(o, {a, b}), col(o, {c, d})};
    auto r = split_and_congruence(s);
    const long v = p_valuation(det, p);
    EXPECT_EQ(r.cong.torsion_length(), static_cast<std::uint64_t>(v));
    EXPECT_EQ(pairing_discriminant(s), IdealO::pi_power(static_cast<std::uint64_t>(v)));
    ++checked;
  }
}

TEST(Lattice, RandomHigherRankSplitsAreConsistent) {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<long> entry(-4, 4);
  std::uniform_int_distribution<int> pw(0, 2);
  Dvr o = Dvr::p_adic(2);
  int checked = 0;
  while (checked < 40) {
    const std::size_t d = 3 + checked % 2, d1 = 1 + checked % 2;
    Matrix b(d, d), v1(d, d1), v2(d, d - d1);
    for (std::size_t i = 0; i < d; ++i) {
      for (std::size_t j = 0; j < d; ++j) b(i, j) = o.from_int(entry(rng)) * o.pi_power(pw(rng));
      for (std::size_t j = 0; j < d1; ++j) v1(i, j) = o.from_int(entry(rng));
      for (std::size_t j = 0; j < d - d1; ++j) v2(i, j) = o.from_int(entry(rng));
    }
    if (!inverse_over_K(b) || !inverse_over_K(Matrix::hcat(v1, v2))) continue;
    LatticeSplit s{d, b, v1, v2};
    auto r = split_and_congruence(s);  // throws if the three quotients disagree
    auto cong_len = r.cong.length();
    ASSERT_TRUE(cong_len.has_value());
    EXPECT_EQ(pairing_discriminant(s), IdealO::pi_power(*cong_len));
    EXPECT_EQ(fitting_ideal(r.cong, 0), IdealO::pi_power(*cong_len));
    LatticeSplit t{d, b, v2, v1};
    EXPECT_EQ(split_and_congruence(t).cong, r.cong);
    ++checked;
  }
}
