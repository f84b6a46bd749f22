#include <gtest/gtest.h>

#include <numeric>
#include <random>

#include "congru/error.hpp"
#include "congru/omodule.hpp"

using namespace congru;

namespace {

Matrix int_matrix(const Dvr& o, const std::vector<std::vector<long>>& rows) {
  std::vector<std::vector<Scalar>> s;
  for (const auto& r : rows) {
    s.emplace_back();
    for (long v : r) s.back().push_back(o.from_int(v));
  }
  return Matrix::from_rows(s);
}

// Determinant by cofactor expansion; independent of the elimination code.
Scalar det(const Matrix& a) {
  const std::size_t n = a.rows();
  if (n == 0) return Scalar(1);
  if (n == 1) return a(0, 0);
  Scalar out;
  for (std::size_t j = 0; j < n; ++j) {
    Matrix minor(n - 1, n - 1);
    for (std::size_t i = 1; i < n; ++i)
      for (std::size_t k = 0, c = 0; k < n; ++k)
        if (k != j) minor(i - 1, c++) = a(i, k);
    Scalar term = a(0, j) * det(minor);
    if (j % 2) out -= term;
    else out += term;
  }
  return out;
}

void subsets(std::size_t n, std::size_t k, std::size_t start, std::vector<std::size_t>& cur,
             std::vector<std::vector<std::size_t>>& out) {
  if (cur.size() == k) {
    out.push_back(cur);
    return;
  }
  for (std::size_t i = start; i < n; ++i) {
    cur.push_back(i);
    subsets(n, k, i + 1, cur, out);
    cur.pop_back();
  }
}

// Minimal valuation of the k x k minors, or nullopt if all vanish.
std::optional<std::int64_t> minor_valuation(const Matrix& a, std::size_t k) {
  std::vector<std::vector<std::size_t>> rs, cs;
  std::vector<std::size_t> cur;
  subsets(a.rows(), k, 0, cur, rs);
  subsets(a.cols(), k, 0, cur, cs);
  std::optional<std::int64_t> best;
  for (const auto& r : rs)
    for (const auto& c : cs) {
      Matrix m(k, k);
      for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j) m(i, j) = a(r[i], c[j]);
      auto v = det(m).valuation();
      if (v && (!best || *v < *best)) best = v;
    }
  return best;
}

Matrix random_matrix(const Dvr& o, std::mt19937_64& rng, std::size_t m, std::size_t n) {
  std::uniform_int_distribution<int> val(-6, 6), pw(0, 3);
  Matrix a(m, n);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      int v = val(rng);
      if (v == 0) continue;
      a(i, j) = o.from_int(v) * o.pi_power(pw(rng));
    }
  return a;
}

}  // namespace

TEST(Smith, SimpleDiagonal) {
  Dvr o = Dvr::p_adic(3);
  auto s = smith_form(int_matrix(o, {{9, 0}, {0, 3}}));
  EXPECT_EQ(s.diagonal, (std::vector<std::uint64_t>{1, 2}));
}

TEST(Smith, RejectsNonIntegral) {
  Dvr o = Dvr::p_adic(3);
  Matrix a(1, 1);
  a(0, 0) = o.pi_power(-1);
  EXPECT_THROW(smith_form(a), Error);
}

class SmithProperty : public ::testing::TestWithParam<int> {};

TEST_P(SmithProperty, MatchesDeterminantalDivisors) {
  const Dvr o = GetParam() % 2 ? Dvr::p_adic(2) : Dvr::power_series(GetParam() % 4 ? 3 : 4);
  std::mt19937_64 rng(1000 + GetParam());
  std::uniform_int_distribution<std::size_t> dim(1, 4);
  for (int trial = 0; trial < 10; ++trial) {
    const std::size_t m = dim(rng), n = dim(rng);
    Matrix a = random_matrix(o, rng, m, n);
    for (PivotRule rule : {PivotRule::lowest_index, PivotRule::highest_index}) {
      SmithForm s = smith_form(a, rule);
      Matrix d = s.left * a * s.right;
      for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < n; ++j) {
          if (i == j && i < s.rank())
            EXPECT_EQ(d(i, j), o.pi_power(static_cast<std::int64_t>(s.diagonal[i])));
          else
            EXPECT_TRUE(d(i, j).is_zero());
        }
      EXPECT_EQ(s.left * s.left_inverse, Matrix::identity(o, m));
      EXPECT_EQ(s.right * s.right_inverse, Matrix::identity(o, n));
      EXPECT_TRUE(s.left.is_integral() && s.left_inverse.is_integral());
      EXPECT_TRUE(s.right.is_integral() && s.right_inverse.is_integral());
      // d_1 + ... + d_k equals the valuation of the k-th determinantal divisor.
      std::int64_t acc = 0;
      for (std::size_t k = 1; k <= std::min(m, n); ++k) {
        auto mv = minor_valuation(a, k);
        if (k <= s.rank()) {
          acc += static_cast<std::int64_t>(s.diagonal[k - 1]);
          ASSERT_TRUE(mv.has_value());
          EXPECT_EQ(*mv, acc);
        } else {
          EXPECT_FALSE(mv.has_value());
        }
      }
    }
  }
}

INSTANTIATE_TEST_SUITE_P(Seeds, SmithProperty, ::testing::Range(0, 8));

TEST(FinOModule, Printing) {
  EXPECT_EQ(FinOModule({}, 0).to_string(), "0");
  EXPECT_EQ(FinOModule({1, 3}, 2).to_string(), "O/pi (+) O/pi^3 (+) O^2");
  EXPECT_EQ(FinOModule({}, 1).to_string(), "O");
  EXPECT_EQ(FinOModule({2}, 0).length(), 2u);
  EXPECT_FALSE(FinOModule({2}, 1).length().has_value());
}

TEST(FinOModule, FromPresentationDropsUnits) {
  Dvr o = Dvr::p_adic(5);
  // Generators e1, e2, e3; relations 5 e1, e2 + 25 e1 (unit), nothing on e3.
  auto m = o_module_from_presentation(int_matrix(o, {{5, 25}, {0, 1}, {0, 0}}));
  EXPECT_EQ(m.to_string(), "O/pi (+) O");
  ASSERT_TRUE(m.witness().has_value());
  auto c = m.normal_coordinates(std::vector<Scalar>{o.zero(), o.zero(), o.one()});
  EXPECT_TRUE(c[0].is_zero());
  EXPECT_TRUE(c[1].is_unit());
}

TEST(FinOModule, FittingIdeals) {
  Dvr o = Dvr::p_adic(3);
  Matrix p = int_matrix(o, {{3, 0}, {0, 9}, {0, 0}});
  EXPECT_EQ(fitting_ideal(p, 0), IdealO::zero());
  EXPECT_EQ(fitting_ideal(p, 1), IdealO::pi_power(3));
  EXPECT_EQ(fitting_ideal(p, 2), IdealO::pi_power(1));
  EXPECT_EQ(fitting_ideal(p, 3), IdealO::unit());
  auto m = o_module_from_presentation(p);
  for (std::size_t k = 0; k < 4; ++k) EXPECT_EQ(fitting_ideal(m, k), fitting_ideal(p, k)) << k;
}

TEST(FinOModule, OrderIdeal) {
  Dvr o = Dvr::p_adic(7);
  auto m = o_module_from_presentation(int_matrix(o, {{7}, {0}}));  // O/7 (+) O
  auto e = [&](long a, long b) { return std::vector<Scalar>{o.from_int(a), o.from_int(b)}; };
  EXPECT_EQ(order_ideal(m, e(1, 0)), IdealO::zero());
  EXPECT_EQ(order_ideal(m, e(1, 49)), IdealO::pi_power(2));
  EXPECT_EQ(order_ideal(m, e(0, 3)), IdealO::unit());
}

TEST(Kernel, SaturatedBasis) {
  Dvr o = Dvr::p_adic(2);
  Matrix a = int_matrix(o, {{2, 4, 0}});
  Matrix k = kernel_basis(a);
  ASSERT_EQ(k.cols(), 2u);
  EXPECT_TRUE((a * k).is_zero());
  // (-2, 1, 0) must be an O-combination of the basis.
  EXPECT_TRUE(solve_integral(k, std::vector<Scalar>{o.from_int(-2), o.one(), o.zero()}).has_value());
}

TEST(Kernel, SolveIntegral) {
  Dvr o = Dvr::p_adic(3);
  Matrix a = int_matrix(o, {{3, 0}, {0, 9}});
  EXPECT_TRUE(solve_integral(a, std::vector<Scalar>{o.from_int(6), o.from_int(9)}).has_value());
  EXPECT_FALSE(solve_integral(a, std::vector<Scalar>{o.from_int(1), o.zero()}).has_value());
}

TEST(Subquotient, HomologyOfSmallComplex) {
  Dvr o = Dvr::p_adic(5);
  // O --(5,0)--> O^2 --(0 1)--> O : homology in the middle is O/5.
  Matrix cond = int_matrix(o, {{0, 1}});
  Matrix bd = int_matrix(o, {{5}, {0}});
  auto sq = subquotient(cond, bd, 2, o);
  EXPECT_EQ(sq.module.to_string(), "O/pi");
  EXPECT_THROW(subquotient(cond, int_matrix(o, {{0}, {1}}), 2, o), Error);
}

TEST(ColumnSpan, MatchesSpan) {
  Dvr o = Dvr::p_adic(3);
  Matrix a = int_matrix(o, {{3, 6}, {9, 18}});
  Matrix b = column_span_basis(a);
  EXPECT_EQ(b.cols(), 1u);
  EXPECT_TRUE(solve_integral(b, a.column(1)).has_value());
  EXPECT_TRUE(solve_integral(a, b.column(0)).has_value());
}
