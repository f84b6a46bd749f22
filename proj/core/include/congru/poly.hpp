#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "congru/dvr.hpp"
#include "congru/omodule.hpp"

namespace congru {

inline constexpr std::size_t kMaxVars = 16;

struct Monomial {
  std::array<std::uint8_t, kMaxVars> e{};

  static Monomial variable(std::size_t i, unsigned power = 1);
  unsigned degree() const;
  bool is_one() const;
  bool divides(const Monomial& o) const;
  bool coprime(const Monomial& o) const;
  /// Throws DegreeBoundExceeded if an exponent overflows.
  Monomial operator*(const Monomial& o) const;
  /// Requires o.divides(*this).
  Monomial operator/(const Monomial& o) const;
  static Monomial lcm(const Monomial& a, const Monomial& b);
  friend bool operator==(const Monomial&, const Monomial&) = default;
};

/// Degree first, then reverse lexicographic. Returns <0, 0 or >0.
int compare_degrevlex(const Monomial& a, const Monomial& b);
/// Local variant: lower degree is larger (1 > x_i), ties as degrevlex.
int compare_local(const Monomial& a, const Monomial& b);

struct Term {
  Monomial m;
  Scalar c;
};

/// Polynomial over K in at most kMaxVars variables. Terms are stored in
/// descending degrevlex order with no zero coefficients.
class Poly {
 public:
  Poly() = default;
  static Poly constant(const Scalar& c);
  static Poly monomial(const Monomial& m, const Scalar& c);
  static Poly from_terms(std::vector<Term> terms);

  const std::vector<Term>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const;
  Scalar constant_term() const;
  Scalar coefficient(const Monomial& m) const;
  /// Leading term for the global order; requires a nonzero polynomial.
  const Term& lead() const { return terms_.front(); }
  /// Leading term for the local order.
  const Term& local_lead() const;
  unsigned degree() const;
  std::optional<std::int64_t> min_valuation() const;
  bool is_integral() const;

  Scalar evaluate(std::span<const Scalar> point) const;
  Poly derivative(std::size_t var) const;
  /// x_i -> images[i].
  Poly substitute(std::span<const Poly> images) const;
  Poly mul_term(const Monomial& m, const Scalar& c) const;

  Poly operator-() const;
  Poly& operator+=(const Poly& b);
  Poly& operator-=(const Poly& b);
  Poly& operator*=(const Poly& b);
  Poly& operator*=(const Scalar& c);
  friend Poly operator+(Poly a, const Poly& b) { return a += b; }
  friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
  friend Poly operator*(const Poly& a, const Poly& b);
  friend Poly operator*(Poly a, const Scalar& c) { return a *= c; }
  friend Poly operator*(const Scalar& c, Poly a) { return a *= c; }
  friend bool operator==(const Poly& a, const Poly& b);
  friend bool operator!=(const Poly& a, const Poly& b) { return !(a == b); }

 private:
  std::vector<Term> terms_;
};

/// Variable names and the coefficient ring. Cheap to copy.
class PolyRing {
 public:
  PolyRing(Dvr dvr, std::vector<std::string> variables);

  const Dvr& dvr() const { return data_->dvr; }
  std::size_t nvars() const { return data_->vars.size(); }
  const std::vector<std::string>& variables() const { return data_->vars; }
  std::optional<std::size_t> index_of(std::string_view name) const;

  Poly variable(std::size_t i) const;
  Poly constant(const Scalar& c) const { return Poly::constant(c); }

  /// Grammar: identifiers, `pi`, integers, + - * ^, parentheses, and division
  /// by nonzero constants. Throws ParseError with the offending position.
  Poly parse(std::string_view text) const;
  /// A constant expression; the value may lie in K.
  Scalar parse_scalar(std::string_view text) const;

  std::string to_string(const Poly& f) const;

  friend bool operator==(const PolyRing& a, const PolyRing& b) {
    return a.data_ == b.data_ || (a.dvr() == b.dvr() && a.variables() == b.variables());
  }

 private:
  struct Data {
    Dvr dvr;
    std::vector<std::string> vars;
  };
  std::shared_ptr<const Data> data_;
};

enum class MonomialOrder { global_degrevlex, local_degrevlex };

/// Explicit caps; exceeding either raises DegreeBoundExceeded.
struct Limits {
  unsigned max_degree = 24;
  unsigned max_valuation = 64;
};

/// Strong standard basis of an ideal of O[x] (global order) or of its
/// localization at (pi, x) (local order). Lead coefficients are pi powers.
class StdBasis {
 public:
  const std::vector<Poly>& elements() const { return elements_; }
  MonomialOrder order() const { return order_; }
  const Limits& limits() const { return limits_; }

 private:
  std::vector<Poly> elements_;
  MonomialOrder order_ = MonomialOrder::global_degrevlex;
  Limits limits_;
  friend StdBasis std_basis(const std::vector<Poly>&, MonomialOrder, const Limits&);
};

StdBasis std_basis(const std::vector<Poly>& gens, MonomialOrder order, const Limits& limits = {});

/// Global order: the unique fully reduced remainder. Local order: a Mora
/// normal form r with u*f - r in the ideal for some unit u of the local ring.
Poly normal_form(const Poly& f, const StdBasis& basis);

using PolyVec = std::vector<Poly>;

/// Dense matrix of polynomials.
class PolyMatrix {
 public:
  PolyMatrix() = default;
  PolyMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
  static PolyMatrix identity(std::size_t n, const Scalar& one);
  static PolyMatrix from_columns(std::size_t rows, const std::vector<PolyVec>& columns);
  static PolyMatrix from_constant(const Matrix& m);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  Poly& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const Poly& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  PolyVec column(std::size_t j) const;
  PolyMatrix transpose() const;
  PolyMatrix column_block(std::size_t first, std::size_t count) const;
  PolyMatrix row_block(std::size_t first, std::size_t count) const;
  static PolyMatrix hcat(const PolyMatrix& a, const PolyMatrix& b);
  static PolyMatrix vcat(const PolyMatrix& a, const PolyMatrix& b);
  bool is_zero() const;

  PolyVec apply(const PolyVec& v) const;
  friend PolyMatrix operator*(const PolyMatrix& a, const PolyMatrix& b);
  /// Entrywise evaluation at a point of O^n.
  Matrix evaluate(std::span<const Scalar> point) const;
  /// Entrywise substitution x_i -> images[i].
  PolyMatrix substitute(std::span<const Poly> images) const;

  std::string to_string(const PolyRing& ring) const;

 private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<Poly> data_;
};

/// An ideal of R = O[x] together with its global standard basis.
class Ideal {
 public:
  Ideal(PolyRing ring, std::vector<Poly> generators, const Limits& limits = {});

  const PolyRing& ring() const { return ring_; }
  const std::vector<Poly>& generators() const { return generators_; }
  const StdBasis& basis() const { return *basis_; }
  const Limits& limits() const { return limits_; }

  Poly reduce(const Poly& f) const;
  PolyVec reduce(const PolyVec& v) const;
  PolyMatrix reduce(const PolyMatrix& m) const;
  bool contains(const Poly& f) const { return reduce(f).is_zero(); }

 private:
  PolyRing ring_;
  std::vector<Poly> generators_;
  Limits limits_;
  std::shared_ptr<const StdBasis> basis_;
};

/// Lead data of a submodule element: coefficient pi^valuation at x^m e_component.
struct LeadTerm {
  std::size_t component;
  Monomial m;
  std::int64_t valuation;
};

/// A submodule of R^rank with a strong Groebner basis for the
/// position-over-term order (component 0 largest, then degrevlex).
class Submodule {
 public:
  Submodule(std::size_t rank, const std::vector<PolyVec>& generators, const Limits& limits = {});
  /// Completes only components [0, complete); vectors led by a later
  /// component are kept as found and generate the rest of the module.
  Submodule(std::size_t rank, const std::vector<PolyVec>& generators, const Limits& limits, std::size_t complete);

  std::size_t rank() const { return rank_; }
  const std::vector<PolyVec>& basis() const { return basis_; }
  std::vector<LeadTerm> leads() const;
  PolyVec reduce(const PolyVec& v) const;
  bool contains(const PolyVec& v) const;

 private:
  std::size_t rank_;
  std::vector<PolyVec> basis_;
};

/// Linear algebra for an r x k matrix over A = R / ideal.
class LinearSystem {
 public:
  LinearSystem(const PolyMatrix& m, const Ideal& ideal);
  /// With generators_only the syzygies are a generating set but the
  /// solutions returned by solve are not canonical.
  LinearSystem(const PolyMatrix& m, const Ideal& ideal, bool generators_only);

  /// k x s; columns generate { v in A^k : m v = 0 }.
  const PolyMatrix& syzygies() const { return syzygies_; }
  /// Some t with m t = y in A^r, if y is in the image.
  std::optional<PolyVec> solve(const PolyVec& y) const;

 private:
  std::size_t r_, k_;
  Ideal ideal_;
  std::shared_ptr<const Submodule> elimination_;
  PolyMatrix syzygies_;
};

PolyMatrix syzygy_module(const PolyMatrix& m, const Ideal& ideal);

struct TaylorDivision {
  std::vector<Poly> quotients;  // g_1..g_n
  Scalar remainder;             // f(point)
};

/// f = sum_i g_i (x_i - a_i) + f(a), dividing by x_1 - a_1 first.
TaylorDivision taylor_division(const Poly& f, std::span<const Scalar> point);

}  // namespace congru
