#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <variant>
#include <vector>

#include <gmpxx.h>

namespace congru {

/// Which discrete valuation ring O is in play.
///
/// `p_adic`       : Z localized at (p); elements are rationals whose
///                  denominator is prime to p. Uniformizer p.
/// `power_series` : F_q[t] localized at (t); elements are rational functions
///                  over F_q without a pole at t = 0. Uniformizer t.
///
/// In both cases the same type also carries elements of the fraction field K,
/// which the lattice code needs.
enum class DvrKind { p_adic, power_series };

namespace detail {
struct DvrImpl;
class FiniteField;
}  // namespace detail

class Scalar;

/// Lightweight handle to an interned ring description. Copies are cheap and
/// compare equal exactly when they describe the same ring.
class Dvr {
 public:
  static Dvr p_adic(std::uint64_t p);
  static Dvr power_series(std::uint64_t q);

  DvrKind kind() const;
  /// Residue characteristic p.
  std::uint64_t prime() const;
  /// Size of the residue field (p or q).
  std::uint64_t residue_order() const;

  Scalar zero() const;
  Scalar one() const;
  Scalar uniformizer() const;
  Scalar from_int(std::int64_t n) const;
  Scalar from_integer(const mpz_class& n) const;
  /// pi^e for any integer e (negative exponents land in K).
  Scalar pi_power(std::int64_t e) const;

  std::string describe() const;

  friend bool operator==(const Dvr& a, const Dvr& b) { return a.impl_ == b.impl_; }
  friend bool operator!=(const Dvr& a, const Dvr& b) { return a.impl_ != b.impl_; }

 private:
  explicit Dvr(const detail::DvrImpl* impl) : impl_(impl) {}
  const detail::DvrImpl* impl_;
  friend class Scalar;
};

/// Rational function over F_q, kept reduced with a monic denominator.
struct FqRational {
  const detail::FiniteField* field = nullptr;
  std::vector<std::uint32_t> num;  // little-endian coefficients, trimmed
  std::vector<std::uint32_t> den;  // monic, never empty
};

/// An element of K = Frac(O). Values are exact.
///
/// A default-constructed Scalar is a ring-agnostic zero; it adopts the ring
/// of whatever it is combined with.
class Scalar {
 public:
  Scalar() = default;
  /// A ring-agnostic integer constant; it binds to a ring on first use.
  explicit Scalar(long n) : value_(mpq_class(n)) {}

  bool is_zero() const;
  bool is_one() const;
  /// Valuation in Z, or nullopt for zero.
  std::optional<std::int64_t> valuation() const;
  /// True when the valuation is >= 0 (zero counts as integral).
  bool is_integral() const;
  /// True when the valuation is exactly 0.
  bool is_unit() const;
  /// x / pi^v(x); zero maps to zero.
  Scalar unit_part() const;
  /// Divisibility in O: does *this divide other? (0 divides only 0.)
  bool divides(const Scalar& other) const;
  /// Canonical representative of an integral x modulo pi^v: an integer in
  /// [0, p^v) for Z_(p), a polynomial in pi of degree < v otherwise.
  Scalar residue_rep(std::int64_t v) const;

  std::optional<Dvr> dvr() const;
  std::string to_string() const;

  Scalar operator-() const;
  Scalar& operator+=(const Scalar& b);
  Scalar& operator-=(const Scalar& b);
  Scalar& operator*=(const Scalar& b);
  /// Throws InvalidArgument on division by zero.
  Scalar& operator/=(const Scalar& b);

  friend Scalar operator+(Scalar a, const Scalar& b) { return a += b; }
  friend Scalar operator-(Scalar a, const Scalar& b) { return a -= b; }
  friend Scalar operator*(Scalar a, const Scalar& b) { return a *= b; }
  friend Scalar operator/(Scalar a, const Scalar& b) { return a /= b; }
  friend bool operator==(const Scalar& a, const Scalar& b);
  friend bool operator!=(const Scalar& a, const Scalar& b) { return !(a == b); }
  friend std::ostream& operator<<(std::ostream& os, const Scalar& s) {
    return os << s.to_string();
  }

  /// Direct access for code that needs the underlying representation.
  const mpq_class* as_rational() const { return std::get_if<mpq_class>(&value_); }

 private:
  const detail::DvrImpl* dvr_ = nullptr;
  std::variant<mpq_class, FqRational> value_{};

  friend class Dvr;
  void adopt(const detail::DvrImpl* other);
  static const Scalar& bound(const Scalar& b, const detail::DvrImpl* d, Scalar& tmp);
};

/// An ideal of O: (pi^e), the unit ideal (e = 0) or the zero ideal.
class IdealO {
 public:
  IdealO() = default;  // zero ideal
  static IdealO zero() { return IdealO(); }
  static IdealO unit() { return IdealO(0); }
  static IdealO pi_power(std::uint64_t e) { return IdealO(e); }
  /// The principal ideal generated by x.
  static IdealO generated_by(const Scalar& x);

  bool is_zero() const { return !exponent_; }
  bool is_unit() const { return exponent_ && *exponent_ == 0; }
  /// nullopt for the zero ideal.
  std::optional<std::uint64_t> exponent() const { return exponent_; }
  /// length_O(O / I); nullopt (infinite) for the zero ideal.
  std::optional<std::uint64_t> colength() const { return exponent_; }

  /// I * J
  friend IdealO operator*(const IdealO& a, const IdealO& b);
  /// I + J
  friend IdealO operator+(const IdealO& a, const IdealO& b);
  /// Containment a ⊆ b.
  bool is_contained_in(const IdealO& b) const;

  friend bool operator==(const IdealO& a, const IdealO& b) { return a.exponent_ == b.exponent_; }
  friend bool operator!=(const IdealO& a, const IdealO& b) { return !(a == b); }

  /// `(1)`, `(0)`, `(pi)`, `(pi^e)`.
  std::string to_string() const;
  friend std::ostream& operator<<(std::ostream& os, const IdealO& i) { return os << i.to_string(); }

 private:
  explicit IdealO(std::uint64_t e) : exponent_(e) {}
  std::optional<std::uint64_t> exponent_;
};

}  // namespace congru
