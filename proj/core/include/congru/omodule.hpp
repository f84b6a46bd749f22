#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "congru/dvr.hpp"

namespace congru {

/// Dense matrix over K. Entries default to the ring-agnostic zero.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
  static Matrix identity(const Dvr& dvr, std::size_t n);
  static Matrix from_rows(const std::vector<std::vector<Scalar>>& rows, std::size_t cols_if_empty = 0);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  Scalar& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const Scalar& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::vector<Scalar> row(std::size_t i) const;
  std::vector<Scalar> column(std::size_t j) const;
  Matrix transpose() const;
  /// Columns [first, first + count).
  Matrix column_block(std::size_t first, std::size_t count) const;
  Matrix row_block(std::size_t first, std::size_t count) const;

  /// [a | b]; row counts must agree.
  static Matrix hcat(const Matrix& a, const Matrix& b);
  /// [a ; b]; column counts must agree.
  static Matrix vcat(const Matrix& a, const Matrix& b);

  bool is_zero() const;
  /// Every entry lies in O.
  bool is_integral() const;
  /// Smallest valuation among nonzero entries; nullopt for the zero matrix.
  std::optional<std::int64_t> min_valuation() const;

  std::vector<Scalar> apply(std::span<const Scalar> x) const;
  friend Matrix operator*(const Matrix& a, const Matrix& b);
  friend Matrix operator+(const Matrix& a, const Matrix& b);
  friend Matrix operator-(const Matrix& a, const Matrix& b);
  Matrix scaled(const Scalar& c) const;
  friend bool operator==(const Matrix& a, const Matrix& b);

  std::string to_string() const;

 private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<Scalar> data_;
};

/// Tie-breaking for the minimal-valuation pivot search.
enum class PivotRule { lowest_index, highest_index };

/// left * a * right = diagonal(pi^d_0, ..., pi^d_{rank-1}, 0, ...), with the
/// inverses of both transforms recorded.
struct SmithForm {
  Matrix left, left_inverse;
  Matrix right, right_inverse;
  /// Non-decreasing; one entry per nonzero invariant factor.
  std::vector<std::uint64_t> diagonal;
  std::size_t rank() const { return diagonal.size(); }
};

/// Smith normal form over O. Pivots on a minimal-valuation entry; ties broken
/// by `rule`. Throws NonIntegralEntry if some entry is outside O.
SmithForm smith_form(const Matrix& a, PivotRule rule = PivotRule::lowest_index);

/// Basis change data of a cokernel in normal form. Normal generators are
/// ordered torsion first (matching torsion_exponents) then free.
struct PresentationWitness {
  /// (#normal gens) x (#original gens): original coordinates -> normal coordinates.
  Matrix to_normal;
  /// (#original gens) x (#normal gens): column j is normal generator j.
  Matrix from_normal;
};

/// A finitely generated O-module in invariant-factor form:
/// O/pi^e_1 (+) ... (+) O/pi^e_r (+) O^free_rank, e_1 <= ... <= e_r, e_i > 0.
class FinOModule {
 public:
  FinOModule() = default;
  FinOModule(std::vector<std::uint64_t> torsion_exponents, std::size_t free_rank,
             std::optional<PresentationWitness> witness = std::nullopt);

  const std::vector<std::uint64_t>& torsion_exponents() const { return torsion_; }
  std::size_t free_rank() const { return free_rank_; }
  std::size_t num_generators() const { return torsion_.size() + free_rank_; }
  /// Sum of the torsion exponents, or nullopt when free_rank > 0.
  std::optional<std::uint64_t> length() const;
  /// Length of the torsion submodule.
  std::uint64_t torsion_length() const;
  bool is_zero() const { return torsion_.empty() && free_rank_ == 0; }
  bool is_torsion() const { return free_rank_ == 0; }
  bool is_torsion_free() const { return torsion_.empty(); }
  /// Largest exponent, i.e. ann(tors) = (pi^max); 0 for torsion-free modules.
  std::uint64_t max_exponent() const { return torsion_.empty() ? 0 : torsion_.back(); }

  /// The torsion submodule and the torsion-free quotient, as abstract modules.
  FinOModule torsion_part() const { return FinOModule(torsion_, 0); }
  FinOModule torsion_free_part() const { return FinOModule({}, free_rank_); }

  const std::optional<PresentationWitness>& witness() const { return witness_; }
  /// Normal-form coordinates of an element given on the original generators.
  std::vector<Scalar> normal_coordinates(std::span<const Scalar> x) const;
  /// O-basis of Hom_O(M, O) as rows on the original generators.
  Matrix dual_basis() const;

  /// `O/pi^a (+) ... (+) O^r`, or `0`.
  std::string to_string() const;

  /// Compares invariants only; witnesses are ignored.
  friend bool operator==(const FinOModule& a, const FinOModule& b) {
    return a.torsion_ == b.torsion_ && a.free_rank_ == b.free_rank_;
  }
  friend bool operator!=(const FinOModule& a, const FinOModule& b) { return !(a == b); }

 private:
  std::vector<std::uint64_t> torsion_;
  std::size_t free_rank_ = 0;
  std::optional<PresentationWitness> witness_;
};

/// Cokernel of `relations` (rows = generators, columns = relations).
FinOModule o_module_from_presentation(const Matrix& relations,
                                      PivotRule rule = PivotRule::lowest_index);

/// Fitt_k of the module presented by `presentation` (rows = generators).
IdealO fitting_ideal(const Matrix& presentation, std::size_t k);
IdealO fitting_ideal(const FinOModule& module, std::size_t k);

/// ord(x) = { alpha(x) : alpha in Hom_O(U, O) }. Requires a witness.
IdealO order_ideal(const FinOModule& module, std::span<const Scalar> element);

/// Rank over K (entries may lie outside O).
std::size_t rank_over_K(const Matrix& a);
/// Inverse over K of a square matrix, or nullopt when singular.
std::optional<Matrix> inverse_over_K(const Matrix& a);
/// O-basis (columns) of the O-span of the columns of a, entries in K allowed.
Matrix span_basis_K(const Matrix& a);

/// Saturated O-basis (columns) of { x in O^n : a x = 0 }.
Matrix kernel_basis(const Matrix& a);

/// O-basis (columns) of the O-span of the columns of a.
Matrix column_span_basis(const Matrix& a);

/// Some x in O^n with a x = b, if one exists.
std::optional<std::vector<Scalar>> solve_integral(const Matrix& a, std::span<const Scalar> b);

/// Z/B with Z = ker(condition) in O^n and B the O-span of `boundaries`,
/// which must lie in Z. `condition` may have zero rows (then Z = O^n).
struct Subquotient {
  FinOModule module;
  Matrix cycle_basis;        // n x z
  Matrix cycle_coordinates;  // z x n, left inverse of cycle_basis
  /// Normal-form coordinates (torsion first, then free) of a cycle.
  std::vector<Scalar> coordinates(std::span<const Scalar> cycle) const;
};

Subquotient subquotient(const Matrix& condition, const Matrix& boundaries, std::size_t ambient,
                        const Dvr& dvr);

}  // namespace congru
