#include "congru/lattice.hpp"

#include "congru/error.hpp"

namespace congru {

namespace {

struct Frame {
  Dvr dvr;
  Matrix w1, w2;      // V_i in L-coordinates
  Matrix winv;        // inverse of [w1 | w2]
  Matrix l1, l2;      // L_i in L-coordinates
};

Dvr dvr_of(const Matrix& m) {
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j)
      if (auto d = m(i, j).dvr()) return *d;
  throw Error(ErrorCode::DegenerateLattice, "lattice basis is zero");
}

// Saturated O-basis of O^d ∩ span_K(w).
Matrix saturate(const Matrix& w, std::size_t d) {
  if (w.cols() == 0) return Matrix(d, 0);
  Matrix functionals = kernel_basis(w.transpose());
  if (functionals.cols() == 0) return Matrix::identity(dvr_of(w), d);
  return kernel_basis(functionals.transpose());
}

Frame frame(const LatticeSplit& s) {
  const std::size_t d = s.ambient_dim;
  if (s.lattice_basis.rows() != d || s.lattice_basis.cols() != d || s.v1.rows() != d || s.v2.rows() != d)
    throw Error(ErrorCode::DimensionMismatch, "lattice data does not match the ambient dimension");
  auto binv = inverse_over_K(s.lattice_basis);
  if (!binv) throw Error(ErrorCode::DegenerateLattice, "lattice basis is not invertible over K");
  const Dvr dvr = dvr_of(s.lattice_basis);
  if (rank_over_K(s.v1) != s.v1.cols() || rank_over_K(s.v2) != s.v2.cols())
    throw Error(ErrorCode::NotADirectSum, "subspace generators are linearly dependent");
  Matrix w1 = *binv * s.v1, w2 = *binv * s.v2;
  auto winv = inverse_over_K(Matrix::hcat(w1, w2));
  if (!winv) throw Error(ErrorCode::NotADirectSum, "V1 and V2 do not form a direct sum decomposition");
  Matrix l1 = saturate(w1, d), l2 = saturate(w2, d);
  if (l1.cols() != w1.cols() || l2.cols() != w2.cols())
    throw Error(ErrorCode::InternalInvariantViolation, "lattice intersection has the wrong rank");
  for (const Matrix* li : {&l1, &l2})
    if (!o_module_from_presentation(*li).is_torsion_free())
      throw Error(ErrorCode::TorsionQuotient, "L/L_i has torsion");
  return {dvr, std::move(w1), std::move(w2), std::move(*winv), std::move(l1), std::move(l2)};
}

// Quotient of lattice `big` by its sublattice `small` (bases as columns, same space).
FinOModule lattice_quotient(const Matrix& big, const Matrix& small) {
  auto inv = inverse_over_K(big);
  if (!inv) throw Error(ErrorCode::InternalInvariantViolation, "lattice basis is singular");
  Matrix x = *inv * small;
  if (!x.is_integral()) throw Error(ErrorCode::InternalInvariantViolation, "sublattice not contained in lattice");
  return o_module_from_presentation(x);
}

}  // namespace

LatticeCongruence split_and_congruence(const LatticeSplit& s) {
  const Frame f = frame(s);
  const std::size_t d = s.ambient_dim, d1 = f.w1.cols(), d2 = f.w2.cols();

  // Coordinates on the V_i bases: x = w1 a + w2 b  <=>  (a; b) = winv x.
  const Matrix top = f.winv.row_block(0, d1), bottom = f.winv.row_block(d1, d2);
  const Matrix sup1 = span_basis_K(top), sup2 = span_basis_K(bottom);
  const Matrix sub1 = top * f.l1, sub2 = bottom * f.l2;

  FinOModule q1 = lattice_quotient(sup1, sub1);
  FinOModule q2 = lattice_quotient(sup2, sub2);
  FinOModule q0 = lattice_quotient(Matrix::identity(f.dvr, d), Matrix::hcat(f.l1, f.l2));
  if (q0 != q1 || q0 != q2)
    throw Error(ErrorCode::InternalInvariantViolation,
                "congruence quotients disagree: " + q1.to_string() + ", " + q0.to_string() + ", " + q2.to_string());

  return {s.lattice_basis * f.l1, s.lattice_basis * f.l2, s.v1 * sup1, s.v2 * sup2, std::move(q0)};
}

IdealO pairing_discriminant(const LatticeSplit& s, const std::optional<Matrix>& pairing) {
  const Frame f = frame(s);
  const std::size_t d = s.ambient_dim;
  // Functionals on L vanishing on L_2, as columns.
  const Matrix fs = kernel_basis(f.l2.transpose());
  if (fs.cols() != f.l1.cols())
    throw Error(ErrorCode::RankMismatch, "rank of Hom(L/L_2, O) differs from dim V_1");
  Matrix gram = pairing ? *pairing : Matrix::identity(f.dvr, d);
  if (gram.rows() != d || gram.cols() != d) throw Error(ErrorCode::DimensionMismatch, "pairing matrix shape");
  if (!gram.is_integral()) throw Error(ErrorCode::NonIntegralEntry, "pairing matrix has an entry outside O");
  const Matrix m = fs.transpose() * gram * f.l1;
  return fitting_ideal(m, 0);
}

}  // namespace congru
