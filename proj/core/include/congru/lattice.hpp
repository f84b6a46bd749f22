#pragma once

#include <optional>

#include "congru/omodule.hpp"

namespace congru {

/// A lattice L in V = K^d together with a splitting V = V1 (+) V2.
/// All matrices are given in the ambient coordinates of V, bases as columns.
struct LatticeSplit {
  std::size_t ambient_dim = 0;
  Matrix lattice_basis;  // d x d, invertible over K
  Matrix v1;             // d x d1
  Matrix v2;             // d x d2
};

struct LatticeCongruence {
  Matrix l1, l2;        // L ∩ V_i
  Matrix lsup1, lsup2;  // projections of L to V_i
  FinOModule cong;
};

/// Computes L_i, L^i and the congruence module. The three quotients
/// L^1/L_1, L/(L_1 + L_2) and L^2/L_2 are formed separately and must agree.
LatticeCongruence split_and_congruence(const LatticeSplit& s);

/// det(<f_i, x_j>) for x a basis of L_1 and f a basis of Hom(L/L_2, O).
/// `pairing` is the Gram matrix on L-coordinates; the default is evaluation.
IdealO pairing_discriminant(const LatticeSplit& s, const std::optional<Matrix>& pairing = std::nullopt);

}  // namespace congru
