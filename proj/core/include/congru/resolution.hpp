#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "congru/augmented_algebra.hpp"

namespace congru {

enum class ResolutionStrategy { automatic, koszul, matrix_factorization, shamash, syzygy, file };

enum class Certification { certified, bounded_search, user_supplied_verified };

std::string to_string(ResolutionStrategy s);
std::string to_string(Certification c);
/// Accepts the names printed by to_string ("auto" for automatic).
ResolutionStrategy parse_strategy(const std::string& name);

/// d_1, ..., d_L with d_i : A^{r_i} -> A^{r_{i-1}}, r_0 = 1, and the
/// augmentation A -> O implicit after F_0.
struct FreeResolution {
  std::vector<PolyMatrix> differentials;  // differentials[i] is d_{i+1}
  ResolutionStrategy strategy = ResolutionStrategy::syzygy;
  Certification status = Certification::certified;
  unsigned search_bound = 0;  // degree cap behind a bounded_search status

  std::size_t length() const { return differentials.size(); }
  /// 1-based, d(i) : F_i -> F_{i-1}.
  const PolyMatrix& d(std::size_t i) const { return differentials.at(i - 1); }
  std::size_t rank(std::size_t i) const { return i == 0 ? 1 : differentials.at(i - 1).cols(); }
};

/// Builds and verifies `length` differentials. `automatic` tries Koszul,
/// matrix factorization or Shamash when they apply and falls back to
/// iterated syzygies. `file` uses `user` and re-verifies it.
FreeResolution resolve_O(const AugmentedAlgebra& a, std::size_t length,
                         ResolutionStrategy strategy = ResolutionStrategy::automatic,
                         const std::vector<PolyMatrix>& user = {});

/// Checks d^2 = 0 modulo the relations, that d_1 generates p, and exactness
/// at F_1..F_{c+1}. Throws VerificationFailed naming the degree.
Certification verify_resolution(const FreeResolution& res, const AugmentedAlgebra& a);

/// Ranks of the Shamash complex on n variables and m relations.
std::vector<std::size_t> shamash_ranks(std::size_t n, std::size_t m, std::size_t length);

}  // namespace congru
