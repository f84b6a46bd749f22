#pragma once

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "congru/augmented_algebra.hpp"

namespace congru {

struct ModuleAssertions {
  std::optional<unsigned> depth;
  bool maximal_cohen_macaulay = false;
};

/// M = A^g / (columns of the presentation), entries reduced modulo the
/// relation ideal of A.
class FpModule {
 public:
  FpModule(AugmentedAlgebra algebra, std::size_t generators, const PolyMatrix& presentation,
           ModuleAssertions assertions = {});
  /// A^rank.
  static FpModule free(const AugmentedAlgebra& a, std::size_t rank = 1, ModuleAssertions assertions = {});
  /// O = A/p with A acting through lambda.
  static FpModule residue(const AugmentedAlgebra& a);

  const AugmentedAlgebra& algebra() const { return algebra_; }
  std::size_t num_generators() const { return generators_; }
  const PolyMatrix& presentation() const { return presentation_; }
  const ModuleAssertions& assertions() const { return assertions_; }
  /// Depth >= c + 1 has been asserted (directly or through MCM).
  bool depth_hypothesis_asserted() const;
  /// Text identifying the module within its algebra.
  std::string key() const;

 private:
  AugmentedAlgebra algebra_;
  std::size_t generators_;
  PolyMatrix presentation_;
  ModuleAssertions assertions_;
};

FpModule direct_sum(const FpModule& a, const FpModule& b);

struct ReductionModP {
  FinOModule quotient;  // M/pM, with witness on M's generators
  std::size_t mu = 0;
};

ReductionModP reduce_mod_p(const FpModule& m);

/// Rows are functionals on O^g (M's generators after lambda), an O-basis of
/// Hom_A(M, O). Every row kills every lambda-evaluated relation.
Matrix hom_to_O_generators(const FpModule& m);

/// O-module structure of a module-finite M. Positions are the standard
/// (component, monomial) pairs of a strong basis of the relation submodule
/// whose coefficient is not forced to vanish.
class OStructure {
 public:
  explicit OStructure(const FpModule& m);

  std::size_t size() const { return positions_.size(); }
  const std::vector<std::pair<std::size_t, Monomial>>& positions() const { return positions_; }
  /// Columns are the O-relations among the positions.
  const Matrix& relations() const { return relations_; }
  const FinOModule& module() const { return module_; }

  PolyVec element(std::span<const Scalar> coords) const;
  std::vector<Scalar> coordinates(const PolyVec& v) const;
  /// Matrix of multiplication by f on the positions.
  Matrix multiplication(const Poly& f) const;
  /// Columns spanning { x : J x = 0 } in position coordinates (includes the relations).
  Matrix annihilated_by(const std::vector<Poly>& j) const;
  /// The subquotient span(columns)/relations as an abstract O-module.
  FinOModule span_module(const Matrix& columns) const;

 private:
  std::size_t rank_;
  Dvr dvr_;
  std::shared_ptr<const Submodule> submodule_;
  std::vector<std::pair<std::size_t, Monomial>> positions_;
  Matrix relations_;
  FinOModule module_;
};

/// M[J] = { x in M : J x = 0 } as an O-module. Throws NotFiniteOverBase when
/// M is not finite over O or has support away from the augmentation point.
FinOModule torsion_submodule(const FpModule& m, const std::vector<Poly>& j);

}  // namespace congru
