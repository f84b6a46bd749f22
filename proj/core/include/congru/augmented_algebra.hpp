#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "congru/dvr.hpp"
#include "congru/memo.hpp"
#include "congru/omodule.hpp"
#include "congru/poly.hpp"

namespace congru {

/// User assertions about A. They are recorded and surfaced, never proved.
struct AlgebraAssertions {
  std::optional<bool> complete_intersection;
  std::optional<unsigned> dimension;
  std::optional<unsigned> depth;
  std::optional<bool> gorenstein;
  std::optional<bool> cohen_macaulay;
};

/// A = O[x_1..x_n]/(f_1..f_m) localized at (pi, x - a), with augmentation
/// lambda(x_i) = a_i and declared codimension c. Cheap to copy; immutable.
class AugmentedAlgebra {
 public:
  const PolyRing& ring() const { return data_->ring; }
  const Dvr& dvr() const { return data_->ring.dvr(); }
  std::size_t nvars() const { return data_->ring.nvars(); }
  const std::vector<Poly>& relations() const { return data_->relations; }
  const std::vector<Scalar>& augmentation() const { return data_->augmentation; }
  unsigned codim() const { return data_->codim; }
  const AlgebraAssertions& assertions() const { return data_->assertions; }
  const Ideal& ideal() const { return data_->ideal; }
  const Limits& limits() const { return data_->ideal.limits(); }
  /// Cross-check notes gathered while building (e.g. about claimed CI).
  const std::vector<std::string>& notes() const { return data_->notes; }

  Scalar evaluate(const Poly& f) const { return f.evaluate(data_->augmentation); }
  Matrix evaluate(const PolyMatrix& m) const { return m.evaluate(data_->augmentation); }
  /// x_i - a_i, generators of p.
  std::vector<Poly> augmentation_ideal() const;

  /// Stable text identifying the presentation, augmentation and codim.
  const std::string& key() const { return data_->key; }
  Memo& memo() const { return *data_->memo; }

 private:
  struct Data {
    PolyRing ring;
    std::vector<Poly> relations;
    std::vector<Scalar> augmentation;
    unsigned codim;
    AlgebraAssertions assertions;
    Ideal ideal;
    std::vector<std::string> notes;
    std::string key;
    std::shared_ptr<Memo> memo;
  };
  explicit AugmentedAlgebra(std::shared_ptr<const Data> d) : data_(std::move(d)) {}
  std::shared_ptr<const Data> data_;

  friend AugmentedAlgebra build_algebra(PolyRing, std::vector<Poly>, std::vector<Scalar>, unsigned,
                                        AlgebraAssertions, const Limits&);
};

/// Throws NonIntegralEntry, NonLocalAugmentation or AugmentationNotWellDefined.
AugmentedAlgebra build_algebra(PolyRing ring, std::vector<Poly> relations, std::vector<Scalar> augmentation,
                               unsigned codim, AlgebraAssertions assertions = {}, const Limits& limits = {});

struct CotangentData {
  FinOModule cotangent;  // p/p^2
  FinOModule phi;        // its torsion part
  IdealO fitt_c;         // Fitt_c(p/p^2)
  Matrix jacobian;       // n x m, entries df_j/dx_i at lambda
};

CotangentData cotangent_invariants(const AugmentedAlgebra& a);

struct RegularityReport {
  bool regular_at_p = false;
  bool regular_global = false;
  std::size_t cotangent_rank = 0;
  std::size_t ext_top_rank = 0;  // rank of tfree Ext^c(O,O)
  IdealO eta;
  std::string evidence;
};

/// Cross-checks the cotangent rank against eta(A); disagreement with the
/// declared codimension raises InconsistentCodim.
RegularityReport regularity_at_lambda(const AugmentedAlgebra& a);

struct SymbolicPowerResult {
  bool in_p = false;
  bool in_p2_symbolic = false;
  IdealO ord_class;
  std::vector<Scalar> cotangent_class;  // coordinates on the classes of x_i - a_i
};

SymbolicPowerResult symbolic_power_test(const AugmentedAlgebra& a, const Poly& f);

}  // namespace congru
