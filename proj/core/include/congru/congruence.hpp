#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "congru/augmented_algebra.hpp"
#include "congru/fp_module.hpp"
#include "congru/resolution.hpp"

namespace congru {

struct CongruenceOptions {
  ResolutionStrategy strategy = ResolutionStrategy::automatic;
  /// Resolution length; defaults to c + 2.
  std::optional<std::size_t> length;
  /// Differentials for ResolutionStrategy::file.
  std::vector<PolyMatrix> user_resolution;
};

/// As the one-argument form; `opt` picks the complex used for Ext^c(O,O).
RegularityReport regularity_at_lambda(const AugmentedAlgebra& a, const CongruenceOptions& opt);

/// Ext^i_A(O, M). Representatives are cocycles in Hom_A(F_i, M) = M^{r_i},
/// flattened block by block (g entries per basis element of F_i); the
/// structure's witness is relative to them.
struct ExtModule {
  std::size_t degree = 0;
  FinOModule structure;
  std::vector<PolyVec> representatives;
  std::shared_ptr<const FreeResolution> resolution;
};

/// The resolution used for A under the options (memoized per algebra).
std::shared_ptr<const FreeResolution> resolution_for(const AugmentedAlgebra& a, const CongruenceOptions& opt = {},
                                                     std::size_t min_length = 0);

ExtModule ext_module(const FpModule& m, std::size_t i, const CongruenceOptions& opt = {});
/// M = O: computed over O from lambda(d).
ExtModule ext_module_O(const AugmentedAlgebra& a, std::size_t i, const CongruenceOptions& opt = {});

/// Congruence ideal; the zero ideal when A is not regular at lambda.
IdealO eta(const FpModule& m, const CongruenceOptions& opt = {});
/// Congruence module; always torsion.
FinOModule psi(const FpModule& m, const CongruenceOptions& opt = {});

/// Codimension-zero oracles for module-finite M: M/(M[p] + M[A[p]]) and
/// the ideal of values of Hom_A(M, O) on M[p].
FinOModule psi_direct_codim0(const FpModule& m);
IdealO eta_direct_codim0(const FpModule& m);

struct KappaDefect {
  FinOModule cokernel;
  IdealO coker_ann;
  bool diff_identity = false;
  bool sequence_identity = false;
};

/// Throws KappaNotInjective if the Kunneth map loses rank.
KappaDefect kappa_defect(const FpModule& m, const CongruenceOptions& opt = {});

enum class Verdict { holds, fails, hypothesis_unverified };
std::string to_string(Verdict v);

enum class CriterionMode { defect0, wld, iso, cotangent_iso };
std::string to_string(CriterionMode m);
CriterionMode parse_criterion_mode(const std::string& name);

/// A morphism A -> B given by the images of A's variables.
class AlgebraMap {
 public:
  /// Throws NotAMorphism (relations or augmentations not respected),
  /// NotASurjection (some variable of B not hit) or NotSameCodim.
  AlgebraMap(AugmentedAlgebra source, AugmentedAlgebra target, std::vector<Poly> images);
  static AlgebraMap identity(const AugmentedAlgebra& a);

  const AugmentedAlgebra& source() const { return source_; }
  const AugmentedAlgebra& target() const { return target_; }
  const std::vector<Poly>& images() const { return images_; }
  PolyMatrix apply(const PolyMatrix& m) const;
  std::string key() const;

 private:
  AugmentedAlgebra source_, target_;
  std::vector<Poly> images_;
};

struct CriterionResult {
  Verdict verdict = Verdict::hypothesis_unverified;
  std::optional<bool> condition2;  // Fitt_c = eta(M)
  std::optional<bool> condition3;  // mu length(Phi) = length(Psi(M))
  std::uint64_t lhs = 0, rhs = 0;  // the compared lengths
  std::optional<bool> ext_torsion_free;  // consequence of the depth hypothesis
  std::vector<std::string> notes;
};

/// defect0 / wld use M; iso compares length Phi(A) with length Psi(B as an
/// A-module); cotangent_iso compares length Phi(A) with length Phi(B).
CriterionResult numerical_criterion(const FpModule& m, CriterionMode mode, const CongruenceOptions& opt = {});
CriterionResult numerical_criterion(const AlgebraMap& phi, CriterionMode mode, const CongruenceOptions& opt = {});

struct DeformationResult {
  AugmentedAlgebra b;
  FpModule n;
  std::optional<std::uint64_t> lhs, rhs;  // nullopt when infinite
  IdealO ord_f;
  bool exact_sequence_holds = false;
  IdealO eta_a, eta_b;
};

/// Throws NotInAugmentationIdeal, InSymbolicSquare or ZeroDivisorSuspected.
DeformationResult deformation_step(const FpModule& m, const Poly& f, const CongruenceOptions& opt = {});

struct SerreResult {
  std::vector<std::size_t> ranks;     // rank tfree Ext^i(O,O)
  std::vector<std::size_t> expected;  // binomial(c, i)
  std::size_t hom_cotangent_rank = 0;
  std::optional<bool> product_generates;
  Verdict verdict = Verdict::fails;
};

/// Throws ProductLiftFailed when a chain-map lift cannot be solved.
SerreResult serre_check(const AugmentedAlgebra& a, bool with_products, const CongruenceOptions& opt = {});

struct InvarianceResult {
  IdealO eta_source, eta_target;
  Verdict verdict = Verdict::fails;
};

/// N is a module over phi.target().
InvarianceResult invariance_check(const AlgebraMap& phi, const FpModule& n, const CongruenceOptions& opt = {});

struct CongruenceReport {
  IdealO eta;
  FinOModule psi;
  FinOModule phi;
  IdealO fitt_c;
  std::size_t mu = 0;
  std::map<std::string, Verdict> verdicts;
  Certification certification = Certification::certified;
  std::vector<std::string> warnings;
};

CongruenceReport congruence_report(const FpModule& m, const CongruenceOptions& opt = {});

}  // namespace congru
