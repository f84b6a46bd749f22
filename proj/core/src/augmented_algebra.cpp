#include "congru/augmented_algebra.hpp"

#include <sstream>

#include "congru/error.hpp"

namespace congru {

std::vector<Poly> AugmentedAlgebra::augmentation_ideal() const {
  std::vector<Poly> out;
  for (std::size_t i = 0; i < nvars(); ++i)
    out.push_back(ring().variable(i) - Poly::constant(augmentation()[i]));
  return out;
}

AugmentedAlgebra build_algebra(PolyRing ring, std::vector<Poly> relations, std::vector<Scalar> augmentation,
                               unsigned codim, AlgebraAssertions assertions, const Limits& limits) {
  if (augmentation.size() != ring.nvars())
    throw Error(ErrorCode::DimensionMismatch, "augmentation has " + std::to_string(augmentation.size()) +
                                                  " values for " + std::to_string(ring.nvars()) + " variables");
  for (std::size_t i = 0; i < augmentation.size(); ++i) {
    const Scalar& a = augmentation[i];
    if (!a.is_integral() || (!a.is_zero() && *a.valuation() == 0))
      throw Error(ErrorCode::NonLocalAugmentation,
                  "lambda(" + ring.variables()[i] + ") = " + a.to_string() + " is not in the maximal ideal of O");
  }
  std::erase_if(relations, [](const Poly& f) { return f.is_zero(); });
  for (const auto& f : relations) {
    if (!f.is_integral())
      throw Error(ErrorCode::NonIntegralEntry, "relation " + ring.to_string(f) + " has coefficients outside O");
    const Scalar v = f.evaluate(augmentation);
    if (!v.is_zero())
      throw Error(ErrorCode::AugmentationNotWellDefined,
                  "lambda(" + ring.to_string(f) + ") = " + v.to_string() + " is not zero");
  }

  std::ostringstream key;
  key << ring.dvr().describe() << "|";
  for (const auto& v : ring.variables()) key << v << ",";
  key << "|";
  for (const auto& f : relations) key << ring.to_string(f) << ";";
  key << "|";
  for (const auto& a : augmentation) key << a.to_string() << ",";
  key << "|c=" << codim << "|deg=" << limits.max_degree << "|val=" << limits.max_valuation;

  std::vector<std::string> notes;
  if (assertions.complete_intersection.value_or(false) && assertions.dimension) {
    const long expected = static_cast<long>(ring.nvars()) + 1 - static_cast<long>(*assertions.dimension);
    if (expected != static_cast<long>(relations.size()))
      notes.push_back("claimed complete intersection of dimension " + std::to_string(*assertions.dimension) +
                      " would need " + std::to_string(expected) + " relations, presentation has " +
                      std::to_string(relations.size()));
  }

  Ideal ideal(ring, relations, limits);
  auto data = std::make_shared<AugmentedAlgebra::Data>(AugmentedAlgebra::Data{
      std::move(ring), std::move(relations), std::move(augmentation), codim, assertions, std::move(ideal),
      std::move(notes), key.str(), std::make_shared<Memo>()});
  return AugmentedAlgebra(std::move(data));
}

CotangentData cotangent_invariants(const AugmentedAlgebra& a) {
  const std::size_t n = a.nvars(), m = a.relations().size();
  Matrix jac(n, m);
  for (std::size_t j = 0; j < m; ++j)
    for (std::size_t i = 0; i < n; ++i) jac(i, j) = a.relations()[j].derivative(i).evaluate(a.augmentation());
  if (n == 0) jac = Matrix(0, m);
  CotangentData out;
  out.cotangent = o_module_from_presentation(jac);
  out.phi = out.cotangent.torsion_part();
  out.fitt_c = fitting_ideal(out.cotangent, a.codim());
  out.jacobian = std::move(jac);
  return out;
}

SymbolicPowerResult symbolic_power_test(const AugmentedAlgebra& a, const Poly& f) {
  SymbolicPowerResult out;
  const TaylorDivision t = taylor_division(f, a.augmentation());
  out.in_p = t.remainder.is_zero();
  for (const auto& g : t.quotients) out.cotangent_class.push_back(g.evaluate(a.augmentation()));
  const CotangentData cot = cotangent_invariants(a);
  out.ord_class = order_ideal(cot.cotangent, out.cotangent_class);
  out.in_p2_symbolic = out.in_p && out.ord_class.is_zero();
  return out;
}

}  // namespace congru
