#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "congru/congruence.hpp"

namespace congru {

/// Grammar for random instances. Cut variables x1..xk each satisfy a monic
/// relation x(x - pi^e) (or x^2 when non-reduced instances are allowed); extra
/// relations are mixed monomials xi*xj and scaled pi^e*xi. Free variables
/// y1..yc set the codimension; a twist replaces x1(x1 - pi^e) by
/// x1(x1 - pi^e - y1). Augmentation is zero.
struct ProbeOptions {
  std::size_t max_cut_vars = 2;
  std::size_t max_free_vars = 1;
  std::uint64_t max_exponent = 3;
  bool allow_extra_relations = true;
  bool allow_non_reduced = false;
  bool allow_twist = true;
};

struct NamedModule {
  std::string name;
  FpModule module;
};

struct ProbeInstance {
  AugmentedAlgebra algebra;
  std::vector<NamedModule> modules;  // A, A^2, O, A/(x1), ...
  std::string description;
  bool complete_intersection = false;
  bool reduced = true;  // A[1/pi] reduced at lambda
};

ProbeInstance random_instance(const Dvr& dvr, std::mt19937_64& rng, const ProbeOptions& opt = {});

/// One probe of the containment Fitt_c(p/p^2) in eta(A).
struct FittingProbe {
  std::string description;
  IdealO fitt_c;
  IdealO eta;
  bool contained = true;
};

std::vector<FittingProbe> probe_fitting_question(const Dvr& dvr, std::size_t count, std::uint64_t seed);

}  // namespace congru
