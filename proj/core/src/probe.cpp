#include "congru/probe.hpp"

#include <algorithm>
#include <sstream>

namespace congru {

namespace {

std::string pi_pow(std::uint64_t e) { return e == 1 ? "pi" : "pi^" + std::to_string(e); }

}  // namespace

ProbeInstance random_instance(const Dvr& dvr, std::mt19937_64& rng, const ProbeOptions& opt) {
  auto uniform = [&](std::uint64_t lo, std::uint64_t hi) {
    return std::uniform_int_distribution<std::uint64_t>(lo, hi)(rng);
  };
  auto coin = [&](double p) { return std::bernoulli_distribution(p)(rng); };

  const std::size_t k = uniform(1, std::max<std::size_t>(1, opt.max_cut_vars));
  const std::size_t c = uniform(0, opt.max_free_vars);
  std::vector<std::string> vars;
  for (std::size_t i = 1; i <= k; ++i) vars.push_back("x" + std::to_string(i));
  for (std::size_t j = 1; j <= c; ++j) vars.push_back("y" + std::to_string(j));

  std::vector<std::string> rels;
  bool ci = true;
  std::vector<bool> nilpotent(k + 1, false);
  const bool twist = opt.allow_twist && c > 0 && coin(0.5);
  for (std::size_t i = 1; i <= k; ++i) {
    const std::string x = "x" + std::to_string(i);
    if (opt.allow_non_reduced && coin(0.2)) {
      rels.push_back(x + "^2");
      nilpotent[i] = true;
      continue;
    }
    std::string root = pi_pow(uniform(1, opt.max_exponent));
    if (twist && i == 1) root += " + y1";
    rels.push_back(x + "*(" + x + " - " + root + ")");
  }
  if (opt.allow_extra_relations) {
    for (std::size_t i = 1; i <= k; ++i)
      for (std::size_t j = i + 1; j <= k; ++j)
        if (coin(0.5)) {
          rels.push_back("x" + std::to_string(i) + "*x" + std::to_string(j));
          ci = false;
        }
    if (coin(0.3)) {
      const std::size_t i = uniform(1, k);
      rels.push_back(pi_pow(uniform(1, opt.max_exponent + 1)) + "*x" + std::to_string(i));
      nilpotent[i] = false;  // x_i vanishes after inverting pi
      ci = false;
    }
  }

  PolyRing ring(dvr, vars);
  std::vector<Poly> polys;
  for (const auto& r : rels) polys.push_back(ring.parse(r));
  AlgebraAssertions as;
  if (ci) {
    as.complete_intersection = true;
    as.cohen_macaulay = true;
  }
  AugmentedAlgebra a = build_algebra(ring, polys, std::vector<Scalar>(vars.size(), dvr.zero()),
                                     static_cast<unsigned>(c), as);

  std::ostringstream desc;
  desc << "vars=" << vars.size() << " c=" << c << " relations:";
  for (const auto& r : rels) desc << " " << r << ";";

  const bool reduced = std::none_of(nilpotent.begin(), nilpotent.end(), [](bool b) { return b; });
  ProbeInstance out{a, {}, desc.str(), ci, reduced};
  const std::size_t xi = uniform(1, k);
  const Poly x = ring.variable(xi - 1);
  out.modules.push_back({"A", FpModule::free(a)});
  out.modules.push_back({"A^2", FpModule::free(a, 2)});
  out.modules.push_back({"O", FpModule::residue(a)});
  out.modules.push_back({"A/(x" + std::to_string(xi) + ")", FpModule(a, 1, PolyMatrix::from_columns(1, {{x}}))});
  out.modules.push_back({"A (+) A/(x" + std::to_string(xi) + ")", direct_sum(out.modules[0].module, out.modules[3].module)});
  return out;
}

std::vector<FittingProbe> probe_fitting_question(const Dvr& dvr, std::size_t count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  ProbeOptions opt;
  opt.max_cut_vars = 3;
  std::vector<FittingProbe> out;
  for (std::size_t n = 0; n < count; ++n) {
    const ProbeInstance inst = random_instance(dvr, rng, opt);
    FittingProbe p;
    p.description = inst.description;
    p.fitt_c = cotangent_invariants(inst.algebra).fitt_c;
    p.eta = eta(FpModule::free(inst.algebra));
    p.contained = p.fitt_c.is_contained_in(p.eta);
    out.push_back(std::move(p));
  }
  return out;
}

}  // namespace congru
