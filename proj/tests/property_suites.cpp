#include "property_suites.hpp"

#include <algorithm>
#include <random>

#include "congru/congruence.hpp"
#include "congru/error.hpp"

namespace congru::props {

namespace {

std::uint64_t exponent_or(const IdealO& i, std::uint64_t inf) { return i.exponent().value_or(inf); }

std::size_t binom(std::size_t n, std::size_t k) {
  if (k > n) return 0;
  std::size_t r = 1;
  for (std::size_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

void eta_additive(const ProbeInstance& inst, Failures& f) {
  const auto& ms = inst.modules;
  for (std::size_t i = 0; i < ms.size(); ++i)
    for (std::size_t j = i; j < ms.size() && j < 4; ++j) {
      const FpModule sum = direct_sum(ms[i].module, ms[j].module);
      f.check(eta(sum) == eta(ms[i].module) + eta(ms[j].module), "eta(" + ms[i].name + " + " + ms[j].name + ")");
    }
}

void psi_torsion(const ProbeInstance& inst, Failures& f) {
  const IdealO fitt = cotangent_invariants(inst.algebra).fitt_c;
  for (const auto& [name, m] : inst.modules) {
    const FinOModule p = psi(m);
    f.check(p.is_torsion(), name + ": psi not torsion");
    f.check(exponent_or(fitt, UINT64_MAX) >= p.max_exponent(), name + ": Fitt_c does not kill psi " + p.to_string());
  }
}

void eta_psi_e1(const ProbeInstance& inst, Failures& f) {
  for (const auto& [name, m] : inst.modules) {
    if (reduce_mod_p(m).mu != 1) continue;
    const FinOModule p = psi(m);
    const auto& ex = p.torsion_exponents();
    const std::uint64_t e1 = ex.empty() ? 0 : *std::min_element(ex.begin(), ex.end());
    f.check(eta(m) == IdealO::pi_power(e1), name + ": eta vs psi " + p.to_string());
  }
}

void kappa(const ProbeInstance& inst, Failures& f) {
  for (const auto& [name, m] : inst.modules) {
    const KappaDefect k = kappa_defect(m);
    f.check(k.diff_identity, name + ": product identity");
    f.check(k.sequence_identity, name + ": kappa sequence");
  }
}

void serre_ranks(const ProbeInstance& inst, Failures& f) {
  const SerreResult s = serre_check(inst.algebra, true);
  const std::size_t c = inst.algebra.codim();
  for (std::size_t i = 0; i < s.ranks.size(); ++i)
    f.check(s.ranks[i] == binom(c, i), "rank in degree " + std::to_string(i));
  f.check(s.verdict == Verdict::holds, "serre verdict " + to_string(s.verdict));
}

void strategy_independence(const ProbeInstance& inst, Failures& f) {
  std::vector<ResolutionStrategy> strategies{ResolutionStrategy::syzygy, ResolutionStrategy::shamash};
  if (inst.algebra.relations().size() == 1) strategies.push_back(ResolutionStrategy::matrix_factorization);
  for (const auto& [name, m] : inst.modules) {
    const IdealO e = eta(m);
    const FinOModule p = psi(m);
    for (auto s : strategies) {
      CongruenceOptions o;
      o.strategy = s;
      f.check(eta(m, o) == e, name + ": eta under " + to_string(s));
      f.check(psi(m, o).torsion_exponents() == p.torsion_exponents(), name + ": psi under " + to_string(s));
    }
  }
}

void codim0_oracle(const ProbeInstance& inst, Failures& f) {
  for (const auto& [name, m] : inst.modules) {
    f.check(eta(m) == eta_direct_codim0(m), name + ": eta vs direct");
    f.check(psi(m).torsion_exponents() == psi_direct_codim0(m).torsion_exponents(), name + ": psi vs direct");
  }
}

void eta_iff_regular(const ProbeInstance& inst, Failures& f) {
  const RegularityReport r = regularity_at_lambda(inst.algebra);
  const std::size_t rank = cotangent_invariants(inst.algebra).cotangent.free_rank();
  f.check(!r.eta.is_zero() == (rank == inst.algebra.codim()), "eta nonzero vs cotangent rank");
  f.check(r.regular_at_p == inst.reduced, "regular_at_p vs construction");
}

ProbeOptions with(std::function<void(ProbeOptions&)> edit) {
  ProbeOptions o;
  edit(o);
  return o;
}

}  // namespace

const std::vector<PropertySuite>& property_suites() {
  static const std::vector<PropertySuite> suites{
      {"EtaAdditiveUnderDirectSum", 11, {}, eta_additive},
      {"PsiTorsionAndKilledByFitting", 12, {}, psi_torsion},
      {"EtaIsSmallestPsiExponentWhenCyclic", 13, {}, eta_psi_e1},
      {"KappaInjectiveAndProductIdentity", 14, {}, kappa},
      // Regular and hypersurface instances only.
      {"SerreRanks", 15, with([](ProbeOptions& o) {
         o.allow_extra_relations = false;
         o.max_free_vars = 2;
       }),
       serre_ranks},
      {"StrategyIndependence", 16, with([](ProbeOptions& o) {
         o.max_cut_vars = 1;
         o.allow_extra_relations = false;
       }),
       strategy_independence},
      {"CodimZeroOracle", 17, with([](ProbeOptions& o) {
         o.max_free_vars = 0;
         o.max_cut_vars = 3;
       }),
       codim0_oracle},
      {"EtaNonzeroIffRegular", 18, with([](ProbeOptions& o) { o.allow_non_reduced = true; }), eta_iff_regular},
  };
  return suites;
}

SuiteOutcome run_suite(const PropertySuite& s, std::size_t instances) {
  SuiteOutcome out;
  std::mt19937_64 rng(s.seed);
  for (std::size_t n = 0; n < instances; ++n) {
    const Dvr o = n % 3 == 2 ? Dvr::power_series(3) : Dvr::p_adic(n % 2 ? 5 : 3);
    const ProbeInstance inst = random_instance(o, rng, s.options);
    Failures f;
    try {
      s.check(inst, f);
    } catch (const Error& e) {
      f.messages.push_back(std::string("error: ") + e.what());
    }
    for (const auto& m : f.messages) out.failures.push_back(inst.description + ": " + m);
    ++out.instances;
  }
  return out;
}

}  // namespace congru::props
