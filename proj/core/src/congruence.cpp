#include "congru/congruence.hpp"

#include <algorithm>
#include <sstream>

#include "congru/error.hpp"

namespace congru {

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::holds: return "holds";
    case Verdict::fails: return "fails";
    case Verdict::hypothesis_unverified: return "hypothesis_unverified";
  }
  return "?";
}

std::string to_string(CriterionMode m) {
  switch (m) {
    case CriterionMode::defect0: return "defect0";
    case CriterionMode::wld: return "wld";
    case CriterionMode::iso: return "iso";
    case CriterionMode::cotangent_iso: return "cotangent_iso";
  }
  return "?";
}

CriterionMode parse_criterion_mode(const std::string& name) {
  for (auto m : {CriterionMode::defect0, CriterionMode::wld, CriterionMode::iso, CriterionMode::cotangent_iso})
    if (to_string(m) == name) return m;
  throw Error(ErrorCode::InvalidArgument, "unknown criterion mode '" + name + "'");
}

namespace {

std::optional<std::uint64_t> colength(const IdealO& i) { return i.colength(); }

std::vector<PolyVec> columns_of(const PolyMatrix& m) {
  std::vector<PolyVec> out;
  for (std::size_t j = 0; j < m.cols(); ++j) out.push_back(m.column(j));
  return out;
}

std::vector<PolyVec> with_ideal(std::size_t rank, std::vector<PolyVec> cols, const Ideal& ideal) {
  for (const auto& f : ideal.basis().elements())
    for (std::size_t i = 0; i < rank; ++i) {
      PolyVec v(rank);
      v[i] = f;
      cols.push_back(std::move(v));
    }
  return cols;
}

bool is_zero_vec(const PolyVec& v) {
  return std::all_of(v.begin(), v.end(), [](const Poly& f) { return f.is_zero(); });
}

// I_r (x) P.
PolyMatrix block_diagonal(const PolyMatrix& p, std::size_t r) {
  PolyMatrix out(p.rows() * r, p.cols() * r);
  for (std::size_t b = 0; b < r; ++b)
    for (std::size_t i = 0; i < p.rows(); ++i)
      for (std::size_t j = 0; j < p.cols(); ++j) out(b * p.rows() + i, b * p.cols() + j) = p(i, j);
  return out;
}

// Hom(d, M): phi -> phi o d on flattened cochains, for d : F_{i+1} -> F_i.
PolyMatrix cochain_map(const PolyMatrix& d, std::size_t g) {
  PolyMatrix out(g * d.cols(), g * d.rows());
  for (std::size_t j = 0; j < d.cols(); ++j)
    for (std::size_t k = 0; k < d.rows(); ++k)
      if (!d(k, j).is_zero())
        for (std::size_t a = 0; a < g; ++a) out(j * g + a, k * g + a) = d(k, j);
  return out;
}

// A cochain setting: a complex of free modules over S = R / ideal resolving O
// (as a module over the source algebra), with augmentation `point` on S.
struct Context {
  const Ideal* ideal;
  std::vector<Scalar> point;
  std::shared_ptr<const FreeResolution> res;  // differentials over S
  Memo* memo;
  std::string key;
  Dvr dvr;

  std::size_t length() const { return res->length(); }
  std::size_t rank(std::size_t i) const { return res->rank(i); }
  const PolyMatrix& d(std::size_t i) const { return res->d(i); }
  Matrix eval(const PolyMatrix& m) const { return m.evaluate(point); }
};

struct ExtOData {
  Subquotient sq;
  std::size_t r = 0;
  std::vector<Scalar> top_coordinates(std::span<const Scalar> cocycle) const {
    return sq.coordinates(cocycle);
  }
};

struct ExtMData {
  std::size_t g = 0, r = 0;
  PolyMatrix zgens;  // g r x z cocycles
  FinOModule structure;
  std::shared_ptr<const LinearSystem> coords;  // on [zgens | coboundaries | relations]
  std::size_t z() const { return zgens.cols(); }
};

void require_length(const Context& ctx, std::size_t i) {
  if (ctx.length() < i + 1)
    throw Error(ErrorCode::ResolutionTooShort, "Ext^" + std::to_string(i) + " needs d_" + std::to_string(i + 1) +
                                                   " but the resolution has length " +
                                                   std::to_string(ctx.length()));
}

std::shared_ptr<const ExtOData> ext_o(const Context& ctx, std::size_t i) {
  require_length(ctx, i);
  return ctx.memo->get_or_compute<ExtOData>(ctx.key + "|extO|" + std::to_string(i), [&] {
    const std::size_t r = ctx.rank(i);
    Matrix cond = ctx.eval(ctx.d(i + 1)).transpose();
    Matrix bound = i == 0 ? Matrix(r, 0) : ctx.eval(ctx.d(i)).transpose();
    if (cond.rows() == 0) cond = Matrix(0, r);
    return ExtOData{subquotient(cond, bound, r, ctx.dvr), r};
  });
}

std::shared_ptr<const ExtMData> ext_m(const Context& ctx, const PolyMatrix& pres, std::size_t g,
                                      const std::string& module_key, std::size_t i) {
  require_length(ctx, i);
  return ctx.memo->get_or_compute<ExtMData>(ctx.key + "|extM|" + module_key + "|" + std::to_string(i), [&] {
    const Ideal& ideal = *ctx.ideal;
    const std::size_t r = ctx.rank(i), rn = ctx.rank(i + 1);
    ExtMData out;
    out.g = g;
    out.r = r;
    const std::size_t n = g * r;
    if (n == 0) {
      out.zgens = PolyMatrix(0, 0);
      return out;
    }
    // Cocycles: phi with phi o d_{i+1} zero in M^{r_{i+1}}.
    const PolyMatrix t = cochain_map(ctx.d(i + 1), g);
    PolyMatrix cond = PolyMatrix::hcat(t, block_diagonal(pres, rn));
    if (cond.rows() == 0) cond = PolyMatrix(0, n);
    std::vector<PolyVec> cocycles;
    if (cond.rows() == 0) {
      for (std::size_t k = 0; k < n; ++k) {
        PolyVec e(n);
        e[k] = Poly::constant(ctx.dvr.one());
        cocycles.push_back(std::move(e));
      }
    } else {
      const PolyMatrix syz = syzygy_module(cond, ideal);
      for (std::size_t j = 0; j < syz.cols(); ++j) {
        PolyVec v = syz.column(j);
        v.resize(n);
        cocycles.push_back(ideal.reduce(v));
      }
    }
    // Coboundaries and relations of M^{r}.
    PolyMatrix bound = block_diagonal(pres, r);
    if (i > 0) bound = PolyMatrix::hcat(cochain_map(ctx.d(i), g), bound);
    if (bound.rows() == 0) bound = PolyMatrix(n, 0);
    const Submodule bspan(n, with_ideal(n, columns_of(bound), ideal), ideal.limits());
    std::vector<PolyVec> kept;
    for (auto& v : cocycles) {
      if (is_zero_vec(v) || bspan.contains(v) || std::find(kept.begin(), kept.end(), v) != kept.end()) continue;
      kept.push_back(std::move(v));
    }
    out.zgens = PolyMatrix::from_columns(n, kept);
    const std::size_t z = kept.size();
    if (z == 0) return out;
    const PolyMatrix full = PolyMatrix::hcat(out.zgens, bound);
    out.coords = std::make_shared<const LinearSystem>(full, ideal, true);
    const PolyMatrix rel = out.coords->syzygies();
    Matrix lam(z, rel.cols());
    for (std::size_t j = 0; j < rel.cols(); ++j)
      for (std::size_t k = 0; k < z; ++k) lam(k, j) = rel(k, j).evaluate(ctx.point);
    out.structure = o_module_from_presentation(lam);
    return out;
  });
}

// Normal coordinates in Ext^i(O, M) of an arbitrary cocycle.
std::vector<Scalar> ext_m_coordinates(const Context& ctx, const ExtMData& e, const PolyVec& cocycle) {
  if (e.z() == 0) return {};
  const auto sol = e.coords->solve(cocycle);
  if (!sol) throw Error(ErrorCode::InternalInvariantViolation, "element is not a cocycle");
  std::vector<Scalar> a(e.z());
  for (std::size_t k = 0; k < e.z(); ++k) a[k] = (*sol)[k].evaluate(ctx.point);
  return e.structure.normal_coordinates(a);
}

struct TopClass {
  std::shared_ptr<const ExtOData> ext;
  std::size_t free_rank = 0;
  // theta of a cocycle of Hom(F_c, O): its coordinate on the rank-one free part.
  Scalar theta(std::span<const Scalar> cocycle) const {
    const auto coords = ext->top_coordinates(cocycle);
    return coords.back();
  }
};

TopClass top_class(const Context& ctx, std::size_t c) {
  TopClass t;
  t.ext = ext_o(ctx, c);
  t.free_rank = t.ext->sq.module.free_rank();
  return t;
}

// Theta: rows are functionals of tfree(M/pM), columns Ext^c(O, M) generators.
struct ThetaData {
  Matrix theta;  // mu x z
  std::size_t mu = 0;
  bool top_rank_one = false;
};

ThetaData theta_matrix(const Context& ctx, const FpModule& m, std::size_t c) {
  ThetaData out;
  const Matrix func = hom_to_O_generators(m);
  out.mu = func.rows();
  const TopClass top = top_class(ctx, c);
  const auto e = ext_m(ctx, m.presentation(), m.num_generators(), m.key(), c);
  out.theta = Matrix(out.mu, e->z());
  out.top_rank_one = top.free_rank == 1;
  if (!out.top_rank_one) return out;
  const std::size_t g = m.num_generators();
  for (std::size_t k = 0; k < e->z(); ++k) {
    const PolyVec zeta = e->zgens.column(k);
    std::vector<Scalar> lam(zeta.size());
    for (std::size_t q = 0; q < zeta.size(); ++q) lam[q] = zeta[q].evaluate(ctx.point);
    for (std::size_t j = 0; j < out.mu; ++j) {
      std::vector<Scalar> cochain(e->r, ctx.dvr.zero());
      for (std::size_t b = 0; b < e->r; ++b)
        for (std::size_t a = 0; a < g; ++a) cochain[b] += func(j, a) * lam[b * g + a];
      out.theta(j, k) = top.theta(cochain);
    }
  }
  return out;
}

IdealO ideal_of_entries(const Matrix& m) {
  IdealO out = IdealO::zero();
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out = out + IdealO::generated_by(m(i, j));
  return out;
}

std::size_t default_length(const AugmentedAlgebra& a, const CongruenceOptions& opt, std::size_t min_length) {
  return std::max<std::size_t>(opt.length.value_or(a.codim() + 2), min_length);
}

std::string options_key(const CongruenceOptions& opt, std::size_t len) {
  std::string k = to_string(opt.strategy) + "|" + std::to_string(len);
  return k;
}

Context context_for(const AugmentedAlgebra& a, const CongruenceOptions& opt, std::size_t min_length = 0) {
  auto res = resolution_for(a, opt, min_length);
  const std::size_t len = res->length();
  std::string key = "ctx|" + options_key(opt, len);
  if (opt.strategy == ResolutionStrategy::file) {
    for (const auto& d : opt.user_resolution) key += "|" + d.to_string(a.ring());
  }
  return Context{&a.ideal(), a.augmentation(), std::move(res), &a.memo(), key, a.dvr()};
}

// Complex for A pushed to B along a surjection; Hom_A(F, N) for B-modules N.
Context context_via(const AlgebraMap& phi, const CongruenceOptions& opt) {
  const AugmentedAlgebra& a = phi.source();
  const AugmentedAlgebra& b = phi.target();
  auto res = resolution_for(a, opt);
  const std::string key = "via|" + a.key() + "|" + phi.key() + "|" + options_key(opt, res->length());
  auto pushed = b.memo().get_or_compute<FreeResolution>(key + "|res", [&] {
    FreeResolution r = *res;
    for (auto& d : r.differentials) d = phi.apply(d);
    return r;
  });
  return Context{&b.ideal(), b.augmentation(), std::move(pushed), &b.memo(), key, b.dvr()};
}

IdealO eta_in(const Context& ctx, const FpModule& m, std::size_t c) {
  const ThetaData t = theta_matrix(ctx, m, c);
  if (!t.top_rank_one) return IdealO::zero();
  return ideal_of_entries(t.theta);
}

FinOModule psi_in(const Context& ctx, const FpModule& m, std::size_t c) {
  const ThetaData t = theta_matrix(ctx, m, c);
  if (!t.top_rank_one)
    throw Error(ErrorCode::InconsistentCodim, "tfree Ext^" + std::to_string(c) + "(O,O) does not have rank one");
  const FinOModule out = o_module_from_presentation(t.theta);
  if (!out.is_torsion())
    throw Error(ErrorCode::InternalInvariantViolation, "congruence module " + out.to_string() + " is not torsion");
  return out;
}

RegularityReport compute_regularity(const AugmentedAlgebra& a, const CongruenceOptions& opt) {
  RegularityReport out;
  const CotangentData cot = cotangent_invariants(a);
  out.cotangent_rank = cot.cotangent.free_rank();
  const std::size_t c = a.codim();
  if (out.cotangent_rank < c)
    throw Error(ErrorCode::InconsistentCodim, "declared codimension " + std::to_string(c) +
                                                  " exceeds the cotangent rank " +
                                                  std::to_string(out.cotangent_rank));
  const Context ctx = context_for(a, opt, c + 1);
  const TopClass top = top_class(ctx, c);
  out.ext_top_rank = top.free_rank;
  out.eta = top.free_rank == 1 ? eta_in(ctx, FpModule::free(a), c) : IdealO::zero();
  std::ostringstream ev;
  ev << "rank tfree(p/p^2) = " << out.cotangent_rank << ", declared c = " << c << ", rank tfree Ext^" << c
     << "(O,O) = " << out.ext_top_rank << ", eta(A) = " << out.eta.to_string();
  out.evidence = ev.str();
  if (out.cotangent_rank == c) {
    if (out.eta.is_zero())
      throw Error(ErrorCode::InconsistentCodim, "cotangent rank matches c but eta(A) = 0: " + out.evidence);
    out.regular_at_p = true;
    out.regular_global = out.eta.colength() == 0;
  } else if (!out.eta.is_zero()) {
    throw Error(ErrorCode::InconsistentCodim, "cotangent rank exceeds c but eta(A) != 0: " + out.evidence);
  }
  return out;
}

std::uint64_t binomial(std::size_t n, std::size_t k) {
  if (k > n) return 0;
  std::uint64_t r = 1;
  for (std::size_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace

// ---- public API

std::shared_ptr<const FreeResolution> resolution_for(const AugmentedAlgebra& a, const CongruenceOptions& opt,
                                                     std::size_t min_length) {
  const std::size_t len = default_length(a, opt, min_length);
  if (opt.strategy == ResolutionStrategy::file)
    return std::make_shared<const FreeResolution>(resolve_O(a, len, opt.strategy, opt.user_resolution));
  return a.memo().get_or_compute<FreeResolution>("resolution_ptr|" + options_key(opt, len),
                                                 [&] { return resolve_O(a, len, opt.strategy); });
}

RegularityReport regularity_at_lambda(const AugmentedAlgebra& a) { return regularity_at_lambda(a, {}); }

// The report does not depend on the resolution, so one memo entry serves
// every option set; the options only decide which complex gets built.
RegularityReport regularity_at_lambda(const AugmentedAlgebra& a, const CongruenceOptions& opt) {
  return *a.memo().get_or_compute<RegularityReport>("regularity", [&] { return compute_regularity(a, opt); });
}

ExtModule ext_module(const FpModule& m, std::size_t i, const CongruenceOptions& opt) {
  const Context ctx = context_for(m.algebra(), opt, i + 1);
  const auto e = ext_m(ctx, m.presentation(), m.num_generators(), m.key(), i);
  ExtModule out;
  out.degree = i;
  out.structure = e->structure;
  for (std::size_t k = 0; k < e->z(); ++k) out.representatives.push_back(e->zgens.column(k));
  out.resolution = ctx.res;
  return out;
}

ExtModule ext_module_O(const AugmentedAlgebra& a, std::size_t i, const CongruenceOptions& opt) {
  const Context ctx = context_for(a, opt, i + 1);
  const auto e = ext_o(ctx, i);
  ExtModule out;
  out.degree = i;
  out.structure = e->sq.module;
  for (std::size_t k = 0; k < e->sq.cycle_basis.cols(); ++k) {
    PolyVec v;
    for (const auto& s : e->sq.cycle_basis.column(k)) v.push_back(Poly::constant(s));
    out.representatives.push_back(std::move(v));
  }
  out.resolution = ctx.res;
  return out;
}

IdealO eta(const FpModule& m, const CongruenceOptions& opt) {
  const AugmentedAlgebra& a = m.algebra();
  if (!regularity_at_lambda(a, opt).regular_at_p) return IdealO::zero();
  return eta_in(context_for(a, opt), m, a.codim());
}

FinOModule psi(const FpModule& m, const CongruenceOptions& opt) {
  const AugmentedAlgebra& a = m.algebra();
  if (!regularity_at_lambda(a, opt).regular_at_p)
    throw Error(ErrorCode::InconsistentCodim, "A is not regular at lambda; the congruence module is not torsion");
  return psi_in(context_for(a, opt), m, a.codim());
}

FinOModule psi_direct_codim0(const FpModule& m) {
  const AugmentedAlgebra& a = m.algebra();
  if (a.codim() != 0) throw Error(ErrorCode::InvalidArgument, "direct congruence module needs codimension 0");
  const OStructure sa(FpModule::free(a));
  const Matrix ap = sa.annihilated_by(a.augmentation_ideal());
  std::vector<Poly> i_gens;
  for (std::size_t j = 0; j < ap.cols(); ++j) i_gens.push_back(sa.element(ap.column(j))[0]);
  const OStructure sm(m);
  const Matrix mp = sm.annihilated_by(a.augmentation_ideal());
  const Matrix mi = sm.annihilated_by(i_gens);
  return o_module_from_presentation(Matrix::hcat(Matrix::hcat(mp, mi), sm.relations()));
}

IdealO eta_direct_codim0(const FpModule& m) {
  const AugmentedAlgebra& a = m.algebra();
  if (a.codim() != 0) throw Error(ErrorCode::InvalidArgument, "direct congruence ideal needs codimension 0");
  const OStructure sm(m);
  const Matrix mp = sm.annihilated_by(a.augmentation_ideal());
  const Matrix func = hom_to_O_generators(m);
  IdealO out = IdealO::zero();
  for (std::size_t j = 0; j < mp.cols(); ++j) {
    const Matrix x = a.evaluate(PolyMatrix::from_columns(m.num_generators(), {sm.element(mp.column(j))}));
    out = out + ideal_of_entries(func * x);
  }
  return out;
}

KappaDefect kappa_defect(const FpModule& m, const CongruenceOptions& opt) {
  const AugmentedAlgebra& a = m.algebra();
  if (!regularity_at_lambda(a, opt).regular_at_p)
    throw Error(ErrorCode::InconsistentCodim, "kappa needs A regular at lambda");
  const std::size_t c = a.codim();
  const Context ctx = context_for(a, opt);
  const FpModule am = FpModule::free(a);
  const auto ea = ext_m(ctx, am.presentation(), 1, am.key(), c);
  const auto em = ext_m(ctx, m.presentation(), m.num_generators(), m.key(), c);
  const ReductionModP red = reduce_mod_p(m);
  const std::size_t mu = red.mu;
  if (ea->structure.free_rank() != 1 || em->structure.free_rank() != mu)
    throw Error(ErrorCode::InternalInvariantViolation, "Ext^c ranks disagree with the Betti number at p");

  // Free generator of Ext^c(O, A).
  const auto& wa = *ea->structure.witness();
  const std::size_t ta = ea->structure.torsion_exponents().size();
  PolyVec zeta0(ea->r);
  for (std::size_t k = 0; k < ea->z(); ++k) {
    const Scalar coef = wa.from_normal(k, ta);
    if (coef.is_zero()) continue;
    for (std::size_t b = 0; b < ea->r; ++b) zeta0[b] += ea->zgens(b, k) * Poly::constant(coef);
  }
  const auto& wm = *red.quotient.witness();
  const std::size_t tq = red.quotient.torsion_exponents().size();
  const std::size_t g = m.num_generators();
  const std::size_t tm = em->structure.torsion_exponents().size();
  Matrix kappa(mu, mu);
  for (std::size_t j = 0; j < mu; ++j) {
    PolyVec cocycle(g * ea->r);
    for (std::size_t b = 0; b < ea->r; ++b)
      for (std::size_t q = 0; q < g; ++q) {
        const Scalar coef = wm.from_normal(q, tq + j);
        if (!coef.is_zero()) cocycle[b * g + q] = zeta0[b] * Poly::constant(coef);
      }
    const auto coords = ext_m_coordinates(ctx, *em, ctx.ideal->reduce(cocycle));
    for (std::size_t i = 0; i < mu; ++i) kappa(i, j) = coords[tm + i];
  }
  if (rank_over_K(kappa) < mu)
    throw Error(ErrorCode::KappaNotInjective, "Kunneth map on torsion-free quotients is not injective");

  KappaDefect out;
  out.cokernel = o_module_from_presentation(kappa);
  out.coker_ann = out.cokernel.is_zero() ? IdealO::unit() : IdealO::pi_power(out.cokernel.max_exponent());
  const IdealO eta_a = eta_in(ctx, am, c);
  const IdealO eta_m = eta_in(ctx, m, c);
  out.diff_identity = eta_a == out.coker_ann * eta_m;
  const auto psi_a = psi_in(ctx, am, c).length();
  const auto psi_m = psi_in(ctx, m, c).length();
  out.sequence_identity = psi_a && psi_m && *out.cokernel.length() + *psi_m == mu * *psi_a;
  return out;
}

// ---- morphisms

AlgebraMap::AlgebraMap(AugmentedAlgebra source, AugmentedAlgebra target, std::vector<Poly> images)
    : source_(std::move(source)), target_(std::move(target)), images_(std::move(images)) {
  if (source_.dvr() != target_.dvr()) throw Error(ErrorCode::NotAMorphism, "algebras over different rings");
  if (images_.size() != source_.nvars())
    throw Error(ErrorCode::DimensionMismatch, "need one image per source variable");
  for (auto& f : images_) f = target_.ideal().reduce(f);
  if (source_.codim() != target_.codim())
    throw Error(ErrorCode::NotSameCodim, "source has codimension " + std::to_string(source_.codim()) +
                                             ", target " + std::to_string(target_.codim()));
  for (const auto& f : source_.relations())
    if (!target_.ideal().contains(f.substitute(images_)))
      throw Error(ErrorCode::NotAMorphism, "relation " + source_.ring().to_string(f) + " is not sent to zero");
  for (std::size_t i = 0; i < images_.size(); ++i)
    if (target_.evaluate(images_[i]) != source_.augmentation()[i])
      throw Error(ErrorCode::NotAMorphism,
                  "augmentations do not match at " + source_.ring().variables()[i]);
  for (std::size_t j = 0; j < target_.nvars(); ++j) {
    const Poly y = target_.ideal().reduce(target_.ring().variable(j));
    if (y.is_constant()) continue;
    const Monomial mj = Monomial::variable(j);
    const bool hit = std::any_of(images_.begin(), images_.end(), [&](const Poly& f) {
      bool linear = false;
      for (const auto& t : f.terms()) {
        if (t.m == mj && t.c.is_unit()) linear = true;
        else if (!t.m.is_one()) return false;
      }
      return linear;
    });
    if (!hit)
      throw Error(ErrorCode::NotASurjection, "variable " + target_.ring().variables()[j] + " of the target is not hit");
  }
}

AlgebraMap AlgebraMap::identity(const AugmentedAlgebra& a) {
  std::vector<Poly> im;
  for (std::size_t i = 0; i < a.nvars(); ++i) im.push_back(a.ring().variable(i));
  return AlgebraMap(a, a, std::move(im));
}

PolyMatrix AlgebraMap::apply(const PolyMatrix& m) const { return target_.ideal().reduce(m.substitute(images_)); }

std::string AlgebraMap::key() const {
  std::string k = target_.key() + "|";
  for (const auto& f : images_) k += target_.ring().to_string(f) + ";";
  return k;
}

// ---- criteria

namespace {

// depth M >= c + 1, from assertions or, when c = 0, from O-torsion-freeness.
bool depth_hypothesis(const FpModule& m, std::vector<std::string>& notes) {
  if (m.depth_hypothesis_asserted()) return true;
  const AugmentedAlgebra& a = m.algebra();
  const auto& as = a.assertions();
  if (m.presentation().cols() == 0 && a.relations().empty()) {
    notes.push_back("depth from regularity of the polynomial ring A");
    return true;
  }
  if (m.presentation().cols() == 0 && (as.cohen_macaulay.value_or(false) || as.complete_intersection.value_or(false))) {
    notes.push_back("depth from the asserted Cohen-Macaulay property of A");
    return true;
  }
  if (a.codim() != 0) return false;
  try {
    if (OStructure(m).module().is_torsion_free()) {
      notes.push_back("depth >= 1 verified: M is O-torsion-free");
      return true;
    }
  } catch (const Error& e) {
    if (e.code() != ErrorCode::NotFiniteOverBase) throw;
  }
  return false;
}

}  // namespace

CriterionResult numerical_criterion(const FpModule& m, CriterionMode mode, const CongruenceOptions& opt) {
  const AugmentedAlgebra& a = m.algebra();
  if (mode == CriterionMode::iso || mode == CriterionMode::cotangent_iso)
    throw Error(ErrorCode::InvalidArgument, "mode " + to_string(mode) + " needs a surjection A -> B");
  if (mode == CriterionMode::wld && a.codim() != 0)
    throw Error(ErrorCode::InvalidArgument, "the wld mode is the codimension-zero case");
  CriterionResult out;
  const RegularityReport reg = regularity_at_lambda(a, opt);
  if (!reg.regular_at_p) {
    out.verdict = Verdict::fails;
    out.notes.push_back("A is not regular at lambda");
    return out;
  }
  const CotangentData cot = cotangent_invariants(a);
  const IdealO e = eta(m, opt);
  const FinOModule p = psi(m, opt);
  const std::size_t mu = reduce_mod_p(m).mu;
  out.lhs = mu * cot.phi.torsion_length();
  out.rhs = *p.length();
  out.condition2 = cot.fitt_c == e;
  out.condition3 = out.lhs == out.rhs;
  out.ext_torsion_free = ext_module(m, a.codim(), opt).structure.is_torsion_free();
  if (!depth_hypothesis(m, out.notes)) {
    out.verdict = Verdict::hypothesis_unverified;
    out.notes.push_back("depth >= c + 1 not asserted");
    if (!*out.ext_torsion_free) out.notes.push_back("Ext^c(O,M) has torsion, so depth M <= c");
    return out;
  }
  if (!*out.ext_torsion_free) {
    out.verdict = Verdict::hypothesis_unverified;
    out.notes.push_back("asserted depth contradicted: Ext^c(O,M) has torsion");
    return out;
  }
  if (*out.condition2 && *out.condition3) {
    out.verdict = Verdict::holds;
  } else {
    out.verdict = Verdict::fails;
    if (*out.condition2 != *out.condition3) out.notes.push_back("conditions (2) and (3) disagree");
  }
  return out;
}

CriterionResult numerical_criterion(const AlgebraMap& phi, CriterionMode mode, const CongruenceOptions& opt) {
  if (mode != CriterionMode::iso && mode != CriterionMode::cotangent_iso)
    throw Error(ErrorCode::InvalidArgument, "mode " + to_string(mode) + " takes a module, not a surjection");
  const AugmentedAlgebra& a = phi.source();
  const AugmentedAlgebra& b = phi.target();
  CriterionResult out;
  out.lhs = cotangent_invariants(a).phi.torsion_length();
  bool asserted = false;
  if (mode == CriterionMode::iso) {
    if (!regularity_at_lambda(a, opt).regular_at_p) {
      out.verdict = Verdict::fails;
      out.notes.push_back("A is not regular at lambda");
      return out;
    }
    const Context ctx = context_via(phi, opt);
    out.rhs = *psi_in(ctx, FpModule::free(b), a.codim()).length();
    asserted = a.assertions().gorenstein.value_or(false) && b.assertions().cohen_macaulay.value_or(false);
    if (!asserted) out.notes.push_back("A Gorenstein and B Cohen-Macaulay not both asserted");
  } else {
    out.rhs = cotangent_invariants(b).phi.torsion_length();
    asserted = b.assertions().complete_intersection.value_or(false);
    if (!asserted) out.notes.push_back("B complete intersection not asserted");
  }
  out.condition3 = out.lhs == out.rhs;
  if (!asserted) out.verdict = Verdict::hypothesis_unverified;
  else out.verdict = *out.condition3 ? Verdict::holds : Verdict::fails;
  return out;
}

DeformationResult deformation_step(const FpModule& m, const Poly& f, const CongruenceOptions& opt) {
  const AugmentedAlgebra& a = m.algebra();
  if (a.codim() == 0) throw Error(ErrorCode::InvalidArgument, "deformation needs codimension at least 1");
  const SymbolicPowerResult sp = symbolic_power_test(a, f);
  if (!sp.in_p)
    throw Error(ErrorCode::NotInAugmentationIdeal, a.ring().to_string(f) + " is not in the augmentation ideal");
  if (sp.in_p2_symbolic)
    throw Error(ErrorCode::InSymbolicSquare, a.ring().to_string(f) + " lies in the symbolic square of p");

  // f must be a nonzerodivisor on M.
  const std::size_t g = m.num_generators();
  const Ideal& ideal = a.ideal();
  PolyMatrix fi(g, g);
  for (std::size_t i = 0; i < g; ++i) fi(i, i) = f;
  const PolyMatrix syz = syzygy_module(PolyMatrix::hcat(fi, m.presentation()), ideal);
  const Submodule rel(g, with_ideal(g, columns_of(m.presentation()), ideal), ideal.limits());
  for (std::size_t j = 0; j < syz.cols(); ++j) {
    PolyVec u = syz.column(j);
    u.resize(g);
    if (!rel.contains(u))
      throw Error(ErrorCode::ZeroDivisorSuspected, a.ring().to_string(f) + " annihilates a nonzero element of M");
  }

  std::vector<Poly> rels = a.relations();
  rels.push_back(f);
  AlgebraAssertions bs;
  bs.complete_intersection = a.assertions().complete_intersection;
  AugmentedAlgebra b = build_algebra(a.ring(), rels, a.augmentation(), a.codim() - 1, bs, a.limits());
  ModuleAssertions ns;
  if (m.assertions().depth && *m.assertions().depth > 0) ns.depth = *m.assertions().depth - 1;
  FpModule n(b, g, m.presentation(), ns);

  CongruenceOptions bopt = opt;
  if (bopt.strategy == ResolutionStrategy::file || bopt.strategy == ResolutionStrategy::koszul ||
      bopt.strategy == ResolutionStrategy::matrix_factorization)
    bopt.strategy = ResolutionStrategy::automatic;
  bopt.user_resolution.clear();
  bopt.length.reset();

  DeformationResult out{b, n, std::nullopt, std::nullopt, sp.ord_class, false, eta(m, opt), eta(n, bopt)};
  out.lhs = colength(out.eta_b);
  const auto ea = colength(out.eta_a), eo = colength(out.ord_f);
  if (ea && eo) out.rhs = *ea + *eo;
  out.exact_sequence_holds = out.lhs && out.rhs && *out.lhs == *out.rhs;
  return out;
}

SerreResult serre_check(const AugmentedAlgebra& a, bool with_products, const CongruenceOptions& opt) {
  const std::size_t c = a.codim();
  SerreResult out;
  const Context ctx = context_for(a, opt, c + 1);
  for (std::size_t i = 0; i + 1 <= ctx.length(); ++i) {
    out.ranks.push_back(ext_o(ctx, i)->sq.module.free_rank());
    out.expected.push_back(binomial(c, i));
  }
  out.hom_cotangent_rank = cotangent_invariants(a).cotangent.free_rank();
  bool ok = out.ranks == out.expected && (out.ranks.size() < 2 || out.ranks[1] == out.hom_cotangent_rank);

  if (with_products) {
    if (c == 0) {
      out.product_generates = true;
    } else {
      const auto e1 = ext_o(ctx, 1);
      const std::size_t t1 = e1->sq.module.torsion_exponents().size();
      const auto& w1 = *e1->sq.module.witness();
      const Ideal& ideal = *ctx.ideal;
      std::vector<std::shared_ptr<LinearSystem>> systems(c + 1);
      auto system = [&](std::size_t j) -> const LinearSystem& {
        if (!systems[j]) systems[j] = std::make_shared<LinearSystem>(ctx.d(j), ideal, true);
        return *systems[j];
      };
      // The syzygy complex is exact only after localizing, so a lift may need
      // a multiplier u with u(lambda) a unit: d x = u y, and the lift is x / u.
      auto local_solve = [&](std::size_t j, const PolyVec& y) -> std::pair<PolyVec, Poly> {
        if (auto t = system(j).solve(y)) return {std::move(*t), Poly::constant(ctx.dvr.one())};
        PolyMatrix aug = PolyMatrix::hcat(ctx.d(j), PolyMatrix::from_columns(y.size(), {y}));
        const PolyMatrix syz = syzygy_module(aug, ideal);
        const std::size_t last = aug.cols() - 1;
        for (std::size_t col = 0; col < syz.cols(); ++col) {
          const Poly u = syz(last, col);
          if (!u.evaluate(ctx.point).is_unit()) continue;
          PolyVec x = syz.column(col);
          x.resize(last);
          for (auto& e : x) e = -e;
          return {ideal.reduce(x), u};
        }
        throw Error(ErrorCode::ProductLiftFailed, "no lift in degree " + std::to_string(j));
      };
      // A lift is N diag(1/w): numerators and one unit-at-lambda denominator per column.
      struct Lift {
        PolyMatrix num;
        std::vector<Poly> den;
      };
      // Lift each degree-1 generator alpha to maps A_j : F_{j+1} -> F_j, j < c.
      auto lift = [&](const std::vector<Scalar>& alpha) {
        std::vector<Lift> maps;
        PolyMatrix a0(1, ctx.rank(1));
        for (std::size_t k = 0; k < alpha.size(); ++k) a0(0, k) = Poly::constant(alpha[k]);
        maps.push_back({a0, std::vector<Poly>(ctx.rank(1), Poly::constant(ctx.dvr.one()))});
        for (std::size_t j = 1; j < c; ++j) {
          // A_{j-1} d_{j+1} = N diag(1/w) d_{j+1}; scale row i of d by W / w_i.
          const Lift& prev = maps.back();
          Poly w = Poly::constant(ctx.dvr.one());
          for (const auto& d : prev.den) w *= d;
          PolyMatrix scaled = ctx.d(j + 1);
          for (std::size_t i = 0; i < scaled.rows(); ++i) {
            Poly f = Poly::constant(ctx.dvr.one());
            for (std::size_t k = 0; k < prev.den.size(); ++k)
              if (k != i) f *= prev.den[k];
            for (std::size_t col = 0; col < scaled.cols(); ++col) scaled(i, col) = scaled(i, col) * f;
          }
          const PolyMatrix rhs = ideal.reduce(prev.num * scaled);
          std::vector<PolyVec> cols;
          std::vector<Poly> den;
          for (std::size_t col = 0; col < rhs.cols(); ++col) {
            auto [t, u] = local_solve(j, rhs.column(col));
            cols.push_back(std::move(t));
            den.push_back(u * w);
          }
          maps.push_back({PolyMatrix::from_columns(ctx.rank(j), cols), std::move(den)});
        }
        return maps;
      };
      auto at_lambda = [&](const Lift& l) {
        Matrix m = ctx.eval(l.num);
        for (std::size_t col = 0; col < m.cols(); ++col) {
          const Scalar inv = ctx.dvr.one() / l.den[col].evaluate(ctx.point);
          for (std::size_t i = 0; i < m.rows(); ++i) m(i, col) *= inv;
        }
        return m;
      };
      std::vector<std::vector<Lift>> lifts;
      for (std::size_t k = 0; k < e1->sq.module.free_rank() && k < c; ++k) {
        std::vector<Scalar> alpha = e1->sq.cycle_basis.apply(w1.from_normal.column(t1 + k));
        lifts.push_back(lift(alpha));
      }
      if (lifts.size() < c) {
        out.product_generates = false;
      } else {
        // alpha_1 o A^2_1 o ... o A^c_{c-1} : F_c -> F_0, then lambda.
        Matrix comp = at_lambda(lifts[0][0]);
        for (std::size_t k = 1; k < c; ++k) comp = comp * at_lambda(lifts[k][k]);
        std::vector<Scalar> cochain = comp.row(0);
        const TopClass top = top_class(ctx, c);
        out.product_generates = top.free_rank == 1 && top.theta(cochain).is_unit();
      }
    }
    ok = ok && *out.product_generates;
  }
  out.verdict = ok ? Verdict::holds : Verdict::fails;
  return out;
}

InvarianceResult invariance_check(const AlgebraMap& phi, const FpModule& n, const CongruenceOptions& opt) {
  if (n.algebra().key() != phi.target().key())
    throw Error(ErrorCode::InvalidArgument, "module is not over the target algebra");
  InvarianceResult out;
  out.eta_target = eta(n, opt);
  CongruenceOptions aopt = opt;
  aopt.user_resolution.clear();
  if (aopt.strategy == ResolutionStrategy::file) aopt.strategy = ResolutionStrategy::automatic;
  if (regularity_at_lambda(phi.source()).regular_at_p) {
    CongruenceOptions src = aopt;
    try {
      out.eta_source = eta_in(context_via(phi, src), n, phi.source().codim());
    } catch (const Error& e) {
      if (e.code() != ErrorCode::StrategyInapplicable) throw;
      src.strategy = ResolutionStrategy::automatic;
      out.eta_source = eta_in(context_via(phi, src), n, phi.source().codim());
    }
  }
  out.verdict = out.eta_source == out.eta_target ? Verdict::holds : Verdict::fails;
  return out;
}

CongruenceReport congruence_report(const FpModule& m, const CongruenceOptions& opt) {
  const AugmentedAlgebra& a = m.algebra();
  CongruenceReport out;
  const CotangentData cot = cotangent_invariants(a);
  out.phi = cot.phi;
  out.fitt_c = cot.fitt_c;
  out.mu = reduce_mod_p(m).mu;
  const RegularityReport reg = regularity_at_lambda(a, opt);
  out.certification = resolution_for(a, opt)->status;
  if (!reg.regular_at_p) {
    out.warnings.push_back("A is not regular at lambda: eta is zero and psi is not torsion");
    out.eta = IdealO::zero();
    return out;
  }
  out.eta = eta(m, opt);
  out.psi = psi(m, opt);
  const CriterionResult crit = numerical_criterion(m, a.codim() == 0 ? CriterionMode::wld : CriterionMode::defect0, opt);
  out.verdicts[a.codim() == 0 ? "wld" : "defect0"] = crit.verdict;
  for (const auto& note : crit.notes) out.warnings.push_back(note);
  const auto fc = colength(out.fitt_c);
  out.verdicts["fitting_kills_psi"] = (!fc || *fc >= out.psi.max_exponent()) ? Verdict::holds : Verdict::fails;
  if (out.mu == 1) {
    const std::uint64_t e1 = out.psi.torsion_exponents().empty() ? 0 : out.psi.torsion_exponents().front();
    const auto el = colength(out.eta);
    // psi = O/eta when mu = 1; e1 = 0 means psi = 0 and eta = (1).
    const bool same = el && (out.psi.num_generators() == 0 ? *el == 0 : *el == e1);
    out.verdicts["eta_psi_e1"] = same ? Verdict::holds : Verdict::fails;
  }
  return out;
}

}  // namespace congru
