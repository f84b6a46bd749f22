#include "congru/fp_module.hpp"

#include <algorithm>
#include <deque>
#include <map>

#include "congru/error.hpp"

namespace congru {

FpModule::FpModule(AugmentedAlgebra algebra, std::size_t generators, const PolyMatrix& presentation,
                   ModuleAssertions assertions)
    : algebra_(std::move(algebra)), generators_(generators), assertions_(assertions) {
  if (presentation.rows() != generators)
    throw Error(ErrorCode::DimensionMismatch, "presentation has " + std::to_string(presentation.rows()) +
                                                  " rows for " + std::to_string(generators) + " generators");
  std::vector<PolyVec> cols;
  for (std::size_t j = 0; j < presentation.cols(); ++j) {
    PolyVec c = algebra_.ideal().reduce(presentation.column(j));
    for (const auto& f : c)
      if (!f.is_integral()) throw Error(ErrorCode::NonIntegralEntry, "presentation entry has coefficients outside O");
    if (std::any_of(c.begin(), c.end(), [](const Poly& f) { return !f.is_zero(); })) cols.push_back(std::move(c));
  }
  presentation_ = PolyMatrix::from_columns(generators, cols);
}

FpModule FpModule::free(const AugmentedAlgebra& a, std::size_t rank, ModuleAssertions assertions) {
  return FpModule(a, rank, PolyMatrix(rank, 0), assertions);
}

FpModule FpModule::residue(const AugmentedAlgebra& a) {
  const auto gens = a.augmentation_ideal();
  return FpModule(a, 1, PolyMatrix::from_columns(1, [&] {
                    std::vector<PolyVec> cols;
                    for (const auto& g : gens) cols.push_back({g});
                    return cols;
                  }()));
}

bool FpModule::depth_hypothesis_asserted() const {
  return assertions_.maximal_cohen_macaulay || (assertions_.depth && *assertions_.depth >= algebra_.codim() + 1);
}

std::string FpModule::key() const {
  return "g=" + std::to_string(generators_) + "|" + presentation_.to_string(algebra_.ring());
}

FpModule direct_sum(const FpModule& a, const FpModule& b) {
  if (a.algebra().key() != b.algebra().key())
    throw Error(ErrorCode::InvalidArgument, "direct sum of modules over different algebras");
  const std::size_t ga = a.num_generators(), gb = b.num_generators();
  const auto& pa = a.presentation();
  const auto& pb = b.presentation();
  PolyMatrix p(ga + gb, pa.cols() + pb.cols());
  for (std::size_t i = 0; i < ga; ++i)
    for (std::size_t j = 0; j < pa.cols(); ++j) p(i, j) = pa(i, j);
  for (std::size_t i = 0; i < gb; ++i)
    for (std::size_t j = 0; j < pb.cols(); ++j) p(ga + i, pa.cols() + j) = pb(i, j);
  ModuleAssertions s;
  s.maximal_cohen_macaulay = a.assertions().maximal_cohen_macaulay && b.assertions().maximal_cohen_macaulay;
  if (a.assertions().depth && b.assertions().depth) s.depth = std::min(*a.assertions().depth, *b.assertions().depth);
  return FpModule(a.algebra(), ga + gb, p, s);
}

ReductionModP reduce_mod_p(const FpModule& m) {
  ReductionModP out;
  out.quotient = o_module_from_presentation(m.algebra().evaluate(m.presentation()));
  out.mu = out.quotient.free_rank();
  return out;
}

Matrix hom_to_O_generators(const FpModule& m) {
  const ReductionModP r = reduce_mod_p(m);
  Matrix rows = r.quotient.dual_basis();
  const Matrix rel = m.algebra().evaluate(m.presentation());
  if (rel.cols() > 0 && rows.rows() > 0 && !(rows * rel).is_zero())
    throw Error(ErrorCode::InternalInvariantViolation, "functional does not vanish on the relations");
  return rows;
}

// ---- module-finite structure

OStructure::OStructure(const FpModule& m) : rank_(m.num_generators()), dvr_(m.algebra().dvr()) {
  const AugmentedAlgebra& a = m.algebra();
  const std::size_t n = a.nvars();
  std::vector<PolyVec> gens;
  for (std::size_t j = 0; j < m.presentation().cols(); ++j) gens.push_back(m.presentation().column(j));
  for (const auto& f : a.ideal().basis().elements())
    for (std::size_t i = 0; i < rank_; ++i) {
      PolyVec v(rank_);
      v[i] = f;
      gens.push_back(std::move(v));
    }
  submodule_ = std::make_shared<const Submodule>(rank_, gens, a.limits());
  const auto leads = submodule_->leads();

  for (std::size_t comp = 0; comp < rank_; ++comp)
    for (std::size_t var = 0; var < n; ++var) {
      const bool bounded = std::any_of(leads.begin(), leads.end(), [&](const LeadTerm& l) {
        return l.component == comp && l.valuation == 0 && l.m.degree() == l.m.e[var];
      });
      if (!bounded)
        throw Error(ErrorCode::NotFiniteOverBase, "module is not finite over O: powers of " +
                                                      a.ring().variables()[var] + " are independent in component " +
                                                      std::to_string(comp));
    }

  // Standard positions and the smallest lead valuation above each.
  std::vector<std::optional<std::int64_t>> vals;
  for (std::size_t comp = 0; comp < rank_; ++comp) {
    std::deque<Monomial> todo{Monomial{}};
    std::vector<Monomial> seen;
    while (!todo.empty()) {
      Monomial mono = todo.front();
      todo.pop_front();
      if (std::find(seen.begin(), seen.end(), mono) != seen.end()) continue;
      std::optional<std::int64_t> v;
      bool dead = false;
      for (const auto& l : leads) {
        if (l.component != comp || !l.m.divides(mono)) continue;
        if (l.valuation == 0) dead = true;
        if (!v || l.valuation < *v) v = l.valuation;
      }
      if (dead) continue;
      seen.push_back(mono);
      positions_.push_back({comp, mono});
      vals.push_back(v);
      for (std::size_t var = 0; var < n; ++var) todo.push_back(mono * Monomial::variable(var));
    }
  }
  std::sort(positions_.begin(), positions_.end(), [](const auto& x, const auto& y) {
    if (x.first != y.first) return x.first < y.first;
    return compare_degrevlex(x.second, y.second) < 0;
  });
  // Recompute valuations in the sorted order.
  vals.assign(positions_.size(), std::nullopt);
  for (std::size_t k = 0; k < positions_.size(); ++k)
    for (const auto& l : leads)
      if (l.component == positions_[k].first && l.m.divides(positions_[k].second) &&
          (!vals[k] || l.valuation < *vals[k]))
        vals[k] = l.valuation;

  std::vector<std::vector<Scalar>> rel_cols;
  for (std::size_t k = 0; k < positions_.size(); ++k) {
    if (!vals[k]) continue;
    PolyVec v(rank_);
    v[positions_[k].first] = Poly::monomial(positions_[k].second, dvr_.pi_power(*vals[k]));
    std::vector<Scalar> col = coordinates(v);
    for (auto& c : col) c = -c;
    col[k] += dvr_.pi_power(*vals[k]);
    rel_cols.push_back(std::move(col));
  }
  relations_ = Matrix(positions_.size(), rel_cols.size());
  for (std::size_t j = 0; j < rel_cols.size(); ++j)
    for (std::size_t i = 0; i < positions_.size(); ++i) relations_(i, j) = rel_cols[j][i];
  module_ = o_module_from_presentation(relations_);

  // Support check: x_i - a_i must act nilpotently on M / pi M.
  const std::size_t p = positions_.size();
  if (p == 0) return;
  Matrix target = relations_;
  target = Matrix::hcat(target, Matrix::identity(dvr_, p).scaled(dvr_.uniformizer()));
  for (const auto& g : a.augmentation_ideal()) {
    const Matrix x = multiplication(g);
    Matrix y = Matrix::identity(dvr_, p);
    for (std::size_t k = 0; k < p; ++k) y = x * y;
    for (std::size_t j = 0; j < p; ++j)
      if (!solve_integral(target, y.column(j)))
        throw Error(ErrorCode::NotFiniteOverBase,
                    "module is supported at points other than the augmentation; localize the presentation first");
  }
}

PolyVec OStructure::element(std::span<const Scalar> coords) const {
  PolyVec v(rank_);
  for (std::size_t k = 0; k < positions_.size(); ++k)
    if (!coords[k].is_zero()) v[positions_[k].first] += Poly::monomial(positions_[k].second, coords[k]);
  return v;
}

std::vector<Scalar> OStructure::coordinates(const PolyVec& v) const {
  const PolyVec r = submodule_->reduce(v);
  std::vector<Scalar> out(positions_.size(), dvr_.zero());
  for (std::size_t comp = 0; comp < rank_; ++comp)
    for (const auto& t : r[comp].terms()) {
      auto it = std::find_if(positions_.begin(), positions_.end(),
                             [&](const auto& pos) { return pos.first == comp && pos.second == t.m; });
      if (it == positions_.end())
        throw Error(ErrorCode::InternalInvariantViolation, "normal form leaves the standard positions");
      out[static_cast<std::size_t>(it - positions_.begin())] = t.c;
    }
  return out;
}

Matrix OStructure::multiplication(const Poly& f) const {
  const std::size_t p = positions_.size();
  Matrix out(p, p);
  for (std::size_t k = 0; k < p; ++k) {
    PolyVec v(rank_);
    v[positions_[k].first] = f.mul_term(positions_[k].second, dvr_.one());
    const auto c = coordinates(v);
    for (std::size_t i = 0; i < p; ++i) out(i, k) = c[i];
  }
  return out;
}

Matrix OStructure::annihilated_by(const std::vector<Poly>& j) const {
  const std::size_t p = positions_.size();
  if (j.empty() || p == 0) return Matrix::identity(dvr_, p);
  const std::size_t r = relations_.cols();
  Matrix big(p * j.size(), p + r * j.size());
  for (std::size_t b = 0; b < j.size(); ++b) {
    const Matrix x = multiplication(j[b]);
    for (std::size_t i = 0; i < p; ++i) {
      for (std::size_t k = 0; k < p; ++k) big(b * p + i, k) = x(i, k);
      for (std::size_t k = 0; k < r; ++k) big(b * p + i, p + b * r + k) = relations_(i, k);
    }
  }
  const Matrix ker = kernel_basis(big);
  return ker.row_block(0, p);
}

FinOModule OStructure::span_module(const Matrix& columns) const {
  const std::size_t p = positions_.size();
  if (p == 0) return FinOModule();
  const Matrix z = column_span_basis(Matrix::hcat(columns, relations_));
  Matrix pres(z.cols(), relations_.cols());
  for (std::size_t j = 0; j < relations_.cols(); ++j) {
    const auto x = solve_integral(z, relations_.column(j));
    if (!x) throw Error(ErrorCode::InternalInvariantViolation, "relation outside the spanned submodule");
    for (std::size_t i = 0; i < z.cols(); ++i) pres(i, j) = (*x)[i];
  }
  return o_module_from_presentation(pres);
}

FinOModule torsion_submodule(const FpModule& m, const std::vector<Poly>& j) {
  const OStructure s(m);
  return s.span_module(s.annihilated_by(j));
}

}  // namespace congru
