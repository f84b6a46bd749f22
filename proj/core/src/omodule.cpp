#include "congru/omodule.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "congru/error.hpp"

namespace congru {

namespace {

Scalar unit_one(const std::optional<Dvr>& dvr) { return dvr ? dvr->one() : Scalar(1); }

std::optional<Dvr> find_dvr(const Matrix& a) {
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      if (auto d = a(i, j).dvr()) return d;
  return std::nullopt;
}

Matrix identity_like(const std::optional<Dvr>& dvr, std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = unit_one(dvr);
  return m;
}

// Multiply by a power of pi so that every entry is integral. Kernels are
// unchanged by this.
Matrix make_integral(const Matrix& a) {
  auto v = a.min_valuation();
  if (!v || *v >= 0) return a;
  return a.scaled(find_dvr(a)->pi_power(-*v));
}

struct KernelData {
  Matrix basis;  // n x z
  Matrix left_inverse;  // z x n
};

KernelData kernel_data(const Matrix& a) {
  const std::size_t n = a.cols();
  if (a.rows() == 0 || a.is_zero()) {
    auto id = identity_like(find_dvr(a), n);
    return {id, id};
  }
  SmithForm s = smith_form(make_integral(a));
  const std::size_t r = s.rank();
  return {s.right.column_block(r, n - r), s.right_inverse.row_block(r, n - r)};
}

}  // namespace

// ---- Matrix

Matrix Matrix::identity(const Dvr& dvr, std::size_t n) { return identity_like(dvr, n); }

Matrix Matrix::from_rows(const std::vector<std::vector<Scalar>>& rows, std::size_t cols_if_empty) {
  const std::size_t c = rows.empty() ? cols_if_empty : rows.front().size();
  Matrix m(rows.size(), c);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != c) throw Error(ErrorCode::DimensionMismatch, "ragged matrix rows");
    for (std::size_t j = 0; j < c; ++j) m(i, j) = rows[i][j];
  }
  return m;
}

std::vector<Scalar> Matrix::row(std::size_t i) const {
  return {data_.begin() + static_cast<std::ptrdiff_t>(i * cols_),
          data_.begin() + static_cast<std::ptrdiff_t>((i + 1) * cols_)};
}

std::vector<Scalar> Matrix::column(std::size_t j) const {
  std::vector<Scalar> out(rows_);
  for (std::size_t i = 0; i < rows_; ++i) out[i] = (*this)(i, j);
  return out;
}

Matrix Matrix::transpose() const {
  Matrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

Matrix Matrix::column_block(std::size_t first, std::size_t count) const {
  if (first + count > cols_) throw Error(ErrorCode::DimensionMismatch, "column block out of range");
  Matrix m(rows_, count);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < count; ++j) m(i, j) = (*this)(i, first + j);
  return m;
}

Matrix Matrix::row_block(std::size_t first, std::size_t count) const {
  if (first + count > rows_) throw Error(ErrorCode::DimensionMismatch, "row block out of range");
  Matrix m(count, cols_);
  for (std::size_t i = 0; i < count; ++i)
    for (std::size_t j = 0; j < cols_; ++j) m(i, j) = (*this)(first + i, j);
  return m;
}

Matrix Matrix::hcat(const Matrix& a, const Matrix& b) {
  if (a.rows_ != b.rows_) throw Error(ErrorCode::DimensionMismatch, "hcat row counts differ");
  Matrix m(a.rows_, a.cols_ + b.cols_);
  for (std::size_t i = 0; i < a.rows_; ++i) {
    for (std::size_t j = 0; j < a.cols_; ++j) m(i, j) = a(i, j);
    for (std::size_t j = 0; j < b.cols_; ++j) m(i, a.cols_ + j) = b(i, j);
  }
  return m;
}

Matrix Matrix::vcat(const Matrix& a, const Matrix& b) {
  if (a.cols_ != b.cols_) throw Error(ErrorCode::DimensionMismatch, "vcat column counts differ");
  Matrix m(a.rows_ + b.rows_, a.cols_);
  std::copy(a.data_.begin(), a.data_.end(), m.data_.begin());
  std::copy(b.data_.begin(), b.data_.end(), m.data_.begin() + static_cast<std::ptrdiff_t>(a.data_.size()));
  return m;
}

bool Matrix::is_zero() const {
  return std::all_of(data_.begin(), data_.end(), [](const Scalar& s) { return s.is_zero(); });
}

bool Matrix::is_integral() const {
  return std::all_of(data_.begin(), data_.end(), [](const Scalar& s) { return s.is_integral(); });
}

std::optional<std::int64_t> Matrix::min_valuation() const {
  std::optional<std::int64_t> best;
  for (const auto& s : data_) {
    auto v = s.valuation();
    if (v && (!best || *v < *best)) best = v;
  }
  return best;
}

std::vector<Scalar> Matrix::apply(std::span<const Scalar> x) const {
  if (x.size() != cols_) throw Error(ErrorCode::DimensionMismatch, "vector length does not match matrix");
  std::vector<Scalar> y(rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j)
      if (!(*this)(i, j).is_zero() && !x[j].is_zero()) y[i] += (*this)(i, j) * x[j];
  return y;
}

Matrix operator*(const Matrix& a, const Matrix& b) {
  if (a.cols_ != b.rows_) throw Error(ErrorCode::DimensionMismatch, "matrix product shapes");
  Matrix m(a.rows_, b.cols_);
  for (std::size_t i = 0; i < a.rows_; ++i)
    for (std::size_t k = 0; k < a.cols_; ++k) {
      const Scalar& aik = a(i, k);
      if (aik.is_zero()) continue;
      for (std::size_t j = 0; j < b.cols_; ++j)
        if (!b(k, j).is_zero()) m(i, j) += aik * b(k, j);
    }
  return m;
}

Matrix operator+(const Matrix& a, const Matrix& b) {
  if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw Error(ErrorCode::DimensionMismatch, "matrix sum shapes");
  Matrix m = a;
  for (std::size_t i = 0; i < m.data_.size(); ++i) m.data_[i] += b.data_[i];
  return m;
}

Matrix operator-(const Matrix& a, const Matrix& b) {
  if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw Error(ErrorCode::DimensionMismatch, "matrix difference shapes");
  Matrix m = a;
  for (std::size_t i = 0; i < m.data_.size(); ++i) m.data_[i] -= b.data_[i];
  return m;
}

Matrix Matrix::scaled(const Scalar& c) const {
  Matrix m = *this;
  for (auto& s : m.data_) s *= c;
  return m;
}

bool operator==(const Matrix& a, const Matrix& b) {
  return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
}

std::string Matrix::to_string() const {
  std::ostringstream os;
  os << '[';
  for (std::size_t i = 0; i < rows_; ++i) {
    if (i) os << "; ";
    for (std::size_t j = 0; j < cols_; ++j) {
      if (j) os << ", ";
      os << (*this)(i, j);
    }
  }
  os << ']';
  return os.str();
}

// ---- Smith normal form

SmithForm smith_form(const Matrix& a, PivotRule rule) {
  if (!a.is_integral()) throw Error(ErrorCode::NonIntegralEntry, "matrix has an entry outside O");
  const std::size_t m = a.rows(), n = a.cols();
  const auto dvr = find_dvr(a);
  Matrix d = a;
  SmithForm out{identity_like(dvr, m), identity_like(dvr, m), identity_like(dvr, n), identity_like(dvr, n), {}};
  Matrix& u = out.left;
  Matrix& ui = out.left_inverse;
  Matrix& v = out.right;
  Matrix& vi = out.right_inverse;

  for (std::size_t k = 0; k < std::min(m, n); ++k) {
    std::optional<std::int64_t> best;
    std::size_t pr = 0, pc = 0;
    for (std::size_t i = k; i < m; ++i)
      for (std::size_t j = k; j < n; ++j) {
        auto val = d(i, j).valuation();
        if (!val) continue;
        const bool better = !best || *val < *best || (rule == PivotRule::highest_index && *val == *best);
        if (better) {
          best = val;
          pr = i;
          pc = j;
        }
      }
    if (!best) break;

    if (pr != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(d(pr, j), d(k, j));
      for (std::size_t j = 0; j < m; ++j) std::swap(u(pr, j), u(k, j));
      for (std::size_t i = 0; i < m; ++i) std::swap(ui(i, pr), ui(i, k));
    }
    if (pc != k) {
      for (std::size_t i = 0; i < m; ++i) std::swap(d(i, pc), d(i, k));
      for (std::size_t i = 0; i < n; ++i) std::swap(v(i, pc), v(i, k));
      for (std::size_t j = 0; j < n; ++j) std::swap(vi(pc, j), vi(k, j));
    }

    // Normalize the pivot to pi^v.
    const Scalar piv = d(k, k);
    const Scalar target = piv.dvr()->pi_power(*best);
    const Scalar s = target / piv;
    if (!s.is_one()) {
      const Scalar sinv = piv / target;
      for (std::size_t j = 0; j < n; ++j) d(k, j) *= s;
      for (std::size_t j = 0; j < m; ++j) u(k, j) *= s;
      for (std::size_t i = 0; i < m; ++i) ui(i, k) *= sinv;
    }
    const Scalar pk = d(k, k);

    for (std::size_t i = k + 1; i < m; ++i) {
      if (d(i, k).is_zero()) continue;
      const Scalar c = d(i, k) / pk;
      for (std::size_t j = k; j < n; ++j)
        if (!d(k, j).is_zero()) d(i, j) -= c * d(k, j);
      for (std::size_t j = 0; j < m; ++j)
        if (!u(k, j).is_zero()) u(i, j) -= c * u(k, j);
      for (std::size_t r = 0; r < m; ++r)
        if (!ui(r, i).is_zero()) ui(r, k) += c * ui(r, i);
    }
    for (std::size_t j = k + 1; j < n; ++j) {
      if (d(k, j).is_zero()) continue;
      const Scalar c = d(k, j) / pk;
      d(k, j) = Scalar();
      for (std::size_t i = 0; i < n; ++i)
        if (!v(i, k).is_zero()) v(i, j) -= c * v(i, k);
      for (std::size_t r = 0; r < n; ++r)
        if (!vi(j, r).is_zero()) vi(k, r) += c * vi(j, r);
    }
    out.diagonal.push_back(static_cast<std::uint64_t>(*best));
  }
  return out;
}

// ---- FinOModule

FinOModule::FinOModule(std::vector<std::uint64_t> torsion_exponents, std::size_t free_rank,
                       std::optional<PresentationWitness> witness)
    : torsion_(std::move(torsion_exponents)), free_rank_(free_rank), witness_(std::move(witness)) {
  if (witness_) {
    // Keep witness rows aligned with the sorted exponents.
    std::vector<std::size_t> order(torsion_.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return torsion_[a] < torsion_[b]; });
    const std::size_t t = torsion_.size();
    if (!std::is_sorted(torsion_.begin(), torsion_.end())) {
      Matrix to = witness_->to_normal, from = witness_->from_normal;
      for (std::size_t i = 0; i < t; ++i) {
        for (std::size_t j = 0; j < to.cols(); ++j) to(i, j) = witness_->to_normal(order[i], j);
        for (std::size_t r = 0; r < from.rows(); ++r) from(r, i) = witness_->from_normal(r, order[i]);
      }
      witness_ = PresentationWitness{std::move(to), std::move(from)};
    }
  }
  std::sort(torsion_.begin(), torsion_.end());
  if (std::find(torsion_.begin(), torsion_.end(), 0u) != torsion_.end())
    throw Error(ErrorCode::InvalidArgument, "torsion exponents must be positive");
}

std::optional<std::uint64_t> FinOModule::length() const {
  if (free_rank_ > 0) return std::nullopt;
  return torsion_length();
}

std::uint64_t FinOModule::torsion_length() const {
  return std::accumulate(torsion_.begin(), torsion_.end(), std::uint64_t{0});
}

std::vector<Scalar> FinOModule::normal_coordinates(std::span<const Scalar> x) const {
  if (!witness_) throw Error(ErrorCode::InvalidArgument, "module has no presentation witness");
  return witness_->to_normal.apply(x);
}

Matrix FinOModule::dual_basis() const {
  if (!witness_) throw Error(ErrorCode::InvalidArgument, "module has no presentation witness");
  return witness_->to_normal.row_block(torsion_.size(), free_rank_);
}

std::string FinOModule::to_string() const {
  if (is_zero()) return "0";
  std::string out;
  for (auto e : torsion_) {
    if (!out.empty()) out += " (+) ";
    out += e == 1 ? "O/pi" : "O/pi^" + std::to_string(e);
  }
  if (free_rank_ > 0) {
    if (!out.empty()) out += " (+) ";
    out += free_rank_ == 1 ? "O" : "O^" + std::to_string(free_rank_);
  }
  return out;
}

FinOModule o_module_from_presentation(const Matrix& relations, PivotRule rule) {
  const std::size_t g = relations.rows();
  SmithForm s = smith_form(relations, rule);
  std::vector<std::size_t> keep;
  std::vector<std::uint64_t> torsion;
  for (std::size_t i = 0; i < s.rank(); ++i)
    if (s.diagonal[i] > 0) {
      keep.push_back(i);
      torsion.push_back(s.diagonal[i]);
    }
  for (std::size_t i = s.rank(); i < g; ++i) keep.push_back(i);
  Matrix to(keep.size(), g), from(g, keep.size());
  for (std::size_t a = 0; a < keep.size(); ++a) {
    for (std::size_t j = 0; j < g; ++j) to(a, j) = s.left(keep[a], j);
    for (std::size_t r = 0; r < g; ++r) from(r, a) = s.left_inverse(r, keep[a]);
  }
  return FinOModule(std::move(torsion), g - s.rank(), PresentationWitness{std::move(to), std::move(from)});
}

IdealO fitting_ideal(const Matrix& presentation, std::size_t k) {
  const std::size_t n = presentation.rows();
  if (k >= n) return IdealO::unit();
  SmithForm s = smith_form(presentation);
  const std::size_t need = n - k;
  if (need > s.rank()) return IdealO::zero();
  return IdealO::pi_power(std::accumulate(s.diagonal.begin(), s.diagonal.begin() + static_cast<std::ptrdiff_t>(need),
                                          std::uint64_t{0}));
}

IdealO fitting_ideal(const FinOModule& module, std::size_t k) {
  const std::size_t n = module.num_generators();
  if (k >= n) return IdealO::unit();
  const std::size_t need = n - k;
  const auto& t = module.torsion_exponents();
  if (need > t.size()) return IdealO::zero();
  return IdealO::pi_power(std::accumulate(t.begin(), t.begin() + static_cast<std::ptrdiff_t>(need), std::uint64_t{0}));
}

IdealO order_ideal(const FinOModule& module, std::span<const Scalar> element) {
  auto c = module.normal_coordinates(element);
  IdealO out = IdealO::zero();
  for (std::size_t i = module.torsion_exponents().size(); i < c.size(); ++i)
    if (!c[i].is_zero()) out = out + IdealO::generated_by(c[i]);
  return out;
}

Matrix kernel_basis(const Matrix& a) { return kernel_data(a).basis; }

std::size_t rank_over_K(const Matrix& a) {
  if (a.is_zero()) return 0;
  return smith_form(make_integral(a)).rank();
}

std::optional<Matrix> inverse_over_K(const Matrix& a) {
  if (a.rows() != a.cols()) throw Error(ErrorCode::DimensionMismatch, "inverse of a non-square matrix");
  const std::size_t n = a.rows();
  if (n == 0) return Matrix();
  if (a.is_zero()) return std::nullopt;
  const Dvr dvr = *find_dvr(a);
  const std::int64_t shift = std::max<std::int64_t>(0, -*a.min_valuation());
  SmithForm s = smith_form(a.scaled(dvr.pi_power(shift)));
  if (s.rank() < n) return std::nullopt;
  Matrix dinv(n, n);
  for (std::size_t i = 0; i < n; ++i) dinv(i, i) = dvr.pi_power(shift - static_cast<std::int64_t>(s.diagonal[i]));
  return s.right * dinv * s.left;
}

Matrix span_basis_K(const Matrix& a) {
  auto v = a.min_valuation();
  if (!v || *v >= 0) return column_span_basis(a);
  const Dvr dvr = *find_dvr(a);
  return column_span_basis(a.scaled(dvr.pi_power(-*v))).scaled(dvr.pi_power(*v));
}

Matrix column_span_basis(const Matrix& a) {
  if (a.is_zero()) return Matrix(a.rows(), 0);
  SmithForm s = smith_form(a);
  Matrix out(a.rows(), s.rank());
  const Dvr dvr = *find_dvr(a);
  for (std::size_t j = 0; j < s.rank(); ++j) {
    const Scalar f = dvr.pi_power(static_cast<std::int64_t>(s.diagonal[j]));
    for (std::size_t i = 0; i < a.rows(); ++i) out(i, j) = s.left_inverse(i, j) * f;
  }
  return out;
}

std::optional<std::vector<Scalar>> solve_integral(const Matrix& a, std::span<const Scalar> b) {
  if (b.size() != a.rows()) throw Error(ErrorCode::DimensionMismatch, "right-hand side length");
  SmithForm s = smith_form(a);
  auto c = s.left.apply(b);
  std::vector<Scalar> y(a.cols());
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (i < s.rank()) {
      y[i] = c[i] / c[i].dvr().value_or(find_dvr(a).value()).pi_power(static_cast<std::int64_t>(s.diagonal[i]));
      if (!y[i].is_integral()) return std::nullopt;
    } else if (!c[i].is_zero()) {
      return std::nullopt;
    }
  }
  return s.right.apply(y);
}

// ---- Subquotients

std::vector<Scalar> Subquotient::coordinates(std::span<const Scalar> cycle) const {
  auto z = cycle_coordinates.apply(cycle);
  return module.normal_coordinates(z);
}

Subquotient subquotient(const Matrix& condition, const Matrix& boundaries, std::size_t ambient, const Dvr& dvr) {
  if (condition.cols() != ambient && condition.rows() > 0)
    throw Error(ErrorCode::DimensionMismatch, "condition matrix width");
  if (boundaries.rows() != ambient) throw Error(ErrorCode::DimensionMismatch, "boundary matrix height");
  KernelData k;
  if (condition.rows() == 0) {
    auto id = Matrix::identity(dvr, ambient);
    k = {id, id};
  } else {
    k = kernel_data(condition);
  }
  Matrix y = k.left_inverse * boundaries;
  if (!(k.basis * y == boundaries))
    throw Error(ErrorCode::InternalInvariantViolation, "boundaries do not lie in the cycles");
  return Subquotient{o_module_from_presentation(y), std::move(k.basis), std::move(k.left_inverse)};
}

}  // namespace congru
