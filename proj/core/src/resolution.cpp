#include "congru/resolution.hpp"

#include <algorithm>
#include <map>

#include "congru/error.hpp"

namespace congru {

std::string to_string(ResolutionStrategy s) {
  switch (s) {
    case ResolutionStrategy::automatic: return "auto";
    case ResolutionStrategy::koszul: return "koszul";
    case ResolutionStrategy::matrix_factorization: return "matrix_factorization";
    case ResolutionStrategy::shamash: return "shamash";
    case ResolutionStrategy::syzygy: return "syzygy";
    case ResolutionStrategy::file: return "file";
  }
  return "?";
}

std::string to_string(Certification c) {
  switch (c) {
    case Certification::certified: return "certified";
    case Certification::bounded_search: return "bounded_search";
    case Certification::user_supplied_verified: return "user_supplied_verified";
  }
  return "?";
}

ResolutionStrategy parse_strategy(const std::string& name) {
  for (auto s : {ResolutionStrategy::automatic, ResolutionStrategy::koszul, ResolutionStrategy::matrix_factorization,
                 ResolutionStrategy::shamash, ResolutionStrategy::syzygy, ResolutionStrategy::file})
    if (to_string(s) == name) return s;
  throw Error(ErrorCode::InvalidArgument, "unknown resolution strategy '" + name + "'");
}

namespace {

// Basis element e_S (x) t^(beta) of the Shamash complex.
struct ShamashBasis {
  std::vector<std::size_t> wedge;  // sorted variable indices
  std::vector<unsigned> divided;   // exponents of t_1..t_m
  bool operator<(const ShamashBasis& o) const { return std::tie(wedge, divided) < std::tie(o.wedge, o.divided); }
};

void subsets(std::size_t n, std::size_t k, std::size_t start, std::vector<std::size_t>& cur,
             std::vector<std::vector<std::size_t>>& out) {
  if (cur.size() == k) {
    out.push_back(cur);
    return;
  }
  for (std::size_t i = start; i < n; ++i) {
    cur.push_back(i);
    subsets(n, k, i + 1, cur, out);
    cur.pop_back();
  }
}

void compositions(std::size_t m, unsigned total, std::size_t pos, std::vector<unsigned>& cur,
                  std::vector<std::vector<unsigned>>& out) {
  if (pos + 1 == m) {
    cur[pos] = total;
    out.push_back(cur);
    return;
  }
  for (unsigned v = total + 1; v-- > 0;) {
    cur[pos] = v;
    compositions(m, total - v, pos + 1, cur, out);
  }
}

std::vector<ShamashBasis> shamash_basis(std::size_t n, std::size_t m, std::size_t degree) {
  std::vector<ShamashBasis> out;
  for (std::size_t j = 0; 2 * j <= degree; ++j) {
    const std::size_t k = degree - 2 * j;
    if (k > n) continue;
    if (m == 0 && j > 0) continue;
    std::vector<std::vector<std::size_t>> ws;
    std::vector<std::size_t> cur;
    subsets(n, k, 0, cur, ws);
    std::vector<std::vector<unsigned>> ds;
    if (m == 0) {
      ds.push_back({});
    } else {
      std::vector<unsigned> c(m, 0);
      compositions(m, static_cast<unsigned>(j), 0, c, ds);
    }
    for (const auto& d : ds)
      for (const auto& w : ws) out.push_back({w, d});
  }
  return out;
}

std::vector<PolyMatrix> shamash_complex(const AugmentedAlgebra& a, std::size_t length) {
  const std::size_t n = a.nvars(), m = a.relations().size();
  const auto lin = a.augmentation_ideal();
  std::vector<std::vector<Poly>> g;  // g[l][i]: f_l = sum_i g[l][i] (x_i - a_i)
  for (const auto& f : a.relations()) g.push_back(taylor_division(f, a.augmentation()).quotients);

  std::vector<std::vector<ShamashBasis>> basis;
  for (std::size_t i = 0; i <= length; ++i) basis.push_back(shamash_basis(n, m, i));

  std::vector<PolyMatrix> out;
  for (std::size_t i = 1; i <= length; ++i) {
    const auto& src = basis[i];
    const auto& dst = basis[i - 1];
    std::map<ShamashBasis, std::size_t> index;
    for (std::size_t r = 0; r < dst.size(); ++r) index[dst[r]] = r;
    PolyMatrix d(dst.size(), src.size());
    for (std::size_t col = 0; col < src.size(); ++col) {
      const auto& e = src[col];
      for (std::size_t p = 0; p < e.wedge.size(); ++p) {
        ShamashBasis t = e;
        t.wedge.erase(t.wedge.begin() + static_cast<std::ptrdiff_t>(p));
        Poly term = lin[e.wedge[p]];
        if (p % 2) term = -term;
        d(index.at(t), col) += term;
      }
      for (std::size_t l = 0; l < m; ++l) {
        if (e.divided[l] == 0) continue;
        for (std::size_t v = 0; v < n; ++v) {
          if (g[l][v].is_zero() || std::binary_search(e.wedge.begin(), e.wedge.end(), v)) continue;
          ShamashBasis t = e;
          t.divided[l] -= 1;
          const auto pos = std::lower_bound(t.wedge.begin(), t.wedge.end(), v);
          const std::size_t before = static_cast<std::size_t>(pos - t.wedge.begin());
          t.wedge.insert(pos, v);
          Poly term = g[l][v];
          if (before % 2) term = -term;
          d(index.at(t), col) += term;
        }
      }
    }
    out.push_back(a.ideal().reduce(d));
  }
  return out;
}

bool column_is_zero(const PolyVec& v) {
  return std::all_of(v.begin(), v.end(), [](const Poly& f) { return f.is_zero(); });
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

std::size_t column_weight(const PolyVec& v) {
  std::size_t w = 0;
  for (const auto& f : v) w += f.terms().size() * 64 + f.degree();
  return w;
}

// Drops generators that lie in the span of the others; keeps order stable.
PolyMatrix prune_generators(const PolyMatrix& s, const Ideal& ideal) {
  const std::size_t rows = s.rows();
  std::vector<PolyVec> cols;
  for (std::size_t j = 0; j < s.cols(); ++j) {
    PolyVec c = ideal.reduce(s.column(j));
    if (column_is_zero(c) || std::find(cols.begin(), cols.end(), c) != cols.end()) continue;
    cols.push_back(std::move(c));
  }
  std::stable_sort(cols.begin(), cols.end(),
                   [](const PolyVec& x, const PolyVec& y) { return column_weight(x) < column_weight(y); });
  // Heaviest first, so the light generators survive.
  std::vector<bool> keep(cols.size(), true);
  for (std::size_t j = cols.size(); j-- > 0;) {
    std::vector<PolyVec> others;
    for (std::size_t k = 0; k < cols.size(); ++k)
      if (k != j && keep[k]) others.push_back(cols[k]);
    const Submodule span(rows, with_ideal(rows, others, ideal), ideal.limits());
    if (span.contains(cols[j])) keep[j] = false;
  }
  std::vector<PolyVec> kept;
  for (std::size_t j = 0; j < cols.size(); ++j)
    if (keep[j]) kept.push_back(std::move(cols[j]));
  return PolyMatrix::from_columns(rows, kept);
}

// Rows of m whose residues mod pi are independent, scanned in `order`.
std::vector<std::size_t> unit_pivot_rows(const Matrix& m, const std::vector<std::size_t>& order) {
  std::vector<std::vector<Scalar>> basis;
  std::vector<std::size_t> pivots, out;
  for (std::size_t i : order) {
    std::vector<Scalar> r = m.row(i);
    for (std::size_t b = 0; b < basis.size(); ++b) {
      const Scalar f = r[pivots[b]] / basis[b][pivots[b]];
      if (f.is_zero()) continue;
      for (std::size_t k = 0; k < r.size(); ++k) r[k] -= f * basis[b][k];
    }
    const auto unit = std::find_if(r.begin(), r.end(), [](const Scalar& x) { return x.is_unit(); });
    if (unit == r.end()) continue;
    pivots.push_back(static_cast<std::size_t>(unit - r.begin()));
    basis.push_back(std::move(r));
    out.push_back(i);
  }
  return out;
}

std::vector<PolyVec> distinct_columns(const PolyMatrix& s, const Ideal& ideal) {
  std::vector<PolyVec> cols;
  for (std::size_t j = 0; j < s.cols(); ++j) {
    PolyVec c = ideal.reduce(s.column(j));
    if (column_is_zero(c) || std::find(cols.begin(), cols.end(), c) != cols.end()) continue;
    cols.push_back(std::move(c));
  }
  std::stable_sort(cols.begin(), cols.end(),
                   [](const PolyVec& x, const PolyVec& y) { return column_weight(x) < column_weight(y); });
  return cols;
}

// Nakayama at the augmentation point: with T generating the relations among
// the columns, N/mN has dimension cols - rank(T(lambda) mod pi), and the rows
// carrying a unit pivot name columns that the others generate locally. The
// result generates the same module after localizing, which is all Ext sees.
PolyMatrix minimize_locally(const PolyMatrix& s, const AugmentedAlgebra& a) {
  const Ideal& ideal = a.ideal();
  std::vector<PolyVec> cols = distinct_columns(s, ideal);
  const PolyMatrix m = PolyMatrix::from_columns(s.rows(), cols);
  if (cols.size() < 2) return m;
  const Matrix t = a.evaluate(syzygy_module(m, ideal));
  std::vector<std::size_t> order(cols.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = order.size() - 1 - i;  // heaviest first
  std::vector<bool> drop(cols.size(), false);
  for (std::size_t i : unit_pivot_rows(t, order)) drop[i] = true;
  std::vector<PolyVec> kept;
  for (std::size_t j = 0; j < cols.size(); ++j)
    if (!drop[j]) kept.push_back(std::move(cols[j]));
  return PolyMatrix::from_columns(s.rows(), kept);
}

std::vector<PolyMatrix> syzygy_complex(const AugmentedAlgebra& a, std::size_t length) {
  std::vector<PolyVec> first;
  for (const auto& g : a.augmentation_ideal()) first.push_back({g});
  std::vector<PolyMatrix> out{prune_generators(PolyMatrix::from_columns(1, first), a.ideal())};
  while (out.size() < length) {
    const PolyMatrix& prev = out.back();
    if (prev.cols() == 0) {
      out.push_back(PolyMatrix(0, 0));
      continue;
    }
    const PolyMatrix syz = syzygy_module(prev, a.ideal());
    // The last map is never resolved further, so minimality buys nothing there.
    out.push_back(out.size() + 1 < length ? minimize_locally(syz, a)
                                          : PolyMatrix::from_columns(syz.rows(), distinct_columns(syz, a.ideal())));
  }
  return out;
}

bool all_zero(const PolyMatrix& m) { return m.is_zero(); }

}  // namespace

std::vector<std::size_t> shamash_ranks(std::size_t n, std::size_t m, std::size_t length) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i <= length; ++i) out.push_back(shamash_basis(n, m, i).size());
  return out;
}

Certification verify_resolution(const FreeResolution& res, const AugmentedAlgebra& a) {
  const Ideal& ideal = a.ideal();
  if (res.length() == 0) throw Error(ErrorCode::VerificationFailed, "empty resolution");
  for (std::size_t i = 1; i <= res.length(); ++i) {
    const auto& d = res.d(i);
    if (d.rows() != res.rank(i - 1))
      throw Error(ErrorCode::VerificationFailed, "d_" + std::to_string(i) + " has the wrong number of rows");
  }
  const PolyMatrix& d1 = res.d(1);
  if (!a.evaluate(d1).is_zero())
    throw Error(ErrorCode::VerificationFailed, "degree 1: image of d_1 is not inside p");
  for (std::size_t i = 1; i < res.length(); ++i)
    if (!all_zero(ideal.reduce(res.d(i) * res.d(i + 1))))
      throw Error(ErrorCode::VerificationFailed, "degree " + std::to_string(i) + ": d_" + std::to_string(i) +
                                                     " d_" + std::to_string(i + 1) + " is not zero");
  try {
    const Submodule gen(1, with_ideal(1, [&] {
                          std::vector<PolyVec> c;
                          for (std::size_t j = 0; j < d1.cols(); ++j) c.push_back(d1.column(j));
                          return c;
                        }(), ideal), ideal.limits());
    for (const auto& g : a.augmentation_ideal())
      if (!gen.contains({g}))
        throw Error(ErrorCode::VerificationFailed, "degree 1: d_1 does not generate the augmentation ideal");
    if (res.strategy == ResolutionStrategy::syzygy) return Certification::certified;
    const std::size_t top = std::min<std::size_t>(a.codim() + 1, res.length() - 1);
    for (std::size_t i = 1; i <= top; ++i) {
      const auto& di = res.d(i);
      const auto& next = res.d(i + 1);
      if (di.cols() == 0) continue;
      const PolyMatrix syz = syzygy_module(di, ideal);
      std::vector<PolyVec> cols;
      for (std::size_t j = 0; j < next.cols(); ++j) cols.push_back(next.column(j));
      const Submodule image(di.cols(), with_ideal(di.cols(), cols, ideal), ideal.limits());
      for (std::size_t j = 0; j < syz.cols(); ++j)
        if (!image.contains(syz.column(j)))
          throw Error(ErrorCode::VerificationFailed, "degree " + std::to_string(i) + ": complex is not exact");
    }
  } catch (const Error& e) {
    if (e.code() != ErrorCode::DegreeBoundExceeded) throw;
    return Certification::bounded_search;
  }
  return res.strategy == ResolutionStrategy::file ? Certification::user_supplied_verified : Certification::certified;
}

FreeResolution resolve_O(const AugmentedAlgebra& a, std::size_t length, ResolutionStrategy strategy,
                         const std::vector<PolyMatrix>& user) {
  if (length == 0) throw Error(ErrorCode::InvalidArgument, "resolution length must be positive");
  const bool no_relations = a.ideal().basis().elements().empty();
  auto build = [&](ResolutionStrategy s) {
    FreeResolution r;
    r.strategy = s;
    switch (s) {
      case ResolutionStrategy::koszul:
        if (!no_relations) throw Error(ErrorCode::StrategyInapplicable, "Koszul strategy needs a polynomial ring");
        r.differentials = shamash_complex(a, length);
        break;
      case ResolutionStrategy::matrix_factorization:
        if (a.relations().size() != 1)
          throw Error(ErrorCode::StrategyInapplicable, "matrix factorization needs exactly one relation");
        r.differentials = shamash_complex(a, length);
        break;
      case ResolutionStrategy::shamash:
        r.differentials = shamash_complex(a, length);
        break;
      case ResolutionStrategy::syzygy:
        r.differentials = syzygy_complex(a, length);
        break;
      case ResolutionStrategy::file: {
        if (user.empty()) throw Error(ErrorCode::StrategyInapplicable, "no user-supplied differentials");
        for (const auto& d : user) r.differentials.push_back(a.ideal().reduce(d));
        break;
      }
      case ResolutionStrategy::automatic: break;
    }
    r.status = verify_resolution(r, a);
    if (r.status == Certification::bounded_search) r.search_bound = a.limits().max_degree;
    return r;
  };

  auto cached = [&](ResolutionStrategy s) {
    if (s == ResolutionStrategy::file) return build(s);
    const std::string key = "resolution|" + to_string(s) + "|" + std::to_string(length);
    return *a.memo().get_or_compute<FreeResolution>(key, [&] { return build(s); });
  };

  if (strategy != ResolutionStrategy::automatic) return cached(strategy);
  std::vector<ResolutionStrategy> order;
  if (no_relations) order.push_back(ResolutionStrategy::koszul);
  else if (a.relations().size() == 1) order.push_back(ResolutionStrategy::matrix_factorization);
  else if (a.assertions().complete_intersection.value_or(false)) order.push_back(ResolutionStrategy::shamash);
  order.push_back(ResolutionStrategy::syzygy);
  for (std::size_t k = 0; k + 1 < order.size(); ++k) {
    try {
      return cached(order[k]);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::VerificationFailed) throw;
    }
  }
  return cached(order.back());
}

}  // namespace congru
