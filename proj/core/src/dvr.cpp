#include "congru/dvr.hpp"

#include <algorithm>
#include <map>
#include <memory>
#include <mutex>
#include <sstream>
#include <utility>

#include "congru/error.hpp"

namespace congru {

namespace detail {

/// F_q with q = p^k <= 2^16. Element a in [0, q) encodes the polynomial whose
/// base-p digits are its coefficients in z, reduced modulo a fixed
/// irreducible polynomial of degree k. Multiplication goes through log/exp
/// tables built from a primitive element.
class FiniteField {
 public:
  FiniteField(std::uint32_t p, std::uint32_t k) : p_(p), k_(k) {
    q_ = 1;
    for (std::uint32_t i = 0; i < k; ++i) q_ *= p;
    modulus_ = find_irreducible();
    build_tables();
  }

  std::uint32_t p() const { return p_; }
  std::uint32_t q() const { return q_; }

  std::uint32_t add(std::uint32_t a, std::uint32_t b) const {
    if (k_ == 1) return (a + b) % p_;
    std::uint32_t out = 0, scale = 1;
    for (std::uint32_t i = 0; i < k_; ++i) {
      out += ((a % p_ + b % p_) % p_) * scale;
      a /= p_;
      b /= p_;
      scale *= p_;
    }
    return out;
  }
  std::uint32_t neg(std::uint32_t a) const {
    if (k_ == 1) return a == 0 ? 0 : p_ - a;
    std::uint32_t out = 0, scale = 1;
    for (std::uint32_t i = 0; i < k_; ++i) {
      out += ((p_ - a % p_) % p_) * scale;
      a /= p_;
      scale *= p_;
    }
    return out;
  }
  std::uint32_t sub(std::uint32_t a, std::uint32_t b) const { return add(a, neg(b)); }
  std::uint32_t mul(std::uint32_t a, std::uint32_t b) const {
    if (a == 0 || b == 0) return 0;
    return exp_[(log_[a] + log_[b]) % (q_ - 1)];
  }
  std::uint32_t inv(std::uint32_t a) const {
    if (a == 0) throw Error(ErrorCode::InvalidArgument, "inverse of zero in F_q");
    return exp_[(q_ - 1 - log_[a]) % (q_ - 1)];
  }
  std::uint32_t from_int(std::int64_t n) const {
    std::int64_t r = n % static_cast<std::int64_t>(p_);
    if (r < 0) r += p_;
    return static_cast<std::uint32_t>(r);
  }
  std::string element_string(std::uint32_t a) const {
    if (k_ == 1 || a < p_) return std::to_string(a);
    std::ostringstream os;
    os << "F" << q_ << "[" << a << "]";
    return os.str();
  }

 private:
  using Digits = std::vector<std::uint32_t>;

  Digits digits(std::uint32_t a) const {
    Digits d(k_);
    for (std::uint32_t i = 0; i < k_; ++i) {
      d[i] = a % p_;
      a /= p_;
    }
    return d;
  }
  std::uint32_t encode(const Digits& d) const {
    std::uint32_t out = 0;
    for (std::uint32_t i = k_; i-- > 0;) out = out * p_ + d[i];
    return out;
  }

  // Monic polynomials over F_p as dense coefficient vectors.
  static Digits poly_mod(Digits a, const Digits& m, std::uint32_t p) {
    const std::size_t dm = m.size() - 1;
    while (a.size() > dm) {
      const std::uint32_t lead = a.back();
      if (lead != 0) {
        const std::size_t shift = a.size() - 1 - dm;
        for (std::size_t i = 0; i <= dm; ++i)
          a[shift + i] = (a[shift + i] + (p - (lead * m[i]) % p)) % p;
      }
      a.pop_back();
    }
    return a;
  }

  Digits find_irreducible() const {
    if (k_ == 1) return {0, 1};
    auto monic_of_degree = [&](std::uint32_t deg, std::uint32_t code) {
      Digits f(deg + 1, 0);
      for (std::uint32_t i = 0; i < deg; ++i) {
        f[i] = code % p_;
        code /= p_;
      }
      f[deg] = 1;
      return f;
    };
    auto count = [&](std::uint32_t deg) {
      std::uint32_t c = 1;
      for (std::uint32_t i = 0; i < deg; ++i) c *= p_;
      return c;
    };
    for (std::uint32_t code = 0; code < count(k_); ++code) {
      Digits f = monic_of_degree(k_, code);
      if (f[0] == 0) continue;
      bool irreducible = true;
      for (std::uint32_t d = 1; d <= k_ / 2 && irreducible; ++d) {
        for (std::uint32_t c2 = 0; c2 < count(d); ++c2) {
          Digits r = poly_mod(f, monic_of_degree(d, c2), p_);
          if (std::all_of(r.begin(), r.end(), [](std::uint32_t x) { return x == 0; })) {
            irreducible = false;
            break;
          }
        }
      }
      if (irreducible) return f;
    }
    throw Error(ErrorCode::InternalInvariantViolation, "no irreducible polynomial found");
  }

  std::uint32_t slow_mul(std::uint32_t a, std::uint32_t b) const {
    const Digits da = digits(a), db = digits(b);
    Digits prod(2 * k_ - 1, 0);
    for (std::uint32_t i = 0; i < k_; ++i)
      for (std::uint32_t j = 0; j < k_; ++j) prod[i + j] = (prod[i + j] + da[i] * db[j]) % p_;
    Digits r = poly_mod(prod, modulus_, p_);
    r.resize(k_, 0);
    return encode(r);
  }

  void build_tables() {
    exp_.assign(q_, 0);
    log_.assign(q_, 0);
    for (std::uint32_t gen = (q_ == 2 ? 1 : 2); gen < q_; ++gen) {
      std::uint32_t x = 1, order = 0;
      do {
        x = slow_mul(x, gen);
        ++order;
      } while (x != 1 && order < q_);
      if (order == q_ - 1) {
        x = 1;
        for (std::uint32_t i = 0; i < q_ - 1; ++i) {
          exp_[i] = x;
          log_[x] = i;
          x = slow_mul(x, gen);
        }
        return;
      }
    }
    throw Error(ErrorCode::InternalInvariantViolation, "no primitive element found");
  }

  std::uint32_t p_, k_, q_;
  Digits modulus_;
  std::vector<std::uint32_t> exp_, log_;
};

struct DvrImpl {
  DvrKind kind;
  std::uint64_t p;
  std::uint64_t q;
  std::unique_ptr<FiniteField> field;
};

namespace {

const DvrImpl* intern(DvrKind kind, std::uint64_t p, std::uint64_t q, std::uint32_t k) {
  static std::mutex mutex;
  static std::map<std::pair<int, std::uint64_t>, std::unique_ptr<DvrImpl>> table;
  std::lock_guard<std::mutex> lock(mutex);
  auto key = std::make_pair(static_cast<int>(kind), q);
  auto it = table.find(key);
  if (it != table.end()) return it->second.get();
  auto impl = std::make_unique<DvrImpl>();
  impl->kind = kind;
  impl->p = p;
  impl->q = q;
  if (kind == DvrKind::power_series)
    impl->field = std::make_unique<FiniteField>(static_cast<std::uint32_t>(p), k);
  const DvrImpl* raw = impl.get();
  table.emplace(key, std::move(impl));
  return raw;
}

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  mpz_class z(static_cast<unsigned long>(n));
  return mpz_probab_prime_p(z.get_mpz_t(), 40) > 0;
}

// ---- dense polynomials over F_q ------------------------------------------

using FqPoly = std::vector<std::uint32_t>;

void trim(FqPoly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

FqPoly fq_add(const FiniteField& F, const FqPoly& a, const FqPoly& b) {
  FqPoly out(std::max(a.size(), b.size()), 0);
  for (std::size_t i = 0; i < out.size(); ++i) {
    const std::uint32_t x = i < a.size() ? a[i] : 0;
    const std::uint32_t y = i < b.size() ? b[i] : 0;
    out[i] = F.add(x, y);
  }
  trim(out);
  return out;
}

FqPoly fq_neg(const FiniteField& F, FqPoly a) {
  for (auto& c : a) c = F.neg(c);
  return a;
}

FqPoly fq_mul(const FiniteField& F, const FqPoly& a, const FqPoly& b) {
  if (a.empty() || b.empty()) return {};
  FqPoly out(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; j < b.size(); ++j)
      out[i + j] = F.add(out[i + j], F.mul(a[i], b[j]));
  }
  trim(out);
  return out;
}

FqPoly fq_scale(const FiniteField& F, FqPoly a, std::uint32_t c) {
  for (auto& x : a) x = F.mul(x, c);
  trim(a);
  return a;
}

std::pair<FqPoly, FqPoly> fq_divmod(const FiniteField& F, FqPoly a, const FqPoly& b) {
  if (b.empty()) throw Error(ErrorCode::InvalidArgument, "polynomial division by zero");
  FqPoly quot;
  if (a.size() >= b.size()) quot.assign(a.size() - b.size() + 1, 0);
  const std::uint32_t inv_lead = F.inv(b.back());
  while (a.size() >= b.size()) {
    const std::size_t shift = a.size() - b.size();
    const std::uint32_t c = F.mul(a.back(), inv_lead);
    quot[shift] = c;
    for (std::size_t i = 0; i < b.size(); ++i) a[shift + i] = F.sub(a[shift + i], F.mul(c, b[i]));
    trim(a);
  }
  trim(quot);
  return {quot, a};
}

FqPoly fq_gcd(const FiniteField& F, FqPoly a, FqPoly b) {
  while (!b.empty()) {
    FqPoly r = fq_divmod(F, a, b).second;
    a = std::move(b);
    b = std::move(r);
  }
  if (!a.empty()) a = fq_scale(F, a, F.inv(a.back()));
  return a;
}

std::size_t fq_low_order(const FqPoly& a) {
  std::size_t i = 0;
  while (i < a.size() && a[i] == 0) ++i;
  return i;
}

void fq_normalize(FqRational& r) {
  const FiniteField& F = *r.field;
  trim(r.num);
  trim(r.den);
  if (r.den.empty()) throw Error(ErrorCode::InvalidArgument, "rational function with zero denominator");
  if (r.num.empty()) {
    r.den = {1};
    return;
  }
  FqPoly g = fq_gcd(F, r.num, r.den);
  if (g.size() > 1) {
    r.num = fq_divmod(F, r.num, g).first;
    r.den = fq_divmod(F, r.den, g).first;
  }
  const std::uint32_t inv_lead = F.inv(r.den.back());
  r.num = fq_scale(F, r.num, inv_lead);
  r.den = fq_scale(F, r.den, inv_lead);
}

std::string fq_poly_string(const FiniteField& F, const FqPoly& a) {
  if (a.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    if (!first) os << " + ";
    first = false;
    const bool show_coef = (a[i] != 1 || i == 0);
    if (show_coef) os << F.element_string(a[i]);
    if (i > 0) os << (show_coef ? "*" : "") << "pi" << (i > 1 ? "^" + std::to_string(i) : "");
  }
  return os.str();
}

}  // namespace
}  // namespace detail

// ---- Dvr -----------------------------------------------------------------

Dvr Dvr::p_adic(std::uint64_t p) {
  if (!detail::is_prime(p))
    throw Error(ErrorCode::InvalidArgument, "p_adic ring needs a prime, got " + std::to_string(p));
  return Dvr(detail::intern(DvrKind::p_adic, p, p, 1));
}

Dvr Dvr::power_series(std::uint64_t q) {
  if (q < 2 || q > 65536)
    throw Error(ErrorCode::InvalidArgument, "power_series ring needs a prime power q <= 65536");
  std::uint64_t p = 0;
  for (std::uint64_t d = 2; d <= q; ++d) {
    if (q % d == 0) {
      p = d;
      break;
    }
  }
  std::uint64_t rest = q;
  std::uint32_t k = 0;
  while (rest % p == 0) {
    rest /= p;
    ++k;
  }
  if (rest != 1)
    throw Error(ErrorCode::InvalidArgument, std::to_string(q) + " is not a prime power");
  return Dvr(detail::intern(DvrKind::power_series, p, q, k));
}

DvrKind Dvr::kind() const { return impl_->kind; }
std::uint64_t Dvr::prime() const { return impl_->p; }
std::uint64_t Dvr::residue_order() const { return impl_->q; }

Scalar Dvr::zero() const { return from_int(0); }
Scalar Dvr::one() const { return from_int(1); }
Scalar Dvr::uniformizer() const { return pi_power(1); }

Scalar Dvr::from_int(std::int64_t n) const {
  Scalar s;
  s.dvr_ = impl_;
  if (impl_->kind == DvrKind::p_adic) {
    s.value_ = mpq_class(static_cast<long>(n));
  } else {
    FqRational r{impl_->field.get(), {impl_->field->from_int(n)}, {1}};
    detail::trim(r.num);
    s.value_ = std::move(r);
  }
  return s;
}

Scalar Dvr::from_integer(const mpz_class& n) const {
  if (impl_->kind == DvrKind::p_adic) {
    Scalar s;
    s.dvr_ = impl_;
    s.value_ = mpq_class(n);
    return s;
  }
  mpz_class r = n % static_cast<unsigned long>(impl_->p);
  if (r < 0) r += static_cast<unsigned long>(impl_->p);
  return from_int(r.get_si());
}

Scalar Dvr::pi_power(std::int64_t e) const {
  Scalar s;
  s.dvr_ = impl_;
  const std::uint64_t m = static_cast<std::uint64_t>(e < 0 ? -e : e);
  if (impl_->kind == DvrKind::p_adic) {
    mpz_class pe;
    mpz_ui_pow_ui(pe.get_mpz_t(), static_cast<unsigned long>(impl_->p), static_cast<unsigned long>(m));
    s.value_ = e >= 0 ? mpq_class(pe) : mpq_class(mpz_class(1), pe);
  } else {
    detail::FqPoly t(m + 1, 0);
    t[m] = 1;
    FqRational r{impl_->field.get(), {}, {}};
    if (e >= 0) {
      r.num = t;
      r.den = {1};
    } else {
      r.num = {1};
      r.den = t;
    }
    s.value_ = std::move(r);
  }
  return s;
}

std::string Dvr::describe() const {
  if (impl_->kind == DvrKind::p_adic) return "p_adic(" + std::to_string(impl_->p) + ")";
  return "power_series(" + std::to_string(impl_->q) + ")";
}

// ---- Scalar --------------------------------------------------------------

void Scalar::adopt(const detail::DvrImpl* other) {
  if (dvr_ || !other) return;
  dvr_ = other;
  if (other->kind == DvrKind::power_series) {
    const auto& q = std::get<mpq_class>(value_);
    const auto& F = *other->field;
    const mpz_class p(static_cast<unsigned long>(other->p));
    mpz_class num = q.get_num() % p, den = q.get_den() % p;
    if (den == 0) throw Error(ErrorCode::InvalidArgument, "constant " + q.get_str() + " is not in O");
    FqRational r{&F, {F.from_int(num.get_si())}, {1}};
    r.num[0] = F.mul(r.num[0], F.inv(F.from_int(den.get_si())));
    detail::trim(r.num);
    value_ = std::move(r);
  }
}

const Scalar& Scalar::bound(const Scalar& b, const detail::DvrImpl* d, Scalar& tmp) {
  if (b.dvr_ == d || !d) return b;
  if (b.dvr_ && b.dvr_ != d) throw Error(ErrorCode::InvalidArgument, "mixing elements of different rings");
  tmp = b;
  tmp.adopt(d);
  return tmp;
}

bool Scalar::is_zero() const {
  if (const auto* q = std::get_if<mpq_class>(&value_)) return sgn(*q) == 0;
  return std::get<FqRational>(value_).num.empty();
}

bool Scalar::is_one() const {
  if (const auto* q = std::get_if<mpq_class>(&value_)) return *q == 1;
  const auto& r = std::get<FqRational>(value_);
  return r.num.size() == 1 && r.num[0] == 1 && r.den.size() == 1;
}

std::optional<std::int64_t> Scalar::valuation() const {
  if (is_zero()) return std::nullopt;
  if (!dvr_) {
    const auto& q = std::get<mpq_class>(value_);
    if (abs(q.get_num()) == 1 && q.get_den() == 1) return 0;
    throw Error(ErrorCode::InvalidArgument, "valuation of a scalar not bound to a ring");
  }
  if (const auto* q = std::get_if<mpq_class>(&value_)) {
    mpz_class p(static_cast<unsigned long>(dvr_->p)), tmp;
    const auto vn = static_cast<std::int64_t>(mpz_remove(tmp.get_mpz_t(), q->get_num_mpz_t(), p.get_mpz_t()));
    const auto vd = static_cast<std::int64_t>(mpz_remove(tmp.get_mpz_t(), q->get_den_mpz_t(), p.get_mpz_t()));
    return vn - vd;
  }
  const auto& r = std::get<FqRational>(value_);
  return static_cast<std::int64_t>(detail::fq_low_order(r.num)) -
         static_cast<std::int64_t>(detail::fq_low_order(r.den));
}

bool Scalar::is_integral() const {
  auto v = valuation();
  return !v || *v >= 0;
}

bool Scalar::is_unit() const {
  auto v = valuation();
  return v && *v == 0;
}

Scalar Scalar::unit_part() const {
  auto v = valuation();
  if (!v || *v == 0) return *this;
  Scalar out = *this;
  if (auto* q = std::get_if<mpq_class>(&out.value_)) {
    mpz_class p(static_cast<unsigned long>(dvr_->p)), tmp;
    mpz_remove(tmp.get_mpz_t(), q->get_num_mpz_t(), p.get_mpz_t());
    mpz_class num = tmp;
    mpz_remove(tmp.get_mpz_t(), q->get_den_mpz_t(), p.get_mpz_t());
    *q = mpq_class(num, tmp);
    q->canonicalize();
    return out;
  }
  auto& r = std::get<FqRational>(out.value_);
  if (*v > 0)
    r.num.erase(r.num.begin(), r.num.begin() + *v);
  else
    r.den.erase(r.den.begin(), r.den.begin() + (-*v));
  return out;
}

Scalar Scalar::residue_rep(std::int64_t v) const {
  if (is_zero()) return *this;
  if (!is_integral()) throw Error(ErrorCode::NonIntegralEntry, "residue of a non-integral scalar");
  if (!dvr_) throw Error(ErrorCode::InvalidArgument, "residue of a scalar not bound to a ring");
  Scalar out = *this;
  if (v <= 0) return Dvr(dvr_).zero();
  if (auto* q = std::get_if<mpq_class>(&out.value_)) {
    mpz_class m, inv;
    mpz_ui_pow_ui(m.get_mpz_t(), static_cast<unsigned long>(dvr_->p), static_cast<unsigned long>(v));
    mpz_invert(inv.get_mpz_t(), q->get_den_mpz_t(), m.get_mpz_t());
    mpz_class r = (q->get_num() * inv) % m;
    if (r < 0) r += m;
    *q = mpq_class(r);
    return out;
  }
  auto& r = std::get<FqRational>(out.value_);
  const detail::FiniteField& F = *r.field;
  // Truncated power series num / den.
  const std::size_t n = static_cast<std::size_t>(v);
  detail::FqPoly series(n, 0);
  const std::uint32_t d0inv = F.inv(r.den[0]);
  for (std::size_t i = 0; i < n; ++i) {
    std::uint32_t acc = i < r.num.size() ? r.num[i] : 0;
    for (std::size_t j = 1; j <= i && j < r.den.size(); ++j) acc = F.sub(acc, F.mul(r.den[j], series[i - j]));
    series[i] = F.mul(acc, d0inv);
  }
  detail::trim(series);
  r.num = std::move(series);
  r.den = {1};
  return out;
}

bool Scalar::divides(const Scalar& other) const {
  if (other.is_zero()) return true;
  if (is_zero()) return false;
  return *valuation() <= *other.valuation();
}

std::optional<Dvr> Scalar::dvr() const {
  if (!dvr_) return std::nullopt;
  return Dvr(dvr_);
}

std::string Scalar::to_string() const {
  if (const auto* q = std::get_if<mpq_class>(&value_)) return q->get_str();
  const auto& r = std::get<FqRational>(value_);
  const auto& F = *r.field;
  if (r.den.size() == 1) return detail::fq_poly_string(F, r.num);
  return "(" + detail::fq_poly_string(F, r.num) + ")/(" + detail::fq_poly_string(F, r.den) + ")";
}

Scalar Scalar::operator-() const {
  Scalar out = *this;
  if (auto* q = std::get_if<mpq_class>(&out.value_)) {
    *q = -*q;
  } else {
    auto& r = std::get<FqRational>(out.value_);
    r.num = detail::fq_neg(*r.field, r.num);
  }
  return out;
}

Scalar& Scalar::operator+=(const Scalar& b) {
  const detail::DvrImpl* d = dvr_ ? dvr_ : b.dvr_;
  Scalar tmp;
  const Scalar& bb = bound(b, d, tmp);
  adopt(d);
  if (bb.is_zero()) return *this;
  if (is_zero()) {
    *this = bb;
    return *this;
  }
  if (auto* q = std::get_if<mpq_class>(&value_)) {
    *q += std::get<mpq_class>(bb.value_);
    return *this;
  }
  auto& r = std::get<FqRational>(value_);
  const auto& s = std::get<FqRational>(bb.value_);
  const auto& F = *r.field;
  if (r.den == s.den) {
    r.num = detail::fq_add(F, r.num, s.num);
  } else {
    r.num = detail::fq_add(F, detail::fq_mul(F, r.num, s.den), detail::fq_mul(F, s.num, r.den));
    r.den = detail::fq_mul(F, r.den, s.den);
  }
  detail::fq_normalize(r);
  return *this;
}

Scalar& Scalar::operator-=(const Scalar& b) { return *this += -b; }

Scalar& Scalar::operator*=(const Scalar& b) {
  const detail::DvrImpl* d = dvr_ ? dvr_ : b.dvr_;
  Scalar tmp;
  const Scalar& bb = bound(b, d, tmp);
  adopt(d);
  if (is_zero() || bb.is_zero()) {
    *this = Scalar();
    adopt(d);
    return *this;
  }
  if (auto* q = std::get_if<mpq_class>(&value_)) {
    *q *= std::get<mpq_class>(bb.value_);
    return *this;
  }
  auto& r = std::get<FqRational>(value_);
  const auto& s = std::get<FqRational>(bb.value_);
  r.num = detail::fq_mul(*r.field, r.num, s.num);
  r.den = detail::fq_mul(*r.field, r.den, s.den);
  detail::fq_normalize(r);
  return *this;
}

Scalar& Scalar::operator/=(const Scalar& b) {
  const detail::DvrImpl* d = dvr_ ? dvr_ : b.dvr_;
  Scalar tmp;
  const Scalar& bb = bound(b, d, tmp);
  adopt(d);
  if (bb.is_zero()) throw Error(ErrorCode::InvalidArgument, "division by zero");
  if (is_zero()) return *this;
  if (auto* q = std::get_if<mpq_class>(&value_)) {
    *q /= std::get<mpq_class>(bb.value_);
    return *this;
  }
  auto& r = std::get<FqRational>(value_);
  const auto& s = std::get<FqRational>(bb.value_);
  r.num = detail::fq_mul(*r.field, r.num, s.den);
  r.den = detail::fq_mul(*r.field, r.den, s.num);
  detail::fq_normalize(r);
  return *this;
}

bool operator==(const Scalar& a, const Scalar& b) {
  const bool za = a.is_zero(), zb = b.is_zero();
  if (za || zb) return za && zb;
  const detail::DvrImpl* d = a.dvr_ ? a.dvr_ : b.dvr_;
  Scalar ta, tb;
  const Scalar& aa = Scalar::bound(a, d, ta);
  const Scalar& bb = Scalar::bound(b, d, tb);
  if (const auto* q = std::get_if<mpq_class>(&aa.value_)) return *q == std::get<mpq_class>(bb.value_);
  const auto& r = std::get<FqRational>(aa.value_);
  const auto& s = std::get<FqRational>(bb.value_);
  return r.num == s.num && r.den == s.den;
}

// ---- IdealO --------------------------------------------------------------

IdealO IdealO::generated_by(const Scalar& x) {
  auto v = x.valuation();
  if (!v) return zero();
  if (*v < 0) throw Error(ErrorCode::NonIntegralEntry, "element " + x.to_string() + " is not in O");
  return pi_power(static_cast<std::uint64_t>(*v));
}

IdealO operator*(const IdealO& a, const IdealO& b) {
  if (a.is_zero() || b.is_zero()) return IdealO::zero();
  return IdealO::pi_power(*a.exponent_ + *b.exponent_);
}

IdealO operator+(const IdealO& a, const IdealO& b) {
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  return IdealO::pi_power(std::min(*a.exponent_, *b.exponent_));
}

bool IdealO::is_contained_in(const IdealO& b) const {
  if (is_zero()) return true;
  if (b.is_zero()) return false;
  return *exponent_ >= *b.exponent_;
}

std::string IdealO::to_string() const {
  if (!exponent_) return "(0)";
  if (*exponent_ == 0) return "(1)";
  if (*exponent_ == 1) return "(pi)";
  return "(pi^" + std::to_string(*exponent_) + ")";
}

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NonIntegralEntry: return "NonIntegralEntry";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::NotADirectSum: return "NotADirectSum";
    case ErrorCode::DegenerateLattice: return "DegenerateLattice";
    case ErrorCode::TorsionQuotient: return "TorsionQuotient";
    case ErrorCode::RankMismatch: return "RankMismatch";
    case ErrorCode::DegreeBoundExceeded: return "DegreeBoundExceeded";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::AugmentationNotWellDefined: return "AugmentationNotWellDefined";
    case ErrorCode::NonLocalAugmentation: return "NonLocalAugmentation";
    case ErrorCode::InconsistentCodim: return "InconsistentCodim";
    case ErrorCode::NotFiniteOverBase: return "NotFiniteOverBase";
    case ErrorCode::StrategyInapplicable: return "StrategyInapplicable";
    case ErrorCode::VerificationFailed: return "VerificationFailed";
    case ErrorCode::ResolutionTooShort: return "ResolutionTooShort";
    case ErrorCode::KappaNotInjective: return "KappaNotInjective";
    case ErrorCode::InSymbolicSquare: return "InSymbolicSquare";
    case ErrorCode::NotInAugmentationIdeal: return "NotInAugmentationIdeal";
    case ErrorCode::ZeroDivisorSuspected: return "ZeroDivisorSuspected";
    case ErrorCode::ProductLiftFailed: return "ProductLiftFailed";
    case ErrorCode::NotASurjection: return "NotASurjection";
    case ErrorCode::NotAMorphism: return "NotAMorphism";
    case ErrorCode::NotSameCodim: return "NotSameCodim";
    case ErrorCode::InternalInvariantViolation: return "InternalInvariantViolation";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

}  // namespace congru
