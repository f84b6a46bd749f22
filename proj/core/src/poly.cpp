#include "congru/poly.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <mutex>
#include <shared_mutex>
#include <sstream>

#include "congru/error.hpp"

namespace congru {

// ---- Monomial

Monomial Monomial::variable(std::size_t i, unsigned power) {
  if (i >= kMaxVars) throw Error(ErrorCode::InvalidArgument, "variable index out of range");
  if (power > 255) throw Error(ErrorCode::DegreeBoundExceeded, "exponent too large");
  Monomial m;
  m.e[i] = static_cast<std::uint8_t>(power);
  return m;
}

unsigned Monomial::degree() const {
  unsigned d = 0;
  for (auto x : e) d += x;
  return d;
}

bool Monomial::is_one() const {
  return std::all_of(e.begin(), e.end(), [](auto x) { return x == 0; });
}

bool Monomial::divides(const Monomial& o) const {
  for (std::size_t i = 0; i < kMaxVars; ++i)
    if (e[i] > o.e[i]) return false;
  return true;
}

bool Monomial::coprime(const Monomial& o) const {
  for (std::size_t i = 0; i < kMaxVars; ++i)
    if (e[i] && o.e[i]) return false;
  return true;
}

Monomial Monomial::operator*(const Monomial& o) const {
  Monomial m;
  for (std::size_t i = 0; i < kMaxVars; ++i) {
    const unsigned s = unsigned{e[i]} + o.e[i];
    if (s > 255) throw Error(ErrorCode::DegreeBoundExceeded, "exponent overflow");
    m.e[i] = static_cast<std::uint8_t>(s);
  }
  return m;
}

Monomial Monomial::operator/(const Monomial& o) const {
  Monomial m;
  for (std::size_t i = 0; i < kMaxVars; ++i) m.e[i] = static_cast<std::uint8_t>(e[i] - o.e[i]);
  return m;
}

Monomial Monomial::lcm(const Monomial& a, const Monomial& b) {
  Monomial m;
  for (std::size_t i = 0; i < kMaxVars; ++i) m.e[i] = std::max(a.e[i], b.e[i]);
  return m;
}

namespace {
int revlex_tie(const Monomial& a, const Monomial& b) {
  for (std::size_t i = kMaxVars; i-- > 0;)
    if (a.e[i] != b.e[i]) return a.e[i] < b.e[i] ? 1 : -1;
  return 0;
}
}  // namespace

int compare_degrevlex(const Monomial& a, const Monomial& b) {
  const unsigned da = a.degree(), db = b.degree();
  if (da != db) return da > db ? 1 : -1;
  return revlex_tie(a, b);
}

int compare_local(const Monomial& a, const Monomial& b) {
  const unsigned da = a.degree(), db = b.degree();
  if (da != db) return da < db ? 1 : -1;
  return revlex_tie(a, b);
}

// ---- Poly

namespace {
bool term_greater(const Term& a, const Term& b) { return compare_degrevlex(a.m, b.m) > 0; }

std::vector<Term> merge_terms(const std::vector<Term>& a, const std::vector<Term>& b, bool subtract) {
  std::vector<Term> out;
  out.reserve(a.size() + b.size());
  std::size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    int c = i == a.size() ? -1 : j == b.size() ? 1 : compare_degrevlex(a[i].m, b[j].m);
    if (c > 0) {
      out.push_back(a[i++]);
    } else if (c < 0) {
      out.push_back(subtract ? Term{b[j].m, -b[j].c} : b[j]);
      ++j;
    } else {
      Scalar s = subtract ? a[i].c - b[j].c : a[i].c + b[j].c;
      if (!s.is_zero()) out.push_back({a[i].m, std::move(s)});
      ++i;
      ++j;
    }
  }
  return out;
}
}  // namespace

Poly Poly::constant(const Scalar& c) { return monomial(Monomial{}, c); }

Poly Poly::monomial(const Monomial& m, const Scalar& c) {
  Poly p;
  if (!c.is_zero()) p.terms_.push_back({m, c});
  return p;
}

Poly Poly::from_terms(std::vector<Term> terms) {
  std::stable_sort(terms.begin(), terms.end(), term_greater);
  Poly p;
  for (auto& t : terms) {
    if (!p.terms_.empty() && p.terms_.back().m == t.m) {
      p.terms_.back().c += t.c;
      if (p.terms_.back().c.is_zero()) p.terms_.pop_back();
    } else if (!t.c.is_zero()) {
      p.terms_.push_back(std::move(t));
    }
  }
  return p;
}

bool Poly::is_constant() const { return terms_.empty() || (terms_.size() == 1 && terms_[0].m.is_one()); }

Scalar Poly::constant_term() const {
  if (!terms_.empty() && terms_.back().m.is_one()) return terms_.back().c;
  return Scalar();
}

Scalar Poly::coefficient(const Monomial& m) const {
  for (const auto& t : terms_)
    if (t.m == m) return t.c;
  return Scalar();
}

const Term& Poly::local_lead() const {
  const Term* best = &terms_.front();
  for (const auto& t : terms_)
    if (compare_local(t.m, best->m) > 0) best = &t;
  return *best;
}

unsigned Poly::degree() const { return terms_.empty() ? 0 : terms_.front().m.degree(); }

std::optional<std::int64_t> Poly::min_valuation() const {
  std::optional<std::int64_t> best;
  for (const auto& t : terms_) {
    auto v = t.c.valuation();
    if (v && (!best || *v < *best)) best = v;
  }
  return best;
}

bool Poly::is_integral() const {
  return std::all_of(terms_.begin(), terms_.end(), [](const Term& t) { return t.c.is_integral(); });
}

Scalar Poly::evaluate(std::span<const Scalar> point) const {
  Scalar out;
  for (const auto& t : terms_) {
    Scalar v = t.c;
    for (std::size_t i = 0; i < kMaxVars; ++i) {
      if (!t.m.e[i]) continue;
      if (i >= point.size()) throw Error(ErrorCode::DimensionMismatch, "evaluation point too short");
      for (unsigned k = 0; k < t.m.e[i]; ++k) v *= point[i];
    }
    out += v;
  }
  return out;
}

Poly Poly::derivative(std::size_t var) const {
  std::vector<Term> out;
  for (const auto& t : terms_) {
    if (!t.m.e[var]) continue;
    Monomial m = t.m;
    const long k = m.e[var]--;
    out.push_back({m, t.c * Scalar(k)});
  }
  return from_terms(std::move(out));
}

Poly Poly::substitute(std::span<const Poly> images) const {
  Poly out;
  for (const auto& t : terms_) {
    Poly v = constant(t.c);
    for (std::size_t i = 0; i < kMaxVars; ++i) {
      if (!t.m.e[i]) continue;
      if (i >= images.size()) throw Error(ErrorCode::DimensionMismatch, "substitution list too short");
      for (unsigned k = 0; k < t.m.e[i]; ++k) v *= images[i];
    }
    out += v;
  }
  return out;
}

Poly Poly::mul_term(const Monomial& m, const Scalar& c) const {
  Poly p;
  if (c.is_zero()) return p;
  p.terms_.reserve(terms_.size());
  for (const auto& t : terms_) p.terms_.push_back({t.m * m, t.c * c});
  return p;
}

Poly Poly::operator-() const {
  Poly p = *this;
  for (auto& t : p.terms_) t.c = -t.c;
  return p;
}

Poly& Poly::operator+=(const Poly& b) {
  if (b.is_zero()) return *this;
  terms_ = merge_terms(terms_, b.terms_, false);
  return *this;
}

Poly& Poly::operator-=(const Poly& b) {
  if (b.is_zero()) return *this;
  terms_ = merge_terms(terms_, b.terms_, true);
  return *this;
}

Poly operator*(const Poly& a, const Poly& b) {
  if (a.is_zero() || b.is_zero()) return Poly();
  std::vector<Term> prod;
  prod.reserve(a.terms_.size() * b.terms_.size());
  for (const auto& s : a.terms_)
    for (const auto& t : b.terms_) prod.push_back({s.m * t.m, s.c * t.c});
  return Poly::from_terms(std::move(prod));
}

Poly& Poly::operator*=(const Poly& b) { return *this = *this * b; }

Poly& Poly::operator*=(const Scalar& c) {
  if (c.is_zero()) {
    terms_.clear();
    return *this;
  }
  for (auto& t : terms_) t.c *= c;
  return *this;
}

bool operator==(const Poly& a, const Poly& b) {
  if (a.terms_.size() != b.terms_.size()) return false;
  for (std::size_t i = 0; i < a.terms_.size(); ++i)
    if (!(a.terms_[i].m == b.terms_[i].m) || a.terms_[i].c != b.terms_[i].c) return false;
  return true;
}

// ---- PolyRing and parsing

PolyRing::PolyRing(Dvr dvr, std::vector<std::string> variables) {
  if (variables.size() > kMaxVars)
    throw Error(ErrorCode::InvalidArgument, "at most " + std::to_string(kMaxVars) + " variables are supported");
  for (std::size_t i = 0; i < variables.size(); ++i) {
    const auto& v = variables[i];
    const bool ok = !v.empty() && (std::isalpha(static_cast<unsigned char>(v[0])) || v[0] == '_') &&
                    std::all_of(v.begin(), v.end(), [](char ch) {
                      return std::isalnum(static_cast<unsigned char>(ch)) || ch == '_';
                    });
    if (!ok || v == "pi") throw Error(ErrorCode::ParseError, "invalid variable name '" + v + "'");
    for (std::size_t j = 0; j < i; ++j)
      if (variables[j] == v) throw Error(ErrorCode::ParseError, "duplicate variable '" + v + "'");
  }
  data_ = std::make_shared<const Data>(Data{dvr, std::move(variables)});
}

std::optional<std::size_t> PolyRing::index_of(std::string_view name) const {
  for (std::size_t i = 0; i < nvars(); ++i)
    if (data_->vars[i] == name) return i;
  return std::nullopt;
}

Poly PolyRing::variable(std::size_t i) const {
  if (i >= nvars()) throw Error(ErrorCode::InvalidArgument, "variable index out of range");
  return Poly::monomial(Monomial::variable(i), dvr().one());
}

namespace {

class Parser {
 public:
  Parser(const PolyRing& ring, std::string_view text) : ring_(ring), s_(text) {}

  Poly run() {
    skip();
    if (pos_ == s_.size()) fail("empty expression");
    Poly p = expr();
    skip();
    if (pos_ != s_.size()) fail(std::string("unexpected '") + s_[pos_] + "'");
    return p;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw Error(ErrorCode::ParseError, "column " + std::to_string(pos_ + 1) + ": " + what + " in '" +
                                           std::string(s_) + "'");
  }
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool eat(char ch) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == ch) {
      ++pos_;
      return true;
    }
    return false;
  }

  Poly expr() {
    Poly out;
    bool first = true;
    for (;;) {
      skip();
      bool neg = false;
      if (eat('-')) neg = true;
      else if (!first && !eat('+')) break;
      else if (first) eat('+');
      Poly t = term();
      if (neg) out -= t;
      else out += t;
      first = false;
      skip();
      if (pos_ >= s_.size() || (s_[pos_] != '+' && s_[pos_] != '-')) break;
    }
    return out;
  }

  Poly term() {
    Poly out = power();
    for (;;) {
      if (eat('*')) {
        out *= power();
      } else if (eat('/')) {
        const std::size_t at = pos_;
        Poly d = power();
        if (!d.is_constant() || d.is_zero()) {
          pos_ = at;
          fail("division by a non-constant or zero");
        }
        out *= ring_.dvr().one() / d.constant_term();
      } else {
        return out;
      }
    }
  }

  Poly power() {
    Poly base = atom();
    if (eat('^')) {
      skip();
      const std::size_t start = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      if (start == pos_) fail("expected an exponent");
      const std::string digits(s_.substr(start, pos_ - start));
      if (digits.size() > 3 || std::stoul(digits) > 255) fail("exponent too large");
      const unsigned k = static_cast<unsigned>(std::stoul(digits));
      Poly out = Poly::constant(ring_.dvr().one());
      for (unsigned i = 0; i < k; ++i) out *= base;
      return out;
    }
    return base;
  }

  Poly atom() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end of input");
    const char ch = s_[pos_];
    if (ch == '(') {
      ++pos_;
      Poly p = expr();
      if (!eat(')')) fail("expected ')'");
      return p;
    }
    if (ch == '-') {
      ++pos_;
      return -power();
    }
    if (std::isdigit(static_cast<unsigned char>(ch))) {
      const std::size_t start = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      mpz_class n(std::string(s_.substr(start, pos_ - start)));
      return Poly::constant(ring_.dvr().from_integer(n));
    }
    if (std::isalpha(static_cast<unsigned char>(ch)) || ch == '_') {
      const std::size_t start = pos_;
      while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
      const std::string_view name = s_.substr(start, pos_ - start);
      if (name == "pi") return Poly::constant(ring_.dvr().uniformizer());
      if (auto idx = ring_.index_of(name)) return ring_.variable(*idx);
      pos_ = start;
      fail("unknown variable '" + std::string(name) + "'");
    }
    fail(std::string("unexpected '") + ch + "'");
  }

  const PolyRing& ring_;
  std::string_view s_;
  std::size_t pos_ = 0;
};

bool needs_parens(const std::string& s) {
  return s.find(' ') != std::string::npos || s.find('/') != std::string::npos;
}

}  // namespace

Poly PolyRing::parse(std::string_view text) const { return Parser(*this, text).run(); }

Scalar PolyRing::parse_scalar(std::string_view text) const {
  Poly p = parse(text);
  if (!p.is_constant()) throw Error(ErrorCode::ParseError, "expected a constant, got '" + std::string(text) + "'");
  Scalar c = p.constant_term();
  return c.is_zero() ? dvr().zero() : c;
}

std::string PolyRing::to_string(const Poly& f) const {
  if (f.is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& t : f.terms()) {
    Scalar c = t.c;
    bool negative = false;
    if (const auto* q = c.as_rational(); q && sgn(*q) < 0) {
      negative = true;
      c = -c;
    }
    if (first) os << (negative ? "-" : "");
    else os << (negative ? " - " : " + ");
    first = false;
    std::string mono;
    for (std::size_t i = 0; i < nvars(); ++i) {
      if (!t.m.e[i]) continue;
      if (!mono.empty()) mono += "*";
      mono += variables()[i];
      if (t.m.e[i] > 1) mono += "^" + std::to_string(t.m.e[i]);
    }
    std::string cs = c.to_string();
    if (mono.empty()) {
      os << cs;
    } else if (c.is_one()) {
      os << mono;
    } else {
      os << (needs_parens(cs) ? "(" + cs + ")" : cs) << "*" << mono;
    }
  }
  return os.str();
}

// ---- Groebner engine over module terms

namespace {

struct VTerm {
  std::uint32_t comp;
  Monomial m;
  Scalar c;
};
using MVec = std::vector<VTerm>;

// Position over term: smaller component index is larger.
int cmp_pos(std::uint32_t ca, const Monomial& a, std::uint32_t cb, const Monomial& b) {
  if (ca != cb) return ca < cb ? 1 : -1;
  return compare_degrevlex(a, b);
}

MVec to_mvec(const PolyVec& v) {
  MVec out;
  for (std::size_t i = 0; i < v.size(); ++i)
    for (const auto& t : v[i].terms()) out.push_back({static_cast<std::uint32_t>(i), t.m, t.c});
  return out;
}

PolyVec from_mvec(const MVec& v, std::size_t rank) {
  std::vector<std::vector<Term>> parts(rank);
  for (const auto& t : v) parts[t.comp].push_back({t.m, t.c});
  PolyVec out(rank);
  for (std::size_t i = 0; i < rank; ++i) out[i] = Poly::from_terms(std::move(parts[i]));
  return out;
}

// a[start..] - c * m * b, where every term of m*b is below a[start-1].
void sub_mul(MVec& a, std::size_t start, const Scalar& c, const Monomial& m, const MVec& b) {
  MVec out;
  out.reserve(a.size() + b.size());
  for (std::size_t i = 0; i < start; ++i) out.push_back(std::move(a[i]));
  std::size_t i = start, j = 0;
  while (i < a.size() || j < b.size()) {
    int r;
    Monomial bm;
    if (j < b.size()) bm = b[j].m * m;
    if (i == a.size()) r = -1;
    else if (j == b.size()) r = 1;
    else r = cmp_pos(a[i].comp, a[i].m, b[j].comp, bm);
    if (r > 0) {
      out.push_back(std::move(a[i++]));
    } else if (r < 0) {
      out.push_back({b[j].comp, bm, -(c * b[j].c)});
      ++j;
    } else {
      Scalar s = a[i].c - c * b[j].c;
      if (!s.is_zero()) out.push_back({a[i].comp, bm, std::move(s)});
      ++i;
      ++j;
    }
  }
  a = std::move(out);
}

// Full reduction with canonical coefficients: a term whose monomial is
// divisible by basis leads is cleared when some lead valuation allows it,
// otherwise its coefficient is replaced by the residue representative modulo
// pi^v for the smallest such v. The result is unique for a strong basis.
template <class ForEach>
MVec reduce_terms(MVec f, ForEach&& candidates) {
  std::size_t pos = 0;
  while (pos < f.size()) {
    const VTerm& t = f[pos];
    const auto tv = *t.c.valuation();
    const MVec* best = nullptr;
    std::int64_t best_v = 0;
    candidates(t.comp, [&](const MVec& g) {
      const std::int64_t gv = *g.front().c.valuation();
      if (g.front().m.divides(t.m) && (!best || gv < best_v)) {
        best = &g;
        best_v = gv;
      }
    });
    if (!best) {
      ++pos;
      continue;
    }
    const Monomial mm = t.m / best->front().m;
    if (best_v <= tv) {
      sub_mul(f, pos, t.c / best->front().c, mm, *best);
      continue;
    }
    const Scalar r = t.c.residue_rep(best_v);
    if (r == t.c) {
      ++pos;
      continue;
    }
    sub_mul(f, pos, (t.c - r) / best->front().c, mm, *best);
    ++pos;
  }
  return f;
}

struct ExtLead {
  std::uint32_t comp;
  Monomial m;
  std::int64_t v;
};

bool ext_divides(const ExtLead& a, const ExtLead& b) { return a.comp == b.comp && a.v <= b.v && a.m.divides(b.m); }
bool ext_equal(const ExtLead& a, const ExtLead& b) { return a.comp == b.comp && a.v == b.v && a.m == b.m; }
ExtLead ext_lcm(const ExtLead& a, const ExtLead& b) { return {a.comp, Monomial::lcm(a.m, b.m), std::max(a.v, b.v)}; }

ExtLead lead_of(const MVec& v) { return {v.front().comp, v.front().m, *v.front().c.valuation()}; }

// Components at or past `complete` are never paired: elements led there are
// collected as found (Schreyer), so the result is a basis only on the first
// `complete` components.
class Engine {
 public:
  Engine(std::size_t rank, const Limits& limits, std::size_t complete)
      : rank_(rank), complete_(complete), limits_(limits), by_comp_(rank) {}
  Engine(std::size_t rank, const Limits& limits) : Engine(rank, limits, rank) {}

  // Reduce f fully against the current basis.
  MVec reduce(MVec f) const {
    return reduce_terms(std::move(f), [&](std::uint32_t comp, auto&& visit) {
      if (comp >= complete_) return;
      for (std::size_t idx : by_comp_[comp]) visit(elems_[idx].v);
    });
  }

  void add_generator(MVec f) {
    f = reduce(std::move(f));
    if (!f.empty()) insert(std::move(f));
  }

  void complete() {
    while (!pairs_.empty()) {
      auto it = std::min_element(pairs_.begin(), pairs_.end(), [](const Pair& a, const Pair& b) {
        const unsigned da = a.lcm.m.degree(), db = b.lcm.m.degree();
        if (da != db) return da < db;
        if (a.lcm.v != b.lcm.v) return a.lcm.v < b.lcm.v;
        if (a.lcm.comp != b.lcm.comp) return a.lcm.comp > b.lcm.comp;
        return std::tie(a.j, a.i) < std::tie(b.j, b.i);
      });
      Pair p = *it;
      pairs_.erase(it);
      if (p.lcm.m.degree() > limits_.max_degree)
        throw Error(ErrorCode::DegreeBoundExceeded,
                    "standard basis needs degree " + std::to_string(p.lcm.m.degree()) + " > " +
                        std::to_string(limits_.max_degree));
      MVec s = spoly(p);
      s = reduce(std::move(s));
      if (!s.empty()) insert(std::move(s));
    }
  }

  // Minimal, interreduced basis.
  std::vector<MVec> result() const {
    std::vector<std::size_t> keep;
    for (std::size_t i = 0; i < elems_.size(); ++i) {
      if (elems_[i].lead.comp >= complete_) {
        keep.push_back(i);
        continue;
      }
      bool redundant = false;
      for (std::size_t j = 0; j < elems_.size() && !redundant; ++j) {
        if (i == j || !ext_divides(elems_[j].lead, elems_[i].lead)) continue;
        redundant = !ext_equal(elems_[j].lead, elems_[i].lead) || j < i;
      }
      if (!redundant) keep.push_back(i);
    }
    Engine mini(rank_, limits_, complete_);
    for (std::size_t i : keep) mini.push_raw(elems_[i].v);
    std::vector<MVec> out;
    for (std::size_t k = 0; k < mini.elems_.size(); ++k) {
      MVec v = mini.elems_[k].v;
      // Tail reduction; the lead is irreducible by the other elements.
      MVec tail(v.begin() + 1, v.end());
      tail = mini.reduce(std::move(tail));
      MVec full;
      full.reserve(tail.size() + 1);
      full.push_back(v.front());
      for (auto& t : tail) full.push_back(std::move(t));
      out.push_back(std::move(full));
    }
    return out;
  }

 private:
  struct Elem {
    MVec v;
    ExtLead lead;
    bool redundant = false;
  };
  struct Pair {
    std::size_t i, j;
    ExtLead lcm;
  };

  void push_raw(MVec v) {
    const ExtLead l = lead_of(v);
    by_comp_[l.comp].push_back(elems_.size());
    elems_.push_back({std::move(v), l, false});
  }

  MVec spoly(const Pair& p) const {
    const auto& f = elems_[p.i];
    const auto& g = elems_[p.j];
    const Dvr dvr = *f.v.front().c.dvr();
    MVec s;
    for (const auto& t : f.v) s.push_back({t.comp, t.m * (p.lcm.m / f.lead.m), t.c * dvr.pi_power(p.lcm.v - f.lead.v)});
    sub_mul(s, 0, dvr.pi_power(p.lcm.v - g.lead.v), p.lcm.m / g.lead.m, g.v);
    return s;
  }

  void insert(MVec h) {
    // Normalize the lead coefficient to a power of pi.
    const Scalar lc = h.front().c;
    const std::int64_t v = *lc.valuation();
    const Scalar u = lc.dvr()->pi_power(v) / lc;
    if (!u.is_one())
      for (auto& t : h) t.c *= u;
    const ExtLead l = lead_of(h);
    if (l.m.degree() > limits_.max_degree)
      throw Error(ErrorCode::DegreeBoundExceeded, "standard basis element of degree " +
                                                      std::to_string(l.m.degree()) + " exceeds the degree bound");
    if (l.v > static_cast<std::int64_t>(limits_.max_valuation))
      throw Error(ErrorCode::DegreeBoundExceeded, "standard basis coefficient valuation exceeds the bound");
    const std::size_t k = elems_.size();
    if (l.comp >= complete_) {
      by_comp_[l.comp].push_back(k);
      elems_.push_back({std::move(h), l, false});
      return;
    }

    // Gebauer-Moeller update.
    std::erase_if(pairs_, [&](const Pair& p) {
      if (!ext_divides(l, p.lcm)) return false;
      const auto a = ext_lcm(elems_[p.i].lead, l), b = ext_lcm(elems_[p.j].lead, l);
      return !ext_equal(a, p.lcm) && !ext_equal(b, p.lcm);
    });
    std::vector<Pair> fresh;
    for (std::size_t i : by_comp_[l.comp])
      if (!elems_[i].redundant) fresh.push_back({i, k, ext_lcm(elems_[i].lead, l)});
    std::vector<bool> drop(fresh.size(), false);
    for (std::size_t a = 0; a < fresh.size(); ++a)
      for (std::size_t b = 0; b < fresh.size() && !drop[a]; ++b)
        if (a != b && ext_divides(fresh[b].lcm, fresh[a].lcm) && !ext_equal(fresh[b].lcm, fresh[a].lcm))
          drop[a] = true;
    auto product_ok = [&](const Pair& p) {
      const auto& li = elems_[p.i].lead;
      return rank_ == 1 && li.m.coprime(l.m) && std::min(li.v, l.v) == 0;
    };
    for (std::size_t a = 0; a < fresh.size(); ++a) {
      if (drop[a]) continue;
      bool group_product = product_ok(fresh[a]);
      for (std::size_t b = a + 1; b < fresh.size(); ++b)
        if (!drop[b] && ext_equal(fresh[a].lcm, fresh[b].lcm)) {
          group_product = group_product || product_ok(fresh[b]);
          drop[b] = true;
        }
      if (!group_product) pairs_.push_back(fresh[a]);
    }
    for (std::size_t i : by_comp_[l.comp])
      if (ext_divides(l, elems_[i].lead)) elems_[i].redundant = true;

    by_comp_[l.comp].push_back(k);
    elems_.push_back({std::move(h), l, false});
  }

  std::size_t rank_;
  std::size_t complete_;
  Limits limits_;
  std::vector<Elem> elems_;
  std::vector<std::vector<std::size_t>> by_comp_;
  std::vector<Pair> pairs_;
};

std::vector<MVec> groebner(const std::vector<MVec>& gens, std::size_t rank, const Limits& limits,
                           std::size_t complete) {
  Engine e(rank, limits, complete);
  for (const auto& g : gens)
    if (!g.empty()) e.add_generator(g);
  e.complete();
  return e.result();
}

MVec reduce_against(const std::vector<MVec>& basis, std::size_t rank, MVec f) {
  std::vector<std::vector<std::size_t>> by_comp(rank);
  for (std::size_t i = 0; i < basis.size(); ++i) by_comp[basis[i].front().comp].push_back(i);
  return reduce_terms(std::move(f), [&](std::uint32_t comp, auto&& visit) {
    for (std::size_t idx : by_comp[comp]) visit(basis[idx]);
  });
}

// ---- Mora normal form for the local order

std::int64_t ecart(const Poly& f) {
  return static_cast<std::int64_t>(f.degree()) - static_cast<std::int64_t>(f.local_lead().m.degree());
}

Poly mora_nf(Poly h, std::vector<Poly> t, const Limits& limits) {
  std::size_t steps = 0;
  while (!h.is_zero()) {
    const Term lt = h.local_lead();
    const auto hv = *lt.c.valuation();
    std::optional<std::size_t> best;
    std::int64_t best_ecart = 0;
    for (std::size_t i = 0; i < t.size(); ++i) {
      const Term& gl = t[i].local_lead();
      if (!gl.m.divides(lt.m) || *gl.c.valuation() > hv) continue;
      const std::int64_t e = ecart(t[i]);
      if (!best || e < best_ecart) {
        best = i;
        best_ecart = e;
      }
    }
    if (!best) return h;
    const Poly g = t[*best];
    if (best_ecart > ecart(h)) t.push_back(h);
    const Term& gl = g.local_lead();
    h -= g.mul_term(lt.m / gl.m, lt.c / gl.c);
    if (h.degree() > limits.max_degree || ++steps > 100000)
      throw Error(ErrorCode::DegreeBoundExceeded, "local normal form exceeded the degree bound");
  }
  return h;
}

Poly normalize_local(Poly f) {
  const Term& lt = f.local_lead();
  const Scalar u = lt.c.dvr()->pi_power(*lt.c.valuation()) / lt.c;
  return f * u;
}

std::vector<Poly> local_std_basis(const std::vector<Poly>& gens, const Limits& limits) {
  std::vector<Poly> s;
  for (const auto& g : gens)
    if (!g.is_zero()) s.push_back(normalize_local(g));
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t j = 0; j < s.size(); ++j)
    for (std::size_t i = 0; i < j; ++i) pairs.push_back({i, j});
  while (!pairs.empty()) {
    auto [i, j] = pairs.front();
    pairs.erase(pairs.begin());
    const Term& a = s[i].local_lead();
    const Term& b = s[j].local_lead();
    const Monomial l = Monomial::lcm(a.m, b.m);
    if (l.degree() > limits.max_degree)
      throw Error(ErrorCode::DegreeBoundExceeded, "local standard basis exceeded the degree bound");
    const std::int64_t va = *a.c.valuation(), vb = *b.c.valuation(), w = std::max(va, vb);
    const Dvr dvr = *a.c.dvr();
    // Lead coefficients are normalized to pi powers.
    Poly sp = s[i].mul_term(l / a.m, dvr.pi_power(w - va)) - s[j].mul_term(l / b.m, dvr.pi_power(w - vb));
    Poly r = mora_nf(std::move(sp), s, limits);
    if (r.is_zero()) continue;
    s.push_back(normalize_local(r));
    for (std::size_t k = 0; k + 1 < s.size(); ++k) pairs.push_back({k, s.size() - 1});
    if (s.size() > 500) throw Error(ErrorCode::DegreeBoundExceeded, "local standard basis grew too large");
  }
  // Drop elements whose lead is strongly divisible by another's.
  std::vector<Poly> out;
  for (std::size_t i = 0; i < s.size(); ++i) {
    bool redundant = false;
    const Term& li = s[i].local_lead();
    for (std::size_t j = 0; j < s.size() && !redundant; ++j) {
      if (i == j) continue;
      const Term& lj = s[j].local_lead();
      if (lj.m.divides(li.m) && *lj.c.valuation() <= *li.c.valuation())
        redundant = !(lj.m == li.m && *lj.c.valuation() == *li.c.valuation()) || j < i;
    }
    if (!redundant) out.push_back(s[i]);
  }
  return out;
}

// Concurrent-read cache of completed global bases.
struct BasisCache {
  std::shared_mutex mutex;
  std::map<std::string, std::shared_ptr<const StdBasis>> entries;
};

BasisCache& basis_cache() {
  static BasisCache cache;
  return cache;
}

std::string cache_key(const std::vector<Poly>& gens, const Limits& limits) {
  std::ostringstream os;
  os << limits.max_degree << ':' << limits.max_valuation;
  for (const auto& g : gens) {
    os << '|';
    if (!g.is_zero()) os << g.terms().front().c.dvr()->describe();
    for (const auto& t : g.terms()) {
      os << ';';
      for (auto x : t.m.e) os << int{x} << ',';
      os << t.c.to_string();
    }
  }
  return os.str();
}

}  // namespace

StdBasis std_basis(const std::vector<Poly>& gens, MonomialOrder order, const Limits& limits) {
  StdBasis out;
  out.order_ = order;
  out.limits_ = limits;
  if (order == MonomialOrder::local_degrevlex) {
    out.elements_ = local_std_basis(gens, limits);
    return out;
  }
  std::vector<MVec> vs;
  for (const auto& g : gens) vs.push_back(to_mvec({g}));
  for (const auto& v : groebner(vs, 1, limits, 1)) out.elements_.push_back(from_mvec(v, 1)[0]);
  return out;
}

Poly normal_form(const Poly& f, const StdBasis& basis) {
  if (basis.order() == MonomialOrder::local_degrevlex) return mora_nf(f, basis.elements(), basis.limits());
  std::vector<MVec> b;
  for (const auto& g : basis.elements()) b.push_back(to_mvec({g}));
  return from_mvec(reduce_against(b, 1, to_mvec({f})), 1)[0];
}

// ---- PolyMatrix

PolyMatrix PolyMatrix::identity(std::size_t n, const Scalar& one) {
  PolyMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = Poly::constant(one);
  return m;
}

PolyMatrix PolyMatrix::from_columns(std::size_t rows, const std::vector<PolyVec>& columns) {
  PolyMatrix m(rows, columns.size());
  for (std::size_t j = 0; j < columns.size(); ++j) {
    if (columns[j].size() != rows) throw Error(ErrorCode::DimensionMismatch, "column length mismatch");
    for (std::size_t i = 0; i < rows; ++i) m(i, j) = columns[j][i];
  }
  return m;
}

PolyMatrix PolyMatrix::from_constant(const Matrix& a) {
  PolyMatrix m(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) m(i, j) = Poly::constant(a(i, j));
  return m;
}

PolyVec PolyMatrix::column(std::size_t j) const {
  PolyVec v(rows_);
  for (std::size_t i = 0; i < rows_; ++i) v[i] = (*this)(i, j);
  return v;
}

PolyMatrix PolyMatrix::transpose() const {
  PolyMatrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

PolyMatrix PolyMatrix::column_block(std::size_t first, std::size_t count) const {
  if (first + count > cols_) throw Error(ErrorCode::DimensionMismatch, "column block out of range");
  PolyMatrix m(rows_, count);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < count; ++j) m(i, j) = (*this)(i, first + j);
  return m;
}

PolyMatrix PolyMatrix::row_block(std::size_t first, std::size_t count) const {
  if (first + count > rows_) throw Error(ErrorCode::DimensionMismatch, "row block out of range");
  PolyMatrix m(count, cols_);
  for (std::size_t i = 0; i < count; ++i)
    for (std::size_t j = 0; j < cols_; ++j) m(i, j) = (*this)(first + i, j);
  return m;
}

PolyMatrix PolyMatrix::hcat(const PolyMatrix& a, const PolyMatrix& b) {
  if (a.rows_ != b.rows_) throw Error(ErrorCode::DimensionMismatch, "hcat row counts differ");
  PolyMatrix m(a.rows_, a.cols_ + b.cols_);
  for (std::size_t i = 0; i < a.rows_; ++i) {
    for (std::size_t j = 0; j < a.cols_; ++j) m(i, j) = a(i, j);
    for (std::size_t j = 0; j < b.cols_; ++j) m(i, a.cols_ + j) = b(i, j);
  }
  return m;
}

PolyMatrix PolyMatrix::vcat(const PolyMatrix& a, const PolyMatrix& b) {
  if (a.cols_ != b.cols_) throw Error(ErrorCode::DimensionMismatch, "vcat column counts differ");
  PolyMatrix m(a.rows_ + b.rows_, a.cols_);
  for (std::size_t i = 0; i < a.rows_; ++i)
    for (std::size_t j = 0; j < a.cols_; ++j) m(i, j) = a(i, j);
  for (std::size_t i = 0; i < b.rows_; ++i)
    for (std::size_t j = 0; j < b.cols_; ++j) m(a.rows_ + i, j) = b(i, j);
  return m;
}

bool PolyMatrix::is_zero() const {
  return std::all_of(data_.begin(), data_.end(), [](const Poly& p) { return p.is_zero(); });
}

PolyVec PolyMatrix::apply(const PolyVec& v) const {
  if (v.size() != cols_) throw Error(ErrorCode::DimensionMismatch, "vector length does not match matrix");
  PolyVec out(rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j)
      if (!(*this)(i, j).is_zero() && !v[j].is_zero()) out[i] += (*this)(i, j) * v[j];
  return out;
}

PolyMatrix operator*(const PolyMatrix& a, const PolyMatrix& b) {
  if (a.cols_ != b.rows_) throw Error(ErrorCode::DimensionMismatch, "matrix product shapes");
  PolyMatrix m(a.rows_, b.cols_);
  for (std::size_t i = 0; i < a.rows_; ++i)
    for (std::size_t k = 0; k < a.cols_; ++k) {
      if (a(i, k).is_zero()) continue;
      for (std::size_t j = 0; j < b.cols_; ++j)
        if (!b(k, j).is_zero()) m(i, j) += a(i, k) * b(k, j);
    }
  return m;
}

Matrix PolyMatrix::evaluate(std::span<const Scalar> point) const {
  Matrix m(rows_, cols_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) m(i, j) = (*this)(i, j).evaluate(point);
  return m;
}

PolyMatrix PolyMatrix::substitute(std::span<const Poly> images) const {
  PolyMatrix m(rows_, cols_);
  for (std::size_t i = 0; i < data_.size(); ++i) m.data_[i] = data_[i].substitute(images);
  return m;
}

std::string PolyMatrix::to_string(const PolyRing& ring) const {
  std::string out = "[";
  for (std::size_t i = 0; i < rows_; ++i) {
    if (i) out += "; ";
    for (std::size_t j = 0; j < cols_; ++j) {
      if (j) out += ", ";
      out += ring.to_string((*this)(i, j));
    }
  }
  return out + "]";
}

// ---- Ideal

Ideal::Ideal(PolyRing ring, std::vector<Poly> generators, const Limits& limits)
    : ring_(std::move(ring)), generators_(std::move(generators)), limits_(limits) {
  const std::string key = cache_key(generators_, limits_);
  auto& cache = basis_cache();
  {
    std::shared_lock lock(cache.mutex);
    auto it = cache.entries.find(key);
    if (it != cache.entries.end()) {
      basis_ = it->second;
      return;
    }
  }
  auto b = std::make_shared<const StdBasis>(std_basis(generators_, MonomialOrder::global_degrevlex, limits_));
  std::unique_lock lock(cache.mutex);
  basis_ = cache.entries.emplace(key, std::move(b)).first->second;
}

Poly Ideal::reduce(const Poly& f) const { return normal_form(f, *basis_); }

PolyVec Ideal::reduce(const PolyVec& v) const {
  PolyVec out;
  out.reserve(v.size());
  for (const auto& f : v) out.push_back(reduce(f));
  return out;
}

PolyMatrix Ideal::reduce(const PolyMatrix& m) const {
  PolyMatrix out(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out(i, j) = reduce(m(i, j));
  return out;
}

// ---- Submodule

Submodule::Submodule(std::size_t rank, const std::vector<PolyVec>& generators, const Limits& limits)
    : Submodule(rank, generators, limits, rank) {}

Submodule::Submodule(std::size_t rank, const std::vector<PolyVec>& generators, const Limits& limits,
                     std::size_t complete)
    : rank_(rank) {
  std::vector<MVec> gens;
  for (const auto& g : generators) {
    if (g.size() != rank) throw Error(ErrorCode::DimensionMismatch, "generator length does not match rank");
    gens.push_back(to_mvec(g));
  }
  for (const auto& v : groebner(gens, rank, limits, complete)) basis_.push_back(from_mvec(v, rank));
}

std::vector<LeadTerm> Submodule::leads() const {
  std::vector<LeadTerm> out;
  for (const auto& b : basis_) {
    const MVec v = to_mvec(b);
    out.push_back({v.front().comp, v.front().m, *v.front().c.valuation()});
  }
  return out;
}

PolyVec Submodule::reduce(const PolyVec& v) const {
  if (v.size() != rank_) throw Error(ErrorCode::DimensionMismatch, "vector length does not match rank");
  std::vector<MVec> b;
  for (const auto& g : basis_) b.push_back(to_mvec(g));
  return from_mvec(reduce_against(b, rank_, to_mvec(v)), rank_);
}

bool Submodule::contains(const PolyVec& v) const {
  const PolyVec r = reduce(v);
  return std::all_of(r.begin(), r.end(), [](const Poly& p) { return p.is_zero(); });
}

// ---- LinearSystem

LinearSystem::LinearSystem(const PolyMatrix& m, const Ideal& ideal) : LinearSystem(m, ideal, false) {}

LinearSystem::LinearSystem(const PolyMatrix& m, const Ideal& ideal, bool generators_only)
    : r_(m.rows()), k_(m.cols()), ideal_(ideal) {
  const std::size_t n = r_ + k_;
  std::vector<PolyVec> gens;
  const Scalar one = ideal.ring().dvr().one();
  for (std::size_t j = 0; j < k_; ++j) {
    PolyVec v(n);
    for (std::size_t i = 0; i < r_; ++i) v[i] = ideal.reduce(m(i, j));
    v[r_ + j] = Poly::constant(one);
    gens.push_back(std::move(v));
  }
  for (const auto& f : ideal.basis().elements())
    for (std::size_t i = 0; i < r_; ++i) {
      PolyVec v(n);
      v[i] = f;
      gens.push_back(std::move(v));
    }
  elimination_ = std::make_shared<const Submodule>(n, gens, ideal.limits(), generators_only ? r_ : n);

  std::vector<PolyVec> syz;
  for (const auto& b : elimination_->basis()) {
    bool top_zero = true;
    for (std::size_t i = 0; i < r_ && top_zero; ++i) top_zero = b[i].is_zero();
    if (!top_zero) continue;
    PolyVec s(b.begin() + static_cast<std::ptrdiff_t>(r_), b.end());
    s = ideal.reduce(s);
    if (std::all_of(s.begin(), s.end(), [](const Poly& p) { return p.is_zero(); })) continue;
    if (std::find(syz.begin(), syz.end(), s) == syz.end()) syz.push_back(std::move(s));
  }
  syzygies_ = PolyMatrix::from_columns(k_, syz);
}

std::optional<PolyVec> LinearSystem::solve(const PolyVec& y) const {
  if (y.size() != r_) throw Error(ErrorCode::DimensionMismatch, "right-hand side length");
  PolyVec v(r_ + k_);
  for (std::size_t i = 0; i < r_; ++i) v[i] = ideal_.reduce(y[i]);
  const PolyVec red = elimination_->reduce(v);
  for (std::size_t i = 0; i < r_; ++i)
    if (!red[i].is_zero()) return std::nullopt;
  PolyVec t(k_);
  for (std::size_t j = 0; j < k_; ++j) t[j] = ideal_.reduce(-red[r_ + j]);
  return t;
}

PolyMatrix syzygy_module(const PolyMatrix& m, const Ideal& ideal) { return LinearSystem(m, ideal, true).syzygies(); }

// ---- Taylor division

TaylorDivision taylor_division(const Poly& f, std::span<const Scalar> point) {
  TaylorDivision out;
  Poly h = f;
  for (std::size_t i = 0; i < point.size(); ++i) {
    std::vector<Term> q, r;
    for (const auto& t : h.terms()) {
      const unsigned k = t.m.e[i];
      Monomial base = t.m;
      base.e[i] = 0;
      // c x^k = c (x - a) sum_{j<k} a^{k-1-j} x^j + c a^k
      std::vector<Scalar> powers(k + 1);
      powers[0] = t.c;
      for (unsigned j = 1; j <= k; ++j) powers[j] = powers[j - 1] * point[i];
      for (unsigned j = 0; j < k; ++j) {
        Monomial mj = base;
        mj.e[i] = static_cast<std::uint8_t>(j);
        q.push_back({mj, powers[k - 1 - j]});
      }
      r.push_back({base, powers[k]});
    }
    out.quotients.push_back(Poly::from_terms(std::move(q)));
    h = Poly::from_terms(std::move(r));
  }
  if (!h.is_constant()) throw Error(ErrorCode::DimensionMismatch, "polynomial uses more variables than the point");
  out.remainder = h.constant_term();
  return out;
}

}  // namespace congru
