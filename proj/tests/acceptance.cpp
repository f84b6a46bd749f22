// Acceptance driver: one PASS/FAIL line per criterion. Criterion 8 is
// reported but does not affect the exit status.
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <numeric>
#include <random>
#include <sstream>

#include <CLI11.hpp>

#include "congru/congruence.hpp"
#include "congru/error.hpp"
#include "congru/lattice.hpp"
#include "property_suites.hpp"

using namespace congru;
using Clock = std::chrono::steady_clock;

namespace {

double seconds_since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

struct Outcome {
  bool pass = true;
  std::vector<std::string> problems;
  void expect(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      problems.push_back(what);
    }
  }
};

std::string pi_n(long n) { return "pi^" + std::to_string(n); }

AugmentedAlgebra make(const Dvr& o, const std::vector<std::string>& vars, const std::vector<std::string>& rels,
                      std::vector<std::string> point, unsigned c, AlgebraAssertions as = {}, Limits lim = {}) {
  PolyRing r(o, vars);
  std::vector<Poly> ps;
  for (const auto& s : rels) ps.push_back(r.parse(s));
  std::vector<Scalar> pt;
  for (const auto& s : point) pt.push_back(r.parse_scalar(s));
  return build_algebra(r, ps, pt, c, as, lim);
}

std::vector<Poly> variables(const AugmentedAlgebra& b) {
  std::vector<Poly> v;
  for (std::size_t i = 0; i < b.nvars(); ++i) v.push_back(b.ring().variable(i));
  return v;
}

Outcome ring_a_suite() {
  Outcome out;
  for (std::uint64_t p : {3, 5})
    for (long n = 1; n <= 4; ++n)
      for (bool other : {false, true}) {
        const auto t = Clock::now();
        const Dvr o = Dvr::p_adic(p);
        const auto a = make(o, {"x"}, {"x*(x - " + pi_n(n) + ")"}, {other ? pi_n(n) : "0"}, 0);
        const FpModule m = FpModule::free(a);
        const CongruenceReport rep = congruence_report(m);
        const std::string tag = "p=" + std::to_string(p) + " n=" + std::to_string(n) + (other ? " lambda_n" : " lambda_0");
        const auto e = static_cast<std::uint64_t>(n);
        out.expect(rep.eta == IdealO::pi_power(e), tag + ": eta " + rep.eta.to_string());
        out.expect(rep.psi == FinOModule({e}, 0), tag + ": psi " + rep.psi.to_string());
        out.expect(rep.psi == psi_direct_codim0(m), tag + ": psi differs from the direct computation");
        out.expect(rep.phi.length() == e, tag + ": phi " + rep.phi.to_string());
        out.expect(rep.verdicts.at("wld") == Verdict::holds, tag + ": wld " + to_string(rep.verdicts.at("wld")));
        out.expect(numerical_criterion(m, CriterionMode::defect0).verdict == Verdict::holds, tag + ": defect0");
        const double s = seconds_since(t);
        out.expect(s < 1.0, tag + ": took " + std::to_string(s) + " s");
      }
  return out;
}

Outcome ring_b() {
  Outcome out;
  const auto t = Clock::now();
  const Dvr o = Dvr::p_adic(3);
  const auto b = make(o, {"x", "y"}, {"x*(x - pi)", "y*(y - pi)", "x*y"}, {"0", "0"}, 0);
  const FpModule m = FpModule::free(b);
  const CongruenceReport rep = congruence_report(m);
  out.expect(rep.eta == IdealO::pi_power(1), "eta " + rep.eta.to_string());
  out.expect(rep.psi == FinOModule({1}, 0), "psi " + rep.psi.to_string());
  out.expect(rep.psi == psi_direct_codim0(m), "psi differs from the direct computation");
  out.expect(rep.eta == eta_direct_codim0(m), "eta differs from the direct computation");
  out.expect(rep.phi.length() == 2u, "phi " + rep.phi.to_string());
  out.expect(rep.verdicts.at("wld") == Verdict::fails, "wld " + to_string(rep.verdicts.at("wld")));
  out.expect(seconds_since(t) < 1.0, "over 1 s");
  return out;
}

Outcome depth_zero_example() {
  Outcome out;
  const auto t = Clock::now();
  const Dvr o = Dvr::p_adic(3);
  const auto a = make(o, {"x", "y"}, {"x*(x - pi)", "x*pi^2", "x*y"}, {"0", "0"}, 1);
  CongruenceOptions opt;
  opt.strategy = ResolutionStrategy::syzygy;
  const FpModule m = FpModule::free(a);
  const IdealO e = eta(m, opt);
  const IdealO fitt = cotangent_invariants(a).fitt_c;
  out.expect(e == IdealO::pi_power(1), "eta " + e.to_string());
  out.expect(fitt == e, "Fitt_1 " + fitt.to_string());
  const Verdict v = numerical_criterion(m, CriterionMode::defect0, opt).verdict;
  out.expect(v == Verdict::hypothesis_unverified, "defect0 " + to_string(v));
  out.expect(seconds_since(t) < 10.0, "over 10 s");
  return out;
}

Outcome deformation() {
  Outcome out;
  const auto t = Clock::now();
  for (std::uint64_t p : {3, 5})
    for (long n = 1; n <= 4; ++n) {
      const Dvr o = Dvr::p_adic(p);
      const auto a = make(o, {"x", "y"}, {"x*(x - " + pi_n(n) + ")"}, {"0", "0"}, 1);
      const DeformationResult d = deformation_step(FpModule::free(a), a.ring().parse("y"));
      const std::string tag = "p=" + std::to_string(p) + " n=" + std::to_string(n);
      const auto e = IdealO::pi_power(static_cast<std::uint64_t>(n));
      out.expect(d.ord_f == IdealO::unit(), tag + ": ord " + d.ord_f.to_string());
      out.expect(d.eta_a == e && d.eta_b == e, tag + ": eta " + d.eta_a.to_string() + " / " + d.eta_b.to_string());
      out.expect(d.exact_sequence_holds, tag + ": length identity");
    }
  out.expect(seconds_since(t) < 10.0, "over 10 s");
  return out;
}

long p_valuation(long n, long p) {
  long v = 0;
  while (n % p == 0) {
    n /= p;
    ++v;
  }
  return v;
}

Outcome lattices() {
  Outcome out;
  const auto t = Clock::now();
  {
    const Dvr o = Dvr::p_adic(691);
    Matrix v1(2, 1), v2(2, 1);
    v1(0, 0) = o.one();
    v2(1, 0) = o.one();
    Matrix basis = Matrix::identity(o, 2);
    basis(1, 1) = o.from_int(691);
    basis(1, 0) = o.one();
    const LatticeSplit s{2, basis, v1, v2};
    const auto r = split_and_congruence(s);
    out.expect(r.cong.to_string() == "O/pi", "691 congruence module " + r.cong.to_string());
    out.expect(pairing_discriminant(s) == IdealO::pi_power(1), "691 discriminant");
  }
  // Oracle over Z: with L = Z^2 and V_i spanned by primitive integer vectors,
  // the congruence module has order |det| of those vectors.
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<long> entry(-40, 40);
  int checked = 0;
  while (checked < 200) {
    const long p = checked % 2 ? 3 : 5;
    long a = entry(rng), b = entry(rng), c = entry(rng), d = entry(rng);
    if (a * d - b * c == 0) continue;
    const Dvr o = Dvr::p_adic(static_cast<std::uint64_t>(p));
    Matrix v1(2, 1), v2(2, 1);
    v1(0, 0) = o.from_int(a), v1(1, 0) = o.from_int(b);
    v2(0, 0) = o.from_int(c), v2(1, 0) = o.from_int(d);
    const LatticeSplit s{2, Matrix::identity(o, 2), v1, v2};
    const long g1 = std::gcd(a, b), g2 = std::gcd(c, d);
    const auto v = static_cast<std::uint64_t>(p_valuation((a / g1) * (d / g2) - (b / g1) * (c / g2), p));
    try {
      const auto r = split_and_congruence(s);  // checks the three quotients agree
      out.expect(r.cong.length() == v, "random split length");
      out.expect(fitting_ideal(r.cong, 0) == pairing_discriminant(s), "Fitt_0 vs discriminant");
      out.expect(pairing_discriminant(s) == IdealO::pi_power(v), "discriminant vs determinant");
    } catch (const Error& e) {
      out.expect(false, e.what());
    }
    ++checked;
  }
  out.expect(seconds_since(t) < 5.0, "over 5 s");
  return out;
}

Outcome properties() {
  Outcome out;
  const auto t = Clock::now();
  for (const auto& s : props::property_suites()) {
    const auto r = props::run_suite(s, 100);
    out.expect(r.failures.empty(), s.name + ": " + std::to_string(r.failures.size()) + " failures" +
                                       (r.failures.empty() ? "" : ", first " + r.failures.front()));
  }
  out.expect(seconds_since(t) < 120.0, "over 2 min");
  return out;
}

// Surjections O[x]/(x prod(x - pi^e_i)) -> the same with factors dropped,
// optionally with free variables or a second cut variable. For a codim-0
// complete intersection at the origin, eta is generated by the Jacobian, so
// the target value is pi^(sum of the kept exponents).
Outcome invariance() {
  Outcome out;
  const auto t = Clock::now();
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> ex(1, 4), extra(1, 2), shape(0, 2);
  for (int k = 0; k < 20; ++k) {
    const Dvr o = Dvr::p_adic(k % 2 ? 3 : 5);
    auto branch = [&](const std::string& v, int kept, int added, std::string& src, std::string& tgt) {
      std::uint64_t sum = 0;
      src = tgt = v;
      for (int i = 0; i < kept + added; ++i) {
        const int e = ex(rng);
        const std::string f = "*(" + v + " - " + pi_n(e) + ")";
        src += f;
        if (i < kept) {
          tgt += f;
          sum += static_cast<std::uint64_t>(e);
        }
      }
      return sum;
    };
    const int sh = shape(rng);
    std::vector<std::string> vars{"x"}, src, tgt;
    std::string s1, t1;
    std::uint64_t expected = branch("x", 1 + k % 2, extra(rng), s1, t1);
    src.push_back(s1);
    tgt.push_back(t1);
    unsigned c = 0;
    if (sh == 1) {
      vars.push_back("y");
      c = 1;
    } else if (sh == 2) {
      vars.push_back("z");
      expected += branch("z", 1, extra(rng), s1, t1);
      src.push_back(s1);
      tgt.push_back(t1);
    }
    const std::vector<std::string> zero(vars.size(), "0");
    const auto a = make(o, vars, src, zero, c);
    const auto b = make(o, vars, tgt, zero, c);
    try {
      const InvarianceResult r = invariance_check(AlgebraMap(a, b, variables(b)), FpModule::free(b));
      const std::string tag = "#" + std::to_string(k);
      out.expect(r.verdict == Verdict::holds, tag + ": " + r.eta_source.to_string() + " vs " + r.eta_target.to_string());
      out.expect(r.eta_target == IdealO::pi_power(expected), tag + ": target eta " + r.eta_target.to_string());
    } catch (const Error& e) {
      out.expect(false, e.what());
    }
  }
  out.expect(seconds_since(t) < 30.0, "over 30 s");
  return out;
}

AugmentedAlgebra ring_c(const Dvr& o, long l, long m, long n, const Limits& lim) {
  // 2-minors of [al, be, pi^n + a, b; ga, -al, c, -a].
  const std::string pa = "(" + pi_n(n) + " + a)";
  const std::vector<std::string> rels{"-al^2 - be*ga",  "al*c - ga*" + pa, "-a*al - b*ga",
                                      "be*c + al*" + pa, "-a*be + al*b",    "-a*" + pa + " - b*c"};
  AlgebraAssertions as;
  as.cohen_macaulay = true;
  return make(o, {"a", "b", "c", "al", "be", "ga"}, rels, {"0", pi_n(l), "0", "0", pi_n(m), "0"}, 3, as, lim);
}

// Runs the ring C cases over F_3[[t]] in a child process; the parent kills it once the
// budget is spent. Each finished case writes one line to the pipe.
Outcome ring_c_suite(double budget) {
  Outcome out;
  int fd[2];
  if (pipe(fd) != 0) {
    out.expect(false, "pipe failed");
    return out;
  }
  const pid_t child = fork();
  if (child == 0) {
    close(fd[0]);
    FILE* w = fdopen(fd[1], "w");
    // Over Z_(3) the rational coefficients swell past any useful budget.
    const Dvr o = Dvr::power_series(3);
    Limits lim;
    lim.max_degree = 12;
    for (long l = 1; l <= 2; ++l)
      for (long m = 1; m <= 2; ++m)
        for (long n = 1; n <= 2; ++n) {
          std::string line = std::to_string(l) + "," + std::to_string(m) + "," + std::to_string(n) + " ";
          try {
            CongruenceOptions opt;
            opt.strategy = ResolutionStrategy::syzygy;
            opt.length = 4;
            const IdealO e = eta(FpModule::free(ring_c(o, l, m, n, lim)), opt);
            const auto want = static_cast<std::uint64_t>(std::min({l, m, n}));
            line += (e == IdealO::pi_power(want) ? "ok " : "wrong ") + e.to_string();
          } catch (const Error& e) {
            line += std::string("error ") + e.what();
          }
          std::fprintf(w, "%s\n", line.c_str());
          std::fflush(w);
        }
    std::fclose(w);
    _exit(0);
  }
  close(fd[1]);
  const auto t = Clock::now();
  std::string buffer;
  bool eof = false;
  while (!eof && seconds_since(t) < budget) {
    pollfd p{fd[0], POLLIN, 0};
    if (poll(&p, 1, 200) > 0) {
      char chunk[512];
      const ssize_t got = read(fd[0], chunk, sizeof chunk);
      if (got <= 0)
        eof = true;
      else
        buffer.append(chunk, static_cast<std::size_t>(got));
    }
  }
  if (!eof) kill(child, SIGKILL);
  waitpid(child, nullptr, 0);
  close(fd[0]);
  std::istringstream lines(buffer);
  std::string line;
  int done = 0;
  while (std::getline(lines, line)) {
    ++done;
    out.expect(line.find(" ok ") != std::string::npos, "(l,m,n)=" + line);
  }
  out.expect(done == 8, std::to_string(done) + "/8 cases finished within " + std::to_string(static_cast<int>(budget)) +
                            " s");
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance checks"};
  double budget = 600;
  app.add_option("--ring-c-budget", budget, "seconds allowed for the ring C cases");
  CLI11_PARSE(app, argc, argv);

  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"ring A(n) suite", ring_a_suite},
      {"ring B", ring_b},
      {"depth-zero codim-1 example", depth_zero_example},
      {"deformation bookkeeping", deformation},
      {"lattice suite", lattices},
      {"property suites", properties},
      {"invariance of domain", invariance},
      {"ring C (non-gating)", [budget] { return ring_c_suite(budget); }},
  };
  bool gating_ok = true;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto t = Clock::now();
    Outcome r;
    try {
      r = criteria[i].second();
    } catch (const std::exception& e) {
      r.expect(false, std::string("uncaught: ") + e.what());
    }
    std::printf("%s criterion %zu: %s (%.2f s)\n", r.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(),
                seconds_since(t));
    for (const auto& p : r.problems) std::printf("    %s\n", p.c_str());
    std::fflush(stdout);
    if (i + 1 < criteria.size()) gating_ok = gating_ok && r.pass;
  }
  return gating_ok ? 0 : 1;
}
