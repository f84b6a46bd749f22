#include <benchmark/benchmark.h>

#include <random>

#include "congru/congruence.hpp"

using namespace congru;

namespace {

// Each iteration builds a fresh algebra so the memo starts empty.
AugmentedAlgebra algebra(const Dvr& o, const std::vector<std::string>& vars, const std::vector<std::string>& rels,
                         unsigned c) {
  PolyRing r(o, vars);
  std::vector<Poly> ps;
  for (const auto& s : rels) ps.push_back(r.parse(s));
  return build_algebra(r, ps, std::vector<Scalar>(vars.size(), o.zero()), c);
}

void BM_EtaRingA(benchmark::State& state) {
  const Dvr o = Dvr::p_adic(5);
  const std::string rel = "x*(x - pi^" + std::to_string(state.range(0)) + ")";
  for (auto _ : state) {
    const auto a = algebra(o, {"x"}, {rel}, 0);
    benchmark::DoNotOptimize(eta(FpModule::free(a)));
  }
}
BENCHMARK(BM_EtaRingA)->DenseRange(1, 4)->Unit(benchmark::kMillisecond);

void BM_ReportRingB(benchmark::State& state) {
  const Dvr o = Dvr::p_adic(3);
  for (auto _ : state) {
    const auto b = algebra(o, {"x", "y"}, {"x*(x - pi)", "y*(y - pi)", "x*y"}, 0);
    benchmark::DoNotOptimize(congruence_report(FpModule::free(b)));
  }
}
BENCHMARK(BM_ReportRingB)->Unit(benchmark::kMillisecond);

void BM_EtaCodimOne(benchmark::State& state) {
  const Dvr o = Dvr::p_adic(3);
  for (auto _ : state) {
    const auto a = algebra(o, {"x", "y"}, {"x*(x - pi)", "x*pi^2", "x*y"}, 1);
    benchmark::DoNotOptimize(eta(FpModule::free(a)));
  }
}
BENCHMARK(BM_EtaCodimOne)->Unit(benchmark::kMillisecond);

void BM_SerreRegular(benchmark::State& state) {
  const Dvr o = Dvr::p_adic(3);
  for (auto _ : state) {
    const auto a = algebra(o, {"x", "y", "z"}, {}, 3);
    benchmark::DoNotOptimize(serre_check(a, true));
  }
}
BENCHMARK(BM_SerreRegular)->Unit(benchmark::kMillisecond);

void BM_SmithForm(benchmark::State& state) {
  const Dvr o = Dvr::p_adic(3);
  const auto n = static_cast<std::size_t>(state.range(0));
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<long> dist(-200, 200);
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m(i, j) = o.from_int(dist(rng)) * o.pi_power(static_cast<long>((i + j) % 3));
  for (auto _ : state) benchmark::DoNotOptimize(smith_form(m));
}
BENCHMARK(BM_SmithForm)->Arg(8)->Arg(16)->Arg(32);

}  // namespace
BENCHMARK_MAIN();
