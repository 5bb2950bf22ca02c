#include <benchmark/benchmark.h>

#include "dzeta/series.hpp"
#include "dzeta/solver.hpp"
#include "dzeta/zeros.hpp"

using namespace dzeta;

namespace {

const std::vector<ZetaZero>& zeros() {
  static const auto z = load_zero_file(std::filesystem::path(DZETA_BENCH_DATA_DIR) / "zeros_1-300_850d.txt", 850);
  return z;
}

}  // namespace

static void BM_PowIntNegS(benchmark::State& state) {
  const auto ctx = PrecisionContext::from_digits(state.range(0));
  const BigComplex s = BigComplex::parse("0.5", "14.134725141734693790457", ctx);
  unsigned long n = 2;
  for (auto _ : state) {
    benchmark::DoNotOptimize(pow_int_neg_s(n, s, ctx));
    n = n % 997 + 2;
  }
}
BENCHMARK(BM_PowIntNegS)->Arg(50)->Arg(300)->Arg(1000);

static void BM_Eta(benchmark::State& state) {
  const auto ctx = PrecisionContext::from_digits(state.range(0));
  const BigComplex s = BigComplex::parse("0.5", std::to_string(state.range(1)), ctx);
  for (auto _ : state) benchmark::DoNotOptimize(eta(s, ctx));
}
BENCHMARK(BM_Eta)->Args({100, 14})->Args({100, 300})->Args({500, 14})->Unit(benchmark::kMillisecond);

static void BM_SolveDelta(benchmark::State& state) {
  const int M = static_cast<int>(state.range(0));
  const auto ctx = working_context(state.range(1), M);
  for (auto _ : state) benchmark::DoNotOptimize(solve_delta(zeros(), M, ctx));
  state.SetComplexityN(M);
}
BENCHMARK(BM_SolveDelta)->Args({8, 100})->Args({25, 100})->Args({50, 100})->Args({50, 300})->Unit(benchmark::kMillisecond);

static void BM_Ladder(benchmark::State& state) {
  const int M = static_cast<int>(state.range(0));
  const auto ctx = working_context(100, M);
  for (auto _ : state) benchmark::DoNotOptimize(solve_delta_ladder(zeros(), M, ctx));
}
BENCHMARK(BM_Ladder)->Arg(25)->Arg(50)->Unit(benchmark::kMillisecond);

static void BM_DirichletDivide(benchmark::State& state) {
  const auto ctx = PrecisionContext::from_digits(200);
  const auto f = FiniteDirichletSeries::alternating(static_cast<std::size_t>(state.range(0)), ctx);
  for (auto _ : state) benchmark::DoNotOptimize(dirichlet_divide(f, f.size()));
}
BENCHMARK(BM_DirichletDivide)->Arg(101)->Arg(1001);

BENCHMARK_MAIN();
