#include <benchmark/benchmark.h>

#include "concmeas/eigensolver.hpp"
#include "concmeas/measures.hpp"
#include "concmeas/orthopoly.hpp"
#include "concmeas/special.hpp"
#include "concmeas/turning.hpp"
#include "concmeas/wkb.hpp"

using namespace concmeas;

static void BM_SolveHarmonic(benchmark::State& state) {
  const int k = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(solve_indices(PotentialSpec::harmonic(), {k}));
}
BENCHMARK(BM_SolveHarmonic)->Arg(10)->Arg(40)->Arg(80)->Unit(benchmark::kMillisecond);

static void BM_SolveQuartic(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(solve_indices(PotentialSpec::monomial(4.0), {40}));
}
BENCHMARK(BM_SolveQuartic)->Unit(benchmark::kMillisecond);

static void BM_BesselJY(benchmark::State& state) {
  double x = 0.5;
  for (auto _ : state) {
    benchmark::DoNotOptimize(special::bessel_jy(1.0 / 3.0, x));
    x = x < 50.0 ? x * 1.1 : 0.5;
  }
}
BENCHMARK(BM_BesselJY);

static void BM_AiryParts(benchmark::State& state) {
  double z = -8.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(special::airy_parts(z));
    z = z < 8.0 ? z + 0.37 : -8.0;
  }
}
BENCHMARK(BM_AiryParts);

static void BM_Zeta(benchmark::State& state) {
  const PhaseContext ctx(PotentialSpec::monomial(4.0), 500.0);
  const double xl = ctx.turning().x_lambda;
  double x = 0.1 * xl;
  for (auto _ : state) {
    benchmark::DoNotOptimize(ctx.zeta(x));
    x = x < 1.4 * xl ? x + 0.013 * xl : 0.1 * xl;
  }
}
BENCHMARK(BM_Zeta);

static void BM_JKIntegral(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(JK_integral(PhaseContext(PotentialSpec::harmonic(), 400.0)));
}
BENCHMARK(BM_JKIntegral)->Unit(benchmark::kMillisecond);

static void BM_Stieltjes(benchmark::State& state) {
  const double alpha = static_cast<double>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(build_recurrence(alpha, 60));
}
BENCHMARK(BM_Stieltjes)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);

static void BM_RescaledMeasure(benchmark::State& state) {
  const auto spec = PotentialSpec::harmonic();
  const auto pair = solve_indices(spec, {40})[0];
  const double xl = turning_point(spec, pair.lambda);
  for (auto _ : state) benchmark::DoNotOptimize(rescaled_measure(pair, xl));
}
BENCHMARK(BM_RescaledMeasure)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
