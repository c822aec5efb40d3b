#include <benchmark/benchmark.h>

#include <cmath>

#include "crpc/majorant.hpp"
#include "crpc/poisson.hpp"
#include "crpc/series_euclidean.hpp"
#include "crpc/series_isotropic.hpp"

using namespace crpc;

static void BM_PoissonSolve(benchmark::State& state) {
  const PolarGrid g = make_polar_grid(static_cast<int>(state.range(0)), 2 * static_cast<int>(state.range(0)));
  const ScalarField rhs = sample([](double x, double y) { return std::exp(x) * std::cos(y); }, g);
  for (auto _ : state) benchmark::DoNotOptimize(solve_poisson(rhs));
}
BENCHMARK(BM_PoissonSolve)->Arg(32)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);

static void BM_ExtendIsotropic(benchmark::State& state) {
  const PolarGrid g = make_polar_grid(64, 128);
  for (auto _ : state) {
    CoefficientSeries s = seed_isotropic(ComplexPoly{0.0, 0.0, 0.5, 0.0, 1.0 / 24}, g);
    extend(s, static_cast<int>(state.range(0)));
    benchmark::DoNotOptimize(s.coeffs.back());
  }
}
BENCHMARK(BM_ExtendIsotropic)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond);

static void BM_EllipticSolve(benchmark::State& state) {
  const auto method = static_cast<EllipticMethod>(state.range(0));
  const CoefficientSeries s = seed_scherk(make_polar_grid(32, 64));
  EllipticOptions opts;
  opts.method = method;
  for (auto _ : state) {
    CoefficientSeries c = s;
    extend_euclidean(c, 1, opts);
    benchmark::DoNotOptimize(c.coeffs.back());
  }
}
BENCHMARK(BM_EllipticSolve)
    ->Arg(static_cast<int>(EllipticMethod::Krylov))
    ->Arg(static_cast<int>(EllipticMethod::Direct))
    ->Unit(benchmark::kMillisecond);

static void BM_Majorant(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(majorant_euclidean(1.0, 1.0, static_cast<int>(state.range(0)), true));
}
BENCHMARK(BM_Majorant)->Arg(32)->Arg(100);
BENCHMARK_MAIN();
