#include <benchmark/benchmark.h>

#include "ldplab/densities.hpp"
#include "ldplab/linalg.hpp"
#include "ldplab/projections.hpp"
#include "ldplab/rates.hpp"
#include "ldplab/samplers.hpp"

using namespace ldplab;

static void BM_HaarStiefel(benchmark::State& state) {
    const int k = static_cast<int>(state.range(0));
    const int n = static_cast<int>(state.range(1));
    SeededRng rng(1);
    for (auto _ : state) {
        benchmark::DoNotOptimize(haar_stiefel(rng, k, n));
    }
}
BENCHMARK(BM_HaarStiefel)->Args({1, 100})->Args({2, 100})->Args({4, 400})->Args({16, 64});

static void BM_StiefelCorner(benchmark::State& state) {
    const int k = static_cast<int>(state.range(0));
    const int n = static_cast<int>(state.range(1));
    SeededRng rng(2);
    for (auto _ : state) {
        benchmark::DoNotOptimize(stiefel_corner(rng, k, 1, n));
    }
}
BENCHMARK(BM_StiefelCorner)->Args({1, 100})->Args({1, 2000})->Args({2, 400});

static void BM_GramEigen(benchmark::State& state) {
    const int k = static_cast<int>(state.range(0));
    SeededRng rng(3);
    const DenseMatrix a = gaussian_matrix(rng, k, 4 * k);
    for (auto _ : state) {
        benchmark::DoNotOptimize(sym_eigenvalues(gram(a)));
    }
}
BENCHMARK(BM_GramEigen)->Arg(2)->Arg(8)->Arg(32);

static void BM_RateTruncated(benchmark::State& state) {
    SeededRng rng(4);
    DenseMatrix a = gaussian_matrix(rng, 3, static_cast<int>(state.range(0)));
    a *= 0.9 / std::sqrt(operator_norm(gram(a)));
    const ColumnList cols = ColumnList::from_matrix(a);
    for (auto _ : state) {
        benchmark::DoNotOptimize(rate_truncated(cols));
    }
}
BENCHMARK(BM_RateTruncated)->Arg(10)->Arg(100);

static void BM_LogCornerDensity(benchmark::State& state) {
    const DenseMatrix a = DenseMatrix::Constant(2, 2, 0.2);
    for (auto _ : state) {
        benchmark::DoNotOptimize(log_corner_density(a, 2, 2, 500));
    }
}
BENCHMARK(BM_LogCornerDensity);

static void BM_LogPGaussianDensity(benchmark::State& state) {
    double x = 0.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(log_p_gaussian_density(x, 1.5));
        x += 1e-3;
    }
}
BENCHMARK(BM_LogPGaussianDensity);

static void BM_LevyProkhorov(benchmark::State& state) {
    const int count = static_cast<int>(state.range(0));
    SeededRng rng(5);
    const EmpiricalMeasure mu(gaussian_matrix(rng, 1, count));
    const EmpiricalMeasure nu(gaussian_matrix(rng, 1, count));
    for (auto _ : state) {
        benchmark::DoNotOptimize(levy_prokhorov(mu, nu, 50));
    }
}
BENCHMARK(BM_LevyProkhorov)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);

static void BM_ProjectedCf(benchmark::State& state) {
    const ProjectedLaw law(ColumnList(2, {Vector{{0.5, 0.2}}, Vector{{-0.1, 0.6}}}), 0.8,
                           ProductLaw::p_gaussian(PGaussianParams(1.5)));
    const Vector t{{0.7, -1.2}};
    for (auto _ : state) {
        benchmark::DoNotOptimize(characteristic_function(law, t));
    }
}
BENCHMARK(BM_ProjectedCf);

BENCHMARK_MAIN();
