// Microbenchmarks for the lattice kernels and the integrator hot path.

#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

#include "latlab/analysis.hpp"
#include "latlab/integrator.hpp"
#include "latlab/rng.hpp"

using namespace latlab;

namespace {

LatticeWindow make_window(long halfwidth) {
    CounterRng rng(7);
    std::vector<double> vals(static_cast<std::size_t>(2 * halfwidth + 1));
    for (double& v : vals) v = rng.uniform(-1.0, 1.0);
    return LatticeWindow(-halfwidth, std::move(vals));
}

} // namespace

static void BM_Laplacian(benchmark::State& state) {
    LatticeWindow u = make_window(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(laplacian(u));
    state.SetItemsProcessed(state.iterations() * static_cast<long>(u.size()));
}
BENCHMARK(BM_Laplacian)->Arg(32)->Arg(256)->Arg(2048);

static void BM_InnerProduct(benchmark::State& state) {
    LatticeWindow u = make_window(state.range(0));
    LatticeWindow v = make_window(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(inner_product(u, v));
    state.SetItemsProcessed(state.iterations() * static_cast<long>(u.size()));
}
BENCHMARK(BM_InnerProduct)->Arg(32)->Arg(256)->Arg(2048);

static void BM_NemytskiiCubic(benchmark::State& state) {
    auto cubic = MonotoneScalarFunction::cubic();
    LatticeWindow u = make_window(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(nemytskii(cubic, u));
    state.SetItemsProcessed(state.iterations() * static_cast<long>(u.size()));
}
BENCHMARK(BM_NemytskiiCubic)->Arg(32)->Arg(256)->Arg(2048);

static void BM_IntegrateExample(benchmark::State& state) {
    SemiflowParams params{1.0, 1.0};
    auto f = MonotoneScalarFunction::cubic();
    auto g = QuasiPeriodicForcing::dyadic_affine(5, 1.0, 0.1);
    IntegratorConfig cfg;
    cfg.window_halfwidth = state.range(0);
    LatticeWindow v0 = make_window(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(integrate(params, f, g, v0, 0.0, 1.0, cfg));
    }
}
BENCHMARK(BM_IntegrateExample)->Arg(32)->Arg(128)->Unit(benchmark::kMillisecond);

static void BM_AlmostPeriodScan(benchmark::State& state) {
    TrajectorySample traj;
    const double step = 5e-3;
    for (long k = 0; k <= 8000; ++k) {
        double t = static_cast<double>(k) * step;
        traj.times.push_back(t);
        traj.states.emplace_back(0, std::vector<double>{std::sin(t)});
    }
    for (auto _ : state) {
        benchmark::DoNotOptimize(almost_period_scan(traj, 0.1, 10.0, nullptr, 1));
    }
}
BENCHMARK(BM_AlmostPeriodScan)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
