#include <benchmark/benchmark.h>

#include <vector>

#include "peakonlab/dynamics.hpp"
#include "peakonlab/functionals.hpp"

using namespace peakonlab;

namespace {

PeakonTrain train_of(std::size_t n) {
    std::vector<double> p(n), q(n);
    for (std::size_t i = 0; i < n; ++i) {
        p[i] = 0.5 + 0.01 * static_cast<double>(i);
        q[i] = 3.0 * static_cast<double>(i);
    }
    return PeakonTrain(p, q);
}

void BM_ode_rhs(benchmark::State& state) {
    const PeakonTrain t = train_of(static_cast<std::size_t>(state.range(0)));
    std::vector<double> qd(t.size()), pd(t.size());
    for (auto _ : state) {
        ode_rhs(t.p(), t.q(), qd, pd);
        benchmark::DoNotOptimize(pd.data());
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_ode_rhs)->RangeMultiplier(4)->Range(4, 4096)->Complexity(benchmark::oN);

void BM_integrate(benchmark::State& state) {
    const PeakonTrain t = train_of(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(flow(t, 1.0, 1e-10, 1e-12));
}
BENCHMARK(BM_integrate)->Arg(3)->Arg(32)->Arg(256);

void BM_helmholtz(benchmark::State& state) {
    const PeakonTrain t = train_of(4);
    const GridField f = sample_on_grid(t, grid_for(t, 25.0 / static_cast<double>(state.range(0))));
    for (auto _ : state) benchmark::DoNotOptimize(helmholtz_inverse(f));
    state.SetItemsProcessed(state.iterations() * static_cast<long>(f.grid.n));
}
BENCHMARK(BM_helmholtz)->Arg(100)->Arg(1000);

void BM_energy_quadrature(benchmark::State& state) {
    const PeakonTrain t = train_of(4);
    const GridField f = sample_on_grid(t, grid_for(t, 25.0 / static_cast<double>(state.range(0))));
    for (auto _ : state) benchmark::DoNotOptimize(energy_E(f) + energy_F(f));
    state.SetItemsProcessed(state.iterations() * static_cast<long>(f.grid.n));
}
BENCHMARK(BM_energy_quadrature)->Arg(100)->Arg(1000);

}  // namespace

BENCHMARK_MAIN();
