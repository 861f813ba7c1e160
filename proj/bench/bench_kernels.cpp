// Serial vs OpenMP timings of the data-parallel kernels: profile sampling
// (closed form and layered) and the calibration objective.

#include <benchmark/benchmark.h>

#include <cmath>
#include <string>

#include "epile/calibration.hpp"
#include "epile/homogeneous.hpp"
#include "epile/layered.hpp"

using namespace epile;

namespace {

Execution mode(const benchmark::State& state) {
    return state.range(1) == 0 ? Execution::serial : Execution::parallel;
}

PileSection lausanne_pile() { return make_circular_pile(26.0, 0.56, 29.2e9, 1e-5); }

SoilProfile lausanne_profile() {
    return SoilProfile{{{4.0, 121.4e6, "C"}, {10.0, 18.2e6, "B"}, {6.5, 10.8e6, "A2"}, {5.5, 16.7e6, "A1"}},
                       TipStiffness::spring(6675e6)};
}

void BM_HomogeneousSampling(benchmark::State& state) {
    const auto c = make_homogeneous_case(make_circular_pile(12.8, 1.22, 7.17e9, 7.5e-6), 55e6,
                                         TipStiffness::spring(100e6), {20.0, -500e3});
    const auto n = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(sample_profile(c, n, mode(state)));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_LayeredSampling(benchmark::State& state) {
    const LayeredCase c(lausanne_pile(), lausanne_profile(), {14.0, -1000e3});
    const auto per_layer = static_cast<std::size_t>(state.range(0)) / 4;
    for (auto _ : state) benchmark::DoNotOptimize(sample_layered_profile(c, per_layer, mode(state)));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_CalibrationObjective(benchmark::State& state) {
    using namespace calibration;
    FitSpec spec;
    spec.pile = lausanne_pile();
    spec.profile = lausanne_profile();
    spec.loads = {{"T1", {13.4, 0.0}}, {"T7", {14.0, -1000e3}}};
    spec.free = {FreeParameter{{Parameter::Target::tip_stiffness, 0}, 100e6, 20000e6, "k_b"}};
    const auto n = static_cast<std::size_t>(state.range(0));
    for (std::size_t j = 0; j < n; ++j) {
        const double x = 26.0 * (static_cast<double>(j) + 0.5) / static_cast<double>(n);
        spec.observations.push_back(
            {ObservationKind::strain, x, 1e-4 * std::sin(x), 1.0, j % 2 ? "T1" : "T7"});
    }
    spec.execution = mode(state);
    const std::vector<double> p{3000e6};
    for (auto _ : state) benchmark::DoNotOptimize(objective(p, spec));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

void sizes(benchmark::internal::Benchmark* b) {
    for (long n : {1L << 10, 1L << 14, 1L << 18}) {
        b->Args({n, 0});
        b->Args({n, 1});
    }
    b->ArgNames({"n", "parallel"});
}

} // namespace

BENCHMARK(BM_HomogeneousSampling)->Apply(sizes);
BENCHMARK(BM_LayeredSampling)->Apply(sizes);
BENCHMARK(BM_CalibrationObjective)->Apply(sizes);

BENCHMARK_MAIN();
