// Serial reference vs OpenMP kernels for the Monte-Carlo correlation and the witness experiment.

#include <benchmark/benchmark.h>

#include <omp.h>

#include "ietlab/accel.hpp"
#include "ietlab/diophantine.hpp"
#include "ietlab/fixtures.hpp"
#include "ietlab/mixing.hpp"
#include "ietlab/ratner.hpp"

using namespace ietlab;

namespace {

struct MixingFixture {
    Iet G = golden_rotation();
    MixingProbe probe{golden_roof(G), G};
    BoundObservable g = probe.bind(Observable::bump(0.5, 0.2, 0.5, 0.4, true));
};

const MixingFixture& mixing() {
    static const MixingFixture f;
    return f;
}

void correlation(benchmark::State& state, bool parallel) {
    const auto& f = mixing();
    const auto n = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(f.probe.correlation(f.g, f.g, 50.0, n, 1, parallel).value);
    state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) * state.range(0));
    state.counters["threads"] = parallel ? omp_get_max_threads() : 1;
}

struct WitnessFixture {
    Acceleration acc = Acceleration::build(golden_rotation(), 60, mpq_class(3), 8);
    DcParams params = validate_params({mpq_class(101, 100), mpq_class(199, 200), mpq_class(9, 10), mpq_class(124, 125)},
                                      acc.nu(), acc.lbar(), 2);
    RoofSpec spec = golden_roof(acc.base());
    WitnessConfig cfg = [] {
        WitnessConfig c;
        c.gap = 1e-3;
        c.pairs = 16;
        return c;
    }();
    GoodSet good{acc, cfg.eps, params.tau_prime_d(), params.xi_d(), witness_levels(acc, params, spec, cfg)};
};

const WitnessFixture& witness() {
    static const WitnessFixture f;
    return f;
}

void witness_run(benchmark::State& state, bool parallel) {
    const auto& f = witness();
    for (auto _ : state)
        benchmark::DoNotOptimize(witness_experiment(f.acc, f.params, f.spec, f.cfg, f.good, parallel).verified);
    state.counters["threads"] = parallel ? omp_get_max_threads() : 1;
}

}  // namespace

BENCHMARK_CAPTURE(correlation, serial, false)->Arg(1 << 16)->Arg(1 << 19)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(correlation, openmp, true)->Arg(1 << 16)->Arg(1 << 19)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(witness_run, serial, false)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(witness_run, openmp, true)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
