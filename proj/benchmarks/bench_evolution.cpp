#include "projcool/analysis.hpp"
#include "projcool/evolution.hpp"
#include "projcool/harness.hpp"

#include <benchmark/benchmark.h>

using namespace projcool;

namespace {

ModelSpec chain_of(int L) { return ModelSpec::model1b(L, 5); }

void BM_SpectralStep(benchmark::State& state) {
    const ModelSpec spec = chain_of(static_cast<int>(state.range(0)));
    ModelSystem system(spec);
    system.exact_ground_state();  // exclude the one-time eigensolve
    EvolveOptions opt;
    opt.steps = 1;
    opt.engine = ExpEngine::Spectral;
    const StateVector init = spread_state(spec);
    for (auto _ : state) {
        auto t = evolve(system, Schedule::projected_cooling(), opt, init);
        benchmark::DoNotOptimize(t.final_state.amps.data());
    }
    state.SetComplexityN(spec.shape().dim());
}
BENCHMARK(BM_SpectralStep)->Arg(25)->Arg(100)->Arg(200)->Complexity();

void BM_ChebyshevStep(benchmark::State& state) {
    const ModelSpec spec = chain_of(static_cast<int>(state.range(0)));
    ModelSystem system(spec);
    system.exact_ground_state();  // exclude the one-time eigensolve
    EvolveOptions opt;
    opt.steps = 1;
    opt.engine = ExpEngine::Chebyshev;
    const StateVector init = spread_state(spec);
    for (auto _ : state) {
        auto t = evolve(system, Schedule::projected_cooling(), opt, init);
        benchmark::DoNotOptimize(t.final_state.amps.data());
    }
    state.SetComplexityN(spec.shape().dim());
}
BENCHMARK(BM_ChebyshevStep)->Arg(25)->Arg(200)->Arg(800)->Complexity();

void BM_TrotterStep(benchmark::State& state) {
    const ModelSpec spec = chain_of(static_cast<int>(state.range(0)));
    ModelSystem system(spec);
    system.exact_ground_state();  // exclude the one-time eigensolve
    EvolveOptions opt;
    opt.steps = 1;
    opt.method = StepMethod::Trotter;
    const StateVector init = spread_state(spec);
    for (auto _ : state) {
        auto t = evolve(system, Schedule::projected_cooling(), opt, init);
        benchmark::DoNotOptimize(t.final_state.amps.data());
    }
    state.SetComplexityN(spec.shape().dim());
}
BENCHMARK(BM_TrotterStep)->Arg(25)->Arg(200)->Arg(800)->Complexity();

void BM_TwoParticleChebyshevRun(benchmark::State& state) {
    const ModelSpec spec = ModelSpec::model2(static_cast<int>(state.range(0)), 5);
    ModelSystem system(spec);
    system.exact_ground_state();  // exclude the one-time eigensolve
    EvolveOptions opt;
    opt.steps = 40;
    opt.engine = ExpEngine::Chebyshev;
    const StateVector init = spread_state(spec);
    for (auto _ : state) {
        auto t = evolve(system, Schedule::projected_cooling(), opt, init);
        benchmark::DoNotOptimize(t.records.back().overlap);
    }
}
BENCHMARK(BM_TwoParticleChebyshevRun)->Arg(12)->Arg(25)->Unit(benchmark::kMillisecond);

void BM_GroundState(benchmark::State& state) {
    const SectorOperator h = build_hamiltonian(chain_of(static_cast<int>(state.range(0))));
    for (auto _ : state) {
        auto s = ground_state(h);
        benchmark::DoNotOptimize(s.eigenvalues.data());
    }
    state.SetComplexityN(h.mat.rows());
}
BENCHMARK(BM_GroundState)->Arg(100)->Arg(400)->Arg(800)->Complexity();

}  // namespace

BENCHMARK_MAIN();
