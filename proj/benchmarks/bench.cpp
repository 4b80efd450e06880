#include <benchmark/benchmark.h>

#include "prw/counterexample.hpp"
#include "prw/criteria.hpp"
#include "prw/montecarlo.hpp"
#include "prw/skeleton.hpp"

namespace {

prw::LatticePMF lazy_jump() {
    return prw::LatticePMF::from_points({{-1, 0.375}, {0, 0.25}, {1, 0.375}});
}

void bm_convolve(benchmark::State& state) {
    prw::LatticePMF a = prw::LatticePMF::uniform(-state.range(0), 2 * state.range(0) + 1);
    for (auto _ : state) benchmark::DoNotOptimize(prw::convolve(a, a));
    state.SetComplexityN(state.range(0));
}
BENCHMARK(bm_convolve)->Range(64, 1 << 14)->Complexity();

void bm_n_fold(benchmark::State& state) {
    prw::LatticePMF j = lazy_jump();
    for (auto _ : state)
        benchmark::DoNotOptimize(prw::n_fold(j, static_cast<std::uint64_t>(state.range(0))));
}
BENCHMARK(bm_n_fold)->Range(16, 4096);

void bm_series_terms_dense(benchmark::State& state) {
    prw::TermsOptions opts;
    opts.engine = prw::TermsOptions::Engine::Dense;
    for (auto _ : state)
        benchmark::DoNotOptimize(
            prw::series_criterion_terms(lazy_jump(), lazy_jump(), state.range(0), opts));
}
BENCHMARK(bm_series_terms_dense)->Range(32, 1024);

void bm_series_terms_spectral(benchmark::State& state) {
    prw::TermsOptions opts;
    opts.engine = prw::TermsOptions::Engine::Spectral;
    for (auto _ : state)
        benchmark::DoNotOptimize(
            prw::series_criterion_terms(lazy_jump(), lazy_jump(), state.range(0), opts));
}
BENCHMARK(bm_series_terms_spectral)->Range(32, 4096);

void bm_simulate_steps(benchmark::State& state) {
    prw::QuadCombSpec q = prw::drrw_to_quadcomb(prw::DRRWSpec{}, 1);
    std::uint64_t stream = 0;
    for (auto _ : state) {
        prw::PrwStepper st(q, 12345, stream++);
        for (std::int64_t k = 0; k < state.range(0); ++k) benchmark::DoNotOptimize(st.step());
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(bm_simulate_steps)->Range(1 << 10, 1 << 18);

void bm_build_sequence(benchmark::State& state) {
    prw::CexParams params;
    for (auto _ : state)
        benchmark::DoNotOptimize(prw::build_sequence(params, static_cast<int>(state.range(0))));
}
BENCHMARK(bm_build_sequence)->DenseRange(4, 16, 4);

void bm_verify_constraints(benchmark::State& state) {
    prw::CexParams params;
    prw::CexSequence seq = prw::build_sequence(params, static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(prw::verify_constraints(seq, params));
}
BENCHMARK(bm_verify_constraints)->DenseRange(4, 16, 4);

void bm_build_kernel(benchmark::State& state) {
    prw::QuadCombSpec q = prw::drrw_to_quadcomb(prw::DRRWSpec{}, 1);
    for (auto _ : state) benchmark::DoNotOptimize(prw::build_kernel(q));
}
BENCHMARK(bm_build_kernel);

} // namespace
