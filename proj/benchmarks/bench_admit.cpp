#include "admit/admissibility.hpp"
#include "admit/feature_axes.hpp"
#include "admit/interpret.hpp"
#include "admit/underwriting.hpp"
#include "admit/witness_info.hpp"

#include <benchmark/benchmark.h>

#include <numeric>

using namespace admit;

namespace {

WitnessSet random_set(std::size_t d, std::size_t n, std::uint64_t seed) {
    // Shift every point toward e0 so most sets stay coherent.
    std::vector<UnitVector> w;
    for (const auto& u : sample_uniform_sphere(d, n, seed)) {
        Eigen::VectorXd v = u.coords();
        v[0] += 1.5;
        w.push_back(normalize(v));
    }
    return WitnessSet(w);
}

void BM_CheckFeasibility(benchmark::State& state) {
    const auto d = static_cast<std::size_t>(state.range(0));
    const auto n = static_cast<std::size_t>(state.range(1));
    const WitnessSet w = random_set(d, n, 11);
    for (auto _ : state) benchmark::DoNotOptimize(check_feasibility(w));
}
BENCHMARK(BM_CheckFeasibility)->Args({3, 6})->Args({8, 16})->Args({21, 7})->Args({64, 64});

void BM_Contains(benchmark::State& state) {
    const auto region = build_region(random_set(8, 12, 12));
    const auto probes = sample_uniform_sphere(8, 1024, 13);
    std::size_t i = 0;
    for (auto _ : state) benchmark::DoNotOptimize(contains(region, probes[i++ % probes.size()]));
}
BENCHMARK(BM_Contains);

void BM_InterpretLoan(benchmark::State& state) {
    static const RegimeConfig cfg = parse_regime_config(default_regime_config_text(), default_extractors());
    const auto loans = generate_dataset(256, 0.05, 14);
    std::vector<WitnessSet> sets;
    for (const auto& l : loans) sets.push_back(extract_witnesses(l, cfg.extractors));
    const auto& regime = cfg.regimes.at(static_cast<std::size_t>(state.range(0)));
    std::size_t i = 0;
    for (auto _ : state) {
        OptimizerOptions o;
        o.seed = i;
        benchmark::DoNotOptimize(interpret(sets[i++ % sets.size()], regime, o));
    }
    state.SetLabel(regime.name);
}
BENCHMARK(BM_InterpretLoan)->DenseRange(0, 2)->Unit(benchmark::kMicrosecond);

void BM_Sketch(benchmark::State& state) {
    std::vector<std::uint64_t> ids(static_cast<std::size_t>(state.range(0)));
    std::iota(ids.begin(), ids.end(), 0);
    const DiscreteWitnessSet a(ids);
    const auto m = static_cast<std::size_t>(state.range(1));
    for (auto _ : state) benchmark::DoNotOptimize(sketch(a, m, 15));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Sketch)->Args({1000, 256})->Args({10000, 1024})->Args({10000, 4096});

void BM_SketchAgreement(benchmark::State& state) {
    std::vector<std::uint64_t> ids(5000);
    std::iota(ids.begin(), ids.end(), 0);
    const auto s = sketch(DiscreteWitnessSet(ids), 4096, 16);
    std::iota(ids.begin(), ids.end(), 2500);
    const auto t = sketch(DiscreteWitnessSet(ids), 4096, 16);
    for (auto _ : state) benchmark::DoNotOptimize(sketch_agreement(s, t));
}
BENCHMARK(BM_SketchAgreement);

}  // namespace

BENCHMARK_MAIN();
