#include <benchmark/benchmark.h>

#include "resonant/field.hpp"
#include "resonant/kernel.hpp"
#include "resonant/lattice.hpp"
#include "resonant/rng.hpp"
#include "resonant/sequence.hpp"

using namespace resonant;

namespace {

void BM_EnumerateFast(benchmark::State& st) {
    const FrequencyWindow w(static_cast<int>(st.range(0)));
    for (auto _ : st) benchmark::DoNotOptimize(enumerate_triples({1, -2}, w));
}
BENCHMARK(BM_EnumerateFast)->Arg(4)->Arg(8)->Arg(16);

void BM_EnumerateOracle(benchmark::State& st) {
    const FrequencyWindow w(static_cast<int>(st.range(0)));
    for (auto _ : st) benchmark::DoNotOptimize(enumerate_triples_oracle({1, -2}, w));
}
BENCHMARK(BM_EnumerateOracle)->Arg(4)->Arg(8)->Arg(16);

void BM_BuildTable(benchmark::State& st) {
    const FrequencyWindow w(static_cast<int>(st.range(0)));
    for (auto _ : st) benchmark::DoNotOptimize(build_table(w));
}
BENCHMARK(BM_BuildTable)->Arg(4)->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond);

void BM_NonlinearDirect(benchmark::State& st) {
    const FrequencyWindow w(static_cast<int>(st.range(0)));
    const ResonantTable t = build_table(w);
    CounterRng rng(1, "bench", 0);
    const auto a = random_sequence(w, rng);
    for (auto _ : st) benchmark::DoNotOptimize(apply_nonlinearity_direct(a, t));
}
BENCHMARK(BM_NonlinearDirect)->Arg(4)->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond);

void BM_NonlinearSpectral(benchmark::State& st) {
    const FrequencyWindow w(static_cast<int>(st.range(0)));
    CounterRng rng(1, "bench", 0);
    const auto a = random_sequence(w, rng);
    SpectralOptions o;
    o.workers = 1;
    for (auto _ : st) benchmark::DoNotOptimize(apply_nonlinearity_spectral(a, o));
}
BENCHMARK(BM_NonlinearSpectral)->Arg(4)->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond);

// 64 lanes through the full K = 3 kernel, the inner loop of a field step.
void BM_KernelApply(benchmark::State& st) {
    const FrequencyWindow w(3);
    const ResonantTable t = build_table(w);
    const ResonanceKernel k(t);
    constexpr std::size_t L = 64;
    std::vector<double> re(w.size() * L), im(w.size() * L), fr(w.size() * L), fi(w.size() * L);
    CounterRng rng(1, "bench/kernel", 0);
    for (std::size_t i = 0; i < re.size(); ++i) {
        re[i] = rng.normal();
        im[i] = rng.normal();
    }
    for (auto _ : st) {
        k.apply(re.data(), im.data(), L, fr.data(), fi.data());
        benchmark::DoNotOptimize(fr.data());
    }
    st.SetItemsProcessed(static_cast<std::int64_t>(st.iterations() * L));
}
BENCHMARK(BM_KernelApply);

void BM_StrangStep(benchmark::State& st) {
    const std::string name = st.range(0) == 0 ? "square" : "full-window";
    BundledConfig b = bundled_config(name);
    FieldState s = b.initial;
    for (auto _ : st) strang_step(s, b.sim.dt, b.sim);
    st.SetLabel(name);
}
BENCHMARK(BM_StrangStep)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
