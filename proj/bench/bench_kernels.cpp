// Serial reference against the OpenMP kernels. Results are identical by
// construction; only wall time differs.

#include <benchmark/benchmark.h>

#include <string>

#include "gfe/config.hpp"
#include "gfe/pdmp.hpp"
#include "gfe/spectral.hpp"
#include "gfe/tilt.hpp"

using namespace gfe;

namespace {

const Model& ub_model() {
    static const Model m = Model::validate(
        model_spec_from_config(KeyValueConfig::load(std::string(GFE_SOURCE_DIR) + "/configs/ub_14.cfg")));
    return m;
}

const Model& levy_model() {
    static const Model m = Model::validate(
        model_spec_from_config(KeyValueConfig::load(std::string(GFE_SOURCE_DIR) + "/configs/levy_142.cfg")));
    return m;
}

Execution mode(const benchmark::State& st) { return st.range(0) == 0 ? Execution::Serial : Execution::Parallel; }

void BM_hitting_set(benchmark::State& st) {
    for (auto _ : st) {
        auto set = sample_hitting_set(levy_model(), 1.0, 1.0, HitOptions{4000, 200.0, 7, mode(st)});
        benchmark::DoNotOptimize(set);
    }
    st.SetItemsProcessed(st.iterations() * 4000);
}

void BM_feynman_kac(benchmark::State& st) {
    const auto f = TestFunction::parse("bump:1.0;0.5");
    for (auto _ : st) {
        auto e = feynman_kac(ub_model(), 1.0, 2.0, f, PathOptions{20000, 7, mode(st)});
        benchmark::DoNotOptimize(e);
    }
    st.SetItemsProcessed(st.iterations() * 20000);
}

void BM_profile(benchmark::State& st) {
    const TiltedModel tm(ub_model(), Eigenfunction::constant_one(), 1.0);
    const auto f = TestFunction::parse("bump:1.0;0.5");
    for (auto _ : st) {
        auto p = asymptotic_profile(tm, f, 1.0, 4.0, ProfileOptions{10000, 7, mode(st)});
        benchmark::DoNotOptimize(p);
    }
}

void BM_occupation(benchmark::State& st) {
    const TiltedModel tm(ub_model(), Eigenfunction::constant_one(), 1.0);
    const auto f = TestFunction::parse("bump:1.0;0.5");
    for (auto _ : st) {
        auto e = occupation_measure(tm, f, OccupationOptions{5000, 1000.0, 7, mode(st)});
        benchmark::DoNotOptimize(e);
    }
}

}  // namespace

// Arg(0) serial reference, Arg(1) parallel
BENCHMARK(BM_hitting_set)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_feynman_kac)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_profile)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_occupation)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
