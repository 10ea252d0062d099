#include <benchmark/benchmark.h>

#include "cycloid/io.hpp"
#include "cycloid/semantics.hpp"

using namespace cycloid;

namespace {

void BM_Normalize(benchmark::State& state) {
    const CycloidSpec spec{4, 3, 3, 6};
    Int xi = -1000;
    for (auto _ : state) {
        NormalizationWitness w = normalize(spec, {xi++, -7 * xi});
        benchmark::DoNotOptimize(w.representative);
    }
}
BENCHMARK(BM_Normalize);

void BM_Synthesize(benchmark::State& state) {
    const CycloidSpec spec{4, 3, 3, 3};
    for (auto _ : state) {
        Net net = synthesize(spec);
        benchmark::DoNotOptimize(net.arcs.size());
    }
}
BENCHMARK(BM_Synthesize);

void BM_FoldedReachability(benchmark::State& state) {
    const CycloidSpec spec{4, 3, 3, 3};
    Net folded = backward_fold(attach_regular_labels(synthesize(spec)), total_fold(spec));
    Marking m0 = fold_marking(folded, regular_marking(spec));
    for (auto _ : state) {
        ReachabilityGraph rg = reachability(folded, m0);
        benchmark::DoNotOptimize(rg.states.size());
    }
}
BENCHMARK(BM_FoldedReachability);

void BM_DualityIsomorphism(benchmark::State& state) {
    Net a = synthesize({4, 4, 4, 4});
    Net b = synthesize(dual({4, 4, 4, 4}));
    for (auto _ : state) {
        PropertyReport report = isomorphic(a, b);
        benchmark::DoNotOptimize(report.holds);
    }
}
BENCHMARK(BM_DualityIsomorphism);

void BM_JsonExport(benchmark::State& state) {
    Net folded = backward_fold(attach_regular_labels(synthesize({4, 3, 3, 3})),
                               total_fold({4, 3, 3, 3}));
    Marking m0 = fold_marking(folded, regular_marking({4, 3, 3, 3}));
    for (auto _ : state) {
        SerializedNet doc = export_net(folded, m0, ExportFormat::json);
        benchmark::DoNotOptimize(doc.payload.size());
    }
}
BENCHMARK(BM_JsonExport);

} // namespace

BENCHMARK_MAIN();
