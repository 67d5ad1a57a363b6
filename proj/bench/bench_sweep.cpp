// Copyright 2026 The ecgap Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <benchmark/benchmark.h>
#include <omp.h>

#include "ecgap/decoder.hpp"
#include "ecgap/harness.hpp"
#include "ecgap/softout.hpp"

namespace {

using namespace ecgap;

SweepConfig config(int d, double p) {
    SweepConfig cfg;
    cfg.distances = {d};
    cfg.probs = {p};
    cfg.samples = 2000;
    cfg.master_seed = 1;
    return cfg;
}

// Whole sweep, serial reference against the OpenMP path.
void BM_SweepSerial(benchmark::State& state) {
    SweepConfig cfg = config(static_cast<int>(state.range(0)), 0.01);
    for (auto _ : state)
        benchmark::DoNotOptimize(run_sweep(cfg, Execution::serial));
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(cfg.samples));
}

void BM_SweepParallel(benchmark::State& state) {
    SweepConfig cfg = config(static_cast<int>(state.range(0)), 0.01);
    cfg.threads = static_cast<int>(state.range(1));
    for (auto _ : state)
        benchmark::DoNotOptimize(run_sweep(cfg, Execution::parallel));
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(cfg.samples));
}

void parallel_args(benchmark::internal::Benchmark* b) {
    const int max_threads = omp_get_max_threads();
    for (int d : {5, 9})
        for (int t = 1; t <= max_threads; t *= 2)
            b->Args({d, t});
}

// Per-method cost on a fixed set of decoded samples.
void BM_Method(benchmark::State& state) {
    const auto kind = static_cast<GapKind>(state.range(1));
    DecodingGraph g = build_phenomenological(static_cast<int>(state.range(0)), static_cast<int>(state.range(0)), 0.001);
    std::vector<ClusterState> states;
    for (std::uint64_t i = 0; states.size() < 256; ++i) {
        Syndrome s = syndrome_of(g, sample_errors(g, {7, i}));
        if (!s.empty())
            states.push_back(decode(g, s));
    }
    const Weight eps = epsilon_from_db(kDefaultEpsilonMaxDb);
    std::size_t i = 0;
    for (auto _ : state) {
        ContractedView view(g, states[i++ % states.size()]);
        switch (kind) {
            case GapKind::cluster:
                benchmark::DoNotOptimize(cluster_gap(view));
                break;
            case GapKind::bounded:
                benchmark::DoNotOptimize(bounded_cluster_gap(view, eps));
                break;
            case GapKind::extra:
                benchmark::DoNotOptimize(extra_cluster_gap(view, eps));
                break;
            case GapKind::extra_cg:
                benchmark::DoNotOptimize(extra_cluster_gap_cg(view, eps));
                break;
        }
    }
    state.SetLabel(std::string(to_string(kind)));
}

BENCHMARK(BM_SweepSerial)->Arg(5)->Arg(9)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SweepParallel)->Apply(parallel_args)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_Method)->ArgsProduct({{5, 9, 13}, {0, 1, 2, 3}})->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
