/*
   Copyright 2026 The hbtsim Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

// Serial reference implementations against the OpenMP kernels.
//   hbt_bench --benchmark_filter=scan
// The /N argument of each parallel benchmark is the worker count.

#include <benchmark/benchmark.h>
#include <omp.h>

#include <numbers>
#include <vector>

#include "hbt/analytic.hpp"
#include "hbt/extrema.hpp"
#include "hbt/frames.hpp"
#include "hbt/montecarlo.hpp"

using namespace hbt;

namespace {

mc::McConfig scan_config()
{
    mc::McConfig c;
    c.source_A.statistics = Statistics::thermal;
    c.source_B.statistics = Statistics::thermal;
    c.n_shots = 20000;
    c.seed = 1;
    return c;
}

const std::vector<double>& scan_grid()
{
    static const auto grid = analytic::uniform_grid(0.0, 2 * std::numbers::pi, 48);
    return grid;
}

const frames::ProfileStack& profiles()
{
    static const frames::ProfileStack p = [] {
        frames::SynthOptions opt;
        opt.statistics = Statistics::coherent;
        opt.seed = 1;
        return frames::reduce_y(frames::synth_frames(Geometry{}, opt), 50);
    }();
    return p;
}

void worker_args(benchmark::internal::Benchmark* b)
{
    const int max = omp_get_max_threads();
    for (int w = 1; w < max; w *= 2) {
        b->Arg(w);
    }
    b->Arg(max);
}

void BM_scan_reference(benchmark::State& state)
{
    const auto cfg = scan_config();
    for (auto _ : state) {
        benchmark::DoNotOptimize(mc::reference::estimate_scan(cfg, analytic::ScanMode::sync4, scan_grid()));
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(cfg.n_shots));
}

void BM_scan_parallel(benchmark::State& state)
{
    const auto cfg = scan_config();
    const Execution exec{static_cast<int>(state.range(0))};
    for (auto _ : state) {
        benchmark::DoNotOptimize(mc::estimate_scan(cfg, analytic::ScanMode::sync4, scan_grid(), exec));
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(cfg.n_shots));
}

void BM_g4_grid_reference(benchmark::State& state)
{
    const auto m = analytic::SingleSourceMoments::coherent();
    for (auto _ : state) {
        benchmark::DoNotOptimize(analytic::reference::g4_grid_extrema(m, 180));
    }
}

void BM_g4_grid_parallel(benchmark::State& state)
{
    const auto m = analytic::SingleSourceMoments::coherent();
    const Execution exec{static_cast<int>(state.range(0))};
    for (auto _ : state) {
        benchmark::DoNotOptimize(analytic::g4_grid_extrema(m, 180, exec));
    }
}

void BM_stack_reference(benchmark::State& state)
{
    for (auto _ : state) {
        benchmark::DoNotOptimize(frames::reference::stack_correlate(profiles()));
    }
}

void BM_stack_parallel(benchmark::State& state)
{
    const Execution exec{static_cast<int>(state.range(0))};
    for (auto _ : state) {
        benchmark::DoNotOptimize(frames::stack_correlate(profiles(), exec));
    }
}

} // namespace

BENCHMARK(BM_scan_reference)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_scan_parallel)->Apply(worker_args)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_g4_grid_reference)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_g4_grid_parallel)->Apply(worker_args)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_stack_reference)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_stack_parallel)->Apply(worker_args)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
