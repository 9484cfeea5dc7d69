// Copyright 2026 The qmetro Authors
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

#include "qmetro/multiparam_mle.hpp"
#include "qmetro/oracle_sim.hpp"

namespace {

using namespace qmetro;

SwapDistribution bench_distribution() {
    NoiseModel noise{PauliChannelSpec::dephasing(0.0005), NoisePlacement::EndOfEvolution, TieRule::CountAsFailure};
    LogicalState rho = noisy_probe(HamiltonianSpec::single(3, 0.001, 100), noise).state();
    return joint_distribution(rho, restrict_observable(ObservableName::GHZyProjector, 3));
}

void BM_SampleCountsSerial(benchmark::State &state) {
    SwapDistribution d = bench_distribution();
    for (auto _ : state) {
        benchmark::DoNotOptimize(sample_counts_serial(d, state.range(0), 42));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_SampleCountsParallel(benchmark::State &state) {
    SwapDistribution d = bench_distribution();
    for (auto _ : state) {
        benchmark::DoNotOptimize(sample_counts(d, state.range(0), 42));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_EnumerateSerial(benchmark::State &state) {
    PauliChannelSpec spec = PauliChannelSpec::make(0.001, 0.002, 0.003);
    for (auto _ : state) {
        benchmark::DoNotOptimize(oracle::enumerate_qec_channel_serial(static_cast<int>(state.range(0)), spec, TieRule::CountAsFailure));
    }
}

void BM_EnumerateParallel(benchmark::State &state) {
    PauliChannelSpec spec = PauliChannelSpec::make(0.001, 0.002, 0.003);
    for (auto _ : state) {
        benchmark::DoNotOptimize(oracle::enumerate_qec_channel(static_cast<int>(state.range(0)), spec, TieRule::CountAsFailure));
    }
}

void BM_GeneratingFunction(benchmark::State &state) {
    PauliChannelSpec spec = PauliChannelSpec::make(0.001, 0.002, 0.003);
    for (auto _ : state) {
        benchmark::DoNotOptimize(qec_effective_channel(static_cast<int>(state.range(0)), spec));
    }
}

}  // namespace

BENCHMARK(BM_SampleCountsSerial)->Arg(1000000)->Arg(10000000)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_SampleCountsParallel)->Arg(1000000)->Arg(10000000)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_EnumerateSerial)->DenseRange(8, 10)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_EnumerateParallel)->DenseRange(8, 10)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_GeneratingFunction)->DenseRange(8, 10)->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();
