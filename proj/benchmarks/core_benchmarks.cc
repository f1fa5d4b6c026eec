// Copyright 2026 The rbarray Authors
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

#include "rbarray/clifford.h"
#include "rbarray/noise.h"
#include "rbarray/rb.h"
#include "rbarray/site_select.h"
#include "rbarray/su2.h"

namespace rbarray {
namespace {

void BM_DetunedPulse(benchmark::State &state) {
    double area = 0.1;
    for (auto _ : state) {
        benchmark::DoNotOptimize(detuned_pulse(0.3, area, 3.88));
        area += 1e-9;
    }
}
BENCHMARK(BM_DetunedPulse);

void BM_FidelityClosedForm(benchmark::State &state) {
    Unitary2 u = detuned_pulse(0.2, kPi, 3.7);
    for (auto _ : state) benchmark::DoNotOptimize(bloch_avg_fidelity(u));
}
BENCHMARK(BM_FidelityClosedForm);

void BM_FidelityQuadrature(benchmark::State &state) {
    Unitary2 u = detuned_pulse(0.2, kPi, 3.7);
    for (auto _ : state) benchmark::DoNotOptimize(bloch_avg_fidelity(u, FidelityMethod::kQuadrature));
}
BENCHMARK(BM_FidelityQuadrature);

void BM_SimulateSequence(benchmark::State &state) {
    const int length = static_cast<int>(state.range(0));
    std::vector<int> lengths{length};
    RBSequence sequence = generate_sequences(lengths, 1, kDefaultSeed).front();
    NoiseParams noise;
    Rng rng(1);
    for (auto _ : state) benchmark::DoNotOptimize(simulate_sequence(sequence, noise, 50, rng));
    state.SetItemsProcessed(state.iterations() * 50);
}
BENCHMARK(BM_SimulateSequence)->Arg(10)->Arg(100);

void BM_FitDecay(benchmark::State &state) {
    RBConfig config = RBConfig::global_preset();
    RBDataset data = run_rb(config, NoiseParams{}, RunOptions{});
    for (auto _ : state) benchmark::DoNotOptimize(fit_decay(data));
}
BENCHMARK(BM_FitDecay);

void BM_DetuningScan(benchmark::State &state) {
    std::vector<GateSpec> gates = crosstalk_reference_gates();
    for (auto _ : state) benchmark::DoNotOptimize(detuning_scan(gates, 0.0, 10.0, 1001));
}
BENCHMARK(BM_DetuningScan);

}  // namespace
}  // namespace rbarray

BENCHMARK_MAIN();
