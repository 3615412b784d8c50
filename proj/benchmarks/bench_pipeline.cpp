// Copyright 2026 The freqbin Authors
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

#include "freqbin/circuits.hpp"

using namespace freqbin;

static void BM_GhzRun(benchmark::State &state) {
    Circuit c = build_ghz_device({0.1, 0.1, 0.1, 0.1}, static_cast<int>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(run(c));
    }
}
BENCHMARK(BM_GhzRun)->Arg(1)->Arg(2);

static void BM_WRun(benchmark::State &state) {
    Circuit c = build_w_device(0.2, 0.1);
    for (auto _ : state) {
        benchmark::DoNotOptimize(run(c));
    }
}
BENCHMARK(BM_WRun);

static void BM_Coupler(benchmark::State &state) {
    // Four-photon dual-pump emission is the densest state the W device sees.
    StateVector s = project_photon_number(emit_state(dual_pump_source(0.2, 0.1).placed_on(1), 2), 4);
    s = apply_demux(s, 1, 1, 2);
    for (auto _ : state) {
        benchmark::DoNotOptimize(apply_directional_coupler(s, 1, 2, CouplerParams::balanced()));
    }
}
BENCHMARK(BM_Coupler);

static void BM_WSweep(benchmark::State &state) {
    CircuitTemplate t = w_device_template();
    ParameterGrid grid = {{"beta_ratio", {0.5, 1, 2, 4}}, {"phase", {0.0, 0.5, 1.0, 1.5}}};
    for (auto _ : state) {
        benchmark::DoNotOptimize(sweep(t, grid, static_cast<unsigned>(state.range(0))));
    }
}
BENCHMARK(BM_WSweep)->Arg(1)->Arg(4);

BENCHMARK_MAIN();
