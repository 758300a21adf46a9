// SPDX-License-Identifier: Apache-2.0
//
// bdris-sim: link-level simulator and beamforming optimizer for beyond-diagonal RIS
// Copyright (C) 2026 The bdris-sim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include "bdris/optimizer.hpp"
#include "bdris/scenario.hpp"

#include <benchmark/benchmark.h>

using namespace bdris;

namespace
{

// One default-regime optimization per iteration; range(0) is N.
void optimize(benchmark::State& state, Scheme scheme)
{
    const int n = static_cast<int>(state.range(0));
    const SweepConfig cfg;
    const ScenarioChannels ch = sample_scenario(cfg.geometry, cfg.fading, n, 11);
    const RisConfig ris = scheme_config(scheme, n, cfg.group_dimension);
    int iterations = 0;
    for (auto _ : state)
    {
        const OptimizeResult r = alternating_optimize(ch, ris, cfg.budget, cfg.p_max, cfg.optimizer);
        iterations = r.iterations;
        benchmark::DoNotOptimize(r.se);
    }
    state.counters["outer_iters"] = iterations;
}

void BM_OptimizeSingle(benchmark::State& s) { optimize(s, Scheme::SingleConnected); }
void BM_OptimizeGroup(benchmark::State& s) { optimize(s, Scheme::GroupConnected); }
void BM_OptimizeFully(benchmark::State& s) { optimize(s, Scheme::FullyConnected); }

void BM_Gradient(benchmark::State& state)
{
    const int n = static_cast<int>(state.range(0));
    const SweepConfig cfg;
    const ScenarioChannels ch = sample_scenario(cfg.geometry, cfg.fading, n, 12);
    const ScatteringMatrix m = random_feasible(RisConfig::fully(n), 5);
    for (auto _ : state)
        benchmark::DoNotOptimize(wirtinger_gradient(Objective::PowerControlled, ch, m, cfg.budget, cfg.p_max));
}

void BM_SampleScenario(benchmark::State& state)
{
    const SweepConfig cfg;
    std::uint64_t seed = 0;
    for (auto _ : state)
        benchmark::DoNotOptimize(sample_scenario(cfg.geometry, cfg.fading, static_cast<int>(state.range(0)), ++seed));
}

} // namespace

BENCHMARK(BM_OptimizeSingle)->Arg(16)->Arg(64)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_OptimizeGroup)->Arg(16)->Arg(64)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_OptimizeFully)->Arg(16)->Arg(64)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Gradient)->Arg(16)->Arg(64);
BENCHMARK(BM_SampleScenario)->Arg(16)->Arg(64);
