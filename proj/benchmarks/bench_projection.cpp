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

#include "bdris/random.hpp"
#include "bdris/scattering.hpp"

#include <benchmark/benchmark.h>

using namespace bdris;

namespace
{

std::vector<Eigen::MatrixXcd> gaussian_blocks(const RisConfig& cfg, std::uint64_t seed)
{
    Rng rng(seed);
    std::vector<Eigen::MatrixXcd> raw(static_cast<std::size_t>(cfg.block_count()),
                                      Eigen::MatrixXcd(cfg.n_elements, cfg.n_elements));
    for (auto& b : raw)
        for (Eigen::Index i = 0; i < b.size(); ++i)
            b(i) = complex_gaussian(rng);
    return raw;
}

void project(benchmark::State& state, RisConfig cfg)
{
    const auto raw = gaussian_blocks(cfg, 1);
    for (auto _ : state)
        benchmark::DoNotOptimize(project_feasible(raw, cfg));
}

void BM_ProjectSingle(benchmark::State& s) { project(s, RisConfig::single(static_cast<int>(s.range(0)))); }
void BM_ProjectGroup4(benchmark::State& s)
{
    const int n = static_cast<int>(s.range(0));
    project(s, RisConfig::group(n, n / 4));
}
void BM_ProjectFully(benchmark::State& s) { project(s, RisConfig::fully(static_cast<int>(s.range(0)))); }
void BM_ProjectFullyHybrid(benchmark::State& s)
{
    project(s, RisConfig::fully(static_cast<int>(s.range(0)), Mode::Hybrid));
}

void BM_PolarFactor(benchmark::State& state)
{
    const int n = static_cast<int>(state.range(0));
    const Eigen::MatrixXcd a = gaussian_blocks(RisConfig::fully(n), 2)[0];
    for (auto _ : state)
        benchmark::DoNotOptimize(polar_unitary_factor(a));
}

void BM_Validate(benchmark::State& state)
{
    const ScatteringMatrix m = random_feasible(RisConfig::fully(static_cast<int>(state.range(0))), 3);
    for (auto _ : state)
        benchmark::DoNotOptimize(validate(m, 1e-10));
}

} // namespace

BENCHMARK(BM_ProjectSingle)->RangeMultiplier(2)->Range(16, 64);
BENCHMARK(BM_ProjectGroup4)->RangeMultiplier(2)->Range(16, 64);
BENCHMARK(BM_ProjectFully)->RangeMultiplier(2)->Range(16, 64);
BENCHMARK(BM_ProjectFullyHybrid)->RangeMultiplier(2)->Range(16, 64);
BENCHMARK(BM_PolarFactor)->RangeMultiplier(2)->Range(4, 64);
BENCHMARK(BM_Validate)->RangeMultiplier(2)->Range(16, 64);
