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

#pragma once

#include "bdris/channel.hpp"
#include "bdris/metrics.hpp"
#include "bdris/optimizer.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace bdris
{

/// Surface deployed in a trial. Declaration order is the record sort order.
enum class Scheme
{
    FullyConnected,
    GroupConnected,
    SingleConnected,
    NoRis,
};

std::string to_string(Scheme s);
/// Inverse of to_string; std::nullopt for unknown names.
std::optional<Scheme> scheme_from_string(const std::string& name);

struct SweepConfig
{
    std::vector<int> n_values{16, 24, 32, 40, 48, 56, 64};
    std::vector<Scheme> schemes{Scheme::FullyConnected, Scheme::SingleConnected, Scheme::NoRis};
    int trials = 500;
    std::uint64_t base_seed = 1;
    /// Elements per group for GroupConnected (G = N / group_dimension).
    int group_dimension = 4;
    double p_max = 1.0;
    LinkBudget budget{};
    GeometryConfig geometry{};
    FadingConfig fading{};
    OptimizerSettings optimizer{};
    /// Worker threads; 0 picks the hardware concurrency.
    int threads = 1;

    void check() const;
};

struct SweepRecord
{
    Scheme scheme = Scheme::NoRis;
    int n = 0;
    int trial = 0;
    std::uint64_t seed = 0;
    double se = 0.0;
    double p_v_opt = 0.0;
    bool converged = false;
    int iterations = 0;
    /// Outer-loop SE trace of the optimization behind this record.
    std::vector<double> trace;
};

struct AggregateRow
{
    Scheme scheme = Scheme::NoRis;
    int n = 0;
    int count = 0;
    double mean_se = 0.0;
    double std_error = 0.0;
    double converged_fraction = 0.0;
};

struct SweepResult
{
    std::vector<SweepRecord> records;
    std::vector<AggregateRow> aggregates;
};

/// Channel seed of a trial. It depends on neither the scheme nor n, so all
/// schemes see the same realization and surfaces of different sizes share
/// their leading elements and the direct links.
std::uint64_t trial_seed(std::uint64_t base_seed, int trial);

/// Surface configuration used for a scheme at size n. Throws for NoRis.
RisConfig scheme_config(Scheme scheme, int n, int group_dimension);

/// Runs one scheme. Surface schemes are warm-started along the nesting chain
/// single -> group -> fully, so a richer architecture never ends below a
/// poorer one on the same channels.
SweepRecord run_trial(Scheme scheme, int n, std::uint64_t seed, const SweepConfig& cfg);

/// All requested schemes for one (n, seed), sharing the nesting chain.
std::vector<SweepRecord> run_trial_schemes(const std::vector<Scheme>& schemes, int n, int trial, std::uint64_t seed,
                                           const SweepConfig& cfg);

/// Mean and standard error per (scheme, n), folded over sorted records.
std::vector<AggregateRow> aggregate(const std::vector<SweepRecord>& records);

/// Evaluates every (scheme, n, trial) on cfg.threads workers. Records come
/// back sorted by (scheme, n, trial) regardless of completion order.
SweepResult run_sweep(const SweepConfig& cfg);

} // namespace bdris
