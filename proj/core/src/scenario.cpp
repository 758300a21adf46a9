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

#include "bdris/scenario.hpp"

#include "bdris/random.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>
#include <tuple>

namespace bdris
{

std::string to_string(Scheme s)
{
    switch (s)
    {
    case Scheme::FullyConnected:
        return "fully_connected";
    case Scheme::GroupConnected:
        return "group_connected";
    case Scheme::SingleConnected:
        return "single_connected";
    case Scheme::NoRis:
        return "no_ris";
    }
    return "unknown";
}

std::optional<Scheme> scheme_from_string(const std::string& name)
{
    for (Scheme s : {Scheme::FullyConnected, Scheme::GroupConnected, Scheme::SingleConnected, Scheme::NoRis})
        if (to_string(s) == name)
            return s;
    return std::nullopt;
}

void SweepConfig::check() const
{
    if (n_values.empty())
        throw ConfigError("n_values must not be empty");
    for (std::size_t i = 0; i < n_values.size(); ++i)
    {
        if (n_values[i] < 1)
            throw ConfigError("n_values must be positive");
        if (i > 0 && n_values[i] <= n_values[i - 1])
            throw ConfigError("n_values must be strictly increasing");
    }
    if (schemes.empty())
        throw ConfigError("schemes must not be empty");
    if (trials < 1)
        throw ConfigError("trials must be at least 1");
    if (group_dimension < 1)
        throw ConfigError("group_dimension must be positive");
    if (std::find(schemes.begin(), schemes.end(), Scheme::GroupConnected) != schemes.end())
        for (int n : n_values)
            if (n % group_dimension != 0)
                throw ConfigError("group_dimension " + std::to_string(group_dimension) + " does not divide N = " +
                                  std::to_string(n));
    if (!(p_max > 0.0))
        throw ConfigError("p_max must be positive");
    if (threads < 0)
        throw ConfigError("threads must be nonnegative");
    budget.check();
    geometry.check();
    fading.check();
    optimizer.check();
}

std::uint64_t trial_seed(std::uint64_t base_seed, int trial)
{
    return derive_seed(base_seed, 0x7472000000000000ULL + static_cast<std::uint64_t>(trial));
}

RisConfig scheme_config(Scheme scheme, int n, int group_dimension)
{
    switch (scheme)
    {
    case Scheme::FullyConnected:
        return RisConfig::fully(n);
    case Scheme::GroupConnected:
        return RisConfig::group(n, n / group_dimension);
    case Scheme::SingleConnected:
        return RisConfig::single(n);
    case Scheme::NoRis:
        break;
    }
    throw ConfigError("the no-RIS scheme has no surface configuration");
}

namespace
{

SweepRecord to_record(Scheme scheme, int n, int trial, std::uint64_t seed, const OptimizeResult& r)
{
    SweepRecord rec;
    rec.scheme = scheme;
    rec.n = n;
    rec.trial = trial;
    rec.seed = seed;
    rec.se = r.se;
    rec.p_v_opt = r.p_v_opt;
    rec.converged = r.converged;
    rec.iterations = r.iterations;
    rec.trace = r.trace;
    return rec;
}

bool wants(const std::vector<Scheme>& schemes, Scheme s)
{
    return std::find(schemes.begin(), schemes.end(), s) != schemes.end();
}

} // namespace

std::vector<SweepRecord> run_trial_schemes(const std::vector<Scheme>& schemes, int n, int trial, std::uint64_t seed,
                                           const SweepConfig& cfg)
{
    const ScenarioChannels ch = sample_scenario(cfg.geometry, cfg.fading, n, seed);
    std::vector<SweepRecord> out;

    const bool fully = wants(schemes, Scheme::FullyConnected);
    const bool group = wants(schemes, Scheme::GroupConnected);
    const bool single = wants(schemes, Scheme::SingleConnected) || group || fully;

    std::optional<OptimizeResult> lower;
    std::optional<OptimizeResult> single_result;
    std::optional<OptimizeResult> group_result;
    if (single)
    {
        single_result = alternating_optimize(ch, RisConfig::single(n), cfg.budget, cfg.p_max, cfg.optimizer);
        lower = single_result;
    }
    if (group)
    {
        const RisConfig gc = scheme_config(Scheme::GroupConnected, n, cfg.group_dimension);
        group_result = alternating_optimize(ch, gc, cfg.budget, cfg.p_max, cfg.optimizer,
                                            embed(*lower->matrix_opt, gc));
        lower = group_result;
    }
    for (Scheme s : schemes)
    {
        switch (s)
        {
        case Scheme::FullyConnected: {
            const RisConfig fc = RisConfig::fully(n);
            const OptimizeResult r =
                alternating_optimize(ch, fc, cfg.budget, cfg.p_max, cfg.optimizer, embed(*lower->matrix_opt, fc));
            out.push_back(to_record(s, n, trial, seed, r));
            break;
        }
        case Scheme::GroupConnected:
            out.push_back(to_record(s, n, trial, seed, *group_result));
            break;
        case Scheme::SingleConnected:
            out.push_back(to_record(s, n, trial, seed, *single_result));
            break;
        case Scheme::NoRis:
            out.push_back(to_record(s, n, trial, seed, optimize_without_surface(ch, cfg.budget, cfg.p_max)));
            break;
        }
    }
    return out;
}

SweepRecord run_trial(Scheme scheme, int n, std::uint64_t seed, const SweepConfig& cfg)
{
    return run_trial_schemes({scheme}, n, 0, seed, cfg).front();
}

std::vector<AggregateRow> aggregate(const std::vector<SweepRecord>& records)
{
    std::vector<const SweepRecord*> sorted;
    sorted.reserve(records.size());
    for (const auto& r : records)
        sorted.push_back(&r);
    std::stable_sort(sorted.begin(), sorted.end(), [](const SweepRecord* a, const SweepRecord* b) {
        return std::tie(a->scheme, a->n, a->trial) < std::tie(b->scheme, b->n, b->trial);
    });

    std::vector<AggregateRow> rows;
    std::size_t i = 0;
    while (i < sorted.size())
    {
        std::size_t j = i;
        double sum = 0.0;
        int converged = 0;
        while (j < sorted.size() && sorted[j]->scheme == sorted[i]->scheme && sorted[j]->n == sorted[i]->n)
        {
            sum += sorted[j]->se;
            converged += sorted[j]->converged ? 1 : 0;
            ++j;
        }
        AggregateRow row;
        row.scheme = sorted[i]->scheme;
        row.n = sorted[i]->n;
        row.count = static_cast<int>(j - i);
        row.mean_se = sum / row.count;
        double ss = 0.0;
        for (std::size_t k = i; k < j; ++k)
            ss += (sorted[k]->se - row.mean_se) * (sorted[k]->se - row.mean_se);
        row.std_error = row.count > 1 ? std::sqrt(ss / (row.count - 1) / row.count) : 0.0;
        row.converged_fraction = static_cast<double>(converged) / row.count;
        rows.push_back(row);
        i = j;
    }
    return rows;
}

SweepResult run_sweep(const SweepConfig& cfg)
{
    cfg.check();
    struct Task
    {
        int n;
        int trial;
    };
    std::vector<Task> tasks;
    for (int n : cfg.n_values)
        for (int t = 0; t < cfg.trials; ++t)
            tasks.push_back({n, t});

    std::vector<std::vector<SweepRecord>> slots(tasks.size());
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;

    auto worker = [&] {
        for (;;)
        {
            const std::size_t i = next.fetch_add(1);
            if (i >= tasks.size())
                return;
            try
            {
                const Task& task = tasks[i];
                slots[i] = run_trial_schemes(cfg.schemes, task.n, task.trial, trial_seed(cfg.base_seed, task.trial),
                                             cfg);
            }
            catch (...)
            {
                std::lock_guard lock(failure_mutex);
                if (!failure)
                    failure = std::current_exception();
                next = tasks.size();
            }
        }
    };

    const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    const auto count = static_cast<std::size_t>(cfg.threads == 0 ? hw : static_cast<unsigned>(cfg.threads));
    if (count <= 1)
        worker();
    else
    {
        std::vector<std::jthread> pool;
        for (std::size_t w = 0; w < std::min(count, tasks.size()); ++w)
            pool.emplace_back(worker);
    }
    if (failure)
        std::rethrow_exception(failure);

    SweepResult result;
    for (auto& slot : slots)
        for (auto& rec : slot)
            result.records.push_back(std::move(rec));
    std::stable_sort(result.records.begin(), result.records.end(), [](const SweepRecord& a, const SweepRecord& b) {
        return std::tie(a.scheme, a.n, a.trial) < std::tie(b.scheme, b.n, b.trial);
    });
    result.aggregates = aggregate(result.records);
    return result;
}

} // namespace bdris
