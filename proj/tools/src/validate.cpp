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

#include "bdris/cli/validate.hpp"

#include "bdris/channel.hpp"
#include "bdris/oracle.hpp"
#include "bdris/random.hpp"
#include "bdris/scattering.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>

namespace bdris::cli
{

namespace
{

std::vector<RisConfig> constraint_configs()
{
    std::vector<RisConfig> out;
    for (Mode m : {Mode::Reflective, Mode::Transmissive, Mode::Hybrid, Mode::MultiSector})
    {
        out.push_back(RisConfig::single(8, m, 3));
        out.push_back(RisConfig::group(8, 2, m, 3));
        out.push_back(RisConfig::fully(8, m, 3));
    }
    return out;
}

std::vector<Eigen::MatrixXcd> gaussian_stack(const RisConfig& cfg, std::uint64_t seed)
{
    Rng rng(derive_seed(seed, 0x76616c6964ULL));
    const Eigen::Index n = cfg.n_elements;
    std::vector<Eigen::MatrixXcd> raw(static_cast<std::size_t>(cfg.block_count()), Eigen::MatrixXcd(n, n));
    for (auto& b : raw)
        for (Eigen::Index c = 0; c < n; ++c)
            for (Eigen::Index r = 0; r < n; ++r)
                b(r, c) = complex_gaussian(rng);
    return raw;
}

CheckResult timed(const std::string& name, const std::function<void(CheckResult&)>& body)
{
    CheckResult result;
    result.name = name;
    const auto start = std::chrono::steady_clock::now();
    try
    {
        body(result);
    }
    catch (const std::exception& e)
    {
        result.passed = false;
        result.detail = std::string("exception: ") + e.what();
    }
    result.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return result;
}

// Interference-heavy budget used for the synthetic instances.
LinkBudget synthetic_budget() { return {1.0, 1.0, 0.1, 0.5}; }

} // namespace

std::vector<CheckResult> run_validation(const ValidateOptions& options)
{
    const int seeds = options.quick ? 25 : 200;
    auto project = [&](const std::vector<Eigen::MatrixXcd>& raw, const RisConfig& cfg) {
        ScatteringMatrix m = project_feasible(raw, cfg);
        if (!options.break_projection)
            return m;
        std::vector<Eigen::MatrixXcd> blocks = m.blocks();
        blocks.front() *= 1.001;
        return ScatteringMatrix(cfg, std::move(blocks));
    };

    std::vector<CheckResult> checks;

    checks.push_back(timed("unitarity residual", [&](CheckResult& r) {
        double worst = 0.0;
        for (const RisConfig& cfg : constraint_configs())
            for (int s = 0; s < seeds; ++s)
                worst = std::max(worst, validate(project(gaussian_stack(cfg, s), cfg), 1e-10).residual);
        r.passed = worst <= 1e-10;
        r.detail = fmt::format("max residual {:.3e} (tol 1e-10)", worst);
    }));

    checks.push_back(timed("sparsity pattern", [&](CheckResult& r) {
        int bad = 0;
        for (const RisConfig& cfg : constraint_configs())
            for (int s = 0; s < seeds; ++s)
                bad += validate(project(gaussian_stack(cfg, s), cfg), 1e-10).sparsity_exact ? 0 : 1;
        r.passed = bad == 0;
        r.detail = fmt::format("{} matrices with nonzero forbidden entries", bad);
    }));

    checks.push_back(timed("projection idempotence", [&](CheckResult& r) {
        double worst = 0.0;
        for (const RisConfig& cfg : constraint_configs())
            for (int s = 0; s < seeds; ++s)
            {
                const ScatteringMatrix once = project(gaussian_stack(cfg, s), cfg);
                const ScatteringMatrix twice = project(once.blocks(), cfg);
                for (int b = 0; b < cfg.block_count(); ++b)
                    worst = std::max(worst, (twice.block(b) - once.block(b)).cwiseAbs().maxCoeff());
            }
        r.passed = worst <= 1e-12;
        r.detail = fmt::format("max entry change {:.3e} (tol 1e-12)", worst);
    }));

    checks.push_back(timed("counting formulas", [&](CheckResult& r) {
        int bad = 0;
        for (std::uint64_t n : {16u, 32u, 64u})
        {
            const int ni = static_cast<int>(n);
            bad += nonzero_count(RisConfig::single(ni)) != n;
            bad += nonzero_count(RisConfig::fully(ni)) != n * n;
            bad += hardware_complexity(RisConfig::single(ni)).count != n;
            bad += hardware_complexity(RisConfig::single(ni, Mode::Hybrid)).count != 3 * n / 2;
            bad += hardware_complexity(RisConfig::single(ni, Mode::MultiSector, 3)).count != 2 * n;
            bad += hardware_complexity(RisConfig::fully(ni)).count != (n + 1) * n / 2;
            bad += nonzero_count(RisConfig::group(ni, ni)) != nonzero_count(RisConfig::single(ni));
            bad += nonzero_count(RisConfig::group(ni, 1)) != nonzero_count(RisConfig::fully(ni));
            bad += hardware_complexity(RisConfig::group(ni, 1)).count != hardware_complexity(RisConfig::fully(ni)).count;
            std::uint64_t previous = hardware_complexity(RisConfig::group(ni, 1)).count;
            for (std::uint64_t g : {2u, 4u, 8u})
            {
                const RisConfig cfg = RisConfig::group(ni, static_cast<int>(g));
                const std::uint64_t dim = n / g;
                bad += nonzero_count(cfg) != g * dim * dim;
                bad += elements_per_group(cfg) != dim * dim;
                const std::uint64_t c = hardware_complexity(cfg).count;
                bad += c != (dim + 1) * n / 2;
                bad += c > previous;
                previous = c;
            }
        }
        r.passed = bad == 0;
        r.detail = fmt::format("{} mismatches", bad);
    }));

    checks.push_back(timed("gradient vs finite differences", [&](CheckResult& r) {
        const LinkBudget budget = synthetic_budget();
        const int instances = options.quick ? 10 : 40;
        const double h = 1e-6;
        double worst = 0.0;
        for (int i = 0; i < instances; ++i)
        {
            const int n = i % 2 == 0 ? 2 : 4;
            const RisConfig cfg = (i / 2) % 2 == 0 ? RisConfig::fully(n) : RisConfig::single(n);
            const ScenarioChannels ch = synthetic_channels(n, 500 + static_cast<std::uint64_t>(i));
            const ScatteringMatrix m = random_feasible(cfg, 900 + static_cast<std::uint64_t>(i));
            const Eigen::MatrixXcd grad = wirtinger_gradient(Objective::FixedPower, ch, m, budget);
            Eigen::MatrixXcd fd = Eigen::MatrixXcd::Zero(n, n);
            for (int c = 0; c < n; ++c)
                for (int rr = 0; rr < n; ++rr)
                {
                    if (!in_pattern(cfg, rr, c))
                        continue;
                    auto f = [&](std::complex<double> d) {
                        Eigen::MatrixXcd phi = m.block(0);
                        phi(rr, c) += d;
                        return objective_value(Objective::FixedPower, ch, phi, budget, 1.0);
                    };
                    fd(rr, c) = {(f(h) - f(-h)) / (2 * h), (f({0, h}) - f({0, -h})) / (2 * h)};
                }
            worst = std::max(worst, (grad - fd).norm() / std::max(fd.norm(), 1e-300));
        }
        r.passed = worst <= 1e-5;
        r.detail = fmt::format("max relative error {:.3e} (tol 1e-5)", worst);
    }));

    checks.push_back(timed("ascent monotonicity", [&](CheckResult& r) {
        const LinkBudget budget = synthetic_budget();
        int bad = 0, runs = 0;
        for (int i = 0; i < (options.quick ? 4 : 12); ++i)
        {
            const int n = 4 + 2 * (i % 3);
            const ScenarioChannels ch = synthetic_channels(n, 700 + static_cast<std::uint64_t>(i));
            for (const RisConfig& cfg : {RisConfig::single(n), RisConfig::group(n, 2), RisConfig::fully(n)})
            {
                const OptimizeResult res = alternating_optimize(ch, cfg, budget, 1.0, options.optimizer);
                ++runs;
                for (std::size_t k = 1; k < res.trace.size(); ++k)
                    if (res.trace[k] < res.trace[k - 1])
                    {
                        ++bad;
                        break;
                    }
            }
        }
        r.passed = bad == 0;
        r.detail = fmt::format("{} of {} traces decrease", bad, runs);
    }));

    checks.push_back(timed("oracle agreement", [&](CheckResult& r) {
        const LinkBudget budget = synthetic_budget();
        OptimizerSettings settings = options.optimizer;
        settings.restarts = std::max(settings.restarts, 8);
        std::vector<std::pair<RisConfig, std::uint64_t>> cases{{RisConfig::single(2), 1001}};
        if (!options.quick)
        {
            cases.push_back({RisConfig::single(3), 1002});
            cases.push_back({RisConfig::fully(2), 1000});
        }
        double worst = 0.0;
        for (const auto& [cfg, seed] : cases)
        {
            const ScenarioChannels ch = synthetic_channels(cfg.n_elements, seed);
            const double best = brute_force_oracle(ch, cfg, budget, 1.0).se;
            const double got = alternating_optimize(ch, cfg, budget, 1.0, settings).se;
            worst = std::max(worst, best - got);
        }
        r.passed = worst <= 1e-2;
        r.detail = fmt::format("{} instances, worst shortfall {:.3e} bits/s/Hz (tol 1e-2)", cases.size(), worst);
    }));

    return checks;
}

void print_check_table(std::ostream& out, const std::vector<CheckResult>& checks)
{
    out << fmt::format("{:<32} {:<6} {:>9}  {}\n", "check", "result", "time [s]", "detail");
    for (const auto& c : checks)
        out << fmt::format("{:<32} {:<6} {:>9.3f}  {}\n", c.name, c.passed ? "PASS" : "FAIL", c.seconds, c.detail);
}

void print_complexity_table(std::ostream& out)
{
    out << "hardware complexity (impedance components)\n";
    out << fmt::format("{:>4} {:>3} {:>8} {:>8} {:>8} {:>10} {:>10}  {:>8} {:>8} {:>8}\n", "N", "G", "groups",
                       "dim", "nonzero", "group", "fully", "single", "hybrid", "multi(3)");
    for (int n : {16, 32, 64})
        for (int g : {2, 4, 8})
        {
            const RisConfig gc = RisConfig::group(n, g);
            out << fmt::format("{:>4} {:>3} {:>8} {:>8} {:>8} {:>10} {:>10}  {:>8} {:>8} {:>8}\n", n, g,
                               gc.group_count(), gc.group_dimension(), nonzero_count(gc),
                               hardware_complexity(gc).count, hardware_complexity(RisConfig::fully(n)).count,
                               hardware_complexity(RisConfig::single(n)).count,
                               hardware_complexity(RisConfig::single(n, Mode::Hybrid)).count,
                               hardware_complexity(RisConfig::single(n, Mode::MultiSector, 3)).count);
        }
}

} // namespace bdris::cli
