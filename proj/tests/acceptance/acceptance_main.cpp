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

// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include "bdris/cli/commands.hpp"
#include "bdris/optimizer.hpp"
#include "bdris/oracle.hpp"
#include "bdris/random.hpp"
#include "bdris/scenario.hpp"

#include <fmt/core.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

using namespace bdris;
namespace fs = std::filesystem;

namespace
{

struct Outcome
{
    bool passed = false;
    std::string detail;
};

bool report(int id, const std::string& title, double limit_s, const std::function<Outcome()>& body)
{
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try
    {
        o = body();
    }
    catch (const std::exception& e)
    {
        o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = limit_s <= 0.0 || secs < limit_s;
    const bool ok = o.passed && in_time;
    std::string timing = limit_s > 0.0 ? fmt::format("{:.2f} s, limit {:.0f} s", secs, limit_s)
                                       : fmt::format("{:.2f} s", secs);
    fmt::print("criterion {} {}: {} ({}) {}{}\n", id, title, ok ? "PASS" : "FAIL", timing, o.detail,
               in_time ? "" : " [over time limit]");
    std::fflush(stdout);
    return ok;
}

// ------------------------------------------------------------------------------------------------
// 1. Counting table
// ------------------------------------------------------------------------------------------------

std::set<std::string> expected_table1_lines()
{
    // Evaluated directly from the counting formulas, without the library.
    const int s = 3;
    const char* modes[] = {"reflective", "transmissive", "hybrid", "multi_sector"};
    const int blocks[] = {1, 1, 2, s};
    std::set<std::string> lines;
    for (long n : {16L, 32L, 64L})
    {
        const long single_cx[] = {n, n, 3 * n / 2, (s + 1) * n / 2};
        for (int m = 0; m < 4; ++m)
        {
            lines.insert(fmt::format("{},single_connected,{},{},{},1,1,{},{},false", n, modes[m], blocks[m], n, n,
                                     single_cx[m]));
            lines.insert(fmt::format("{},fully_connected,{},{},1,{},{},{},{},false", n, modes[m], blocks[m], n, n * n,
                                     n * n, (n + 1) * n / 2));
            for (long g : {2L, 4L, 8L})
            {
                const long d = n / g;
                lines.insert(fmt::format("{},group_connected,{},{},{},{},{},{},{},false", n, modes[m], blocks[m], g, d,
                                         d * d, g * d * d, (d + 1) * n / 2));
            }
        }
    }
    return lines;
}

Outcome criterion_table1()
{
    std::ostringstream out, err;
    const int code = cli::cmd_table1({16, 32, 64}, {2, 4, 8}, out, err);
    if (code != 0)
        return {false, "cmd_table1 exited " + std::to_string(code) + ": " + err.str()};
    std::istringstream in(out.str());
    std::string line;
    std::getline(in, line); // header
    std::set<std::string> got;
    int rows = 0;
    while (std::getline(in, line))
    {
        got.insert(line);
        ++rows;
    }
    const std::set<std::string> want = expected_table1_lines();
    int missing = 0;
    for (const auto& w : want)
        missing += got.count(w) == 0;
    const bool ok = missing == 0 && rows == static_cast<int>(want.size()) && got.size() == want.size();
    return {ok, fmt::format("{} rows printed, {} expected, {} mismatched", rows, want.size(), missing)};
}

// ------------------------------------------------------------------------------------------------
// 2. Constraint suite
// ------------------------------------------------------------------------------------------------

Outcome criterion_constraints()
{
    const int n = 8;
    std::vector<RisConfig> configs;
    for (Mode m : {Mode::Reflective, Mode::Transmissive, Mode::Hybrid, Mode::MultiSector})
    {
        configs.push_back(RisConfig::single(n, m, 3));
        configs.push_back(RisConfig::group(n, 2, m, 3));
        configs.push_back(RisConfig::fully(n, m, 3));
    }
    double worst_residual = 0.0, worst_own_residual = 0.0, worst_idem = 0.0;
    int failures = 0;
    for (const RisConfig& cfg : configs)
        for (std::uint64_t seed = 0; seed < 1000; ++seed)
        {
            Rng rng(seed * 7919 + 17);
            std::vector<Eigen::MatrixXcd> raw(static_cast<std::size_t>(cfg.block_count()), Eigen::MatrixXcd(n, n));
            for (auto& b : raw)
                for (Eigen::Index i = 0; i < b.size(); ++i)
                    b(i) = complex_gaussian(rng);
            const ScatteringMatrix m = project_feasible(raw, cfg);
            const ConstraintReport rep = validate(m, 1e-10);

            // Own residual: with block-diagonal sparsity, unitary groups stack to sum_s Phi_s^H Phi_s = I_N.
            Eigen::MatrixXcd gram = Eigen::MatrixXcd::Zero(n, n);
            bool zeros = true;
            for (const auto& b : m.blocks())
            {
                gram += b.adjoint() * b;
                for (Eigen::Index r = 0; r < n; ++r)
                    for (Eigen::Index c = 0; c < n; ++c)
                        if (!in_pattern(cfg, r, c) && b(r, c) != std::complex<double>(0.0, 0.0))
                            zeros = false;
            }
            const double own = (gram - Eigen::MatrixXcd::Identity(n, n)).norm();

            const ScatteringMatrix again = project_feasible(m.blocks(), cfg);
            double idem = 0.0;
            for (int b = 0; b < cfg.block_count(); ++b)
                idem = std::max(idem, (again.block(b) - m.block(b)).cwiseAbs().maxCoeff());

            worst_residual = std::max(worst_residual, rep.residual);
            worst_own_residual = std::max(worst_own_residual, own);
            worst_idem = std::max(worst_idem, idem);
            failures += !(rep.pass && rep.residual <= 1e-10 && own <= 1e-10 && zeros && rep.sparsity_exact &&
                          idem <= 1e-12);
        }
    return {failures == 0,
            fmt::format("{} configurations x 1000 seeds, {} failures, max residual {:.2e} (independent {:.2e}), "
                        "max idempotence change {:.2e}",
                        configs.size(), failures, worst_residual, worst_own_residual, worst_idem)};
}

// ------------------------------------------------------------------------------------------------
// 3. Exhaustive-search agreement
// ------------------------------------------------------------------------------------------------

const LinkBudget interference_budget{1.0, 1.0, 0.1, 0.5};

Outcome criterion_oracle()
{
    OptimizerSettings settings;
    settings.restarts = 8;
    double worst = 0.0;
    int failures = 0;
    for (int i = 0; i < 50; ++i)
    {
        const RisConfig cfg = i % 3 == 0 ? RisConfig::fully(2) : i % 3 == 1 ? RisConfig::single(2) : RisConfig::single(3);
        const ScenarioChannels ch = synthetic_channels(cfg.n_elements, 1000 + static_cast<std::uint64_t>(i));
        const double best = brute_force_oracle(ch, cfg, interference_budget, 1.0).se;
        const double got = alternating_optimize(ch, cfg, interference_budget, 1.0, settings).se;
        const double gap = std::abs(best - got);
        worst = std::max(worst, gap);
        failures += gap > 1e-2;
    }
    return {failures == 0, fmt::format("50 instances, {} outside 1e-2, max |SE gap| {:.2e} bits/s/Hz", failures, worst)};
}

// ------------------------------------------------------------------------------------------------
// 4. Gradient against central differences
// ------------------------------------------------------------------------------------------------

Outcome criterion_gradient()
{
    const double h = 1e-6;
    double worst = 0.0;
    for (int i = 0; i < 100; ++i)
    {
        const int n = i % 2 == 0 ? 2 : 4;
        const int kind = (i / 2) % 3;
        const RisConfig cfg = kind == 0 ? RisConfig::fully(n) : kind == 1 ? RisConfig::single(n) : RisConfig::group(n, 2);
        const ScenarioChannels ch = synthetic_channels(n, 3000 + static_cast<std::uint64_t>(i));
        const ScatteringMatrix m = random_feasible(cfg, 4000 + static_cast<std::uint64_t>(i));
        const Eigen::MatrixXcd grad = wirtinger_gradient(Objective::FixedPower, ch, m, interference_budget);
        Eigen::MatrixXcd fd = Eigen::MatrixXcd::Zero(n, n);
        for (int r = 0; r < n; ++r)
            for (int c = 0; c < n; ++c)
            {
                if (!in_pattern(cfg, r, c))
                    continue;
                auto f = [&](std::complex<double> d) {
                    Eigen::MatrixXcd phi = m.block(0);
                    phi(r, c) += d;
                    return objective_value(Objective::FixedPower, ch, phi, interference_budget, 1.0);
                };
                fd(r, c) = {(f(h) - f(-h)) / (2 * h), (f({0, h}) - f({0, -h})) / (2 * h)};
            }
        worst = std::max(worst, (grad - fd).norm() / fd.norm());
    }
    return {worst <= 1e-5, fmt::format("100 instances, max relative error {:.2e}", worst)};
}

// ------------------------------------------------------------------------------------------------
// 5 and 6. Default sweep
// ------------------------------------------------------------------------------------------------

const AggregateRow& row_for(const SweepResult& r, Scheme s, int n)
{
    for (const auto& a : r.aggregates)
        if (a.scheme == s && a.n == n)
            return a;
    throw std::runtime_error("missing aggregate row");
}

Outcome criterion_sweep_ordering(const SweepResult& result, const SweepConfig& cfg)
{
    bool ok = true;
    double min_fc_sc = 1e300, min_sc_none = 1e300;
    for (int n : cfg.n_values)
    {
        const auto& fc = row_for(result, Scheme::FullyConnected, n);
        const auto& sc = row_for(result, Scheme::SingleConnected, n);
        const auto& none = row_for(result, Scheme::NoRis, n);
        const double z1 = (fc.mean_se - sc.mean_se) / std::hypot(fc.std_error, sc.std_error);
        const double z2 = (sc.mean_se - none.mean_se) / std::hypot(sc.std_error, none.std_error);
        min_fc_sc = std::min(min_fc_sc, z1);
        min_sc_none = std::min(min_sc_none, z2);
        ok = ok && z1 > 3.0 && z2 > 3.0;
    }
    bool monotone = true;
    for (std::size_t k = 1; k < cfg.n_values.size(); ++k)
        for (Scheme s : {Scheme::FullyConnected, Scheme::SingleConnected})
            monotone = monotone && row_for(result, s, cfg.n_values[k]).mean_se >=
                                       row_for(result, s, cfg.n_values[k - 1]).mean_se;
    double lo = 1e300, hi = -1e300, se = 0.0;
    for (int n : cfg.n_values)
    {
        const auto& none = row_for(result, Scheme::NoRis, n);
        lo = std::min(lo, none.mean_se);
        hi = std::max(hi, none.mean_se);
        se = std::max(se, none.std_error);
    }
    const bool flat = hi - lo <= se;
    const auto& fc_first = row_for(result, Scheme::FullyConnected, cfg.n_values.front());
    const auto& fc_last = row_for(result, Scheme::FullyConnected, cfg.n_values.back());
    const auto& sc_first = row_for(result, Scheme::SingleConnected, cfg.n_values.front());
    const auto& sc_last = row_for(result, Scheme::SingleConnected, cfg.n_values.back());
    return {ok && monotone && flat,
            fmt::format("fully {:.3f}->{:.3f}, single {:.3f}->{:.3f}, none {:.4f}; min gap fully-single {:.1f} SE, "
                        "single-none {:.1f} SE; RIS curves nondecreasing: {}; no-RIS spread {:.2e} vs SE {:.2e}",
                        fc_first.mean_se, fc_last.mean_se, sc_first.mean_se, sc_last.mean_se, lo, min_fc_sc,
                        min_sc_none, monotone ? "yes" : "no", hi - lo, se)};
}

Outcome criterion_convergence(const SweepResult& result, const SweepConfig& cfg)
{
    int runs = 0, decreasing = 0, converged = 0, longest = 0;
    for (const auto& r : result.records)
    {
        if (r.scheme == Scheme::NoRis)
            continue;
        ++runs;
        for (std::size_t k = 1; k < r.trace.size(); ++k)
            if (r.trace[k] < r.trace[k - 1])
            {
                ++decreasing;
                break;
            }
        converged += r.converged && r.iterations <= cfg.optimizer.max_outer_iters;
        longest = std::max(longest, r.iterations);
    }
    const double fraction = runs > 0 ? static_cast<double>(converged) / runs : 0.0;
    return {decreasing == 0 && fraction >= 0.99,
            fmt::format("{} optimizations, {} traces with a decrease, {:.2f}% converged within {} outer iterations "
                        "(longest {})",
                        runs, decreasing, 100.0 * fraction, cfg.optimizer.max_outer_iters, longest)};
}

// ------------------------------------------------------------------------------------------------
// 7. Reproducibility of the sweep command
// ------------------------------------------------------------------------------------------------

std::string slurp(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

Outcome criterion_determinism()
{
    const fs::path dir = fs::temp_directory_path() / "bdris_acceptance_determinism";
    fs::remove_all(dir);
    fs::create_directories(dir);
    std::ofstream(dir / "config.json") << R"({
  "n_values": [8, 16, 24],
  "schemes": ["fully_connected", "group_connected", "single_connected", "no_ris"],
  "trials": 12,
  "base_seed": 2024
})";
    std::ostringstream sink;
    cli::SweepOptions first;
    first.config_path = (dir / "config.json").string();
    first.out_dir = (dir / "first").string();
    if (const int code = cli::cmd_sweep(first, sink, sink); code != 0)
        return {false, "initial sweep exited " + std::to_string(code) + ": " + sink.str()};

    std::vector<std::string> outputs;
    for (int threads : {1, 3})
    {
        cli::SweepOptions replay;
        replay.config_path = (dir / "first" / "manifest.json").string();
        replay.out_dir = (dir / ("replay_" + std::to_string(threads))).string();
        replay.threads = threads;
        if (const int code = cli::cmd_sweep(replay, sink, sink); code != 0)
            return {false, "replay exited " + std::to_string(code) + ": " + sink.str()};
        outputs.push_back(slurp(fs::path(replay.out_dir) / "records.csv"));
    }
    const std::string original = slurp(dir / "first" / "records.csv");
    const bool same = !original.empty() && outputs[0] == outputs[1] && outputs[0] == original;
    fs::remove_all(dir);
    return {same, fmt::format("records.csv of {} bytes, replays at 1 and 3 threads {}", original.size(),
                              same ? "byte-identical" : "differ")};
}

} // namespace

int main()
{
    bool all = true;
    all &= report(1, "counting table exactness", 1.0, criterion_table1);
    all &= report(2, "constraint suite", 30.0, criterion_constraints);
    all &= report(3, "exhaustive-search agreement", 120.0, criterion_oracle);
    all &= report(4, "gradient vs central differences", 60.0, criterion_gradient);

    SweepConfig sweep_cfg;
    sweep_cfg.threads = 0;
    SweepResult sweep;
    const auto t0 = std::chrono::steady_clock::now();
    sweep = run_sweep(sweep_cfg);
    const double sweep_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    all &= report(5, "default sweep ordering", 0.0, [&] {
        Outcome o = criterion_sweep_ordering(sweep, sweep_cfg);
        o.detail += fmt::format("; sweep {:.1f} s, limit 300 s", sweep_s);
        o.passed = o.passed && sweep_s < 300.0;
        return o;
    });
    all &= report(6, "monotone ascent and convergence", 0.0, [&] { return criterion_convergence(sweep, sweep_cfg); });
    all &= report(7, "sweep determinism", 0.0, criterion_determinism);

    fmt::print("acceptance: {}\n", all ? "all criteria passed" : "at least one criterion failed");
    return all ? 0 : 1;
}
