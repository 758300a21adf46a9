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

#include <catch2/catch_amalgamated.hpp>

#include "bdris/optimizer.hpp"
#include "bdris/oracle.hpp"
#include "bdris/random.hpp"

#include <cmath>

using namespace bdris;
using cd = std::complex<double>;

namespace
{

// Interference-heavy budget for geometry-free instances.
const LinkBudget synthetic_budget{1.0, 1.0, 0.1, 0.5};

ScenarioChannels quiet_channels(int n, std::uint64_t seed)
{
    ScenarioChannels ch = synthetic_channels(n, seed);
    ch.f_d = 0.0;
    ch.f_t.setZero();
    ch.q_d = 0.0;
    ch.q_r.setZero();
    return ch;
}

double surface_gain(const ScenarioChannels& ch, const ScatteringMatrix& m)
{
    return std::abs(effective_channel(ch.h_d, ch.h_t, ch.g_r, m));
}

Eigen::MatrixXcd finite_difference(Objective obj, const ScenarioChannels& ch, const ScatteringMatrix& m,
                                   const LinkBudget& b, double p_max, double h)
{
    const Eigen::Index n = m.size();
    Eigen::MatrixXcd fd = Eigen::MatrixXcd::Zero(n, n);
    for (Eigen::Index c = 0; c < n; ++c)
        for (Eigen::Index r = 0; r < n; ++r)
        {
            if (!in_pattern(m.config(), r, c))
                continue;
            auto f = [&](cd d) {
                Eigen::MatrixXcd phi = m.block(0);
                phi(r, c) += d;
                return objective_value(obj, ch, phi, b, p_max);
            };
            fd(r, c) = cd((f(h) - f(-h)) / (2 * h), (f(cd(0, h)) - f(cd(0, -h))) / (2 * h));
        }
    return fd;
}

double best_nearby_gain(const ScenarioChannels& ch, const RisConfig& cfg, const Eigen::MatrixXcd& phi, Rng& rng)
{
    const double base = objective_value(Objective::PowerControlled, ch, phi, {}, 1.0);
    double gain = -1.0;
    for (int k = 0; k < 50; ++k)
    {
        Eigen::MatrixXcd step(phi.rows(), phi.cols());
        for (Eigen::Index i = 0; i < step.size(); ++i)
            step(i) = complex_gaussian(rng);
        step *= 1e-2 / step.norm();
        const ScatteringMatrix near = project_feasible({phi + step}, cfg);
        gain = std::max(gain, objective_value(Objective::PowerControlled, ch, near.block(0), {}, 1.0) - base);
    }
    return gain;
}

bool nondecreasing(const std::vector<double>& trace)
{
    for (std::size_t k = 1; k < trace.size(); ++k)
        if (trace[k] < trace[k - 1])
            return false;
    return true;
}

} // namespace

// ------------------------------------------------------------------------------------------------
// Power control
// ------------------------------------------------------------------------------------------------

TEST_CASE("optimal_power - cap below the power limit binds")
{
    ScenarioChannels ch = quiet_channels(2, 1);
    ch.q_d = 1.0;
    LinkBudget b;
    b.i_max = 0.5;
    const ScatteringMatrix m = random_feasible(RisConfig::fully(2), 1);
    CHECK(optimal_power(ch, m, b, 1.0) == Catch::Approx(0.5).epsilon(1e-14));
    b.i_max = 2.0;
    CHECK(optimal_power(ch, m, b, 1.0) == 1.0);
}

TEST_CASE("optimal_power - no leakage means full power")
{
    const ScenarioChannels ch = quiet_channels(3, 2);
    CHECK(optimal_power(ch, random_feasible(RisConfig::single(3), 2), {}, 0.7) == 0.7);
    CHECK(optimal_power_direct(ch, {}, 0.7) == 0.7);
}

TEST_CASE("optimal_power - result always respects the interference cap")
{
    for (std::uint64_t seed = 0; seed < 200; ++seed)
    {
        const ScenarioChannels ch = synthetic_channels(4, seed);
        const ScatteringMatrix m = random_feasible(RisConfig::group(4, 2), seed);
        LinkBudget b = synthetic_budget;
        b.i_max = 0.05 * static_cast<double>(seed % 7 + 1);
        const double p = optimal_power(ch, m, b, 1.0);
        CHECK(p <= 1.0);
        CHECK(cellular_interference(ch, m, p) <= b.i_max * (1 + 1e-12));
    }
}

// ------------------------------------------------------------------------------------------------
// Closed-form alignment
// ------------------------------------------------------------------------------------------------

TEST_CASE("closed_form_align - orthogonal hops separate diagonal from full surfaces")
{
    ScenarioChannels ch = quiet_channels(2, 0);
    ch.h_d = 0.0;
    ch.h_t << 1.0, 0.0;
    ch.g_r << 0.0, 1.0;
    CHECK(surface_gain(ch, closed_form_align(ch, RisConfig::single(2))) < 1e-15);
    CHECK(surface_gain(ch, closed_form_align(ch, RisConfig::fully(2))) == Catch::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("closed_form_align - scalar surface gives the same gain for every architecture")
{
    const ScenarioChannels ch = quiet_channels(1, 5);
    const double expected = std::abs(ch.h_d) + std::abs(ch.g_r(0)) * std::abs(ch.h_t(0));
    CHECK(surface_gain(ch, closed_form_align(ch, RisConfig::single(1))) == Catch::Approx(expected).epsilon(1e-14));
    CHECK(surface_gain(ch, closed_form_align(ch, RisConfig::fully(1))) == Catch::Approx(expected).epsilon(1e-14));
}

TEST_CASE("closed_form_align - analytic gains and the architecture chain over 1000 draws")
{
    for (std::uint64_t seed = 0; seed < 1000; ++seed)
    {
        const int n = 2 + static_cast<int>(seed % 4) * 2; // 2, 4, 6, 8
        const ScenarioChannels ch = synthetic_channels(n, seed);
        const ScatteringMatrix s = closed_form_align(ch, RisConfig::single(n));
        const ScatteringMatrix g = closed_form_align(ch, RisConfig::group(n, 2));
        const ScatteringMatrix f = closed_form_align(ch, RisConfig::fully(n));

        const double single_gain = std::abs(ch.h_d) + ch.g_r.cwiseAbs().dot(ch.h_t.cwiseAbs());
        const int d = n / 2;
        const double group_gain = std::abs(ch.h_d) + ch.g_r.head(d).norm() * ch.h_t.head(d).norm() +
                                  ch.g_r.tail(d).norm() * ch.h_t.tail(d).norm();
        const double full_gain = std::abs(ch.h_d) + ch.g_r.norm() * ch.h_t.norm();

        CHECK(surface_gain(ch, s) == Catch::Approx(single_gain).epsilon(1e-12));
        CHECK(surface_gain(ch, g) == Catch::Approx(group_gain).epsilon(1e-12));
        CHECK(surface_gain(ch, f) == Catch::Approx(full_gain).epsilon(1e-12));
        CHECK(full_gain >= group_gain * (1 - 1e-14));
        CHECK(group_gain >= single_gain * (1 - 1e-14));
        CHECK(validate(s, 1e-10).pass);
        CHECK(validate(g, 1e-10).pass);
        CHECK(validate(f, 1e-10).pass);
    }
}

TEST_CASE("closed_form_align - degenerate inputs")
{
    ScenarioChannels ch = quiet_channels(3, 1);
    ch.g_r.setZero();
    CHECK_THROWS_AS(closed_form_align(ch, RisConfig::fully(3)), std::invalid_argument);
    CHECK_THROWS_AS(closed_form_align(quiet_channels(3, 1), RisConfig::fully(3, Mode::Hybrid)), ConfigError);

    // A group whose sub-vectors vanish still gets a unitary block.
    ScenarioChannels partial = quiet_channels(4, 2);
    partial.h_t.tail(2).setZero();
    CHECK(validate(closed_form_align(partial, RisConfig::group(4, 2)), 1e-10).pass);
}

// ------------------------------------------------------------------------------------------------
// Gradients
// ------------------------------------------------------------------------------------------------

TEST_CASE("wirtinger_gradient - matches central differences at N = 2 and 4")
{
    const double h = 1e-6;
    for (std::uint64_t seed = 0; seed < 100; ++seed)
    {
        const int n = seed % 2 == 0 ? 2 : 4;
        const RisConfig cfg = seed % 3 == 0 ? RisConfig::single(n) : (seed % 3 == 1 ? RisConfig::group(n, n / 2)
                                                                                    : RisConfig::fully(n));
        const ScenarioChannels ch = synthetic_channels(n, 300 + seed);
        const ScatteringMatrix m = random_feasible(cfg, seed);
        for (Objective obj : {Objective::FixedPower, Objective::PowerControlled})
        {
            const Eigen::MatrixXcd grad = wirtinger_gradient(obj, ch, m, synthetic_budget, 1.0);
            const Eigen::MatrixXcd fd = finite_difference(obj, ch, m, synthetic_budget, 1.0, h);
            INFO(describe(cfg) << " seed " << seed);
            CHECK((grad - fd).norm() <= 1e-5 * fd.norm());
        }
    }
}

TEST_CASE("wirtinger_gradient - vanishes when the surface is disconnected from the receiver")
{
    ScenarioChannels ch = synthetic_channels(3, 8);
    ch.g_r.setZero();
    const ScatteringMatrix m = random_feasible(RisConfig::fully(3), 8);
    CHECK(wirtinger_gradient(Objective::FixedPower, ch, m, synthetic_budget).isZero(0.0));
}

TEST_CASE("wirtinger_gradient - respects the sparsity pattern")
{
    const ScenarioChannels ch = synthetic_channels(4, 3);
    const Eigen::MatrixXcd g =
        wirtinger_gradient(Objective::FixedPower, ch, random_feasible(RisConfig::group(4, 2), 3), synthetic_budget);
    CHECK(g.block(0, 2, 2, 2).isZero(0.0));
    CHECK(g.block(2, 0, 2, 2).isZero(0.0));
}

TEST_CASE("riemannian_gradient - lies in the tangent space of each group")
{
    const RisConfig cfg = RisConfig::group(6, 2);
    const ScatteringMatrix m = random_feasible(cfg, 4);
    const Eigen::MatrixXcd r =
        riemannian_gradient(m, wirtinger_gradient(Objective::FixedPower, synthetic_channels(6, 4), m, synthetic_budget));
    for (int g = 0; g < 2; ++g)
    {
        const Eigen::MatrixXcd u = m.block(0).block(3 * g, 3 * g, 3, 3);
        const Eigen::MatrixXcd t = u.adjoint() * r.block(3 * g, 3 * g, 3, 3);
        CHECK((t + t.adjoint()).norm() < 1e-12); // U^H T is skew-Hermitian
    }
}

TEST_CASE("alternating_optimize - no nearby feasible point is noticeably better")
{
    // The loop stops on an SE-change tolerance and the power-controlled objective has a kink where
    // the power branch switches, so local optimality is probed directly instead of via gradient norm.
    Rng rng(41);
    for (std::uint64_t seed = 0; seed < 10; ++seed)
    {
        const ScenarioChannels ch = sample_scenario({}, {}, 8, seed);
        for (const RisConfig& cfg : {RisConfig::single(8), RisConfig::fully(8)})
        {
            const OptimizeResult r = alternating_optimize(ch, cfg, {}, 1.0, {});
            INFO(describe(cfg) << " seed " << seed);
            CHECK(best_nearby_gain(ch, cfg, r.matrix_opt->block(0), rng) <= 1e-5);
            // the same probe does find progress from an arbitrary starting point
            CHECK(best_nearby_gain(ch, cfg, random_feasible(cfg, seed).block(0), rng) > 1e-5);
        }
    }
}

// ------------------------------------------------------------------------------------------------
// Ascent and alternating loop
// ------------------------------------------------------------------------------------------------

TEST_CASE("projected_gradient_ascent - aligned start is already optimal without interference")
{
    for (std::uint64_t seed = 0; seed < 20; ++seed)
    {
        const ScenarioChannels ch = quiet_channels(6, seed);
        for (const RisConfig& cfg : {RisConfig::single(6), RisConfig::group(6, 2), RisConfig::fully(6)})
        {
            const ScatteringMatrix start = closed_form_align(ch, cfg);
            const ScatteringMatrix out = projected_gradient_ascent(ch, start, synthetic_budget, 1.0, {});
            const double before = objective_value(Objective::PowerControlled, ch, start.block(0), synthetic_budget, 1.0);
            const double after = objective_value(Objective::PowerControlled, ch, out.block(0), synthetic_budget, 1.0);
            CHECK(std::abs(after - before) <= 1e-9);
        }
    }
}

TEST_CASE("projected_gradient_ascent - never lowers the objective and stays feasible")
{
    for (std::uint64_t seed = 0; seed < 30; ++seed)
    {
        const int n = 3 + static_cast<int>(seed % 3) * 6; // 3, 9, 15: dense and subspace retractions
        const ScenarioChannels ch = synthetic_channels(n, seed);
        for (const RisConfig& cfg : {RisConfig::single(n), RisConfig::fully(n)})
        {
            const ScatteringMatrix start = random_feasible(cfg, seed + 50);
            const ScatteringMatrix out = projected_gradient_ascent(ch, start, synthetic_budget, 1.0, {});
            CHECK(objective_value(Objective::PowerControlled, ch, out.block(0), synthetic_budget, 1.0) >=
                  objective_value(Objective::PowerControlled, ch, start.block(0), synthetic_budget, 1.0));
            CHECK(validate(out, 1e-10).pass);
        }
    }
}

TEST_CASE("alternating_optimize - monotone trace, feasibility and power cap")
{
    for (std::uint64_t seed = 0; seed < 15; ++seed)
    {
        const int n = 4 + static_cast<int>(seed % 3) * 8; // 4, 12, 20
        const ScenarioChannels ch = synthetic_channels(n, 40 + seed);
        for (const RisConfig& cfg : {RisConfig::single(n), RisConfig::group(n, 2), RisConfig::fully(n)})
        {
            const OptimizeResult r = alternating_optimize(ch, cfg, synthetic_budget, 1.0, {});
            INFO(describe(cfg) << " seed " << seed);
            REQUIRE(r.matrix_opt);
            CHECK(nondecreasing(r.trace));
            CHECK(r.se == r.trace.back());
            CHECK(validate(*r.matrix_opt, 1e-10).pass);
            CHECK(cellular_interference(ch, *r.matrix_opt, r.p_v_opt) <= synthetic_budget.i_max * (1 + 1e-12));
            CHECK(r.p_v_opt <= 1.0);
        }
    }
}

TEST_CASE("alternating_optimize - restarts and warm starts never lose ground")
{
    const ScenarioChannels ch = synthetic_channels(6, 77);
    OptimizerSettings more;
    more.restarts = 4;
    const double base = alternating_optimize(ch, RisConfig::fully(6), synthetic_budget, 1.0, {}).se;
    CHECK(alternating_optimize(ch, RisConfig::fully(6), synthetic_budget, 1.0, more).se >= base);

    const OptimizeResult single = alternating_optimize(ch, RisConfig::single(6), synthetic_budget, 1.0, {});
    const OptimizeResult warm = alternating_optimize(ch, RisConfig::fully(6), synthetic_budget, 1.0, {},
                                                     embed(*single.matrix_opt, RisConfig::fully(6)));
    CHECK(warm.se >= single.se);
}

TEST_CASE("alternating_optimize - deterministic")
{
    const ScenarioChannels ch = synthetic_channels(5, 3);
    OptimizerSettings s;
    s.restarts = 2;
    const OptimizeResult a = alternating_optimize(ch, RisConfig::fully(5), synthetic_budget, 1.0, s);
    const OptimizeResult b = alternating_optimize(ch, RisConfig::fully(5), synthetic_budget, 1.0, s);
    CHECK(a.se == b.se);
    CHECK(a.trace == b.trace);
    CHECK(a.matrix_opt->block(0) == b.matrix_opt->block(0));
}

TEST_CASE("optimize_without_surface - closed-form power solution")
{
    const ScenarioChannels ch = synthetic_channels(3, 21);
    const OptimizeResult r = optimize_without_surface(ch, synthetic_budget, 1.0);
    const double p = std::min(1.0, synthetic_budget.i_max / std::norm(ch.q_d));
    LinkBudget b = synthetic_budget;
    b.p_v = p;
    CHECK(r.p_v_opt == Catch::Approx(p).epsilon(1e-15));
    CHECK(r.se == Catch::Approx(spectral_efficiency(sinr_v2v_direct(ch, b))).epsilon(1e-15));
    CHECK_FALSE(r.matrix_opt);
}

TEST_CASE("alternating_optimize - optimum unchanged by unit-modulus rotation of the hops")
{
    FadingConfig fading;
    fading.ris_interference = false;
    for (std::uint64_t seed = 0; seed < 10; ++seed)
    {
        const ScenarioChannels ch = sample_scenario({}, fading, 12, seed);
        ScenarioChannels rotated = ch;
        rotated.h_t *= std::polar(1.0, 0.9 + static_cast<double>(seed));
        rotated.g_r *= std::polar(1.0, -2.1 * static_cast<double>(seed));
        for (const RisConfig& cfg : {RisConfig::single(12), RisConfig::group(12, 3), RisConfig::fully(12)})
            CHECK(std::abs(alternating_optimize(ch, cfg, {}, 1.0, {}).se -
                           alternating_optimize(rotated, cfg, {}, 1.0, {}).se) <= 1e-9);
    }
}

TEST_CASE("embed - lower architectures map into richer ones unchanged")
{
    const ScatteringMatrix s = random_feasible(RisConfig::single(6), 2);
    const ScatteringMatrix f = embed(s, RisConfig::fully(6));
    CHECK(f.block(0) == s.block(0));
    CHECK(f.config() == RisConfig::fully(6));
    CHECK_THROWS(embed(random_feasible(RisConfig::fully(6), 2), RisConfig::single(6)));
}

// ------------------------------------------------------------------------------------------------
// Oracle
// ------------------------------------------------------------------------------------------------

TEST_CASE("brute_force_oracle - fully-connected N=2 reaches the analytic gain without interference")
{
    for (std::uint64_t seed = 0; seed < 3; ++seed)
    {
        const ScenarioChannels ch = quiet_channels(2, seed);
        const OracleResult r = brute_force_oracle(ch, RisConfig::fully(2), synthetic_budget, 1.0);
        const double analytic = std::abs(ch.h_d) + ch.g_r.norm() * ch.h_t.norm();
        CHECK(surface_gain(ch, r.matrix) == Catch::Approx(analytic).epsilon(1e-3));
        CHECK(surface_gain(ch, r.matrix) <= analytic * (1 + 1e-12));
        CHECK(validate(r.matrix, 1e-10).pass);
    }
}

TEST_CASE("brute_force_oracle - single-connected N=2 agrees with alignment without interference")
{
    const ScenarioChannels ch = quiet_channels(2, 11);
    const OracleResult r = brute_force_oracle(ch, RisConfig::single(2), synthetic_budget, 1.0);
    const double aligned = surface_gain(ch, closed_form_align(ch, RisConfig::single(2)));
    CHECK(surface_gain(ch, r.matrix) == Catch::Approx(aligned).epsilon(1e-4));
}

TEST_CASE("brute_force_oracle - brackets the optimizer on interference-limited instances")
{
    OptimizerSettings s;
    s.restarts = 8;
    for (const auto& [cfg, seed] : {std::pair{RisConfig::single(2), 1u}, {RisConfig::single(3), 2u},
                                    {RisConfig::fully(2), 3u}})
    {
        const ScenarioChannels ch = synthetic_channels(cfg.n_elements, seed);
        const double oracle = brute_force_oracle(ch, cfg, synthetic_budget, 1.0).se;
        const double opt = alternating_optimize(ch, cfg, synthetic_budget, 1.0, s).se;
        INFO(describe(cfg));
        CHECK(opt >= oracle - 1e-2);
        CHECK(opt <= oracle + 1e-2);
    }
}

TEST_CASE("brute_force_oracle - rejects instances beyond its reach")
{
    const ScenarioChannels ch4 = synthetic_channels(4, 1);
    CHECK_THROWS_AS(brute_force_oracle(ch4, RisConfig::single(4), synthetic_budget, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(brute_force_oracle(ch4, RisConfig::fully(4), synthetic_budget, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(brute_force_oracle(ch4, RisConfig::group(4, 2), synthetic_budget, 1.0), std::invalid_argument);
}
