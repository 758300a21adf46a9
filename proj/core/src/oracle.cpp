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

#include "bdris/oracle.hpp"

#include "bdris/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace bdris
{

namespace
{

using cd = std::complex<double>;

// The three linear forms the objective depends on: V2V signal, RSU
// interference at the V2V receiver, and leakage into the cellular user.
struct Forms
{
    cd signal;
    cd rsu;
    cd leak;
};

Forms operator+(const Forms& a, const Forms& b) { return {a.signal + b.signal, a.rsu + b.rsu, a.leak + b.leak}; }

// Coefficients of entry (r, c) of phi in each form.
Forms entry_coefficients(const ScenarioChannels& ch, Eigen::Index r, Eigen::Index c)
{
    return {std::conj(ch.g_r(r)) * ch.h_t(c), std::conj(ch.g_r(r)) * ch.f_t(c), std::conj(ch.q_r(r)) * ch.h_t(c)};
}

struct Best
{
    double sinr = -1.0;
    std::vector<int> index;
};

// base + coeff * (c + j s) for one linear form.
struct Rotated
{
    double re0, im0, a, b;
};

// Fills the SINR numerator/denominator of every tabulated angle and reports
// whether any of them beats `floor`. Below leak_floor the interference cap is
// inactive, so clamping keeps the ratio exact while avoiding 0/0.
#if defined(__GNUC__) && defined(__x86_64__) && !defined(__clang__)
__attribute__((target_clones("avx2", "default")))
#endif
bool screen(const double* __restrict c, const double* __restrict s, double* __restrict num, double* __restrict den,
            std::size_t m, Rotated sg, Rotated rs, Rotated lk, double p_max, double i_max, double p_c, double sigma2,
            double leak_floor, double floor)
{
    double hit = 0.0;
    for (std::size_t k = 0; k < m; ++k)
    {
        const double sr = sg.re0 + sg.a * c[k] - sg.b * s[k];
        const double si = sg.im0 + sg.a * s[k] + sg.b * c[k];
        const double ir = rs.re0 + rs.a * c[k] - rs.b * s[k];
        const double ii = rs.im0 + rs.a * s[k] + rs.b * c[k];
        const double lr = lk.re0 + lk.a * c[k] - lk.b * s[k];
        const double li = lk.im0 + lk.a * s[k] + lk.b * c[k];
        const double sig = sr * sr + si * si;
        const double d = p_c * (ir * ir + ii * ii) + sigma2;
        const double raw_leak = lr * lr + li * li;
        const double leak = raw_leak > leak_floor ? raw_leak : leak_floor;
        const double power_leak = p_max * leak;
        num[k] = sig * (power_leak < i_max ? power_leak : i_max);
        den[k] = leak * d;
        hit = num[k] > floor * den[k] ? 1.0 : hit;
    }
    return hit != 0.0;
}

// Evaluates base + coeff * e^{j angle_k} for every tabulated angle and returns
// the best SINR with its position.
class RotationScan
{
  public:
    RotationScan(int points, double first, double spacing, const LinkBudget& b, double p_max)
        : cos_(static_cast<std::size_t>(points)), sin_(cos_.size()), num_(cos_.size()), den_(cos_.size()), b_(b),
          p_max_(p_max)
    {
        for (int k = 0; k < points; ++k)
        {
            cos_[static_cast<std::size_t>(k)] = std::cos(first + spacing * k);
            sin_[static_cast<std::size_t>(k)] = std::sin(first + spacing * k);
        }
    }

    // Best SINR over the table if it beats `floor`, otherwise {-1, -1}. The
    // screening pass compares numerators against floor * denominators so the
    // common no-improvement case needs no division.
    std::pair<double, int> best_above(double floor, const Forms& base, const Forms& coeff)
    {
        const double sr0 = base.signal.real(), si0 = base.signal.imag();
        const double ir0 = base.rsu.real(), ii0 = base.rsu.imag();
        const double lr0 = base.leak.real(), li0 = base.leak.imag();
        const double sa = coeff.signal.real(), sb = coeff.signal.imag();
        const double ia = coeff.rsu.real(), ib = coeff.rsu.imag();
        const double la = coeff.leak.real(), lb = coeff.leak.imag();
        const double p_max = p_max_, i_max = b_.i_max, p_c = b_.p_c, sigma2 = b_.sigma2;
        // Triangle-inequality bound over the whole circle; slices that cannot
        // beat the incumbent are skipped without changing the result.
        const double sig_hi = std::norm(std::abs(base.signal) + std::abs(coeff.signal));
        const double rsu_lo = std::max(0.0, std::abs(base.rsu) - std::abs(coeff.rsu));
        const double leak_lo = std::norm(std::max(0.0, std::abs(base.leak) - std::abs(coeff.leak)));
        const double power_hi = p_max * leak_lo > i_max ? i_max / leak_lo : p_max;
        if (power_hi * sig_hi <= floor * (p_c * rsu_lo * rsu_lo + sigma2) * (1.0 - 1e-12))
            return {-1.0, -1};

        const double leak_floor = std::max(1e-3 * i_max / p_max, 1e-300);
        const bool hit = screen(cos_.data(), sin_.data(), num_.data(), den_.data(), cos_.size(), {sr0, si0, sa, sb},
                                {ir0, ii0, ia, ib}, {lr0, li0, la, lb}, p_max, i_max, p_c, sigma2, leak_floor, floor);
        if (!hit)
            return {-1.0, -1};
        const double* num = num_.data();
        const double* den = den_.data();
        double top = -1.0;
        int pos = -1;
        for (std::size_t k = 0; k < num_.size(); ++k)
        {
            const double v = num[k] / den[k];
            if (v > top)
            {
                top = v;
                pos = static_cast<int>(k);
            }
        }
        return {top, pos};
    }

    cd rotation(int k) const { return {cos_[static_cast<std::size_t>(k)], sin_[static_cast<std::size_t>(k)]}; }

  private:
    std::vector<double> cos_, sin_, num_, den_;
    LinkBudget b_;
    double p_max_;
};

OracleResult finish(const ScenarioChannels& ch, const RisConfig& config, Eigen::MatrixXcd phi, const LinkBudget& b,
                    double p_max)
{
    ScatteringMatrix m(config, {std::move(phi)});
    LinkBudget budget = b;
    budget.p_v = optimal_power(ch, m, b, p_max);
    const double se = spectral_efficiency(sinr_v2v(ch, m, budget));
    return {se, budget.p_v, std::move(m)};
}

OracleResult single_connected(const ScenarioChannels& ch, const RisConfig& config, const LinkBudget& b, double p_max,
                              int points)
{
    const int n = config.n_elements;
    const double spacing = 2.0 * std::numbers::pi / points;
    RotationScan scan(points, 0.0, spacing, b, p_max);

    std::vector<Forms> coeff;
    for (int k = 0; k < n; ++k)
        coeff.push_back(entry_coefficients(ch, k, k));
    const Forms direct{ch.h_d, ch.f_d, ch.q_d};

    // Odometer over the first n-1 phases; the last one is scanned.
    std::vector<int> outer(static_cast<std::size_t>(n - 1), 0);
    Best best;
    for (;;)
    {
        Forms base = direct;
        for (int k = 0; k < n - 1; ++k)
        {
            const cd rot = scan.rotation(outer[static_cast<std::size_t>(k)]);
            base = base + Forms{coeff[k].signal * rot, coeff[k].rsu * rot, coeff[k].leak * rot};
        }
        const auto [value, pos] = scan.best_above(best.sinr, base, coeff[static_cast<std::size_t>(n - 1)]);
        if (pos >= 0 && value > best.sinr)
        {
            best.sinr = value;
            best.index = outer;
            best.index.push_back(pos);
        }
        int k = n - 2;
        while (k >= 0 && ++outer[static_cast<std::size_t>(k)] == points)
            outer[static_cast<std::size_t>(k--)] = 0;
        if (k < 0)
            break;
    }

    Eigen::MatrixXcd phi = Eigen::MatrixXcd::Zero(n, n);
    for (int k = 0; k < n; ++k)
        phi(k, k) = scan.rotation(best.index[static_cast<std::size_t>(k)]);
    return finish(ch, config, std::move(phi), b, p_max);
}

Eigen::Matrix2cd u2(double a, double t, double bb, double c)
{
    Eigen::Matrix2cd u;
    u << std::cos(t) * std::polar(1.0, bb), std::sin(t) * std::polar(1.0, c), -std::sin(t) * std::polar(1.0, -c),
        std::cos(t) * std::polar(1.0, -bb);
    return std::polar(1.0, a) * u;
}

OracleResult fully_connected_2(const ScenarioChannels& ch, const RisConfig& config, const LinkBudget& b,
                               double p_max, double step)
{
    // An even number of circle points keeps (a + pi, b + pi, c + pi) on the
    // grid; that shift maps the parametrization onto itself, so a only needs
    // to cover [0, pi).
    int circle = static_cast<int>(std::ceil(2.0 * std::numbers::pi / step));
    circle += circle % 2;
    const double spacing = 2.0 * std::numbers::pi / circle;
    const int tilt_points = static_cast<int>(std::ceil((std::numbers::pi / 2.0) / step)) + 1;
    const double tilt_spacing = (std::numbers::pi / 2.0) / (tilt_points - 1);

    RotationScan scan(circle / 2, 0.0, spacing, b, p_max);
    std::vector<cd> unit(static_cast<std::size_t>(circle));
    for (int k = 0; k < circle; ++k)
        unit[static_cast<std::size_t>(k)] = std::polar(1.0, spacing * k);

    Forms c[2][2];
    for (int r = 0; r < 2; ++r)
        for (int col = 0; col < 2; ++col)
            c[r][col] = entry_coefficients(ch, r, col);
    const Forms direct{ch.h_d, ch.f_d, ch.q_d};
    auto scaled = [](const Forms& f, cd w) { return Forms{f.signal * w, f.rsu * w, f.leak * w}; };

    Best best;
    for (int ti = 0; ti < tilt_points; ++ti)
    {
        const double ct = std::cos(tilt_spacing * ti);
        const double st = std::sin(tilt_spacing * ti);
        for (int bi = 0; bi < circle; ++bi)
        {
            const cd eb = unit[static_cast<std::size_t>(bi)];
            const Forms diag = scaled(c[0][0], ct * eb) + scaled(c[1][1], ct * std::conj(eb));
            for (int ci = 0; ci < circle; ++ci)
            {
                const cd ec = unit[static_cast<std::size_t>(ci)];
                const Forms coeff = diag + scaled(c[0][1], st * ec) + scaled(c[1][0], -st * std::conj(ec));
                const auto [value, pos] = scan.best_above(best.sinr, direct, coeff);
                if (pos >= 0 && value > best.sinr)
                {
                    best.sinr = value;
                    best.index = {pos, ti, bi, ci};
                }
            }
        }
    }
    Eigen::MatrixXcd phi = u2(spacing * best.index[0], tilt_spacing * best.index[1], spacing * best.index[2],
                              spacing * best.index[3]);
    return finish(ch, config, std::move(phi), b, p_max);
}

} // namespace

OracleResult brute_force_oracle(const ScenarioChannels& ch, const RisConfig& config, const LinkBudget& b,
                                double p_max, const OracleGrid& grid)
{
    config.check();
    b.check();
    ch.check();
    if (config.block_count() != 1)
        throw std::invalid_argument("oracle handles single-block configurations only");
    if (ch.size() != config.n_elements)
        throw DimensionError("channel length does not match the configuration");
    if (!(p_max > 0.0) || grid.phase_points < 2 || !(grid.unitary_step > 0.0))
        throw std::invalid_argument("invalid oracle grid or power limit");

    const int n = config.n_elements;
    if (config.group_dimension() == 1)
    {
        if (n > 3)
            throw std::invalid_argument("single-connected oracle supports N <= 3, got " + std::to_string(n));
        return single_connected(ch, config, b, p_max, grid.phase_points);
    }
    if (config.architecture == Architecture::FullyConnected && n == 2)
        return fully_connected_2(ch, config, b, p_max, grid.unitary_step);
    throw std::invalid_argument("oracle supports single-connected N <= 3 and fully-connected N <= 2, got " +
                                describe(config));
}

} // namespace bdris
