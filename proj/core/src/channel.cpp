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

#include "bdris/channel.hpp"

#include "bdris/random.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace bdris
{

double distance(const Point2& a, const Point2& b) { return std::hypot(a.x - b.x, a.y - b.y); }

void GeometryConfig::check() const
{
    if (!(carrier_frequency_hz > 0.0) || !std::isfinite(carrier_frequency_hz))
        throw ConfigError("carrier frequency must be positive");
    const Point2 nodes[] = {v2v_tx, v2v_rx, ris, rsu, cellular_user};
    const char* names[] = {"v2v_tx", "v2v_rx", "ris", "rsu", "cellular_user"};
    for (int i = 0; i < 5; ++i)
        for (int j = i + 1; j < 5; ++j)
            if (!(distance(nodes[i], nodes[j]) > 0.0))
                throw ConfigError(std::string("nodes ") + names[i] + " and " + names[j] + " coincide");
}

double free_space_reference_loss_db(double carrier_frequency_hz)
{
    return 32.4 + 20.0 * std::log10(carrier_frequency_hz / 1e9);
}

FadingConfig FadingConfig::for_carrier(double carrier_frequency_hz)
{
    FadingConfig cfg;
    cfg.reference_loss_db = free_space_reference_loss_db(carrier_frequency_hz);
    return cfg;
}

double FadingConfig::exponent(LinkClass c) const
{
    switch (c)
    {
    case LinkClass::Direct:
        return exponent_direct;
    case LinkClass::Ris:
        return exponent_ris;
    case LinkClass::Interference:
        return exponent_interference;
    }
    return exponent_direct;
}

double FadingConfig::k_factor(LinkClass c) const
{
    switch (c)
    {
    case LinkClass::Direct:
        return k_direct;
    case LinkClass::Ris:
        return k_ris;
    case LinkClass::Interference:
        return k_interference;
    }
    return k_direct;
}

void FadingConfig::check() const
{
    for (double a : {exponent_direct, exponent_ris, exponent_interference})
        if (!(a >= 1.5 && a <= 6.0))
            throw ConfigError("path-loss exponent " + std::to_string(a) + " outside [1.5, 6]");
    for (double k : {k_direct, k_ris, k_interference})
        if (!(k >= 0.0) || !std::isfinite(k))
            throw ConfigError("Rician K-factor must be finite and nonnegative");
    if (!std::isfinite(reference_loss_db))
        throw ConfigError("reference path loss must be finite");
}

void ScenarioChannels::check() const
{
    const auto n = h_t.size();
    if (g_r.size() != n || f_t.size() != n || q_r.size() != n)
        throw DimensionError("channel vectors have unequal lengths");
    auto finite = [](const Eigen::VectorXcd& v) { return v.allFinite(); };
    if (!finite(h_t) || !finite(g_r) || !finite(f_t) || !finite(q_r) || !std::isfinite(std::abs(h_d)) ||
        !std::isfinite(std::abs(f_d)) || !std::isfinite(std::abs(q_d)))
        throw DimensionError("channel realization has non-finite entries");
}

double path_loss_linear(double distance_m, LinkClass link_class, const FadingConfig& cfg)
{
    if (!(distance_m > 0.0))
        throw std::domain_error("path loss needs a positive distance, got " + std::to_string(distance_m));
    const double loss_db = cfg.reference_loss_db + 10.0 * cfg.exponent(link_class) * std::log10(distance_m);
    return std::pow(10.0, -loss_db / 10.0);
}

Eigen::VectorXcd sample_link(double gain, double k_factor, int length, std::uint64_t seed, LinkId id)
{
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(id)));
    const double amp = std::sqrt(gain);
    const double los = std::sqrt(k_factor / (k_factor + 1.0));
    const double nlos = std::sqrt(1.0 / (k_factor + 1.0));
    Eigen::VectorXcd v(length);
    for (int i = 0; i < length; ++i)
    {
        const double theta = uniform_phase(rng);
        const std::complex<double> scatter = complex_gaussian(rng);
        v(i) = amp * (los * std::polar(1.0, theta) + nlos * scatter);
    }
    return v;
}

ScenarioChannels sample_scenario(const GeometryConfig& geom, const FadingConfig& fading, int n, std::uint64_t seed)
{
    geom.check();
    fading.check();
    if (n < 0)
        throw ConfigError("element count must be nonnegative");

    auto link = [&](Point2 a, Point2 b, LinkClass c, int len, LinkId id) {
        return sample_link(path_loss_linear(distance(a, b), c, fading), fading.k_factor(c), len, seed, id);
    };

    ScenarioChannels ch;
    ch.h_d = link(geom.v2v_tx, geom.v2v_rx, LinkClass::Direct, 1, LinkId::Direct)(0);
    ch.h_t = link(geom.v2v_tx, geom.ris, LinkClass::Ris, n, LinkId::TxToRis);
    ch.g_r = link(geom.ris, geom.v2v_rx, LinkClass::Ris, n, LinkId::RisToRx);
    ch.f_d = link(geom.rsu, geom.v2v_rx, LinkClass::Interference, 1, LinkId::RsuToRx)(0);
    ch.q_d = link(geom.v2v_tx, geom.cellular_user, LinkClass::Interference, 1, LinkId::TxToUser)(0);
    if (fading.ris_interference)
    {
        ch.f_t = link(geom.rsu, geom.ris, LinkClass::Interference, n, LinkId::RsuToRis);
        ch.q_r = link(geom.ris, geom.cellular_user, LinkClass::Interference, n, LinkId::RisToUser);
    }
    else
    {
        ch.f_t = Eigen::VectorXcd::Zero(n);
        ch.q_r = Eigen::VectorXcd::Zero(n);
    }
    return ch;
}

ScenarioChannels synthetic_channels(int n, std::uint64_t seed, const SyntheticScales& scales)
{
    ScenarioChannels ch;
    ch.h_d = sample_link(scales.direct * scales.direct, 0.0, 1, seed, LinkId::Direct)(0);
    ch.h_t = sample_link(scales.ris * scales.ris, 0.0, n, seed, LinkId::TxToRis);
    ch.g_r = sample_link(scales.ris * scales.ris, 0.0, n, seed, LinkId::RisToRx);
    ch.f_d = sample_link(scales.rsu * scales.rsu, 0.0, 1, seed, LinkId::RsuToRx)(0);
    ch.f_t = sample_link(scales.rsu * scales.rsu, 0.0, n, seed, LinkId::RsuToRis);
    ch.q_d = sample_link(scales.leakage * scales.leakage, 0.0, 1, seed, LinkId::TxToUser)(0);
    ch.q_r = sample_link(scales.leakage * scales.leakage, 0.0, n, seed, LinkId::RisToUser);
    return ch;
}

} // namespace bdris
