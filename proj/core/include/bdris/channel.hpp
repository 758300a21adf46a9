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

#include "bdris/scattering.hpp"

#include <Eigen/Dense>

#include <complex>
#include <cstdint>

namespace bdris
{

struct Point2
{
    double x = 0.0;
    double y = 0.0;
};

double distance(const Point2& a, const Point2& b);

/// Node placement of the V2V underlay layout, in meters.
struct GeometryConfig
{
    Point2 v2v_tx{0.0, 0.0};
    Point2 v2v_rx{50.0, 0.0};
    Point2 ris{25.0, 10.0};
    Point2 rsu{-150.0, 50.0};
    Point2 cellular_user{-100.0, 20.0};
    double carrier_frequency_hz = 3.5e9;

    void check() const;
};

enum class LinkClass
{
    Direct,       ///< V2V Tx -> V2V Rx
    Ris,          ///< hops into and out of the surface on the V2V path
    Interference, ///< RSU -> V2V Rx / surface, V2V Tx / surface -> cellular user
};

/// Free-space loss at 1 m for the given carrier: 32.4 + 20 log10(f / 1 GHz) dB.
double free_space_reference_loss_db(double carrier_frequency_hz);

/// Log-distance path loss with Rician small-scale fading per link class.
///
/// The reference loss defaults to 0 dB, i.e. large-scale gains are normalized
/// to unity at 1 m and the noise power is read relative to that scale. With the
/// physical free-space value (see for_carrier) and a 1e-4 W noise floor every
/// link in the default layout sits near -60 dB SNR.
struct FadingConfig
{
    double exponent_direct = 3.5;
    double exponent_ris = 2.2;
    double exponent_interference = 3.0;
    double reference_loss_db = 0.0;
    double k_direct = 0.0;
    double k_ris = 2.0;
    double k_interference = 0.0;
    /// Include the surface-assisted interference paths (RSU -> RIS, RIS -> cellular user).
    bool ris_interference = true;

    /// Defaults with the reference loss set to the free-space value at the carrier.
    static FadingConfig for_carrier(double carrier_frequency_hz);

    double exponent(LinkClass c) const;
    double k_factor(LinkClass c) const;
    void check() const;
};

/// One realization of every channel in the layout. Vectors have one entry per
/// surface element.
struct ScenarioChannels
{
    std::complex<double> h_d;  ///< V2V Tx -> V2V Rx
    Eigen::VectorXcd h_t;      ///< V2V Tx -> surface
    Eigen::VectorXcd g_r;      ///< surface -> V2V Rx
    std::complex<double> f_d;  ///< RSU -> V2V Rx
    Eigen::VectorXcd f_t;      ///< RSU -> surface
    std::complex<double> q_d;  ///< V2V Tx -> cellular user
    Eigen::VectorXcd q_r;      ///< surface -> cellular user

    int size() const { return static_cast<int>(h_t.size()); }
    /// Throws DimensionError on unequal lengths or non-finite entries.
    void check() const;
};

/// Linear power gain 10^(-(PL0 + 10 alpha log10 d) / 10). Throws std::domain_error for d <= 0.
double path_loss_linear(double distance_m, LinkClass link_class, const FadingConfig& cfg);

/// Stable identifiers of the independent random substreams, one per link.
enum class LinkId : std::uint64_t
{
    Direct = 0,
    TxToRis = 1,
    RisToRx = 2,
    RsuToRx = 3,
    RsuToRis = 4,
    TxToUser = 5,
    RisToUser = 6,
};

/// Draws one realization of all links. Each link comes from its own substream
/// seeded by (seed, link id), and vector links draw element by element, so the
/// first n entries for a larger surface coincide with those for n elements.
ScenarioChannels sample_scenario(const GeometryConfig& geom, const FadingConfig& fading, int n, std::uint64_t seed);

/// Draws a single link: sqrt(gain) (sqrt(K/(K+1)) e^{j theta} + sqrt(1/(K+1)) CN(0,1)).
Eigen::VectorXcd sample_link(double gain, double k_factor, int length, std::uint64_t seed, LinkId id);

/// Geometry-free instance with CN(0, scale^2) entries on every link, used by
/// the verification suites to exercise interference-limited regimes.
struct SyntheticScales
{
    double direct = 0.5;
    double ris = 1.0;
    double rsu = 0.3;
    double leakage = 0.5;
};

ScenarioChannels synthetic_channels(int n, std::uint64_t seed, const SyntheticScales& scales = {});

} // namespace bdris
