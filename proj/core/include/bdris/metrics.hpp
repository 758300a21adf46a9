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
#include "bdris/scattering.hpp"

#include <Eigen/Dense>

#include <complex>

namespace bdris
{

/// Powers in watts. i_max is the interference cap protecting the cellular user.
struct LinkBudget
{
    double p_v = 1.0;
    double p_c = 10.0;
    double sigma2 = 1e-4;
    double i_max = 1e-3;

    void check() const;
};

/// direct + outgoing^H * phi * incoming. An empty (0 x 0) phi means no surface.
std::complex<double> effective_channel(std::complex<double> direct, const Eigen::VectorXcd& incoming,
                                       const Eigen::VectorXcd& outgoing, const Eigen::MatrixXcd& phi);

/// Same, using the first (reflective) block of the stack.
std::complex<double> effective_channel(std::complex<double> direct, const Eigen::VectorXcd& incoming,
                                       const Eigen::VectorXcd& outgoing, const ScatteringMatrix& m);

// The *_phi forms take the raw reflective block; an empty matrix means no surface.
double sinr_v2v_phi(const ScenarioChannels& ch, const Eigen::MatrixXcd& phi, const LinkBudget& b);
double cellular_interference_phi(const ScenarioChannels& ch, const Eigen::MatrixXcd& phi, double p_v);

double sinr_v2v(const ScenarioChannels& ch, const ScatteringMatrix& m, const LinkBudget& b);
double sinr_v2v_direct(const ScenarioChannels& ch, const LinkBudget& b);

/// Interference power p_v |q_d + q_r^H phi h_t|^2 at the cellular user.
double cellular_interference(const ScenarioChannels& ch, const ScatteringMatrix& m, double p_v);
double cellular_interference_direct(const ScenarioChannels& ch, double p_v);

/// log2(1 + sinr) in bits/s/Hz.
double spectral_efficiency(double sinr);

} // namespace bdris
