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

#include "bdris/metrics.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace bdris
{

void LinkBudget::check() const
{
    if (!(p_v >= 0.0) || !(p_c >= 0.0) || !(i_max >= 0.0))
        throw ConfigError("link budget powers must be nonnegative");
    if (!(sigma2 > 0.0))
        throw ConfigError("noise variance must be positive");
}

std::complex<double> effective_channel(std::complex<double> direct, const Eigen::VectorXcd& incoming,
                                       const Eigen::VectorXcd& outgoing, const Eigen::MatrixXcd& phi)
{
    if (phi.size() == 0)
        return direct;
    if (phi.rows() != outgoing.size() || phi.cols() != incoming.size())
        throw DimensionError("effective channel: phi is " + std::to_string(phi.rows()) + "x" +
                             std::to_string(phi.cols()) + " but vectors have lengths " +
                             std::to_string(outgoing.size()) + " and " + std::to_string(incoming.size()));
    return direct + outgoing.dot(phi * incoming);
}

std::complex<double> effective_channel(std::complex<double> direct, const Eigen::VectorXcd& incoming,
                                       const Eigen::VectorXcd& outgoing, const ScatteringMatrix& m)
{
    return effective_channel(direct, incoming, outgoing, m.block(0));
}

double sinr_v2v_phi(const ScenarioChannels& ch, const Eigen::MatrixXcd& phi, const LinkBudget& b)
{
    const double signal = std::norm(effective_channel(ch.h_d, ch.h_t, ch.g_r, phi));
    const double interference = std::norm(effective_channel(ch.f_d, ch.f_t, ch.g_r, phi));
    return b.p_v * signal / (b.p_c * interference + b.sigma2);
}

double cellular_interference_phi(const ScenarioChannels& ch, const Eigen::MatrixXcd& phi, double p_v)
{
    return p_v * std::norm(effective_channel(ch.q_d, ch.h_t, ch.q_r, phi));
}

double sinr_v2v(const ScenarioChannels& ch, const ScatteringMatrix& m, const LinkBudget& b)
{
    return sinr_v2v_phi(ch, m.block(0), b);
}

double sinr_v2v_direct(const ScenarioChannels& ch, const LinkBudget& b)
{
    return sinr_v2v_phi(ch, Eigen::MatrixXcd(), b);
}

double cellular_interference(const ScenarioChannels& ch, const ScatteringMatrix& m, double p_v)
{
    return cellular_interference_phi(ch, m.block(0), p_v);
}

double cellular_interference_direct(const ScenarioChannels& ch, double p_v)
{
    return cellular_interference_phi(ch, Eigen::MatrixXcd(), p_v);
}

double spectral_efficiency(double sinr)
{
    if (!(sinr >= 0.0))
        throw std::domain_error("spectral efficiency needs a nonnegative SINR");
    return std::log1p(sinr) / std::numbers::ln2;
}

} // namespace bdris
