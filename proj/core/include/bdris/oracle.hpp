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
#include "bdris/scattering.hpp"

namespace bdris
{

/// Resolution of the exhaustive search.
struct OracleGrid
{
    /// Phase points per element for single-connected surfaces.
    int phase_points = 1024;
    /// Largest angular spacing of the U(2) parameter grid, in radians.
    double unitary_step = 0.02;
};

struct OracleResult
{
    double se = 0.0;
    double p_v = 0.0;
    ScatteringMatrix matrix;
};

/// Exhaustive search over a grid of feasible reflective matrices with the
/// power set by optimal_power at every grid point.
///
/// Single-connected: all phase combinations on a uniform grid, N <= 3.
/// Fully-connected: N <= 2, the N = 2 case sweeping
/// e^{ja} [[cos t e^{jb}, sin t e^{jc}], [-sin t e^{-jc}, cos t e^{-jb}]]
/// over t in [0, pi/2] and a, b, c around the circle.
/// Throws std::invalid_argument for larger instances or other configurations.
OracleResult brute_force_oracle(const ScenarioChannels& ch, const RisConfig& config, const LinkBudget& b,
                                double p_max, const OracleGrid& grid = {});

} // namespace bdris
