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

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <vector>

namespace bdris
{

struct OptimizerSettings
{
    int max_outer_iters = 200;
    int inner_grad_iters = 50;
    double step_init = 0.1;
    double backtrack_factor = 0.5;
    double tol_delta_se = 1e-6;
    std::uint64_t seed = 0;
    /// Extra random feasible starting points tried after the aligned start.
    int restarts = 0;

    void check() const;
};

struct OptimizeResult
{
    double p_v_opt = 0.0;
    std::optional<ScatteringMatrix> matrix_opt; ///< empty when no surface is deployed
    double se = 0.0;
    std::vector<double> trace; ///< SE after initialization and after every outer iteration
    bool converged = false;
    int iterations = 0;
};

/// Largest power below p_max that keeps the cellular interference at or below
/// i_max. With no leakage at all the cap is inactive and p_max is returned.
double optimal_power(const ScenarioChannels& ch, const ScatteringMatrix& m, const LinkBudget& b, double p_max);
double optimal_power_direct(const ScenarioChannels& ch, const LinkBudget& b, double p_max);
double optimal_power_phi(const ScenarioChannels& ch, const Eigen::MatrixXcd& phi, const LinkBudget& b,
                         double p_max);

/// Aligns every surface-assisted contribution with the direct path, ignoring
/// interference. Reflective single-block configurations only.
ScatteringMatrix closed_form_align(const ScenarioChannels& ch, const RisConfig& config);

enum class Objective
{
    /// SE at the budget's p_v.
    FixedPower,
    /// SE with the power set by optimal_power for the candidate matrix.
    PowerControlled,
};

/// Objective value in bits/s/Hz for a raw reflective block.
double objective_value(Objective objective, const ScenarioChannels& ch, const Eigen::MatrixXcd& phi,
                       const LinkBudget& b, double p_max);

/// Gradient of the objective with respect to the real and imaginary parts of
/// every free entry, packed as d/dRe + j d/dIm (twice the conjugate Wirtinger
/// derivative). Entries outside the sparsity pattern are zero. p_max is only
/// read for Objective::PowerControlled.
Eigen::MatrixXcd wirtinger_gradient(Objective objective, const ScenarioChannels& ch, const ScatteringMatrix& m,
                                    const LinkBudget& b, double p_max = 0.0);

/// Component of a Euclidean gradient tangent to the feasible manifold at m
/// (product of unitary groups over the architecture's groups).
Eigen::MatrixXcd riemannian_gradient(const ScatteringMatrix& m, const Eigen::MatrixXcd& euclidean);

/// Projected gradient ascent on the power-controlled SE with backtracking.
/// Never returns a matrix with lower SE than m0.
ScatteringMatrix projected_gradient_ascent(const ScenarioChannels& ch, const ScatteringMatrix& m0,
                                           const LinkBudget& b, double p_max, const OptimizerSettings& settings);

/// Alternates the closed-form power update with projected gradient ascent on
/// the scattering matrix, starting from the aligned solution (and warm_start,
/// when given, which must have the same configuration).
OptimizeResult alternating_optimize(const ScenarioChannels& ch, const RisConfig& config, const LinkBudget& b,
                                    double p_max, const OptimizerSettings& settings,
                                    const std::optional<ScatteringMatrix>& warm_start = std::nullopt);

/// Power-only solution for the layout without a surface.
OptimizeResult optimize_without_surface(const ScenarioChannels& ch, const LinkBudget& b, double p_max);

/// Re-embeds a feasible reflective matrix into a configuration whose feasible
/// set contains it (diagonal into block-diagonal into full).
ScatteringMatrix embed(const ScatteringMatrix& m, const RisConfig& target);

} // namespace bdris
