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

#include "bdris/optimizer.hpp"

#include "bdris/random.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>

namespace bdris
{

void OptimizerSettings::check() const
{
    if (max_outer_iters < 1 || inner_grad_iters < 1)
        throw ConfigError("optimizer iteration limits must be positive");
    if (!(step_init > 0.0))
        throw ConfigError("step_init must be positive");
    if (!(backtrack_factor > 0.0 && backtrack_factor < 1.0))
        throw ConfigError("backtrack_factor must lie in (0, 1)");
    if (!(tol_delta_se > 0.0))
        throw ConfigError("tol_delta_se must be positive");
    if (restarts < 0)
        throw ConfigError("restarts must be nonnegative");
}

namespace
{

void require_single_block(const RisConfig& config)
{
    config.check();
    if (config.block_count() != 1)
        throw ConfigError("the V2V optimizer handles single-block (reflective) surfaces, got " + describe(config));
}

// Cap on the V2V power implied by leakage l into the cellular user.
double capped_power(double leakage_gain, const LinkBudget& b, double p_max)
{
    if (!(leakage_gain > 0.0))
        return p_max;
    return std::min(p_max, b.i_max / leakage_gain);
}

// Unit vector of v, or e_0 when v vanishes.
Eigen::VectorXcd direction_or_first(const Eigen::VectorXcd& v)
{
    const double norm = v.norm();
    if (norm > 0.0)
        return v / norm;
    Eigen::VectorXcd e = Eigen::VectorXcd::Zero(v.size());
    e(0) = 1.0;
    return e;
}

// Orthonormal basis whose first column is u; the rest come from Gram-Schmidt
// over the canonical basis in index order.
Eigen::MatrixXcd complete_basis(const Eigen::VectorXcd& u)
{
    const Eigen::Index d = u.size();
    Eigen::MatrixXcd basis(d, d);
    basis.col(0) = u;
    Eigen::Index filled = 1;
    for (Eigen::Index k = 0; k < d && filled < d; ++k)
    {
        Eigen::VectorXcd e = Eigen::VectorXcd::Zero(d);
        e(k) = 1.0;
        for (int pass = 0; pass < 2; ++pass)
            e -= basis.leftCols(filled) * (basis.leftCols(filled).adjoint() * e);
        const double norm = e.norm();
        if (norm < 1e-6)
            continue;
        basis.col(filled++) = e / norm;
    }
    return basis;
}

struct Terms
{
    std::complex<double> signal;
    std::complex<double> rsu;
    std::complex<double> leak;
};

Terms evaluate_terms(const ScenarioChannels& ch, const Eigen::MatrixXcd& phi)
{
    return {effective_channel(ch.h_d, ch.h_t, ch.g_r, phi), effective_channel(ch.f_d, ch.f_t, ch.g_r, phi),
            effective_channel(ch.q_d, ch.h_t, ch.q_r, phi)};
}

double fixed_power_sinr(const Terms& t, const LinkBudget& b, double p)
{
    return p * std::norm(t.signal) / (b.p_c * std::norm(t.rsu) + b.sigma2);
}

Eigen::MatrixXcd mask_to_pattern(Eigen::MatrixXcd g, const RisConfig& cfg)
{
    for (Eigen::Index c = 0; c < g.cols(); ++c)
        for (Eigen::Index r = 0; r < g.rows(); ++r)
            if (!in_pattern(cfg, r, c))
                g(r, c) = 0.0;
    return g;
}

} // namespace

double optimal_power_phi(const ScenarioChannels& ch, const Eigen::MatrixXcd& phi, const LinkBudget& b, double p_max)
{
    if (!(p_max > 0.0))
        throw ConfigError("p_max must be positive");
    return capped_power(cellular_interference_phi(ch, phi, 1.0), b, p_max);
}

double optimal_power(const ScenarioChannels& ch, const ScatteringMatrix& m, const LinkBudget& b, double p_max)
{
    return optimal_power_phi(ch, m.block(0), b, p_max);
}

double optimal_power_direct(const ScenarioChannels& ch, const LinkBudget& b, double p_max)
{
    return optimal_power_phi(ch, Eigen::MatrixXcd(), b, p_max);
}

ScatteringMatrix closed_form_align(const ScenarioChannels& ch, const RisConfig& config)
{
    require_single_block(config);
    ch.check();
    if (ch.size() != config.n_elements)
        throw DimensionError("channels have " + std::to_string(ch.size()) + " elements, config has " +
                             std::to_string(config.n_elements));
    if (ch.h_t.norm() == 0.0 || ch.g_r.norm() == 0.0)
        throw std::invalid_argument("closed-form alignment needs nonzero h_t and g_r");

    const Eigen::Index n = config.n_elements;
    const Eigen::Index d = config.group_dimension();
    const std::complex<double> rotation = std::polar(1.0, std::arg(ch.h_d));
    Eigen::MatrixXcd phi = Eigen::MatrixXcd::Zero(n, n);

    if (d == 1)
    {
        for (Eigen::Index k = 0; k < n; ++k)
            phi(k, k) = rotation * std::polar(1.0, -std::arg(std::conj(ch.g_r(k)) * ch.h_t(k)));
    }
    else
    {
        for (int g = 0; g < config.group_count(); ++g)
        {
            const Eigen::Index off = g * d;
            const Eigen::MatrixXcd left = complete_basis(direction_or_first(ch.g_r.segment(off, d)));
            const Eigen::MatrixXcd right = complete_basis(direction_or_first(ch.h_t.segment(off, d)));
            phi.block(off, off, d, d) = rotation * left * right.adjoint();
        }
    }
    return ScatteringMatrix(config, {std::move(phi)});
}

double objective_value(Objective objective, const ScenarioChannels& ch, const Eigen::MatrixXcd& phi,
                       const LinkBudget& b, double p_max)
{
    const Terms t = evaluate_terms(ch, phi);
    const double p = objective == Objective::FixedPower ? b.p_v : capped_power(std::norm(t.leak), b, p_max);
    return spectral_efficiency(fixed_power_sinr(t, b, p));
}

namespace
{

// SE along one smooth branch of the power-controlled objective, with its
// real-coordinate gradient (unmasked).
struct Branch
{
    double se = 0.0;
    Eigen::MatrixXcd grad;
};

// Power held at p.
Branch fixed_power_branch(const ScenarioChannels& ch, const Terms& t, const LinkBudget& b, double p)
{
    const double s2 = std::norm(t.signal);
    const double denom = b.p_c * std::norm(t.rsu) + b.sigma2;
    const Eigen::MatrixXcd grad_s2 = 2.0 * t.signal * ch.g_r * ch.h_t.adjoint();
    const Eigen::MatrixXcd grad_denom = 2.0 * b.p_c * t.rsu * ch.g_r * ch.f_t.adjoint();
    const double sinr = p * s2 / denom;
    const Eigen::MatrixXcd grad_sinr = (p / denom) * (grad_s2 - (s2 / denom) * grad_denom);
    return {spectral_efficiency(sinr), grad_sinr / ((1.0 + sinr) * std::numbers::ln2)};
}

// Power pinned to the interference cap, p = i_max / |leak|^2 (leak != 0).
Branch capped_branch(const ScenarioChannels& ch, const Terms& t, const LinkBudget& b)
{
    const double s2 = std::norm(t.signal);
    const double leak = std::norm(t.leak);
    const double denom = b.p_c * std::norm(t.rsu) + b.sigma2;
    const Eigen::MatrixXcd grad_s2 = 2.0 * t.signal * ch.g_r * ch.h_t.adjoint();
    const Eigen::MatrixXcd grad_denom = 2.0 * b.p_c * t.rsu * ch.g_r * ch.f_t.adjoint();
    const Eigen::MatrixXcd grad_leak = 2.0 * t.leak * ch.q_r * ch.h_t.adjoint();
    const double sinr = b.i_max * s2 / (leak * denom);
    const Eigen::MatrixXcd grad_sinr =
        (b.i_max / (leak * denom)) * (grad_s2 - (s2 / leak) * grad_leak - (s2 / denom) * grad_denom);
    return {spectral_efficiency(sinr), grad_sinr / ((1.0 + sinr) * std::numbers::ln2)};
}

bool cap_binding(const Terms& t, const LinkBudget& b, double p_max)
{
    const double leak = std::norm(t.leak);
    return leak > 0.0 && b.i_max / leak < p_max;
}

// Steepest-ascent direction of min(branch SEs) on the feasible manifold. When
// both branches are within `active_gap` of each other the direction is the
// minimum-norm point of the hull of their tangent gradients, which raises
// both branches to first order.
Eigen::MatrixXcd ascent_direction(const ScenarioChannels& ch, const ScatteringMatrix& m, const LinkBudget& b,
                                  double p_max)
{
    const Terms t = evaluate_terms(ch, m.block(0));
    const Branch uncapped = fixed_power_branch(ch, t, b, p_max);
    if (!(std::norm(t.leak) > 0.0))
        return riemannian_gradient(m, mask_to_pattern(uncapped.grad, m.config()));
    const Branch capped = capped_branch(ch, t, b);

    const double value = std::min(uncapped.se, capped.se);
    const double active_gap = 1e-3 * value;
    if (capped.se < uncapped.se - active_gap)
        return riemannian_gradient(m, mask_to_pattern(capped.grad, m.config()));
    if (uncapped.se < capped.se - active_gap)
        return riemannian_gradient(m, mask_to_pattern(uncapped.grad, m.config()));
    const Eigen::MatrixXcd r1 = riemannian_gradient(m, mask_to_pattern(uncapped.grad, m.config()));
    const Eigen::MatrixXcd r2 = riemannian_gradient(m, mask_to_pattern(capped.grad, m.config()));
    const Eigen::MatrixXcd diff = r1 - r2;
    const double dd = diff.squaredNorm();
    if (!(dd > 0.0))
        return r1;
    const double mu = std::clamp(-(r2.conjugate().cwiseProduct(diff)).sum().real() / dd, 0.0, 1.0);
    return mu * r1 + (1.0 - mu) * r2;
}

// Polar retraction of the unitary block x moved to x + delta. Every gradient
// of the objective has the form [g q] M [h f]^H on a block, so x^H delta acts
// inside span(x^H g, x^H q, h, f) and the identity elsewhere; the polar factor
// then reduces to a k x k problem with k <= 4. Returns nullopt when the span
// assumption fails numerically, in which case the caller projects densely.
std::optional<Eigen::MatrixXcd> low_rank_polar(const Eigen::MatrixXcd& x, const Eigen::MatrixXcd& delta,
                                               const Eigen::MatrixXcd& vectors)
{
    Eigen::JacobiSVD<Eigen::MatrixXcd> span(vectors, Eigen::ComputeThinU);
    const Eigen::VectorXd& sv = span.singularValues();
    if (!(sv(0) > 0.0))
        return std::nullopt;
    Eigen::Index k = 0;
    while (k < sv.size() && sv(k) > 1e-12 * sv(0))
        ++k;
    const Eigen::MatrixXcd basis = span.matrixU().leftCols(k);
    const Eigen::MatrixXcd xb = x * basis;
    const Eigen::MatrixXcd small = xb.adjoint() * (delta * basis);
    const Eigen::MatrixXcd rebuilt = xb * small * basis.adjoint();
    if (!((delta - rebuilt).norm() <= 1e-11 * (delta.norm() + 1e-300)))
        return std::nullopt;
    const Eigen::MatrixXcd identity = Eigen::MatrixXcd::Identity(k, k);
    const Eigen::MatrixXcd factor = polar_unitary_factor(identity + small);
    return x + xb * (factor - identity) * basis.adjoint();
}

// Moves along `direction` and maps back onto the feasible set. Large dense
// blocks use the subspace form above; everything else goes through
// project_feasible.
ScatteringMatrix retract(const ScenarioChannels& ch, const ScatteringMatrix& current,
                         const Eigen::MatrixXcd& direction, double step)
{
    constexpr Eigen::Index dense_limit = 8;
    const RisConfig& cfg = current.config();
    const Eigen::Index d = cfg.group_dimension();
    if (d <= dense_limit)
        return project_feasible({current.block(0) + step * direction}, cfg);

    Eigen::MatrixXcd phi = Eigen::MatrixXcd::Zero(cfg.n_elements, cfg.n_elements);
    for (int g = 0; g < cfg.group_count(); ++g)
    {
        const Eigen::Index off = g * d;
        const Eigen::MatrixXcd x = current.block(0).block(off, off, d, d);
        const Eigen::MatrixXcd delta = step * direction.block(off, off, d, d);
        Eigen::MatrixXcd vectors(d, 4);
        vectors << x.adjoint() * ch.g_r.segment(off, d), x.adjoint() * ch.q_r.segment(off, d),
            ch.h_t.segment(off, d), ch.f_t.segment(off, d);
        std::optional<Eigen::MatrixXcd> block = low_rank_polar(x, delta, vectors);
        if (!block)
            return project_feasible({current.block(0) + step * direction}, cfg);
        phi.block(off, off, d, d) = *block;
    }
    return ScatteringMatrix(cfg, {std::move(phi)});
}

} // namespace

Eigen::MatrixXcd wirtinger_gradient(Objective objective, const ScenarioChannels& ch, const ScatteringMatrix& m,
                                    const LinkBudget& b, double p_max)
{
    require_single_block(m.config());
    const Terms t = evaluate_terms(ch, m.block(0));
    Branch branch;
    if (objective == Objective::FixedPower)
        branch = fixed_power_branch(ch, t, b, b.p_v);
    else if (cap_binding(t, b, p_max))
        branch = capped_branch(ch, t, b);
    else
        branch = fixed_power_branch(ch, t, b, p_max);
    return mask_to_pattern(std::move(branch.grad), m.config());
}

Eigen::MatrixXcd riemannian_gradient(const ScatteringMatrix& m, const Eigen::MatrixXcd& euclidean)
{
    require_single_block(m.config());
    const RisConfig& cfg = m.config();
    const Eigen::Index d = cfg.group_dimension();
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(euclidean.rows(), euclidean.cols());
    for (int g = 0; g < cfg.group_count(); ++g)
    {
        const Eigen::Index off = g * d;
        const auto u = m.block(0).block(off, off, d, d);
        const auto e = euclidean.block(off, off, d, d);
        const Eigen::MatrixXcd inner = u.adjoint() * e;
        out.block(off, off, d, d) = e - u * (0.5 * (inner + inner.adjoint()));
    }
    return out;
}

ScatteringMatrix projected_gradient_ascent(const ScenarioChannels& ch, const ScatteringMatrix& m0,
                                           const LinkBudget& b, double p_max, const OptimizerSettings& settings)
{
    settings.check();
    require_single_block(m0.config());
    const RisConfig& cfg = m0.config();
    constexpr double armijo = 1e-4;
    constexpr double max_step = 1.0;
    constexpr double min_step = 1e-12;

    ScatteringMatrix current = m0;
    double value = objective_value(Objective::PowerControlled, ch, current.block(0), b, p_max);
    const double scale = std::sqrt(static_cast<double>(cfg.n_elements));
    double step = settings.step_init;

    for (int it = 0; it < settings.inner_grad_iters; ++it)
    {
        const Eigen::MatrixXcd grad = ascent_direction(ch, current, b, p_max);
        const double grad_norm = grad.norm();
        if (!(grad_norm > 0.0) || !std::isfinite(grad_norm))
            break;
        const Eigen::MatrixXcd direction = (scale / grad_norm) * grad;

        bool accepted = false;
        double gain = 0.0;
        while (step >= min_step)
        {
            std::optional<ScatteringMatrix> candidate;
            try
            {
                candidate = retract(ch, current, direction, step);
            }
            catch (const RankDeficientError&)
            {
                step *= settings.backtrack_factor;
                continue;
            }
            const double cand_value = objective_value(Objective::PowerControlled, ch, candidate->block(0), b, p_max);
            const double predicted = (grad.conjugate().cwiseProduct(candidate->block(0) - current.block(0))).sum().real();
            if (cand_value > value && cand_value - value >= armijo * std::max(predicted, 0.0))
            {
                gain = cand_value - value;
                value = cand_value;
                current = std::move(*candidate);
                accepted = true;
                break;
            }
            step *= settings.backtrack_factor;
        }
        if (!accepted || gain < settings.tol_delta_se)
            break;
        step = std::min(step / settings.backtrack_factor, max_step);
    }
    // Rounding from the subspace updates accumulates slowly; one dense
    // projection at the end keeps the constraint residual at machine level.
    return project_feasible({current.block(0)}, cfg);
}

namespace
{

OptimizeResult run_from(const ScenarioChannels& ch, ScatteringMatrix start, const LinkBudget& b, double p_max,
                        const OptimizerSettings& settings)
{
    OptimizeResult result;
    ScatteringMatrix current = std::move(start);
    LinkBudget budget = b;

    budget.p_v = optimal_power(ch, current, b, p_max);
    double se = spectral_efficiency(sinr_v2v(ch, current, budget));
    result.trace.push_back(se);

    for (int outer = 0; outer < settings.max_outer_iters; ++outer)
    {
        ScatteringMatrix next = projected_gradient_ascent(ch, current, budget, p_max, settings);
        LinkBudget next_budget = budget;
        next_budget.p_v = optimal_power(ch, next, b, p_max);
        const double next_se = spectral_efficiency(sinr_v2v(ch, next, next_budget));
        result.iterations = outer + 1;
        if (!(next_se >= se))
        {
            // Keep the previous iterate; the ascent step never lowers the
            // power-controlled objective, so this only guards rounding.
            result.trace.push_back(se);
            result.converged = true;
            break;
        }
        const double delta = next_se - se;
        current = std::move(next);
        budget = next_budget;
        se = next_se;
        result.trace.push_back(se);
        if (delta < settings.tol_delta_se)
        {
            result.converged = true;
            break;
        }
    }

    result.p_v_opt = budget.p_v;
    result.se = se;
    result.matrix_opt = std::move(current);
    return result;
}

} // namespace

OptimizeResult alternating_optimize(const ScenarioChannels& ch, const RisConfig& config, const LinkBudget& b,
                                    double p_max, const OptimizerSettings& settings,
                                    const std::optional<ScatteringMatrix>& warm_start)
{
    settings.check();
    b.check();
    require_single_block(config);
    if (!(p_max > 0.0))
        throw ConfigError("p_max must be positive");

    std::vector<ScatteringMatrix> starts;
    starts.push_back(closed_form_align(ch, config));
    if (warm_start)
    {
        if (!(warm_start->config() == config))
            throw ConfigError("warm start has configuration " + describe(warm_start->config()) + ", expected " +
                              describe(config));
        starts.push_back(*warm_start);
    }
    for (int r = 0; r < settings.restarts; ++r)
        starts.push_back(random_feasible(config, derive_seed(settings.seed, static_cast<std::uint64_t>(r))));

    std::optional<OptimizeResult> best;
    for (auto& start : starts)
    {
        OptimizeResult candidate = run_from(ch, std::move(start), b, p_max, settings);
        if (!best || candidate.se > best->se)
            best = std::move(candidate);
    }
    return std::move(*best);
}

OptimizeResult optimize_without_surface(const ScenarioChannels& ch, const LinkBudget& b, double p_max)
{
    b.check();
    OptimizeResult result;
    LinkBudget budget = b;
    budget.p_v = optimal_power_direct(ch, b, p_max);
    result.p_v_opt = budget.p_v;
    result.se = spectral_efficiency(sinr_v2v_direct(ch, budget));
    result.trace = {result.se};
    result.converged = true;
    result.iterations = 0;
    return result;
}

ScatteringMatrix embed(const ScatteringMatrix& m, const RisConfig& target)
{
    require_single_block(target);
    if (m.size() != target.n_elements || m.config().block_count() != 1)
        throw DimensionError("cannot embed " + describe(m.config()) + " into " + describe(target));
    ScatteringMatrix out(target, m.blocks());
    const ConstraintReport report = validate(out, 1e-9);
    if (!report.pass)
        throw ConfigError(describe(m.config()) + " is not feasible for " + describe(target));
    return out;
}

} // namespace bdris
