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

#include "bdris/scattering.hpp"

#include "bdris/random.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace bdris
{

std::string to_string(Architecture a)
{
    switch (a)
    {
    case Architecture::SingleConnected:
        return "single_connected";
    case Architecture::FullyConnected:
        return "fully_connected";
    case Architecture::GroupConnected:
        return "group_connected";
    }
    return "unknown";
}

std::string to_string(Mode m)
{
    switch (m)
    {
    case Mode::Reflective:
        return "reflective";
    case Mode::Transmissive:
        return "transmissive";
    case Mode::Hybrid:
        return "hybrid";
    case Mode::MultiSector:
        return "multi_sector";
    }
    return "unknown";
}

RisConfig RisConfig::single(int n, Mode mode, int sectors)
{
    return RisConfig{Architecture::SingleConnected, mode, n, n, sectors};
}

RisConfig RisConfig::fully(int n, Mode mode, int sectors)
{
    return RisConfig{Architecture::FullyConnected, mode, n, 1, sectors};
}

RisConfig RisConfig::group(int n, int groups, Mode mode, int sectors)
{
    return RisConfig{Architecture::GroupConnected, mode, n, groups, sectors};
}

void RisConfig::check() const
{
    if (n_elements < 1)
        throw ConfigError("n_elements must be positive, got " + std::to_string(n_elements));
    if (architecture == Architecture::GroupConnected)
    {
        if (groups < 1)
            throw ConfigError("group count must be positive, got " + std::to_string(groups));
        if (n_elements % groups != 0)
            throw ConfigError("group count G = " + std::to_string(groups) + " does not divide N = " +
                              std::to_string(n_elements));
    }
    if (mode == Mode::MultiSector && sectors < 2)
        throw ConfigError("multi-sector mode needs S >= 2, got " + std::to_string(sectors));
}

int RisConfig::group_count() const
{
    switch (architecture)
    {
    case Architecture::SingleConnected:
        return n_elements;
    case Architecture::FullyConnected:
        return 1;
    case Architecture::GroupConnected:
        return groups;
    }
    return 1;
}

int RisConfig::group_dimension() const { return n_elements / group_count(); }

int RisConfig::block_count() const
{
    switch (mode)
    {
    case Mode::Reflective:
    case Mode::Transmissive:
        return 1;
    case Mode::Hybrid:
        return 2;
    case Mode::MultiSector:
        return sectors;
    }
    return 1;
}

std::string describe(const RisConfig& cfg)
{
    std::ostringstream os;
    os << to_string(cfg.architecture) << "/" << to_string(cfg.mode) << " N=" << cfg.n_elements;
    if (cfg.architecture == Architecture::GroupConnected)
        os << " G=" << cfg.groups;
    if (cfg.mode == Mode::MultiSector)
        os << " S=" << cfg.sectors;
    return os.str();
}

namespace
{

void check_shapes(const std::vector<Eigen::MatrixXcd>& blocks, const RisConfig& cfg)
{
    cfg.check();
    if (static_cast<int>(blocks.size()) != cfg.block_count())
        throw DimensionError(describe(cfg) + " expects " + std::to_string(cfg.block_count()) + " block(s), got " +
                             std::to_string(blocks.size()));
    for (std::size_t s = 0; s < blocks.size(); ++s)
    {
        if (blocks[s].rows() != cfg.n_elements || blocks[s].cols() != cfg.n_elements)
            throw DimensionError("block " + std::to_string(s) + " is " + std::to_string(blocks[s].rows()) + "x" +
                                 std::to_string(blocks[s].cols()) + ", expected " + std::to_string(cfg.n_elements) +
                                 "x" + std::to_string(cfg.n_elements));
    }
}

// Rows of all S group sub-blocks stacked on top of each other: (S*d) x d.
Eigen::MatrixXcd stack_group(const std::vector<Eigen::MatrixXcd>& blocks, Eigen::Index offset, Eigen::Index dim)
{
    const auto s_count = static_cast<Eigen::Index>(blocks.size());
    Eigen::MatrixXcd stacked(s_count * dim, dim);
    for (Eigen::Index s = 0; s < s_count; ++s)
        stacked.middleRows(s * dim, dim) = blocks[static_cast<std::size_t>(s)].block(offset, offset, dim, dim);
    return stacked;
}

} // namespace

ScatteringMatrix::ScatteringMatrix(RisConfig config, std::vector<Eigen::MatrixXcd> blocks)
    : config_(config), blocks_(std::move(blocks))
{
    check_shapes(blocks_, config_);
}

bool in_pattern(const RisConfig& cfg, Eigen::Index row, Eigen::Index col)
{
    const Eigen::Index d = cfg.group_dimension();
    return row / d == col / d;
}

ConstraintReport validate(const ScatteringMatrix& m, double tol)
{
    const RisConfig& cfg = m.config();
    check_shapes(m.blocks(), cfg);

    ConstraintReport report;
    const Eigen::Index n = cfg.n_elements;
    for (const auto& b : m.blocks())
        for (Eigen::Index c = 0; c < n; ++c)
            for (Eigen::Index r = 0; r < n; ++r)
                if (!in_pattern(cfg, r, c) && b(r, c) != cdouble(0.0, 0.0))
                    report.sparsity_exact = false;

    const Eigen::Index d = cfg.group_dimension();
    report.group_residuals.reserve(static_cast<std::size_t>(cfg.group_count()));
    for (int g = 0; g < cfg.group_count(); ++g)
    {
        Eigen::MatrixXcd gram = Eigen::MatrixXcd::Zero(d, d);
        for (const auto& b : m.blocks())
        {
            const auto sub = b.block(g * d, g * d, d, d);
            gram.noalias() += sub.adjoint() * sub;
        }
        gram -= Eigen::MatrixXcd::Identity(d, d);
        const double r = gram.norm();
        report.group_residuals.push_back(r);
        report.residual = std::max(report.residual, std::isfinite(r) ? r : std::numeric_limits<double>::infinity());
    }
    report.pass = report.sparsity_exact && report.residual <= tol;
    return report;
}

Eigen::MatrixXcd polar_unitary_factor(const Eigen::MatrixXcd& a)
{
    if (a.cols() == 1)
    {
        const double norm = a.norm();
        if (!(norm > 0.0) || !std::isfinite(norm))
            throw RankDeficientError("zero column has no unit-norm direction");
        return a / norm;
    }
    // Well-conditioned blocks take the cheaper route through the Gram matrix,
    // U = A (A^H A)^{-1/2}, followed by one Newton-Schulz sweep that restores
    // orthonormality to rounding level. Anything close to singular goes
    // through the SVD, which also performs the rank check.
    const Eigen::MatrixXcd gram = a.adjoint() * a;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(gram);
    if (eig.info() == Eigen::Success && eig.eigenvalues().minCoeff() > 1e-8 * eig.eigenvalues().maxCoeff())
    {
        const Eigen::VectorXd inv_sqrt = eig.eigenvalues().cwiseSqrt().cwiseInverse();
        const Eigen::MatrixXcd x = a * (eig.eigenvectors() * inv_sqrt.asDiagonal() * eig.eigenvectors().adjoint());
        const Eigen::Index k = a.cols();
        const Eigen::MatrixXcd y = 0.5 * x * (3.0 * Eigen::MatrixXcd::Identity(k, k) - x.adjoint() * x);
        if (y.allFinite())
            return y;
    }
    Eigen::BDCSVD<Eigen::MatrixXcd> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& sv = svd.singularValues();
    const double smax = sv.maxCoeff();
    const double smin = sv.minCoeff();
    if (!(smax > 0.0) || !std::isfinite(smax) ||
        smin <= smax * static_cast<double>(a.cols()) * std::numeric_limits<double>::epsilon())
        throw RankDeficientError("rank-deficient block (smallest singular value " + std::to_string(smin) + ")");
    return svd.matrixU() * svd.matrixV().adjoint();
}

ScatteringMatrix project_feasible(const std::vector<Eigen::MatrixXcd>& raw, const RisConfig& config,
                                  const ProjectOptions& options)
{
    check_shapes(raw, config);
    if (options.symmetric && config.block_count() != 1)
        throw ConfigError("symmetric projection is only defined for single-block modes");

    const Eigen::Index n = config.n_elements;
    const Eigen::Index d = config.group_dimension();
    std::vector<Eigen::MatrixXcd> out(raw.size(), Eigen::MatrixXcd::Zero(n, n));

    for (int g = 0; g < config.group_count(); ++g)
    {
        const Eigen::Index off = g * d;
        Eigen::MatrixXcd stacked = stack_group(raw, off, d);
        if (options.symmetric)
            stacked = (0.5 * (stacked + stacked.transpose())).eval();
        Eigen::MatrixXcd factor;
        try
        {
            factor = polar_unitary_factor(stacked);
        }
        catch (const RankDeficientError& e)
        {
            if (config.architecture == Architecture::SingleConnected)
                throw RankDeficientError("zero diagonal entry at element " + std::to_string(g) + " of " +
                                         describe(config));
            throw RankDeficientError("group " + std::to_string(g) + " of " + describe(config) + ": " + e.what());
        }
        for (std::size_t s = 0; s < raw.size(); ++s)
            out[s].block(off, off, d, d) = factor.middleRows(static_cast<Eigen::Index>(s) * d, d);
    }
    return ScatteringMatrix(config, std::move(out));
}

ScatteringMatrix random_feasible(const RisConfig& config, std::uint64_t seed)
{
    config.check();
    Rng rng(derive_seed(seed, 0x52495346ULL));
    const Eigen::Index n = config.n_elements;
    std::vector<Eigen::MatrixXcd> raw(static_cast<std::size_t>(config.block_count()), Eigen::MatrixXcd::Zero(n, n));
    for (auto& b : raw)
        for (Eigen::Index c = 0; c < n; ++c)
            for (Eigen::Index r = 0; r < n; ++r)
                if (in_pattern(config, r, c))
                    b(r, c) = complex_gaussian(rng);
    return project_feasible(raw, config);
}

ComplexityCount hardware_complexity(const RisConfig& config)
{
    config.check();
    const std::uint64_t n = static_cast<std::uint64_t>(config.n_elements);
    switch (config.architecture)
    {
    case Architecture::SingleConnected:
        switch (config.mode)
        {
        case Mode::Reflective:
        case Mode::Transmissive:
            return {n, false};
        case Mode::Hybrid:
            return {(3 * n + 1) / 2, (3 * n) % 2 != 0};
        case Mode::MultiSector: {
            // (S + 1) K / 2 with K taken as the element count.
            const std::uint64_t twice = (static_cast<std::uint64_t>(config.sectors) + 1) * n;
            return {(twice + 1) / 2, twice % 2 != 0};
        }
        }
        break;
    case Architecture::FullyConnected:
        return {(n + 1) * n / 2, false};
    case Architecture::GroupConnected: {
        const std::uint64_t dim = n / static_cast<std::uint64_t>(config.groups);
        return {(dim + 1) * n / 2, false};
    }
    }
    return {};
}

std::uint64_t elements_per_group(const RisConfig& config)
{
    config.check();
    const auto d = static_cast<std::uint64_t>(config.group_dimension());
    return d * d;
}

std::uint64_t nonzero_count(const RisConfig& config)
{
    return static_cast<std::uint64_t>(config.group_count()) * elements_per_group(config);
}

} // namespace bdris
