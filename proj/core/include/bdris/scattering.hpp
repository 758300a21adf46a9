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

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace bdris
{

using cdouble = std::complex<double>;

/// Raised for configurations that violate the architecture/mode invariants
/// (G not dividing N, S < 2, non-positive sizes).
class ConfigError : public std::invalid_argument
{
  public:
    using std::invalid_argument::invalid_argument;
};

/// Raised when matrix or vector shapes disagree with the configuration.
class DimensionError : public std::invalid_argument
{
  public:
    using std::invalid_argument::invalid_argument;
};

/// Raised by the unitary projection when a block has no unique polar factor.
class RankDeficientError : public std::domain_error
{
  public:
    using std::domain_error::domain_error;
};

enum class Architecture
{
    SingleConnected,
    FullyConnected,
    GroupConnected,
};

enum class Mode
{
    Reflective,
    Transmissive,
    Hybrid,
    MultiSector,
};

std::string to_string(Architecture a);
std::string to_string(Mode m);

/// Interconnection architecture and operating mode of a surface with N elements.
///
/// Single-connected is the diagonal surface (N groups of dimension 1),
/// fully-connected is a single group of dimension N, and group-connected splits
/// the elements into G groups of dimension N/G. The mode fixes how many
/// scattering blocks the surface carries: one for reflective and transmissive,
/// two (reflect, transmit) for hybrid, S for multi-sector.
struct RisConfig
{
    Architecture architecture = Architecture::FullyConnected;
    Mode mode = Mode::Reflective;
    int n_elements = 1;
    int groups = 1;  ///< G; only read for GroupConnected
    int sectors = 2; ///< S; only read for MultiSector

    static RisConfig single(int n, Mode mode = Mode::Reflective, int sectors = 2);
    static RisConfig fully(int n, Mode mode = Mode::Reflective, int sectors = 2);
    static RisConfig group(int n, int groups, Mode mode = Mode::Reflective, int sectors = 2);

    /// Throws ConfigError when an invariant does not hold.
    void check() const;

    int group_count() const;
    int group_dimension() const;
    int block_count() const;

    friend bool operator==(const RisConfig&, const RisConfig&) = default;
};

std::string describe(const RisConfig& cfg);

/// Stack of complex N x N scattering blocks with its architecture metadata.
///
/// Construction checks shapes only. Feasibility (sparsity and the mode's
/// unitarity condition) is established by project_feasible/random_feasible and
/// checked by validate.
class ScatteringMatrix
{
  public:
    ScatteringMatrix(RisConfig config, std::vector<Eigen::MatrixXcd> blocks);

    const RisConfig& config() const { return config_; }
    const std::vector<Eigen::MatrixXcd>& blocks() const { return blocks_; }
    const Eigen::MatrixXcd& block(int s) const { return blocks_.at(static_cast<std::size_t>(s)); }
    int size() const { return config_.n_elements; }

  private:
    RisConfig config_;
    std::vector<Eigen::MatrixXcd> blocks_;
};

struct ConstraintReport
{
    std::vector<double> group_residuals; ///< ||sum_s Phi_{s,g}^H Phi_{s,g} - I||_F per group
    double residual = 0.0;               ///< max over groups
    bool sparsity_exact = true;          ///< forbidden entries are exactly zero
    bool pass = false;
};

/// Checks the stack against the constraint set of its configuration.
/// Throws DimensionError on shape mismatch and ConfigError on an invalid config.
ConstraintReport validate(const ScatteringMatrix& m, double tol);

/// True when entry (row, col) may be nonzero under the architecture.
bool in_pattern(const RisConfig& cfg, Eigen::Index row, Eigen::Index col);

struct ProjectOptions
{
    /// Symmetrize each group block before taking its unitary factor, for
    /// reciprocal surfaces. Only defined for single-block modes.
    bool symmetric = false;
};

/// Nearest feasible stack: entries outside the sparsity pattern are zeroed and
/// every group's stacked sub-blocks [Phi_1,g; ...; Phi_S,g] are replaced by the
/// semi-unitary polar factor of that stack. For single-block modes this is the
/// ordinary polar unitary factor; for single-connected groups it is modulus
/// normalization.
ScatteringMatrix project_feasible(const std::vector<Eigen::MatrixXcd>& raw, const RisConfig& config,
                                  const ProjectOptions& options = {});

/// Projection of a seeded complex Gaussian stack. Deterministic in seed.
ScatteringMatrix random_feasible(const RisConfig& config, std::uint64_t seed);

/// Semi-unitary polar factor U V^H of a tall (or square) matrix.
/// Throws RankDeficientError if the smallest singular value is not resolvable.
Eigen::MatrixXcd polar_unitary_factor(const Eigen::MatrixXcd& a);

struct ComplexityCount
{
    std::uint64_t count = 0;
    bool rounded_up = false; ///< formula was not integral and was rounded up
};

/// Number of impedance components of the reconfigurable network.
ComplexityCount hardware_complexity(const RisConfig& config);

/// Number of entries of a scattering block that may be nonzero.
std::uint64_t nonzero_count(const RisConfig& config);

/// Entries per group block (1, N^2 or (N/G)^2).
std::uint64_t elements_per_group(const RisConfig& config);

} // namespace bdris
