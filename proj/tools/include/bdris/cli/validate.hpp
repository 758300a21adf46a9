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

#include "bdris/optimizer.hpp"

#include <ostream>
#include <string>
#include <vector>

namespace bdris::cli
{

struct ValidateOptions
{
    /// Fewer seeds and only the cheapest oracle instance.
    bool quick = false;
    /// Test hook: perturbs every projected matrix so the residual checks fail.
    bool break_projection = false;
    OptimizerSettings optimizer{};
};

struct CheckResult
{
    std::string name;
    bool passed = false;
    std::string detail;
    double seconds = 0.0;
};

/// Runs the invariant battery: projection residual, sparsity and idempotence
/// over every architecture and mode, counting formulas, gradient against
/// finite differences, ascent monotonicity and brute-force oracle agreement.
std::vector<CheckResult> run_validation(const ValidateOptions& options);

void print_check_table(std::ostream& out, const std::vector<CheckResult>& checks);

/// Hardware-complexity table for N in {16, 32, 64} and G in {2, 4, 8}.
void print_complexity_table(std::ostream& out);

} // namespace bdris::cli
