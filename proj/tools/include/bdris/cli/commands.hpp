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

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace bdris::cli
{

enum ExitCode : int
{
    exit_ok = 0,
    exit_invariant_failure = 1,
    exit_bad_input = 2,
    exit_io_failure = 3,
};

struct SweepOptions
{
    std::optional<std::string> config_path; ///< library defaults when absent
    std::string out_dir;
    std::optional<int> trials;
    std::optional<std::uint64_t> seed;
    std::optional<int> threads;
    /// Raw BDRIS_SEED value, if set. Overridden by `seed`, overrides the config.
    std::optional<std::string> env_seed;
};

int cmd_sweep(const SweepOptions& options, std::ostream& out, std::ostream& err);

struct ValidateCommandOptions
{
    bool quick = false;
    std::optional<std::string> config_path;
    bool break_projection = false;
};

int cmd_validate(const ValidateCommandOptions& options, std::ostream& out, std::ostream& err);

int cmd_table1(const std::vector<int>& n_values, const std::vector<int>& g_values, std::ostream& out,
               std::ostream& err);

/// Parses argv and dispatches to a subcommand; returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace bdris::cli
