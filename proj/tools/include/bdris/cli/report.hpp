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

#include "bdris/cli/config_io.hpp"
#include "bdris/scattering.hpp"
#include "bdris/scenario.hpp"

#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

namespace bdris::cli
{

inline constexpr const char* records_header = "scheme,n,trial,seed,se_bits_per_hz,p_v_watts,converged,iterations";
inline constexpr const char* aggregates_header = "scheme,n,count,mean_se_bits_per_hz,std_error,converged_fraction";

void write_records_csv(std::ostream& out, const std::vector<SweepRecord>& records);
void write_aggregates_csv(std::ostream& out, const std::vector<AggregateRow>& rows);

/// Mean SE against N, one polyline per scheme with standard-error bars.
std::string render_svg(const std::vector<AggregateRow>& rows);

/// Writes records.csv, aggregates.csv, manifest.json and sweep.svg into dir,
/// creating it if needed. Throws IoError on any filesystem failure.
void write_sweep_outputs(const std::filesystem::path& dir, const SweepResult& result, const Manifest& manifest);

/// One line of the architecture/mode characteristics table.
struct Table1Row
{
    int n = 0;
    int g = 0; ///< number of groups
    RisConfig config;
    std::uint64_t group_dimension = 0;
    std::uint64_t elements_per_group = 0;
    std::uint64_t nonzeros = 0;
    ComplexityCount complexity;
};

inline constexpr const char* table1_header =
    "n,architecture,mode,sectors,groups,group_dimension,elements_per_group,nonzeros,complexity,rounded_up";

/// Columns: sectors is the number of scattering blocks (1, 1, 2, S).
/// For every N: single-connected and fully-connected rows, then
/// group-connected rows for every G, each in reflective, transmissive, hybrid
/// and multi-sector (S = sectors) mode. Throws InputError when some G does
/// not divide some N.
std::vector<Table1Row> table1_rows(const std::vector<int>& n_values, const std::vector<int>& g_values,
                                   int sectors = 3);

void write_table1_csv(std::ostream& out, const std::vector<Table1Row>& rows);

} // namespace bdris::cli
