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

#include "bdris/scenario.hpp"

#include <json.hpp>

#include <stdexcept>
#include <string>

namespace bdris::cli
{

inline constexpr const char* tool_version = "0.1.0";

/// Malformed or inconsistent configuration input. `line` is 1-based and 0 when
/// no position is known; `field` is the dotted path of the offending key.
class InputError : public std::runtime_error
{
  public:
    InputError(std::string message, int line, std::string field);

    int line() const { return line_; }
    const std::string& field() const { return field_; }

  private:
    int line_;
    std::string field_;
};

/// Files that cannot be read or written.
class IoError : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

/// Parses a sweep configuration from JSON text. Every key is optional and
/// missing keys take the library defaults; unknown keys are rejected. A run
/// manifest is accepted too, in which case its embedded "config" is used.
SweepConfig parse_config(const std::string& text);

/// Reads and parses a file; IoError if it cannot be opened.
SweepConfig load_config(const std::string& path);

/// Full configuration with every default written out.
nlohmann::ordered_json to_json(const SweepConfig& cfg);

struct Manifest
{
    std::string config_path;
    std::string timestamp_utc;
    SweepConfig config;
};

nlohmann::ordered_json to_json(const Manifest& manifest);

/// Current time as an ISO-8601 UTC string, second resolution.
std::string utc_timestamp();

} // namespace bdris::cli
