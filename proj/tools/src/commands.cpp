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

#include "bdris/cli/commands.hpp"

#include "bdris/cli/config_io.hpp"
#include "bdris/cli/report.hpp"
#include "bdris/cli/validate.hpp"

#include <CLI11.hpp>

#include <charconv>
#include <chrono>
#include <cstdlib>

namespace bdris::cli
{

namespace
{

std::uint64_t parse_env_seed(const std::string& text)
{
    std::uint64_t value = 0;
    const char* first = text.data();
    const char* last = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (text.empty() || ec != std::errc() || ptr != last)
        throw InputError("BDRIS_SEED must be a nonnegative integer, got '" + text + "'", 0, "BDRIS_SEED");
    return value;
}

void report_input_error(std::ostream& err, const InputError& e)
{
    err << "error: " << e.what() << '\n';
}

} // namespace

int cmd_sweep(const SweepOptions& options, std::ostream& out, std::ostream& err)
{
    SweepConfig cfg;
    try
    {
        if (options.config_path)
            cfg = load_config(*options.config_path);
        if (options.env_seed)
            cfg.base_seed = parse_env_seed(*options.env_seed);
        if (options.seed)
            cfg.base_seed = *options.seed;
        if (options.trials)
            cfg.trials = *options.trials;
        if (options.threads)
            cfg.threads = *options.threads;
        cfg.check();
    }
    catch (const InputError& e)
    {
        report_input_error(err, e);
        return exit_bad_input;
    }
    catch (const IoError& e)
    {
        err << "error: " << e.what() << '\n';
        return exit_io_failure;
    }
    catch (const ConfigError& e)
    {
        err << "error: invalid option: " << e.what() << '\n';
        return exit_bad_input;
    }

    const auto start = std::chrono::steady_clock::now();
    const SweepResult result = run_sweep(cfg);
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    try
    {
        write_sweep_outputs(options.out_dir, result, {options.config_path.value_or(""), utc_timestamp(), cfg});
    }
    catch (const IoError& e)
    {
        err << "error: " << e.what() << '\n';
        return exit_io_failure;
    }
    out << "sweep: " << result.records.size() << " records, " << result.aggregates.size() << " aggregate rows in "
        << seconds << " s -> " << options.out_dir << '\n';
    return exit_ok;
}

int cmd_validate(const ValidateCommandOptions& options, std::ostream& out, std::ostream& err)
{
    ValidateOptions v;
    v.quick = options.quick;
    v.break_projection = options.break_projection;
    if (options.config_path)
    {
        try
        {
            v.optimizer = load_config(*options.config_path).optimizer;
        }
        catch (const InputError& e)
        {
            report_input_error(err, e);
            return exit_bad_input;
        }
        catch (const IoError& e)
        {
            err << "error: " << e.what() << '\n';
            return exit_io_failure;
        }
    }

    const std::vector<CheckResult> checks = run_validation(v);
    print_check_table(out, checks);
    out << '\n';
    print_complexity_table(out);

    std::string failed;
    for (const auto& c : checks)
        if (!c.passed)
            failed += (failed.empty() ? "" : ", ") + c.name;
    if (!failed.empty())
    {
        err << "validate: failed invariants: " << failed << '\n';
        return exit_invariant_failure;
    }
    out << "\nall invariants hold\n";
    return exit_ok;
}

int cmd_table1(const std::vector<int>& n_values, const std::vector<int>& g_values, std::ostream& out,
               std::ostream& err)
{
    try
    {
        write_table1_csv(out, table1_rows(n_values, g_values));
    }
    catch (const InputError& e)
    {
        report_input_error(err, e);
        return exit_bad_input;
    }
    return exit_ok;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Beyond-diagonal RIS simulator: sweeps, invariant checks and architecture tables", "bdris"};
    app.set_version_flag("--version", std::string(tool_version));
    app.require_subcommand(1);

    SweepOptions sweep;
    std::string config_path;
    std::uint64_t seed = 0;
    int trials = 0, threads = 0;
    CLI::App* sweep_cmd = app.add_subcommand("sweep", "Monte Carlo sweep of spectral efficiency versus N");
    sweep_cmd->add_option("--config", config_path, "JSON configuration or run manifest");
    sweep_cmd->add_option("--out", sweep.out_dir, "Output directory")->required();
    auto* trials_opt = sweep_cmd->add_option("--trials", trials, "Trials per N (overrides config)");
    auto* seed_opt = sweep_cmd->add_option("--seed", seed, "Base seed (overrides BDRIS_SEED and config)");
    auto* threads_opt = sweep_cmd->add_option("--threads", threads, "Worker threads, 0 = all cores");

    ValidateCommandOptions validate;
    std::string validate_config;
    CLI::App* validate_cmd = app.add_subcommand("validate", "Run the invariant battery");
    validate_cmd->add_flag("--quick", validate.quick, "Reduced seeds and oracle instances");
    validate_cmd->add_option("--config", validate_config, "Configuration supplying optimizer settings");
    // Test hook, deliberately left out of --help.
    validate_cmd->add_flag("--inject-broken-projection", validate.break_projection)->group("");

    std::vector<int> n_values{16, 32, 64};
    std::vector<int> g_values{2, 4, 8};
    CLI::App* table_cmd = app.add_subcommand("table1", "Architecture and mode characteristics as CSV");
    table_cmd->add_option("--n", n_values, "Element counts")->delimiter(',');
    table_cmd->add_option("--g", g_values, "Group counts")->delimiter(',');

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::CallForHelp&)
    {
        out << app.help();
        return exit_ok;
    }
    catch (const CLI::CallForAllHelp&)
    {
        out << app.help("", CLI::AppFormatMode::All);
        return exit_ok;
    }
    catch (const CLI::CallForVersion&)
    {
        out << tool_version << '\n';
        return exit_ok;
    }
    catch (const CLI::ParseError& e)
    {
        err << "error: " << e.what() << '\n';
        return exit_bad_input;
    }

    if (sweep_cmd->parsed())
    {
        if (!config_path.empty())
            sweep.config_path = config_path;
        if (*trials_opt)
            sweep.trials = trials;
        if (*seed_opt)
            sweep.seed = seed;
        if (*threads_opt)
            sweep.threads = threads;
        if (const char* env = std::getenv("BDRIS_SEED"))
            sweep.env_seed = std::string(env);
        return cmd_sweep(sweep, out, err);
    }
    if (validate_cmd->parsed())
    {
        if (!validate_config.empty())
            validate.config_path = validate_config;
        return cmd_validate(validate, out, err);
    }
    return cmd_table1(n_values, g_values, out, err);
}

} // namespace bdris::cli
