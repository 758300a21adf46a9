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

#include "bdris/cli/config_io.hpp"

#include <chrono>
#include <ctime>
#include <fstream>
#include <functional>
#include <limits>
#include <sstream>
#include <vector>

namespace bdris::cli
{

using json = nlohmann::json;
using ordered = nlohmann::ordered_json;

InputError::InputError(std::string message, int line, std::string field)
    : std::runtime_error(std::move(message)), line_(line), field_(std::move(field))
{
}

namespace
{

int line_of_offset(const std::string& text, std::size_t offset)
{
    offset = std::min(offset, text.size());
    int line = 1;
    for (std::size_t i = 0; i < offset; ++i)
        if (text[i] == '\n')
            ++line;
    return line;
}

// Best-effort line of a dotted key path: each component is searched as a
// quoted key after the position of its parent.
int line_of_field(const std::string& text, const std::string& path)
{
    std::size_t pos = 0;
    std::size_t start = 0;
    bool found = false;
    while (start <= path.size())
    {
        const std::size_t dot = path.find('.', start);
        const std::string key = path.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
        const std::size_t hit = text.find("\"" + key + "\"", pos);
        if (hit == std::string::npos)
            break;
        pos = hit;
        found = true;
        if (dot == std::string::npos)
            break;
        start = dot + 1;
    }
    return found ? line_of_offset(text, pos) : 0;
}

class Reader
{
  public:
    explicit Reader(const std::string& text) : text_(text) {}

    [[noreturn]] void fail(const std::string& path, const std::string& what) const
    {
        const int line = line_of_field(text_, path);
        std::string msg = line > 0 ? "line " + std::to_string(line) + ", " : std::string();
        throw InputError(msg + "field '" + path + "': " + what, line, path);
    }

    // Visits an object, rejecting keys that no handler claims.
    void object(const json& node, const std::string& path,
                const std::vector<std::pair<std::string, std::function<void(const json&, const std::string&)>>>& keys)
        const
    {
        if (!node.is_object())
            fail(path.empty() ? "<root>" : path, "expected an object");
        for (auto it = node.begin(); it != node.end(); ++it)
        {
            const std::string child = path.empty() ? it.key() : path + "." + it.key();
            bool known = false;
            for (const auto& [name, handler] : keys)
                if (name == it.key())
                {
                    handler(it.value(), child);
                    known = true;
                    break;
                }
            if (!known)
                fail(child, "unknown field");
        }
    }

    double number(const json& v, const std::string& path) const
    {
        if (!v.is_number())
            fail(path, "expected a number");
        return v.get<double>();
    }

    int integer(const json& v, const std::string& path) const
    {
        if (!v.is_number_integer())
            fail(path, "expected an integer");
        const auto x = v.get<std::int64_t>();
        if (x < std::numeric_limits<int>::min() || x > std::numeric_limits<int>::max())
            fail(path, "integer out of range");
        return static_cast<int>(x);
    }

    std::uint64_t seed(const json& v, const std::string& path) const
    {
        if (v.is_number_unsigned())
            return v.get<std::uint64_t>();
        if (v.is_number_integer() && v.get<std::int64_t>() >= 0)
            return static_cast<std::uint64_t>(v.get<std::int64_t>());
        fail(path, "expected a nonnegative integer");
    }

    bool boolean(const json& v, const std::string& path) const
    {
        if (!v.is_boolean())
            fail(path, "expected true or false");
        return v.get<bool>();
    }

    Point2 point(const json& v, const std::string& path) const
    {
        if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
            fail(path, "expected [x, y] in meters");
        return {v[0].get<double>(), v[1].get<double>()};
    }

  private:
    const std::string& text_;
};

SweepConfig read_sweep(const json& root, const Reader& r)
{
    SweepConfig cfg;
    std::string free_space_path;
    using Handler = std::function<void(const json&, const std::string&)>;
    auto num = [&r](double& dst) -> Handler {
        return [&r, d = &dst](const json& v, const std::string& p) { *d = r.number(v, p); };
    };
    auto integer = [&r](int& dst) -> Handler {
        return [&r, d = &dst](const json& v, const std::string& p) { *d = r.integer(v, p); };
    };

    r.object(
        root, "",
        {
            {"n_values",
             [&](const json& v, const std::string& p) {
                 if (!v.is_array())
                     r.fail(p, "expected an array of integers");
                 cfg.n_values.clear();
                 for (std::size_t i = 0; i < v.size(); ++i)
                     cfg.n_values.push_back(r.integer(v[i], p));
             }},
            {"schemes",
             [&](const json& v, const std::string& p) {
                 if (!v.is_array())
                     r.fail(p, "expected an array of scheme names");
                 cfg.schemes.clear();
                 for (const auto& s : v)
                 {
                     const auto scheme = s.is_string() ? scheme_from_string(s.get<std::string>()) : std::nullopt;
                     if (!scheme)
                         r.fail(p, "unknown scheme " + s.dump() +
                                       " (expected fully_connected, group_connected, single_connected or no_ris)");
                     cfg.schemes.push_back(*scheme);
                 }
             }},
            {"trials", integer(cfg.trials)},
            {"base_seed", [&](const json& v, const std::string& p) { cfg.base_seed = r.seed(v, p); }},
            {"group_dimension", integer(cfg.group_dimension)},
            {"p_max", num(cfg.p_max)},
            {"threads", integer(cfg.threads)},
            {"budget",
             [&](const json& v, const std::string& p) {
                 r.object(v, p,
                          {{"p_v", num(cfg.budget.p_v)},
                           {"p_c", num(cfg.budget.p_c)},
                           {"sigma2", num(cfg.budget.sigma2)},
                           {"i_max", num(cfg.budget.i_max)}});
             }},
            {"geometry",
             [&](const json& v, const std::string& p) {
                 auto pt = [&r](Point2& dst) -> Handler {
                     return [&r, d = &dst](const json& x, const std::string& q) { *d = r.point(x, q); };
                 };
                 GeometryConfig& g = cfg.geometry;
                 r.object(v, p,
                          {{"v2v_tx", pt(g.v2v_tx)},
                           {"v2v_rx", pt(g.v2v_rx)},
                           {"ris", pt(g.ris)},
                           {"rsu", pt(g.rsu)},
                           {"cellular_user", pt(g.cellular_user)},
                           {"carrier_frequency_hz", num(g.carrier_frequency_hz)}});
             }},
            {"fading",
             [&](const json& v, const std::string& p) {
                 FadingConfig& f = cfg.fading;
                 r.object(v, p,
                          {{"exponent_direct", num(f.exponent_direct)},
                           {"exponent_ris", num(f.exponent_ris)},
                           {"exponent_interference", num(f.exponent_interference)},
                           {"reference_loss_db",
                            [&](const json& x, const std::string& q) {
                                if (x.is_string() && x.get<std::string>() == "free_space")
                                    free_space_path = q;
                                else if (x.is_number())
                                    f.reference_loss_db = x.get<double>();
                                else
                                    r.fail(q, "expected a number (dB) or \"free_space\"");
                            }},
                           {"k_direct", num(f.k_direct)},
                           {"k_ris", num(f.k_ris)},
                           {"k_interference", num(f.k_interference)},
                           {"ris_interference",
                            [&](const json& x, const std::string& q) { f.ris_interference = r.boolean(x, q); }}});
             }},
            {"optimizer",
             [&](const json& v, const std::string& p) {
                 OptimizerSettings& o = cfg.optimizer;
                 r.object(v, p,
                          {{"max_outer_iters", integer(o.max_outer_iters)},
                           {"inner_grad_iters", integer(o.inner_grad_iters)},
                           {"step_init", num(o.step_init)},
                           {"backtrack_factor", num(o.backtrack_factor)},
                           {"tol_delta_se", num(o.tol_delta_se)},
                           {"seed", [&](const json& x, const std::string& q) { o.seed = r.seed(x, q); }},
                           {"restarts", integer(o.restarts)}});
             }},
        });

    // Resolved after the whole document so a carrier given later still counts.
    if (!free_space_path.empty())
        cfg.fading.reference_loss_db = free_space_reference_loss_db(cfg.geometry.carrier_frequency_hz);

    try
    {
        cfg.check();
    }
    catch (const std::exception& e)
    {
        throw InputError(std::string("invalid configuration: ") + e.what(), 0, "");
    }
    return cfg;
}

ordered point_json(const Point2& p) { return ordered::array({p.x, p.y}); }

} // namespace

SweepConfig parse_config(const std::string& text)
{
    json root;
    try
    {
        root = json::parse(text);
    }
    catch (const json::parse_error& e)
    {
        const int line = line_of_offset(text, e.byte > 0 ? e.byte - 1 : 0);
        throw InputError("line " + std::to_string(line) + ": malformed JSON: " + e.what(), line, "");
    }
    const Reader reader(text);
    // A manifest carries the resolved configuration under "config".
    if (root.is_object() && root.contains("tool_version") && root.contains("config"))
        return read_sweep(root["config"], reader);
    return read_sweep(root, reader);
}

SweepConfig load_config(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError("cannot open config file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    if (in.bad())
        throw IoError("failed reading config file '" + path + "'");
    return parse_config(buf.str());
}

ordered to_json(const SweepConfig& cfg)
{
    ordered schemes = ordered::array();
    for (Scheme s : cfg.schemes)
        schemes.push_back(to_string(s));
    ordered out;
    out["n_values"] = cfg.n_values;
    out["schemes"] = schemes;
    out["trials"] = cfg.trials;
    out["base_seed"] = cfg.base_seed;
    out["group_dimension"] = cfg.group_dimension;
    out["p_max"] = cfg.p_max;
    out["threads"] = cfg.threads;
    out["budget"] = {{"p_v", cfg.budget.p_v},
                     {"p_c", cfg.budget.p_c},
                     {"sigma2", cfg.budget.sigma2},
                     {"i_max", cfg.budget.i_max}};
    const GeometryConfig& g = cfg.geometry;
    out["geometry"] = {{"v2v_tx", point_json(g.v2v_tx)},
                       {"v2v_rx", point_json(g.v2v_rx)},
                       {"ris", point_json(g.ris)},
                       {"rsu", point_json(g.rsu)},
                       {"cellular_user", point_json(g.cellular_user)},
                       {"carrier_frequency_hz", g.carrier_frequency_hz}};
    const FadingConfig& f = cfg.fading;
    out["fading"] = {{"exponent_direct", f.exponent_direct},
                     {"exponent_ris", f.exponent_ris},
                     {"exponent_interference", f.exponent_interference},
                     {"reference_loss_db", f.reference_loss_db},
                     {"k_direct", f.k_direct},
                     {"k_ris", f.k_ris},
                     {"k_interference", f.k_interference},
                     {"ris_interference", f.ris_interference}};
    const OptimizerSettings& o = cfg.optimizer;
    out["optimizer"] = {{"max_outer_iters", o.max_outer_iters},
                        {"inner_grad_iters", o.inner_grad_iters},
                        {"step_init", o.step_init},
                        {"backtrack_factor", o.backtrack_factor},
                        {"tol_delta_se", o.tol_delta_se},
                        {"seed", o.seed},
                        {"restarts", o.restarts}};
    return out;
}

ordered to_json(const Manifest& manifest)
{
    ordered out;
    out["tool"] = "bdris";
    out["tool_version"] = tool_version;
    out["config_path"] = manifest.config_path;
    out["base_seed"] = manifest.config.base_seed;
    out["timestamp_utc"] = manifest.timestamp_utc;
    out["config"] = to_json(manifest.config);
    return out;
}

std::string utc_timestamp()
{
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

} // namespace bdris::cli
