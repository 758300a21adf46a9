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

#include "bdris/cli/report.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

namespace bdris::cli
{

void write_records_csv(std::ostream& out, const std::vector<SweepRecord>& records)
{
    out << records_header << '\n';
    for (const auto& r : records)
        out << fmt::format("{},{},{},{},{:.17g},{:.17g},{},{}\n", to_string(r.scheme), r.n, r.trial, r.seed, r.se,
                           r.p_v_opt, r.converged ? "true" : "false", r.iterations);
}

void write_aggregates_csv(std::ostream& out, const std::vector<AggregateRow>& rows)
{
    out << aggregates_header << '\n';
    for (const auto& a : rows)
        out << fmt::format("{},{},{},{:.17g},{:.17g},{:.17g}\n", to_string(a.scheme), a.n, a.count, a.mean_se,
                           a.std_error, a.converged_fraction);
}

namespace
{

const char* series_color(Scheme s)
{
    switch (s)
    {
    case Scheme::FullyConnected:
        return "#1f77b4";
    case Scheme::GroupConnected:
        return "#2ca02c";
    case Scheme::SingleConnected:
        return "#d62728";
    case Scheme::NoRis:
        return "#7f7f7f";
    }
    return "#000000";
}

// Round step (1, 2 or 5 times a power of ten) giving about `target` ticks.
double nice_step(double span, int target)
{
    const double raw = span / target;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    for (double m : {1.0, 2.0, 5.0, 10.0})
        if (m * mag >= raw)
            return m * mag;
    return 10.0 * mag;
}

} // namespace

std::string render_svg(const std::vector<AggregateRow>& rows)
{
    constexpr double width = 720, height = 480;
    constexpr double left = 80, right = 180, top = 30, bottom = 60;
    const double plot_w = width - left - right;
    const double plot_h = height - top - bottom;

    std::map<Scheme, std::vector<const AggregateRow*>> series;
    double x_lo = 1e300, x_hi = -1e300, y_hi = 0.0;
    for (const auto& r : rows)
    {
        series[r.scheme].push_back(&r);
        x_lo = std::min(x_lo, static_cast<double>(r.n));
        x_hi = std::max(x_hi, static_cast<double>(r.n));
        y_hi = std::max(y_hi, r.mean_se + r.std_error);
    }
    if (rows.empty())
        x_lo = 0, x_hi = 1;
    if (x_hi <= x_lo)
        x_hi = x_lo + 1;
    const double y_step = nice_step(y_hi > 0 ? y_hi : 1.0, 6);
    const double y_top = std::ceil((y_hi > 0 ? y_hi : 1.0) / y_step) * y_step;
    auto px = [&](double x) { return left + (x - x_lo) / (x_hi - x_lo) * plot_w; };
    auto py = [&](double y) { return top + plot_h - y / y_top * plot_h; };

    std::ostringstream s;
    s << fmt::format("<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{}\" height=\"{}\" "
                     "font-family=\"sans-serif\" font-size=\"12\">\n",
                     width, height);
    s << fmt::format("<rect x=\"0\" y=\"0\" width=\"{}\" height=\"{}\" fill=\"white\"/>\n", width, height);
    s << fmt::format("<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"none\" stroke=\"black\"/>\n", left,
                     top, plot_w, plot_h);

    for (double y = 0.0; y <= y_top + 1e-9 * y_top; y += y_step)
    {
        s << fmt::format("<line x1=\"{:.2f}\" y1=\"{:.2f}\" x2=\"{:.2f}\" y2=\"{:.2f}\" stroke=\"#dddddd\"/>\n",
                         left, py(y), left + plot_w, py(y));
        s << fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\" text-anchor=\"end\">{:g}</text>\n", left - 6, py(y) + 4,
                         y);
    }
    std::vector<int> xs;
    for (const auto& r : rows)
        xs.push_back(r.n);
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
    for (int x : xs)
        s << fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\" text-anchor=\"middle\">{}</text>\n", px(x),
                         top + plot_h + 18, x);

    s << fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\" text-anchor=\"middle\">Number of elements N</text>\n",
                     left + plot_w / 2, height - 15);
    s << fmt::format("<text x=\"20\" y=\"{:.2f}\" text-anchor=\"middle\" transform=\"rotate(-90 20 {:.2f})\">"
                     "Spectral efficiency (bits/s/Hz)</text>\n",
                     top + plot_h / 2, top + plot_h / 2);

    int legend = 0;
    for (const auto& [scheme, pts] : series)
    {
        const char* color = series_color(scheme);
        std::string points;
        for (const AggregateRow* r : pts)
        {
            points += fmt::format("{:.2f},{:.2f} ", px(r->n), py(r->mean_se));
            const double lo = py(std::max(0.0, r->mean_se - r->std_error));
            const double hi = py(r->mean_se + r->std_error);
            s << fmt::format("<line x1=\"{0:.2f}\" y1=\"{1:.2f}\" x2=\"{0:.2f}\" y2=\"{2:.2f}\" stroke=\"{3}\"/>\n",
                             px(r->n), lo, hi, color);
            for (double yy : {lo, hi})
                s << fmt::format(
                    "<line x1=\"{:.2f}\" y1=\"{:.2f}\" x2=\"{:.2f}\" y2=\"{:.2f}\" stroke=\"{}\"/>\n", px(r->n) - 4,
                    yy, px(r->n) + 4, yy, color);
        }
        if (!points.empty())
            points.pop_back();
        s << fmt::format("<polyline points=\"{}\" fill=\"none\" stroke=\"{}\" stroke-width=\"2\"/>\n", points, color);
        const double ly = top + 20 + 20 * legend++;
        s << fmt::format("<line x1=\"{:.2f}\" y1=\"{:.2f}\" x2=\"{:.2f}\" y2=\"{:.2f}\" stroke=\"{}\" "
                         "stroke-width=\"2\"/>\n",
                         left + plot_w + 15, ly, left + plot_w + 40, ly, color);
        s << fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\">{}</text>\n", left + plot_w + 46, ly + 4,
                         to_string(scheme));
    }
    s << "</svg>\n";
    return s.str();
}

namespace
{

void write_file(const std::filesystem::path& path, const std::string& content)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw IoError("cannot open '" + path.string() + "' for writing");
    out << content;
    out.flush();
    if (!out)
        throw IoError("failed writing '" + path.string() + "'");
}

} // namespace

void write_sweep_outputs(const std::filesystem::path& dir, const SweepResult& result, const Manifest& manifest)
{
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec || !std::filesystem::is_directory(dir))
        throw IoError("cannot create output directory '" + dir.string() + "'" +
                      (ec ? ": " + ec.message() : std::string()));

    std::ostringstream records, aggregates;
    write_records_csv(records, result.records);
    write_aggregates_csv(aggregates, result.aggregates);
    write_file(dir / "records.csv", records.str());
    write_file(dir / "aggregates.csv", aggregates.str());
    write_file(dir / "manifest.json", to_json(manifest).dump(2) + "\n");
    write_file(dir / "sweep.svg", render_svg(result.aggregates));
}

std::vector<Table1Row> table1_rows(const std::vector<int>& n_values, const std::vector<int>& g_values, int sectors)
{
    for (int n : n_values)
        if (n < 1)
            throw InputError("N must be positive, got " + std::to_string(n), 0, "n");
    for (int g : g_values)
        if (g < 1)
            throw InputError("G must be positive, got " + std::to_string(g), 0, "g");
    for (int n : n_values)
        for (int g : g_values)
            if (n % g != 0)
                throw InputError("G = " + std::to_string(g) + " does not divide N = " + std::to_string(n), 0, "g");

    const Mode modes[] = {Mode::Reflective, Mode::Transmissive, Mode::Hybrid, Mode::MultiSector};
    std::vector<Table1Row> rows;
    auto add = [&](const RisConfig& cfg) {
        Table1Row row;
        row.n = cfg.n_elements;
        row.g = cfg.group_count();
        row.config = cfg;
        row.group_dimension = static_cast<std::uint64_t>(cfg.group_dimension());
        row.elements_per_group = elements_per_group(cfg);
        row.nonzeros = nonzero_count(cfg);
        row.complexity = hardware_complexity(cfg);
        rows.push_back(row);
    };
    for (int n : n_values)
    {
        for (Mode m : modes)
            add(RisConfig::single(n, m, sectors));
        for (Mode m : modes)
            add(RisConfig::fully(n, m, sectors));
        for (int g : g_values)
            for (Mode m : modes)
                add(RisConfig::group(n, g, m, sectors));
    }
    return rows;
}

void write_table1_csv(std::ostream& out, const std::vector<Table1Row>& rows)
{
    out << table1_header << '\n';
    for (const auto& r : rows)
    {
        out << fmt::format("{},{},{},{},{},{},{},{},{},{}\n", r.n, to_string(r.config.architecture),
                           to_string(r.config.mode), r.config.block_count(), r.g, r.group_dimension,
                           r.elements_per_group, r.nonzeros, r.complexity.count,
                           r.complexity.rounded_up ? "true" : "false");
    }
}

} // namespace bdris::cli
