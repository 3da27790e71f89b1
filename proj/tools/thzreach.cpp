// SPDX-License-Identifier: Apache-2.0
//
// thzreach - mm-wave and THz indoor propagation and link-budget simulator
// Copyright (C) 2026 The thzreach authors
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

#include "thzreach/allocation.hpp"
#include "thzreach/experiment.hpp"
#include "thzreach/raytracer.hpp"
#include "thzreach/scenario.hpp"
#include "thzreach/scene_io.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>

#include <fstream>
#include <iostream>

using namespace thzreach;

namespace
{
    struct Common
    {
        std::string config, scene, absorption;
        std::vector<double> frequencies;
        std::vector<std::string> techniques;
        std::optional<double> threshold_db;
        std::optional<int> max_order;
        std::string out = "-";
    };

    void add_inputs(CLI::App *cmd, Common &c)
    {
        cmd->add_option("--config", c.config, "Scenario file (JSON)")->check(CLI::ExistingFile);
        cmd->add_option("--scene", c.scene, "Scene file (JSON); replaces the scenario scene")->check(CLI::ExistingFile);
        cmd->add_option("--absorption", c.absorption, "Absorption table CSV (frequency_hz,k_per_m)")
            ->check(CLI::ExistingFile);
        cmd->add_option("--max-order", c.max_order, "Maximum reflection order (0, 1 or 2)")->check(CLI::Range(0, 2));
    }

    void add_out(CLI::App *cmd, Common &c) { cmd->add_option("--out", c.out, "Output file ('-' for stdout)"); }

    Scenario load(const Common &c)
    {
        Scenario sc;
        if (!c.config.empty())
            sc = load_scenario_file(c.config);
        else
            sc.config = RunConfig::e_hallway_default();
        RunConfig &cfg = sc.config;
        if (!c.scene.empty())
        {
            auto doc = load_scene_file(c.scene);
            cfg.scene = std::move(doc.scene);
            if (doc.endpoints)
                cfg.endpoints = *doc.endpoints;
            cfg.tiles.host_surface_ids.clear();
        }
        if (!c.absorption.empty())
            cfg.table = load_absorption_file(c.absorption);
        if (!c.frequencies.empty())
            cfg.frequencies_hz = c.frequencies;
        if (!c.techniques.empty())
        {
            cfg.techniques.clear();
            for (const auto &t : c.techniques)
                cfg.techniques.push_back(parse_technique(t));
        }
        if (c.threshold_db)
            cfg.snr_threshold_db = *c.threshold_db;
        if (c.max_order)
            cfg.max_reflection_order = *c.max_order;
        cfg.validate();
        return sc;
    }

    template <class F>
    void emit(const std::string &path, F &&write)
    {
        if (path.empty() || path == "-")
        {
            write(std::cout);
            return;
        }
        std::ofstream out(path, std::ios::binary);
        if (!out)
            throw std::runtime_error(fmt::format("{}: cannot open for writing", path));
        write(out);
        if (!out)
            throw std::runtime_error(fmt::format("{}: write failed", path));
    }

    const Receiver &find_rx(const RunConfig &cfg, int id)
    {
        for (const auto &r : cfg.endpoints.rx)
            if (r.id == id)
                return r;
        throw std::invalid_argument(fmt::format("no receiver with id {}", id));
    }
}

int main(int argc, char **argv)
{
    CLI::App app{"thzreach: mm-wave and THz indoor link-budget simulator"};
    app.require_subcommand(1);
    Common c;

    // run
    auto *run_cmd = app.add_subcommand("run", "Evaluate every technique, frequency and receiver");
    add_inputs(run_cmd, c);
    run_cmd->add_option("--frequencies", c.frequencies, "Comma-separated frequencies in Hz")->delimiter(',');
    run_cmd->add_option("--techniques", c.techniques, "Comma-separated: BASELINE,UMMIMO,REFLECTARRAY,HYPERSURFACE,JOINT")
        ->delimiter(',');
    run_cmd->add_option("--threshold-db", c.threshold_db, "SNR threshold for reach distances");
    run_cmd->add_option("--out", c.out, "Results CSV ('-' for stdout)");
    std::string summary_path;
    run_cmd->add_option("--summary", summary_path, "Summary table file (default: stderr)");

    // spectrum / windows
    double distance = 1.0, f_lo = 0.1e12, f_hi = 1.0e12, step = 0.5e9, window_db = default_window_threshold_db;
    std::optional<int> rx_id;
    auto spectral_opts = [&](CLI::App *cmd)
    {
        add_inputs(cmd, c);
        add_out(cmd, c);
        cmd->add_option("--distance", distance, "Free-space link distance in m (ignored with --rx)")
            ->check(CLI::PositiveNumber);
        cmd->add_option("--rx", rx_id, "Use the scene Tx and this receiver instead of a free-space link");
        cmd->add_option("--f-lo", f_lo, "Lowest frequency in Hz");
        cmd->add_option("--f-hi", f_hi, "Highest frequency in Hz");
        cmd->add_option("--step", step, "Grid step in Hz")->check(CLI::PositiveNumber);
    };
    auto *spectrum_cmd = app.add_subcommand("spectrum", "Path loss versus frequency (CSV)");
    spectral_opts(spectrum_cmd);
    auto *windows_cmd = app.add_subcommand("windows", "Spectral transmission windows (CSV)");
    spectral_opts(windows_cmd);
    windows_cmd->add_option("--window-db", window_db, "Window threshold above the band minimum in dB")
        ->check(CLI::PositiveNumber);

    // allocate
    AllocationRequest request;
    std::vector<std::string> links;
    double a_lo = 0.0, a_hi = 0.0;
    auto *alloc_cmd = app.add_subcommand("allocate", "Center-out sub-window allocation (CSV)");
    add_inputs(alloc_cmd, c);
    add_out(alloc_cmd, c);
    alloc_cmd->add_option("--f-lo", a_lo, "Window lower edge in Hz")->required();
    alloc_cmd->add_option("--f-hi", a_hi, "Window upper edge in Hz")->required();
    alloc_cmd->add_option("--n-sub", request.n_sub, "Number of sub-windows")->required()->check(CLI::PositiveNumber);
    alloc_cmd->add_option("--link", links, "Link as id:distance_m (repeatable or comma-separated)")
        ->required()
        ->delimiter(',');
    alloc_cmd->add_option("--power-dbm", request.total_power_dbm, "Total transmit power");
    alloc_cmd->add_option("--gain-dbi", request.antenna_gain_dbi, "Sum of Tx and Rx antenna gains");
    alloc_cmd->add_flag("--distance-aware", request.distance_aware, "Clip sub-windows to the link's spectral windows");
    alloc_cmd->add_option("--window-db", request.window_threshold_db, "Window threshold in dB");

    // paths
    int paths_rx = 0;
    auto *paths_cmd = app.add_subcommand("paths", "Dump the propagation paths to one receiver (JSON lines)");
    add_inputs(paths_cmd, c);
    add_out(paths_cmd, c);
    paths_cmd->add_option("--rx", paths_rx, "Receiver id")->required();

    // dumps
    auto *scene_cmd = app.add_subcommand("scene", "Write the scene with its endpoints (JSON)");
    add_inputs(scene_cmd, c);
    add_out(scene_cmd, c);
    auto *absorption_cmd = app.add_subcommand("absorption", "Write the absorption table (CSV)");
    add_inputs(absorption_cmd, c);
    add_out(absorption_cmd, c);
    auto *init_cmd = app.add_subcommand("init", "Write the default scenario file (JSON)");
    add_out(init_cmd, c);

    CLI11_PARSE(app, argc, argv);

    try
    {
        if (*init_cmd)
        {
            emit(c.out, [](std::ostream &os)
                 { os << default_scenario_json().dump(2) << '\n'; });
            return 0;
        }

        const Scenario sc = load(c);
        const RunConfig &cfg = sc.config;

        if (*run_cmd)
        {
            const RunResult result = run(cfg);
            std::string csv = c.out;
            if (csv == "-" && sc.outputs.csv && run_cmd->count("--out") == 0)
                csv = *sc.outputs.csv;
            emit(csv, [&](std::ostream &os)
                 { write_results_csv(os, result); });
            const std::string summary = !summary_path.empty() ? summary_path : sc.outputs.summary.value_or("");
            if (summary.empty())
                write_summary(std::cerr, result);
            else
                write_summary_file(summary, result);
            if (sc.outputs.paths)
            {
                std::ofstream out(*sc.outputs.paths, std::ios::binary);
                if (!out)
                    throw std::runtime_error(fmt::format("{}: cannot open for writing", *sc.outputs.paths));
                for (const auto &r : cfg.endpoints.rx)
                    write_paths_jsonl(out, trace_paths(cfg.scene, cfg.endpoints.tx, r.position, cfg.max_reflection_order));
            }
        }
        else if (*spectrum_cmd || *windows_cmd)
        {
            if (!(f_hi > f_lo))
                throw std::invalid_argument("--f-hi must exceed --f-lo");
            const auto grid = frequency_grid(f_lo, f_hi, step);
            std::vector<SpectrumSample> spectrum;
            if (rx_id)
                spectrum = path_loss_spectrum(cfg.scene, cfg.endpoints.tx, find_rx(cfg, *rx_id).position, grid, cfg.table,
                                              cfg.max_reflection_order);
            else
                spectrum = path_loss_spectrum(Scene{}, Vec3::Zero(), Vec3(distance, 0.0, 0.0), grid, cfg.table, 0);
            if (*spectrum_cmd)
                emit(c.out, [&](std::ostream &os)
                     { write_spectrum_csv(os, spectrum); });
            else
                emit(c.out, [&](std::ostream &os)
                     {
                         os << "f_lo_hz,f_hi_hz,bandwidth_hz\n";
                         for (const auto &w : spectral_windows(spectrum, window_db))
                             os << fmt::format("{:.6e},{:.6e},{:.6e}\n", w.f_lo, w.f_hi, w.bandwidth()); });
        }
        else if (*alloc_cmd)
        {
            request.window = {a_lo, a_hi};
            for (const auto &l : links)
            {
                const auto colon = l.find(':');
                if (colon == std::string::npos)
                    throw std::invalid_argument(fmt::format("--link '{}': expected id:distance_m", l));
                request.demands.push_back({std::stoi(l.substr(0, colon)), std::stod(l.substr(colon + 1)), std::nullopt});
            }
            const auto rows = allocation_report(request, cfg.table);
            emit(c.out, [&](std::ostream &os)
                 { write_allocation_csv(os, rows); });
        }
        else if (*paths_cmd)
        {
            const auto paths = trace_paths(cfg.scene, cfg.endpoints.tx, find_rx(cfg, paths_rx).position,
                                           cfg.max_reflection_order);
            emit(c.out, [&](std::ostream &os)
                 { write_paths_jsonl(os, paths); });
        }
        else if (*scene_cmd)
        {
            emit(c.out, [&](std::ostream &os)
                 { write_scene(os, cfg.scene, &cfg.endpoints); });
        }
        else if (*absorption_cmd)
        {
            emit(c.out, [&](std::ostream &os)
                 { write_absorption_table(os, cfg.table); });
        }
    }
    catch (const std::exception &e)
    {
        std::cerr << "thzreach: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
