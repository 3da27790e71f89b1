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

#include "thzreach/scenario.hpp"
#include "thzreach/scene_io.hpp"

#include <fmt/format.h>

#include <fstream>
#include <set>

namespace thzreach
{
    namespace
    {
        using nlohmann::json;

        void check_keys(const json &obj, std::string_view block, const std::set<std::string> &allowed)
        {
            if (!obj.is_object())
                throw std::invalid_argument(fmt::format("'{}' must be an object", block));
            for (const auto &[key, value] : obj.items())
                if (!allowed.contains(key))
                    throw std::invalid_argument(fmt::format("unknown key '{}' in '{}'", key, block));
        }

        std::string resolve(const std::filesystem::path &base, const std::string &name)
        {
            const std::filesystem::path p(name);
            return (p.is_relative() && !base.empty() ? base / p : p).string();
        }

        void read_scene(const json &j, const std::filesystem::path &base, RunConfig &cfg)
        {
            if (j.contains("builtin"))
            {
                check_keys(j, "scene", {"builtin", "corridor_width_m", "arm_length_m"});
                const auto name = j.at("builtin").get<std::string>();
                if (name != "e_hallway")
                    throw std::invalid_argument(fmt::format("unknown builtin scene '{}'", name));
                HallwayParams params;
                params.corridor_width_m = j.value("corridor_width_m", params.corridor_width_m);
                params.arm_length_m = j.value("arm_length_m", params.arm_length_m);
                auto hall = build_e_hallway(params);
                cfg.scene = std::move(hall.scene);
                cfg.endpoints = std::move(hall.endpoints);
                return;
            }
            SceneDocument doc = j.contains("file") ? load_scene_file(resolve(base, j.at("file").get<std::string>()))
                                                   : scene_from_json(j);
            cfg.scene = std::move(doc.scene);
            cfg.endpoints = doc.endpoints.value_or(EndpointSet{});
        }

        AbsorptionTable read_absorption(const json &j, const std::filesystem::path &base)
        {
            check_keys(j, "absorption", {"builtin", "file"});
            if (j.contains("file"))
                return load_absorption_file(resolve(base, j.at("file").get<std::string>()));
            const auto name = j.value("builtin", std::string("synthetic"));
            if (name == "synthetic")
                return synthetic_absorption_table();
            if (name == "transparent")
                return transparent_table();
            throw std::invalid_argument(fmt::format("unknown builtin absorption table '{}'", name));
        }

        ArrayConfig read_array(const json &j)
        {
            check_keys(j, "radio.array", {"m", "n", "p", "q", "mode", "explicit_gain_dbi", "sm_streams"});
            ArrayConfig a;
            a.subarrays_m = j.value("m", 1);
            a.subarrays_n = j.value("n", 1);
            a.elements_p = j.value("p", 1);
            a.elements_q = j.value("q", 1);
            a.mode = parse_array_mode(j.value("mode", std::string("BF")));
            if (j.contains("explicit_gain_dbi") && !j.at("explicit_gain_dbi").is_null())
                a.explicit_gain_dbi = j.at("explicit_gain_dbi").get<double>();
            a.sm_streams = j.value("sm_streams", 1);
            a.validate();
            return a;
        }
    }

    Scenario scenario_from_json(const json &doc, const std::filesystem::path &base_dir)
    {
        check_keys(doc, "scenario",
                   {"scene", "endpoints", "absorption", "frequencies_hz", "techniques", "snr_threshold_db",
                    "max_reflection_order", "radio", "tiles", "allocation", "outputs"});
        Scenario sc;
        RunConfig &cfg = sc.config;
        if (doc.contains("scene"))
            read_scene(doc.at("scene"), base_dir, cfg);
        else
            cfg = RunConfig::e_hallway_default();
        if (doc.contains("endpoints"))
            cfg.endpoints = endpoints_from_json(doc.at("endpoints"));
        if (doc.contains("absorption"))
            cfg.table = read_absorption(doc.at("absorption"), base_dir);
        if (doc.contains("frequencies_hz"))
            cfg.frequencies_hz = doc.at("frequencies_hz").get<std::vector<double>>();
        if (doc.contains("techniques"))
        {
            cfg.techniques.clear();
            for (const auto &t : doc.at("techniques"))
                cfg.techniques.push_back(parse_technique(t.get<std::string>()));
        }
        cfg.snr_threshold_db = doc.value("snr_threshold_db", cfg.snr_threshold_db);
        cfg.max_reflection_order = doc.value("max_reflection_order", cfg.max_reflection_order);

        if (doc.contains("radio"))
        {
            const auto &r = doc.at("radio");
            check_keys(r, "radio", {"tx_power_dbm", "noise_psd_dbm_hz", "fractional_bandwidth", "array"});
            cfg.radio.tx_power_dbm = r.value("tx_power_dbm", cfg.radio.tx_power_dbm);
            cfg.radio.noise_psd_dbm_hz = r.value("noise_psd_dbm_hz", cfg.radio.noise_psd_dbm_hz);
            cfg.radio.fractional_bandwidth = r.value("fractional_bandwidth", cfg.radio.fractional_bandwidth);
            if (r.contains("array"))
                cfg.radio.um_mimo_array = read_array(r.at("array"));
        }
        if (doc.contains("tiles"))
        {
            const auto &t = doc.at("tiles");
            check_keys(t, "tiles",
                       {"host_surface_ids", "pitch_m", "efficiency_db", "cutoff_frequency_hz", "rolloff_db_per_octave",
                        "spreading_model"});
            cfg.tiles.host_surface_ids = t.value("host_surface_ids", std::vector<int>{});
            cfg.tiles.pitch_m = t.value("pitch_m", cfg.tiles.pitch_m);
            cfg.tiles.efficiency_db = t.value("efficiency_db", cfg.tiles.efficiency_db);
            cfg.tiles.cutoff_frequency_hz = t.value("cutoff_frequency_hz", cfg.tiles.cutoff_frequency_hz);
            cfg.tiles.rolloff_db_per_octave = t.value("rolloff_db_per_octave", cfg.tiles.rolloff_db_per_octave);
            if (t.contains("spreading_model"))
                cfg.tiles.model = parse_redirection_model(t.at("spreading_model").get<std::string>());
        }
        if (doc.contains("allocation"))
        {
            check_keys(doc.at("allocation"), "allocation", {"n_sub"});
            cfg.allocation.n_sub = doc.at("allocation").value("n_sub", 0);
        }
        if (doc.contains("outputs"))
        {
            const auto &o = doc.at("outputs");
            check_keys(o, "outputs", {"csv", "summary", "paths"});
            for (auto [key, slot] : {std::pair{"csv", &sc.outputs.csv}, std::pair{"summary", &sc.outputs.summary},
                                     std::pair{"paths", &sc.outputs.paths}})
                if (o.contains(key))
                    *slot = resolve(base_dir, o.at(key).get<std::string>());
        }
        if (cfg.endpoints.rx.empty())
            throw std::invalid_argument("scenario has no receivers");
        cfg.validate();
        return sc;
    }

    Scenario load_scenario_file(const std::string &path)
    {
        std::ifstream in(path);
        if (!in)
            throw std::runtime_error(fmt::format("{}: cannot open scenario file", path));
        try
        {
            const json doc = json::parse(in);
            return scenario_from_json(doc, std::filesystem::path(path).parent_path());
        }
        catch (const std::exception &e)
        {
            throw std::runtime_error(fmt::format("{}: {}", path, e.what()));
        }
    }

    json default_scenario_json()
    {
        const RunConfig cfg = RunConfig::e_hallway_default();
        const auto &a = cfg.radio.um_mimo_array;
        json techniques = json::array();
        for (auto t : cfg.techniques)
            techniques.push_back(std::string(to_string(t)));
        return {
            {"scene", {{"builtin", "e_hallway"}, {"corridor_width_m", 3.0}, {"arm_length_m", 30.0}}},
            {"absorption", {{"builtin", "synthetic"}}},
            {"frequencies_hz", cfg.frequencies_hz},
            {"techniques", techniques},
            {"snr_threshold_db", cfg.snr_threshold_db},
            {"max_reflection_order", cfg.max_reflection_order},
            {"radio",
             {{"tx_power_dbm", cfg.radio.tx_power_dbm},
              {"noise_psd_dbm_hz", cfg.radio.noise_psd_dbm_hz},
              {"fractional_bandwidth", cfg.radio.fractional_bandwidth},
              {"array",
               {{"m", a.subarrays_m},
                {"n", a.subarrays_n},
                {"p", a.elements_p},
                {"q", a.elements_q},
                {"mode", std::string(to_string(a.mode))},
                {"explicit_gain_dbi", *a.explicit_gain_dbi},
                {"sm_streams", a.sm_streams}}}}},
            {"tiles",
             {{"host_surface_ids", cfg.tiles.host_surface_ids},
              {"pitch_m", cfg.tiles.pitch_m},
              {"efficiency_db", cfg.tiles.efficiency_db},
              {"cutoff_frequency_hz", cfg.tiles.cutoff_frequency_hz},
              {"rolloff_db_per_octave", cfg.tiles.rolloff_db_per_octave},
              {"spreading_model", std::string(to_string(cfg.tiles.model))}}},
            {"allocation", {{"n_sub", cfg.allocation.n_sub}}},
            {"outputs", {{"csv", "results.csv"}, {"summary", "summary.txt"}}}};
    }
}
