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

#ifndef THZREACH_SCENARIO_HPP
#define THZREACH_SCENARIO_HPP

#include "thzreach/experiment.hpp"

#include <json.hpp>

#include <filesystem>
#include <optional>
#include <string>

namespace thzreach
{
    // Scenario file (JSON). Every block is optional; missing values keep the RunConfig defaults.
    //
    //   {
    //     "scene": {"builtin": "e_hallway", "corridor_width_m": 3, "arm_length_m": 30}
    //            | {"file": "scene.json"}
    //            | { ...inline scene document... },
    //     "endpoints": {"tx": [..], "rx": [..]},        (overrides the scene's endpoints)
    //     "absorption": {"builtin": "synthetic" | "transparent"} | {"file": "table.csv"},
    //     "frequencies_hz": [6e10, 3e11, 1e12],
    //     "techniques": ["BASELINE", "UMMIMO", ...],
    //     "snr_threshold_db": 10,
    //     "max_reflection_order": 2,
    //     "radio": {"tx_power_dbm": 10, "noise_psd_dbm_hz": -160, "fractional_bandwidth": 0.1,
    //               "array": {"m": 4, "n": 4, "p": 8, "q": 8, "mode": "BF",
    //                         "explicit_gain_dbi": 30, "sm_streams": 1}},
    //     "tiles": {"host_surface_ids": [..], "pitch_m": 0.5, "efficiency_db": 3,
    //               "cutoff_frequency_hz": 1.2e11, "rolloff_db_per_octave": 6,
    //               "spreading_model": "specular"},
    //     "allocation": {"n_sub": 0},
    //     "outputs": {"csv": "results.csv", "summary": "summary.txt", "paths": "paths.jsonl"}
    //   }
    //
    // Relative file names resolve against the scenario file's directory.
    struct ScenarioOutputs
    {
        std::optional<std::string> csv;
        std::optional<std::string> summary;
        std::optional<std::string> paths;
    };

    struct Scenario
    {
        RunConfig config;
        ScenarioOutputs outputs;
    };

    Scenario scenario_from_json(const nlohmann::json &doc, const std::filesystem::path &base_dir = {});

    // Throws std::runtime_error prefixed with the file name (and line, for syntax errors)
    Scenario load_scenario_file(const std::string &path);

    // The default E-hallway scenario, fully spelled out
    nlohmann::json default_scenario_json();
}

#endif
