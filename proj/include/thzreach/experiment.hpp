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

#ifndef THZREACH_EXPERIMENT_HPP
#define THZREACH_EXPERIMENT_HPP

#include "thzreach/allocation.hpp"
#include "thzreach/channel.hpp"
#include "thzreach/devices.hpp"
#include "thzreach/geometry.hpp"
#include "thzreach/surfaces.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace thzreach
{
    enum class Technique
    {
        baseline,
        ummimo,
        reflectarray,
        hypersurface,
        joint
    };

    std::string_view to_string(Technique t); // "BASELINE", "UMMIMO", "REFLECTARRAY", "HYPERSURFACE", "JOINT"
    Technique parse_technique(std::string_view s);
    std::vector<Technique> all_techniques();

    struct TechniqueFeatures
    {
        bool um_mimo_arrays = false;   // otherwise omni antennas at both ends
        std::optional<TileKind> tiles; // engineered surface paths
        bool allocation = false;       // center-out sub-window allocation across all Rx
    };

    // BASELINE: nothing. JOINT: UM-MIMO arrays + HyperSurface tiles + allocation.
    TechniqueFeatures features(Technique t);

    struct RadioPlan
    {
        double tx_power_dbm = 10.0;
        double noise_psd_dbm_hz = -160.0;
        double fractional_bandwidth = 0.1;
        ArrayConfig um_mimo_array = ArrayConfig::um_mimo_1024(30.0); // used at both ends
    };

    struct TilePlan
    {
        std::vector<int> host_surface_ids; // empty: every surface labelled "junction*"
        double pitch_m = 0.5;
        double efficiency_db = 3.0;
        double cutoff_frequency_hz = 120e9;
        double rolloff_db_per_octave = 6.0;
        RedirectionModel model = RedirectionModel::specular;
    };

    struct AllocationPlan
    {
        int n_sub = 0; // 0: one sub-window per Rx
    };

    struct RunConfig
    {
        Scene scene;
        EndpointSet endpoints;
        AbsorptionTable table = synthetic_absorption_table();
        std::vector<double> frequencies_hz = {0.06e12, 0.3e12, 1.0e12};
        std::vector<Technique> techniques = all_techniques();
        double snr_threshold_db = 10.0;
        int max_reflection_order = 2; // 0 disables reflections (LOS only)
        RadioPlan radio;
        TilePlan tiles;
        AllocationPlan allocation;

        // Default E hallway, synthetic absorption, all techniques at 0.06 / 0.3 / 1 THz
        static RunConfig e_hallway_default();

        void validate() const; // throws std::invalid_argument
    };

    struct GridPoint
    {
        Technique technique = Technique::baseline;
        Receiver rx;
        LinkResult link;
        double tx_power_dbm = 0.0;
        double bandwidth_hz = 0.0;
        std::optional<SubWindow> sub_window; // allocation techniques only
    };

    struct RunResult
    {
        std::vector<GridPoint> points; // technique-major, then frequency, then Rx in endpoint order
        std::vector<Technique> techniques;
        std::vector<double> frequencies_hz;
        double snr_threshold_db = 10.0;

        const GridPoint *find(Technique t, double f_hz, int rx_id) const;
    };

    /// Evaluates every (technique, frequency, Rx) grid point. Geometry (paths and tile
    /// configurations) is traced once per Rx; Rx are traced concurrently and merged in endpoint order.
    RunResult run(const RunConfig &cfg);

    enum class Population
    {
        los,
        nlos
    };

    struct ReachDistance
    {
        enum class Bound
        {
            interpolated, // SNR crosses the threshold at distance_m
            at_least,     // threshold met at the farthest Rx
            below         // threshold never met; distance_m is the nearest Rx
        };
        Bound bound = Bound::interpolated;
        double distance_m = 0.0;

        std::string to_string() const; // "23.33 m", ">= 90 m", "< 10 m"
    };

    /// Largest nominal distance at which SNR >= threshold, interpolating linearly in dB between the
    /// last Rx that meets it and the next one. Outage Rx count as never meeting the threshold.
    /// Throws std::invalid_argument if the population is empty.
    ReachDistance distance_to_threshold(const RunResult &result, Technique t, double f_hz, Population population,
                                        std::optional<double> threshold_db = std::nullopt);

    struct GainStatistics
    {
        std::optional<double> mean_gain_db; // over Rx with a path under both techniques
        std::size_t compared = 0;
        std::size_t rescued = 0; // baseline in outage, technique not
    };

    // Throws std::invalid_argument for Technique::baseline
    GainStatistics gain_statistics(const RunResult &result, Technique t, double f_hz,
                                   std::optional<Population> population = std::nullopt);

    /// technique,frequency_hz,rx_id,nominal_distance_m,los_flag,n_paths,aggregate_gain_db,snr_db,capacity_bps,outage
    /// Outage rows leave the gain, SNR and capacity fields empty.
    void write_results_csv(std::ostream &os, const RunResult &result);

    // Fixed-width table of reach distances (LOS / NLOS) and gain statistics per technique and frequency
    void write_summary(std::ostream &os, const RunResult &result);

    // Writes to a file; throws std::runtime_error if it cannot be opened
    void write_results_csv_file(const std::string &path, const RunResult &result);
    void write_summary_file(const std::string &path, const RunResult &result);
}

#endif
