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

#ifndef THZREACH_DEVICES_HPP
#define THZREACH_DEVICES_HPP

#include "thzreach/channel.hpp"

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace thzreach
{
    enum class ArrayMode
    {
        omni,
        bf,
        sm,
        hybrid
    };

    std::string_view to_string(ArrayMode mode);  // "OMNI", "BF", "SM", "HYBRID"
    ArrayMode parse_array_mode(std::string_view s); // throws std::invalid_argument

    // Array of subarrays: M x N subarrays, each with P x Q elements driven by one RF chain
    struct ArrayConfig
    {
        int subarrays_m = 1;
        int subarrays_n = 1;
        int elements_p = 1;
        int elements_q = 1;
        ArrayMode mode = ArrayMode::omni;
        std::optional<double> explicit_gain_dbi; // replaces the aperture gain 10 log10(N)
        int sm_streams = 1;

        long total_elements() const { return long(subarrays_m) * subarrays_n * elements_p * elements_q; }
        int rf_chains() const { return subarrays_m * subarrays_n; }

        // Throws std::invalid_argument on non-positive counts, or streams outside [1, M*N] for SM/HYBRID
        void validate() const;

        static ArrayConfig omni_antenna() { return {}; }
        // 32 x 32 = 1024 elements as 4 x 4 subarrays of 8 x 8, optionally pinned to a fixed gain
        static ArrayConfig um_mimo_1024(std::optional<double> gain_dbi = std::nullopt);
    };

    struct RadioConfig
    {
        double tx_power_dbm = 10.0;
        double noise_psd_dbm_hz = -160.0;
        double center_frequency_hz = 0.0;
        double bandwidth_hz = 0.0;
        ArrayConfig tx_array;
        ArrayConfig rx_array;

        // Bandwidth set to the given fraction of the center frequency
        static RadioConfig at(double center_frequency_hz, double fractional_bandwidth = 0.1);

        void validate() const;
    };

    // Noise power over the radio bandwidth: psd + 10 log10(B)
    double noise_floor_dbm(const RadioConfig &radio);

    struct LinkResult
    {
        int rx_id = 0;
        double frequency_hz = 0.0;
        std::string technique;
        std::size_t n_paths = 0;
        std::optional<double> aggregate_gain_db;
        std::optional<double> snr_db;       // empty iff in_outage
        std::optional<double> capacity_bps; // empty iff in_outage
        bool in_outage = true;
    };

    // Full-aperture (single beam) gain: the override if present, else 10 log10(N)
    double beamforming_gain_dbi(const ArrayConfig &cfg);

    // Per-stream gain when the aperture is split evenly over `streams`
    double per_stream_gain_dbi(const ArrayConfig &cfg, int streams);

    /// OMNI: 0 dBi. BF: full aperture. SM and HYBRID: full aperture split evenly over sm_streams,
    /// i.e. 10 log10(N / streams). An explicit override scales the same way (override - 10 log10(streams)).
    double array_gain_dbi(const ArrayConfig &cfg);

    // P_tx + G_tx + G_rx + gain - noise floor
    double snr_db(const RadioConfig &radio, double aggregate_gain_db);

    /// Shannon capacity. BF/OMNI: B log2(1 + snr). SM/HYBRID (tx array mode): the given SNR already
    /// includes per-stream gains at full power; each of sm_streams streams gets 1/streams of the power.
    /// Throws outage_error when snr_db is empty.
    double capacity_bps(const RadioConfig &radio, std::optional<double> snr_db);

    // Sum of B log2(1 + snr_i) over per-stream SNRs
    double stream_capacity_bps(double bandwidth_hz, std::span<const double> stream_snr_db);

    struct ModeCandidate
    {
        ArrayMode mode = ArrayMode::bf;
        int streams = 1;
        std::vector<double> stream_snr_db;
        double capacity_bps = 0.0;
    };

    struct ModeSelection
    {
        ArrayMode mode = ArrayMode::bf;
        int streams = 1;
        double capacity_bps = 0.0;
        std::vector<ModeCandidate> candidates; // ordered by stream count, BF first
    };

    /// Capacity-maximizing array mode over the given paths.
    ///  BF: full aperture on the strongest path, other paths received at 0 dBi.
    ///  SM: k = min(sm_streams, #paths) streams on the k strongest paths, power and aperture split k ways.
    ///  HYBRID: the same split for every intermediate stream count 2 .. k-1.
    /// Ties go to the candidate with fewer streams (BF before SM at equal count).
    ModeSelection select_mode(const RadioConfig &radio, std::span<const PathGain> paths);
}

#endif
