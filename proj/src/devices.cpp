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

#include "thzreach/devices.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <functional>

namespace thzreach
{
    std::string_view to_string(ArrayMode mode)
    {
        switch (mode)
        {
        case ArrayMode::omni:
            return "OMNI";
        case ArrayMode::bf:
            return "BF";
        case ArrayMode::sm:
            return "SM";
        case ArrayMode::hybrid:
            return "HYBRID";
        }
        return "?";
    }

    ArrayMode parse_array_mode(std::string_view s)
    {
        for (auto m : {ArrayMode::omni, ArrayMode::bf, ArrayMode::sm, ArrayMode::hybrid})
            if (s == to_string(m))
                return m;
        throw std::invalid_argument(fmt::format("Unknown array mode '{}'", s));
    }

    void ArrayConfig::validate() const
    {
        if (subarrays_m < 1 || subarrays_n < 1 || elements_p < 1 || elements_q < 1)
            throw std::invalid_argument("ArrayConfig: subarray and element counts must be >= 1");
        if (mode == ArrayMode::sm || mode == ArrayMode::hybrid)
        {
            if (sm_streams < 1)
                throw std::invalid_argument(
                    fmt::format("ArrayConfig: {} mode needs sm_streams >= 1", to_string(mode)));
            if (sm_streams > rf_chains())
                throw std::invalid_argument(fmt::format(
                    "ArrayConfig: sm_streams = {} exceeds the {} subarray RF chains", sm_streams, rf_chains()));
        }
    }

    ArrayConfig ArrayConfig::um_mimo_1024(std::optional<double> gain_dbi)
    {
        ArrayConfig cfg;
        cfg.subarrays_m = 4;
        cfg.subarrays_n = 4;
        cfg.elements_p = 8;
        cfg.elements_q = 8;
        cfg.mode = ArrayMode::bf;
        cfg.explicit_gain_dbi = gain_dbi;
        return cfg;
    }

    RadioConfig RadioConfig::at(double center_frequency_hz, double fractional_bandwidth)
    {
        RadioConfig r;
        r.center_frequency_hz = center_frequency_hz;
        r.bandwidth_hz = fractional_bandwidth * center_frequency_hz;
        return r;
    }

    void RadioConfig::validate() const
    {
        if (!(bandwidth_hz > 0.0))
            throw std::invalid_argument("RadioConfig: bandwidth must be positive");
        if (!(center_frequency_hz > 0.0))
            throw std::invalid_argument("RadioConfig: center frequency must be positive");
        tx_array.validate();
        rx_array.validate();
    }

    double noise_floor_dbm(const RadioConfig &radio)
    {
        if (!(radio.bandwidth_hz > 0.0))
            throw std::invalid_argument("noise_floor_dbm: bandwidth must be positive");
        return radio.noise_psd_dbm_hz + 10.0 * std::log10(radio.bandwidth_hz);
    }

    double beamforming_gain_dbi(const ArrayConfig &cfg)
    {
        cfg.validate();
        if (cfg.explicit_gain_dbi)
            return *cfg.explicit_gain_dbi;
        return 10.0 * std::log10(double(cfg.total_elements()));
    }

    double per_stream_gain_dbi(const ArrayConfig &cfg, int streams)
    {
        if (streams < 1)
            throw std::invalid_argument("per_stream_gain_dbi: streams must be >= 1");
        return beamforming_gain_dbi(cfg) - 10.0 * std::log10(double(streams));
    }

    double array_gain_dbi(const ArrayConfig &cfg)
    {
        cfg.validate();
        switch (cfg.mode)
        {
        case ArrayMode::omni:
            return 0.0;
        case ArrayMode::bf:
            return beamforming_gain_dbi(cfg);
        case ArrayMode::sm:
        case ArrayMode::hybrid:
            return per_stream_gain_dbi(cfg, cfg.sm_streams);
        }
        return 0.0;
    }

    double snr_db(const RadioConfig &radio, double aggregate_gain_db)
    {
        return radio.tx_power_dbm + array_gain_dbi(radio.tx_array) + array_gain_dbi(radio.rx_array) +
               aggregate_gain_db - noise_floor_dbm(radio);
    }

    double stream_capacity_bps(double bandwidth_hz, std::span<const double> stream_snr_db)
    {
        double c = 0.0;
        for (double s : stream_snr_db)
            c += bandwidth_hz * std::log2(1.0 + std::pow(10.0, s / 10.0));
        return c;
    }

    double capacity_bps(const RadioConfig &radio, std::optional<double> snr)
    {
        if (!snr)
            throw outage_error("capacity_bps: link is in outage");
        const ArrayMode mode = radio.tx_array.mode;
        if (mode == ArrayMode::sm || mode == ArrayMode::hybrid)
        {
            const int k = radio.tx_array.sm_streams;
            const std::vector<double> streams(std::size_t(k), *snr - 10.0 * std::log10(double(k)));
            return stream_capacity_bps(radio.bandwidth_hz, streams);
        }
        const double s = *snr;
        return stream_capacity_bps(radio.bandwidth_hz, std::span<const double>(&s, 1));
    }

    ModeSelection select_mode(const RadioConfig &radio, std::span<const PathGain> paths)
    {
        if (paths.empty())
            throw std::invalid_argument("select_mode: no paths");

        std::vector<double> gains;
        for (const auto &p : paths)
            gains.push_back(p.total_gain_db);
        std::sort(gains.begin(), gains.end(), std::greater<>());

        const double noise = noise_floor_dbm(radio);
        const double bf_gain = beamforming_gain_dbi(radio.tx_array) + beamforming_gain_dbi(radio.rx_array);
        const int stream_cap = std::max(1, std::min(radio.tx_array.sm_streams, radio.rx_array.sm_streams));
        const int k_max = std::min<int>(stream_cap, int(gains.size()));

        ModeSelection sel;

        // Beamforming: array gain on the strongest path, remaining paths at 0 dBi
        {
            std::vector<double> received{bf_gain + gains[0]};
            received.insert(received.end(), gains.begin() + 1, gains.end());
            ModeCandidate bf{ArrayMode::bf, 1, {radio.tx_power_dbm + power_sum_db(received) - noise}, 0.0};
            bf.capacity_bps = stream_capacity_bps(radio.bandwidth_hz, bf.stream_snr_db);
            sel.candidates.push_back(std::move(bf));
        }

        auto split = [&](ArrayMode mode, int k)
        {
            ModeCandidate c{mode, k, {}, 0.0};
            const double g = per_stream_gain_dbi(radio.tx_array, k) + per_stream_gain_dbi(radio.rx_array, k);
            const double p = radio.tx_power_dbm - 10.0 * std::log10(double(k));
            for (int i = 0; i < k; ++i)
                c.stream_snr_db.push_back(p + g + gains[std::size_t(i)] - noise);
            c.capacity_bps = stream_capacity_bps(radio.bandwidth_hz, c.stream_snr_db);
            return c;
        };

        for (int k = 2; k < k_max; ++k)
            sel.candidates.push_back(split(ArrayMode::hybrid, k));
        sel.candidates.push_back(split(ArrayMode::sm, k_max));

        const ModeCandidate *best = &sel.candidates.front();
        for (const auto &c : sel.candidates)
            if (c.capacity_bps > best->capacity_bps)
                best = &c;
        sel.mode = best->mode;
        sel.streams = best->streams;
        sel.capacity_bps = best->capacity_bps;
        return sel;
    }
}
