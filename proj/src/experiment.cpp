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

#include "thzreach/experiment.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <future>
#include <ostream>

namespace thzreach
{
    std::string_view to_string(Technique t)
    {
        switch (t)
        {
        case Technique::baseline:
            return "BASELINE";
        case Technique::ummimo:
            return "UMMIMO";
        case Technique::reflectarray:
            return "REFLECTARRAY";
        case Technique::hypersurface:
            return "HYPERSURFACE";
        case Technique::joint:
            return "JOINT";
        }
        return "?";
    }

    Technique parse_technique(std::string_view s)
    {
        for (auto t : all_techniques())
            if (s == to_string(t))
                return t;
        throw std::invalid_argument(fmt::format("Unknown technique '{}'", s));
    }

    std::vector<Technique> all_techniques()
    {
        return {Technique::baseline, Technique::ummimo, Technique::reflectarray, Technique::hypersurface,
                Technique::joint};
    }

    TechniqueFeatures features(Technique t)
    {
        switch (t)
        {
        case Technique::baseline:
            return {};
        case Technique::ummimo:
            return {true, std::nullopt, false};
        case Technique::reflectarray:
            return {false, TileKind::reflectarray, false};
        case Technique::hypersurface:
            return {false, TileKind::hypersurface, false};
        case Technique::joint:
            return {true, TileKind::hypersurface, true};
        }
        return {};
    }

    RunConfig RunConfig::e_hallway_default()
    {
        auto hall = build_e_hallway();
        RunConfig cfg;
        cfg.scene = std::move(hall.scene);
        cfg.endpoints = std::move(hall.endpoints);
        cfg.tiles.host_surface_ids = std::move(hall.junction_wall_ids);
        return cfg;
    }

    void RunConfig::validate() const
    {
        for (double f : frequencies_hz)
        {
            if (!(f > 0.0))
                throw std::invalid_argument("RunConfig: frequencies must be positive");
            if (!table.in_range(f))
                throw std::invalid_argument(fmt::format("RunConfig: frequency {} Hz outside absorption table range [{}, {}] Hz",
                                                        f, table.f_min(), table.f_max()));
        }
        if (max_reflection_order < 0 || max_reflection_order > thzreach::max_reflection_order)
            throw std::invalid_argument("RunConfig: max_reflection_order must be 0, 1 or 2");
        if (!(radio.fractional_bandwidth > 0.0))
            throw std::invalid_argument("RunConfig: fractional bandwidth must be positive");
        radio.um_mimo_array.validate();
        if (allocation.n_sub < 0)
            throw std::invalid_argument("RunConfig: allocation n_sub must be >= 0");
        for (const auto &r : endpoints.rx)
            if ((r.position - endpoints.tx).norm() <= geometry_tolerance_m)
                throw std::invalid_argument(fmt::format("RunConfig: Rx {} coincides with the Tx", r.id));
    }

    const GridPoint *RunResult::find(Technique t, double f_hz, int rx_id) const
    {
        for (const auto &p : points)
            if (p.technique == t && p.link.frequency_hz == f_hz && p.rx.id == rx_id)
                return &p;
        return nullptr;
    }

    namespace
    {
        struct RxGeometry
        {
            std::vector<PropagationPath> paths;
            std::vector<TileConfiguration> tiles;
        };

        std::vector<int> tile_hosts(const RunConfig &cfg)
        {
            if (!cfg.tiles.host_surface_ids.empty())
                return cfg.tiles.host_surface_ids;
            std::vector<int> ids;
            for (const auto &s : cfg.scene.surfaces())
                if (s.label().starts_with("junction"))
                    ids.push_back(s.id());
            return ids;
        }

        TileSet tile_set(const RunConfig &cfg, const std::vector<int> &hosts, TileKind kind)
        {
            TileSet set = make_tile_grid(cfg.scene, hosts, cfg.tiles.pitch_m, kind);
            set.efficiency_db = cfg.tiles.efficiency_db;
            set.cutoff_frequency_hz = cfg.tiles.cutoff_frequency_hz;
            set.rolloff_db_per_octave = cfg.tiles.rolloff_db_per_octave;
            set.model = cfg.tiles.model;
            set.validate(cfg.scene);
            return set;
        }

        double demand_distance(const Receiver &r, const Vec3 &tx)
        {
            return r.nominal_distance_m > 0.0 ? r.nominal_distance_m : (r.position - tx).norm();
        }

        // SNR and capacity for one link; outage when there is no path
        void evaluate_link(LinkResult &link, const RadioConfig &radio, std::span<const PathGain> gains)
        {
            link.n_paths = gains.size();
            if (gains.empty())
            {
                link.in_outage = true;
                return;
            }
            link.in_outage = false;
            link.aggregate_gain_db = aggregate_gain_db(gains);
            link.snr_db = snr_db(radio, *link.aggregate_gain_db);
            link.capacity_bps = capacity_bps(radio, link.snr_db);
        }
    }

    RunResult run(const RunConfig &cfg)
    {
        cfg.validate();

        bool need_tiles = false;
        for (auto t : cfg.techniques)
            need_tiles = need_tiles || features(t).tiles.has_value();

        // Reflectarray and HyperSurface share tile geometry; only the redirection loss differs
        std::optional<TileSet> hs_tiles, ra_tiles;
        if (need_tiles)
        {
            const auto hosts = tile_hosts(cfg);
            hs_tiles = tile_set(cfg, hosts, TileKind::hypersurface);
            ra_tiles = tile_set(cfg, hosts, TileKind::reflectarray);
        }

        // Frequency-independent geometry per Rx
        const auto &rxs = cfg.endpoints.rx;
        std::vector<std::future<RxGeometry>> jobs;
        for (const auto &r : rxs)
            jobs.push_back(std::async(std::launch::async, [&cfg, &hs_tiles, r]
                                      {
                                          RxGeometry g;
                                          g.paths = trace_paths(cfg.scene, cfg.endpoints.tx, r.position, cfg.max_reflection_order);
                                          if (hs_tiles)
                                              g.tiles = configure(*hs_tiles, cfg.scene, cfg.endpoints.tx, r.position);
                                          return g; }));
        std::vector<RxGeometry> geometry;
        for (auto &j : jobs)
            geometry.push_back(j.get());

        RunResult result;
        result.techniques = cfg.techniques;
        result.frequencies_hz = cfg.frequencies_hz;
        result.snr_threshold_db = cfg.snr_threshold_db;

        for (auto tech : cfg.techniques)
        {
            const auto feat = features(tech);
            for (double f : cfg.frequencies_hz)
            {
                RadioConfig radio = RadioConfig::at(f, cfg.radio.fractional_bandwidth);
                radio.tx_power_dbm = cfg.radio.tx_power_dbm;
                radio.noise_psd_dbm_hz = cfg.radio.noise_psd_dbm_hz;
                if (feat.um_mimo_arrays)
                    radio.tx_array = radio.rx_array = cfg.radio.um_mimo_array;

                Assignment assignment;
                std::map<int, double> power;
                if (feat.allocation && !rxs.empty())
                {
                    const SpectralWindow band{f - 0.5 * radio.bandwidth_hz, f + 0.5 * radio.bandwidth_hz};
                    const int n_sub = cfg.allocation.n_sub > 0 ? cfg.allocation.n_sub : int(rxs.size());
                    std::vector<LinkDemand> demands;
                    for (const auto &r : rxs)
                        demands.push_back({r.id, demand_distance(r, cfg.endpoints.tx), std::nullopt});
                    assignment = allocate_center_out(partition(band, n_sub), demands);
                    power = equal_power_split(radio.tx_power_dbm, assignment);
                }

                for (std::size_t i = 0; i < rxs.size(); ++i)
                {
                    const Receiver &r = rxs[i];
                    std::vector<PathGain> gains;
                    for (const auto &p : geometry[i].paths)
                        gains.push_back(path_gain(p, f, cfg.scene, cfg.table));
                    if (feat.tiles)
                    {
                        const TileSet &ts = *feat.tiles == TileKind::hypersurface ? *hs_tiles : *ra_tiles;
                        auto extra = assisted_paths(geometry[i].tiles, ts, cfg.scene, cfg.endpoints.tx, r.position, f,
                                                    cfg.table);
                        gains.insert(gains.end(), extra.begin(), extra.end());
                    }

                    GridPoint pt;
                    pt.technique = tech;
                    pt.rx = r;
                    RadioConfig link_radio = radio;
                    if (feat.allocation)
                    {
                        const SubWindow &sub = assignment.at(r.id);
                        pt.sub_window = sub;
                        link_radio.tx_power_dbm = power.at(r.id);
                        link_radio.bandwidth_hz = sub.bandwidth();
                    }
                    pt.tx_power_dbm = link_radio.tx_power_dbm;
                    pt.bandwidth_hz = link_radio.bandwidth_hz;
                    pt.link.rx_id = r.id;
                    pt.link.frequency_hz = f;
                    pt.link.technique = std::string(to_string(tech));
                    evaluate_link(pt.link, link_radio, gains);
                    result.points.push_back(std::move(pt));
                }
            }
        }
        return result;
    }

    std::string ReachDistance::to_string() const
    {
        switch (bound)
        {
        case Bound::at_least:
            return fmt::format(">= {:g} m", distance_m);
        case Bound::below:
            return fmt::format("< {:g} m", distance_m);
        default:
            return fmt::format("{:.2f} m", distance_m);
        }
    }

    ReachDistance distance_to_threshold(const RunResult &result, Technique t, double f_hz, Population population,
                                        std::optional<double> threshold_db)
    {
        const double thr = threshold_db.value_or(result.snr_threshold_db);
        std::vector<const GridPoint *> pop;
        for (const auto &p : result.points)
            if (p.technique == t && p.link.frequency_hz == f_hz && p.rx.los == (population == Population::los))
                pop.push_back(&p);
        if (pop.empty())
            throw std::invalid_argument("distance_to_threshold: empty Rx population");
        std::stable_sort(pop.begin(), pop.end(), [](const GridPoint *a, const GridPoint *b)
                         { return a->rx.nominal_distance_m < b->rx.nominal_distance_m; });

        auto meets = [thr](const GridPoint *p)
        { return p->link.snr_db.has_value() && *p->link.snr_db >= thr; };

        std::optional<std::size_t> last;
        for (std::size_t i = 0; i < pop.size(); ++i)
            if (meets(pop[i]))
                last = i;

        if (!last)
            return {ReachDistance::Bound::below, pop.front()->rx.nominal_distance_m};
        if (*last + 1 == pop.size())
            return {ReachDistance::Bound::at_least, pop.back()->rx.nominal_distance_m};

        const GridPoint *a = pop[*last], *b = pop[*last + 1];
        const double da = a->rx.nominal_distance_m, db = b->rx.nominal_distance_m;
        if (!b->link.snr_db || db == da)
            return {ReachDistance::Bound::interpolated, da};
        const double sa = *a->link.snr_db, sb = *b->link.snr_db;
        return {ReachDistance::Bound::interpolated, da + (sa - thr) / (sa - sb) * (db - da)};
    }

    GainStatistics gain_statistics(const RunResult &result, Technique t, double f_hz, std::optional<Population> population)
    {
        if (t == Technique::baseline)
            throw std::invalid_argument("gain_statistics: technique must differ from BASELINE");
        GainStatistics stats;
        double sum = 0.0;
        for (const auto &p : result.points)
        {
            if (p.technique != t || p.link.frequency_hz != f_hz)
                continue;
            if (population && p.rx.los != (*population == Population::los))
                continue;
            const GridPoint *base = result.find(Technique::baseline, f_hz, p.rx.id);
            if (!base)
                throw std::invalid_argument("gain_statistics: result set has no BASELINE run at this frequency");
            if (base->link.in_outage)
            {
                if (!p.link.in_outage)
                    ++stats.rescued;
                continue;
            }
            if (p.link.in_outage)
                continue;
            sum += *p.link.snr_db - *base->link.snr_db;
            ++stats.compared;
        }
        if (stats.compared > 0)
            stats.mean_gain_db = sum / double(stats.compared);
        return stats;
    }

    void write_results_csv(std::ostream &os, const RunResult &result)
    {
        os << "technique,frequency_hz,rx_id,nominal_distance_m,los_flag,n_paths,aggregate_gain_db,snr_db,capacity_bps,"
              "outage\n";
        for (const auto &p : result.points)
        {
            const auto &l = p.link;
            os << fmt::format("{},{:.6e},{},{:.3f},{},{},", to_string(p.technique), l.frequency_hz, l.rx_id,
                              p.rx.nominal_distance_m, p.rx.los ? 1 : 0, l.n_paths);
            if (l.in_outage)
                os << ",,,1\n";
            else
                os << fmt::format("{:.6f},{:.6f},{:.6e},0\n", *l.aggregate_gain_db, *l.snr_db, *l.capacity_bps);
        }
    }

    void write_summary(std::ostream &os, const RunResult &result)
    {
        os << fmt::format("SNR threshold: {:g} dB\n", result.snr_threshold_db);
        os << fmt::format("{:<14}{:>14}  {:<12}{:<12}{:>14}{:>10}{:>10}\n", "technique", "frequency_hz", "reach_los",
                          "reach_nlos", "mean_gain_db", "compared", "rescued");
        for (auto t : result.techniques)
        {
            for (double f : result.frequencies_hz)
            {
                auto reach = [&](Population pop) -> std::string
                {
                    for (const auto &p : result.points)
                        if (p.technique == t && p.link.frequency_hz == f && p.rx.los == (pop == Population::los))
                            return distance_to_threshold(result, t, f, pop).to_string();
                    return "-";
                };
                std::string gain = "-", compared = "-", rescued = "-";
                const bool has_baseline = std::any_of(result.points.begin(), result.points.end(), [f](const GridPoint &p)
                                                      { return p.technique == Technique::baseline && p.link.frequency_hz == f; });
                if (t != Technique::baseline && has_baseline)
                {
                    const auto st = gain_statistics(result, t, f);
                    gain = st.mean_gain_db ? fmt::format("{:.3f}", *st.mean_gain_db) : "-";
                    compared = fmt::format("{}", st.compared);
                    rescued = fmt::format("{}", st.rescued);
                }
                os << fmt::format("{:<14}{:>14.6e}  {:<12}{:<12}{:>14}{:>10}{:>10}\n", to_string(t), f,
                                  reach(Population::los), reach(Population::nlos), gain, compared, rescued);
            }
        }
    }

    void write_results_csv_file(const std::string &path, const RunResult &result)
    {
        std::ofstream out(path, std::ios::binary);
        if (!out)
            throw std::runtime_error(fmt::format("{}: cannot open for writing", path));
        write_results_csv(out, result);
        if (!out)
            throw std::runtime_error(fmt::format("{}: write failed", path));
    }

    void write_summary_file(const std::string &path, const RunResult &result)
    {
        std::ofstream out(path, std::ios::binary);
        if (!out)
            throw std::runtime_error(fmt::format("{}: cannot open for writing", path));
        write_summary(out, result);
        if (!out)
            throw std::runtime_error(fmt::format("{}: write failed", path));
    }
}
