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

// Acceptance suite: one PASS/FAIL line per criterion. Tolerances are fixed here.

#include "oracle/oracle.hpp"
#include "thzreach/allocation.hpp"
#include "thzreach/experiment.hpp"
#include "thzreach/raytracer.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <sstream>

using namespace thzreach;

namespace
{
    constexpr double oracle_length_rtol = 1e-9;
    constexpr double oracle_time_limit_s = 10.0;
    constexpr int oracle_scene_count = 25;
    constexpr double specular_tol_rad = 1e-6;
    constexpr double involution_tol_m = 1e-9;
    constexpr double reciprocity_rtol = 1e-9;
    constexpr int property_cases = 1000;
    constexpr double friis_target_db = 102.0;
    constexpr double friis_tol_db = 0.1;
    constexpr double additivity_rtol = 1e-9;
    constexpr double delta_target_db = 60.0;
    constexpr double delta_tol_db = 1e-9;
    constexpr double run_time_limit_s = 60.0;
    constexpr double rolloff_target_db = 6.0;
    constexpr double rolloff_tol_db = 1e-9;
    constexpr double power_rtol = 1e-9;

    using Clock = std::chrono::steady_clock;

    double seconds_since(Clock::time_point t0)
    {
        return std::chrono::duration<double>(Clock::now() - t0).count();
    }

    struct Outcome
    {
        bool pass;
        std::string detail;
    };

    int failures = 0;

    void report(const std::string &name, const std::function<Outcome()> &check)
    {
        Outcome o;
        try
        {
            o = check();
        }
        catch (const std::exception &e)
        {
            o = {false, fmt::format("exception: {}", e.what())};
        }
        failures += !o.pass;
        fmt::print("{} {}: {}\n", o.pass ? "PASS" : "FAIL", name, o.detail);
        std::fflush(stdout);
    }

    Vec3 reflect(const Vec3 &v, const Vec3 &n) { return v - 2.0 * v.dot(n) * n; }

    // Angle between the mirrored incoming direction and the outgoing one, worst over all bounces
    double specular_angle(const PropagationPath &p, const Scene &scene)
    {
        double worst = 0.0;
        for (std::size_t k = 0; k < p.bounce_surfaces.size(); ++k)
        {
            const Vec3 n = scene.surface(p.bounce_surfaces[k]).normal();
            const Vec3 in = (p.vertices[k + 1] - p.vertices[k]).normalized();
            const Vec3 out = (p.vertices[k + 2] - p.vertices[k + 1]).normalized();
            const double c = std::clamp(reflect(in, n).dot(out), -1.0, 1.0);
            worst = std::max(worst, std::acos(c));
        }
        return worst;
    }

    Outcome oracle_equivalence()
    {
        std::mt19937_64 rng(20240611);
        std::size_t paths = 0, max_surfaces = 0;
        double worst = 0.0;
        const auto t0 = Clock::now();
        for (int i = 0; i < oracle_scene_count; ++i)
        {
            const auto box = oracle::random_shoebox(rng);
            max_surfaces = std::max(max_surfaces, box.scene.surfaces().size());
            const Vec3 tx = oracle::random_interior_point(rng, box), rx = oracle::random_interior_point(rng, box);
            const auto got = trace_reflections(box.scene, tx, rx, 2);
            const auto want = oracle::enumerate_paths(box.scene, tx, rx, 2);
            std::map<std::vector<int>, double> g;
            for (const auto &p : got)
                g.emplace(p.bounce_surfaces, p.length_m);
            if (g.size() != got.size() || got.size() != want.size())
                return {false, fmt::format("scene {}: {} paths traced, oracle found {}", i, got.size(), want.size())};
            for (const auto &w : want)
            {
                const auto it = g.find(w.surfaces);
                if (it == g.end())
                    return {false, fmt::format("scene {}: oracle path on surfaces [{}] missing", i,
                                               fmt::join(w.surfaces, ","))};
                worst = std::max(worst, std::abs(it->second - w.length) / w.length);
            }
            paths += got.size();
        }
        const double t = seconds_since(t0);
        const bool ok = worst <= oracle_length_rtol && t < oracle_time_limit_s && max_surfaces <= 10;
        return {ok, fmt::format("{} scenes (<= {} surfaces), {} paths, worst length error {:.2e} (tol {:.0e}), "
                                "{:.2f} s (limit {:.0f} s)",
                                oracle_scene_count, max_surfaces, paths, worst, oracle_length_rtol, t,
                                oracle_time_limit_s)};
    }

    Outcome specular_suite()
    {
        std::mt19937_64 rng(77);
        std::size_t bounces = 0;
        double worst_angle = 0.0, worst_mirror = 0.0, worst_recip = 0.0;
        bool recip_ok = true;
        const auto hall = build_e_hallway();
        for (const auto &r : hall.endpoints.rx)
            for (const auto &p : trace_reflections(hall.scene, hall.endpoints.tx, r.position, 2))
            {
                worst_angle = std::max(worst_angle, specular_angle(p, hall.scene));
                bounces += p.order();
            }
        for (int i = 0; i < property_cases; ++i)
        {
            const auto box = oracle::random_shoebox(rng);
            const Vec3 a = oracle::random_interior_point(rng, box), b = oracle::random_interior_point(rng, box);
            const auto fwd = trace_reflections(box.scene, a, b, 2);
            const auto bwd = trace_reflections(box.scene, b, a, 2);
            std::map<std::vector<int>, double> back;
            for (const auto &p : bwd)
            {
                auto rev = p.bounce_surfaces;
                std::reverse(rev.begin(), rev.end());
                back.emplace(rev, p.length_m);
            }
            recip_ok = recip_ok && fwd.size() == bwd.size();
            for (const auto &p : fwd)
            {
                worst_angle = std::max(worst_angle, specular_angle(p, box.scene));
                bounces += p.order();
                const auto it = back.find(p.bounce_surfaces);
                if (it == back.end())
                    recip_ok = false;
                else
                    worst_recip = std::max(worst_recip, std::abs(it->second - p.length_m) / p.length_m);
            }
            const auto &s = box.scene.surfaces()[std::size_t(i) % box.scene.surfaces().size()];
            const Vec3 q = oracle::uniform_in(rng, Vec3::Constant(-50.0), Vec3::Constant(50.0));
            worst_mirror = std::max(worst_mirror, (mirror_point(mirror_point(q, s), s) - q).norm());
        }
        const bool ok = worst_angle <= specular_tol_rad && worst_mirror <= involution_tol_m && recip_ok &&
                        worst_recip <= reciprocity_rtol;
        return {ok, fmt::format("{} bounces, worst specular error {:.2e} rad (tol {:.0e}); {} involution cases, worst "
                                "{:.2e} m; {} reciprocity cases {}, worst length error {:.2e}",
                                bounces, worst_angle, specular_tol_rad, property_cases, worst_mirror, property_cases,
                                recip_ok ? "matched" : "MISMATCHED", worst_recip)};
    }

    Outcome channel_formulas()
    {
        const double friis = spreading_loss_db(0.3e12, 10.0);
        std::mt19937_64 rng(5);
        const auto &table = synthetic_absorption_table();
        std::uniform_real_distribution<double> uf(table.f_min(), table.f_max()), ud(0.0, 200.0), ug(-180.0, -40.0);
        std::uniform_int_distribution<int> un(1, 40);
        double worst_add = 0.0;
        int bound_violations = 0;
        for (int i = 0; i < property_cases; ++i)
        {
            const double f = uf(rng), d1 = ud(rng), d2 = ud(rng);
            const double whole = absorption_loss_db(f, d1 + d2, table);
            const double parts = absorption_loss_db(f, d1, table) + absorption_loss_db(f, d2, table);
            if (whole > 0.0)
                worst_add = std::max(worst_add, std::abs(whole - parts) / whole);

            std::vector<PathGain> g(std::size_t(un(rng)));
            double mx = -1e300;
            for (auto &p : g)
            {
                p.frequency_hz = f;
                p.total_gain_db = ug(rng);
                mx = std::max(mx, p.total_gain_db);
            }
            const double agg = aggregate_gain_db(g);
            const bool strict = g.size() == 1 ? std::abs(agg - mx) <= 1e-12 : agg > mx;
            if (!(agg >= mx && agg <= mx + 10.0 * std::log10(double(g.size())) + 1e-12 && strict))
                ++bound_violations;
        }
        const bool ok = std::abs(friis - friis_target_db) <= friis_tol_db && worst_add <= additivity_rtol &&
                        bound_violations == 0;
        return {ok, fmt::format("spreading(0.3 THz, 10 m) = {:.4f} dB (target {} +- {}); additivity worst rel error "
                                "{:.2e} over {} cases; aggregation bound violations {}/{}",
                                friis, friis_target_db, friis_tol_db, worst_add, property_cases, bound_violations,
                                property_cases)};
    }

    Outcome window_coupling()
    {
        const auto &table = synthetic_absorption_table();
        const auto grid = frequency_grid(0.1e12, 1.2e12, 0.5e9);
        std::vector<std::vector<SpectralWindow>> w;
        for (double d : {1.0, 10.0, 100.0})
            w.push_back(spectral_windows(path_loss_spectrum(Scene{}, Vec3::Zero(), Vec3(d, 0, 0), grid, table, 0)));
        const double b1 = total_bandwidth(w[0]), b10 = total_bandwidth(w[1]), b100 = total_bandwidth(w[2]);
        bool inward = w[0].size() == w[1].size() && w[1].size() == w[2].size();
        for (std::size_t k = 0; inward && k < w[0].size(); ++k)
            inward = w[0][k].f_lo <= w[1][k].f_lo && w[1][k].f_lo <= w[2][k].f_lo && w[0][k].f_hi >= w[1][k].f_hi &&
                     w[1][k].f_hi >= w[2][k].f_hi;
        const bool ok = b100 < b1 && inward;
        return {ok, fmt::format("total window bandwidth {:.2f} / {:.2f} / {:.2f} GHz at 1 / 10 / 100 m; {} windows each; "
                                "edges {}",
                                b1 / 1e9, b10 / 1e9, b100 / 1e9, w[0].size(),
                                inward ? "move inward monotonically" : "NOT monotone")};
    }

    Outcome technique_deltas(RunResult &out)
    {
        const auto t0 = Clock::now();
        out = run(RunConfig::e_hallway_default());
        const double t = seconds_since(t0);
        double worst_delta = 0.0;
        std::size_t compared = 0, joint_violations = 0;
        for (double f : out.frequencies_hz)
            for (const auto &r : RunConfig::e_hallway_default().endpoints.rx)
            {
                const auto *b = out.find(Technique::baseline, f, r.id);
                const auto *u = out.find(Technique::ummimo, f, r.id);
                const auto *j = out.find(Technique::joint, f, r.id);
                if (!b->link.in_outage)
                {
                    worst_delta = std::max(worst_delta, std::abs(*u->link.snr_db - *b->link.snr_db - delta_target_db));
                    ++compared;
                }
                for (auto tech : {Technique::baseline, Technique::ummimo, Technique::hypersurface})
                {
                    const auto *o = out.find(tech, f, r.id);
                    if (!o->link.in_outage && (j->link.in_outage || *j->link.snr_db < *o->link.snr_db - 1e-9))
                        ++joint_violations;
                }
            }
        const auto rescue = gain_statistics(out, Technique::hypersurface, 0.3e12, Population::nlos);
        const bool ok = out.points.size() == 225 && worst_delta <= delta_tol_db && joint_violations == 0 &&
                        rescue.rescued >= 1 && t < run_time_limit_s;
        return {ok, fmt::format("UMMIMO-BASELINE worst |delta-60| {:.2e} dB over {} links (tol {:.0e}); JOINT "
                                "violations {}; HYPERSURFACE rescues {} NLOS Rx at 0.3 THz; {} grid points in {:.2f} s "
                                "(limit {:.0f} s)",
                                worst_delta, compared, delta_tol_db, joint_violations, rescue.rescued,
                                out.points.size(), t, run_time_limit_s)};
    }

    Outcome reflectarray_rolloff()
    {
        const auto hall = build_e_hallway();
        TileSet hs = make_tile_grid(hall.scene, hall.junction_wall_ids, 0.5, TileKind::hypersurface);
        TileSet ra = hs;
        ra.kind = TileKind::reflectarray;
        ra.cutoff_frequency_hz = 120e9;
        ra.rolloff_db_per_octave = 6.0;
        const auto &table = synthetic_absorption_table();
        double worst = 0.0;
        std::size_t n = 0;
        for (const auto &r : hall.endpoints.rx)
        {
            const auto cfg = configure(hs, hall.scene, hall.endpoints.tx, r.position);
            const auto gh = assisted_paths(cfg, hs, hall.scene, hall.endpoints.tx, r.position, 240e9, table);
            const auto gr = assisted_paths(cfg, ra, hall.scene, hall.endpoints.tx, r.position, 240e9, table);
            if (gh.size() != gr.size())
                return {false, "tile path counts differ"};
            for (std::size_t k = 0; k < gh.size(); ++k, ++n)
                worst = std::max(worst, std::abs((gh[k].total_gain_db - gr[k].total_gain_db) - rolloff_target_db));
        }
        const bool ok = n > 0 && worst <= rolloff_tol_db;
        return {ok, fmt::format("{} assisted paths at 240 GHz, worst |extra loss - 6| {:.2e} dB (tol {:.0e})", n, worst,
                                rolloff_tol_db)};
    }

    Outcome allocation_ordering()
    {
        std::mt19937_64 rng(9);
        std::uniform_int_distribution<int> un(1, 48), ud(1, 20);
        std::uniform_real_distribution<double> up(-20.0, 40.0), uf(0.1e12, 1e12), uw(1e9, 100e9);
        int order_violations = 0;
        double worst_power = 0.0;
        for (int i = 0; i < property_cases; ++i)
        {
            const int n = un(rng);
            const double lo = uf(rng);
            const auto subs = partition({lo, lo + uw(rng)}, n);
            std::vector<LinkDemand> d;
            const int m = std::uniform_int_distribution<int>(1, n)(rng);
            for (int k = 0; k < m; ++k)
                d.push_back({k, 5.0 * ud(rng), std::nullopt});
            std::shuffle(d.begin(), d.end(), rng);
            const auto a = allocate_center_out(subs, d);
            for (const auto &x : d)
                for (const auto &y : d)
                    if (x.distance_m > y.distance_m &&
                        std::abs(a.at(x.link_id).index_from_center) > std::abs(a.at(y.link_id).index_from_center))
                        ++order_violations;
            const double total = up(rng);
            double linear = 0.0;
            for (const auto &[id, p] : equal_power_split(total, a))
                linear += std::pow(10.0, p / 10.0);
            worst_power = std::max(worst_power, std::abs(linear / std::pow(10.0, total / 10.0) - 1.0));
        }
        const bool ok = order_violations == 0 && worst_power <= power_rtol;
        return {ok, fmt::format("{} trials, ordering violations {}, worst power conservation error {:.2e} (tol {:.0e})",
                                property_cases, order_violations, worst_power, power_rtol)};
    }

    Outcome determinism(const RunResult &first)
    {
        const auto dir = std::filesystem::temp_directory_path();
        const auto a = dir / "thzreach_acceptance_a.csv", b = dir / "thzreach_acceptance_b.csv";
        write_results_csv_file(a.string(), first);
        write_results_csv_file(b.string(), run(RunConfig::e_hallway_default()));
        auto slurp = [](const std::filesystem::path &p)
        {
            std::ifstream in(p, std::ios::binary);
            std::ostringstream ss;
            ss << in.rdbuf();
            return ss.str();
        };
        const std::string x = slurp(a), y = slurp(b);
        std::filesystem::remove(a);
        std::filesystem::remove(b);
        return {x == y && !x.empty(), fmt::format("two full runs, {} bytes each, {}", x.size(),
                                                  x == y ? "byte-identical" : "DIFFERENT")};
    }
}

int main()
{
    RunResult full;
    report("ray-tracer oracle equivalence", oracle_equivalence);
    report("specular law, mirror involution, reciprocity", specular_suite);
    report("channel formulas", channel_formulas);
    report("spectral-window distance coupling", window_coupling);
    report("technique deltas", [&]
           { return technique_deltas(full); });
    report("reflectarray roll-off", reflectarray_rolloff);
    report("allocation ordering and power conservation", allocation_ordering);
    report("determinism", [&]
           { return determinism(full); });
    fmt::print("{} of 8 criteria passed\n", 8 - failures);
    return failures == 0 ? 0 : 1;
}
