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

#include "thzreach/surfaces.hpp"

#include <fmt/format.h>

#include <cmath>
#include <numbers>

namespace thzreach
{
    std::string_view to_string(TileKind kind)
    {
        return kind == TileKind::reflectarray ? "REFLECTARRAY" : "HYPERSURFACE";
    }

    TileKind parse_tile_kind(std::string_view s)
    {
        if (s == "REFLECTARRAY")
            return TileKind::reflectarray;
        if (s == "HYPERSURFACE")
            return TileKind::hypersurface;
        throw std::invalid_argument(fmt::format("Unknown tile kind '{}'", s));
    }

    std::string_view to_string(RedirectionModel model)
    {
        return model == RedirectionModel::specular ? "specular" : "scatter";
    }

    RedirectionModel parse_redirection_model(std::string_view s)
    {
        if (s == "specular")
            return RedirectionModel::specular;
        if (s == "scatter")
            return RedirectionModel::scatter;
        throw std::invalid_argument(fmt::format("Unknown redirection model '{}'", s));
    }

    double TileSet::redirection_loss_db(double f_hz) const
    {
        double loss = efficiency_db;
        if (kind == TileKind::reflectarray && f_hz > cutoff_frequency_hz)
            loss += rolloff_db_per_octave * std::log2(f_hz / cutoff_frequency_hz);
        return loss;
    }

    void TileSet::validate(const Scene &scene) const
    {
        if (!(efficiency_db >= 0.0))
            throw std::invalid_argument("TileSet: efficiency_db must be >= 0");
        if (kind == TileKind::reflectarray && (!(cutoff_frequency_hz > 0.0) || !(rolloff_db_per_octave >= 0.0)))
            throw std::invalid_argument("TileSet: reflectarray needs cutoff > 0 and roll-off >= 0");
        for (std::size_t i = 0; i < tiles.size(); ++i)
        {
            const auto &t = tiles[i];
            if (!scene.has_surface(t.host_surface_id))
                throw std::invalid_argument(fmt::format("Tile {}: unknown host surface {}", i, t.host_surface_id));
            if (!scene.surface(t.host_surface_id).contains(t.center, 1e-6))
                throw std::invalid_argument(fmt::format("Tile {}: center not on host surface {}", i, t.host_surface_id));
            if (!(t.area_m2 > 0.0))
                throw std::invalid_argument(fmt::format("Tile {}: area must be positive", i));
        }
    }

    TileSet make_tile_grid(const Scene &scene, std::span<const int> host_surface_ids, double pitch_m, TileKind kind)
    {
        if (!(pitch_m > 0.0))
            throw std::invalid_argument("make_tile_grid: pitch must be positive");
        TileSet set;
        set.kind = kind;
        for (int id : host_surface_ids)
        {
            const Surface &s = scene.surface(id);
            const double lu = s.edge_u().norm(), lv = s.edge_v().norm();
            const Vec3 eu = s.edge_u() / lu, ev = s.edge_v() / lv;
            const int nu = int(std::floor(lu / pitch_m + 1e-9));
            const int nv = int(std::floor(lv / pitch_m + 1e-9));
            const double off_u = 0.5 * (lu - nu * pitch_m), off_v = 0.5 * (lv - nv * pitch_m);
            for (int i = 0; i < nu; ++i)
                for (int j = 0; j < nv; ++j)
                    set.tiles.push_back({s.corner() + (off_u + (i + 0.5) * pitch_m) * eu +
                                             (off_v + (j + 0.5) * pitch_m) * ev,
                                         pitch_m * pitch_m, id});
        }
        return set;
    }

    Vec3 solve_tile_normal(const Vec3 &tx, const Vec3 &tile_center, const Vec3 &rx, const Vec3 &fallback)
    {
        const Vec3 to_tx = tx - tile_center, to_rx = rx - tile_center;
        if (to_tx.norm() <= geometry_tolerance_m || to_rx.norm() <= geometry_tolerance_m)
            throw std::invalid_argument("solve_tile_normal: tx or rx coincides with the tile");
        const Vec3 a = to_tx.normalized(), b = to_rx.normalized();
        const Vec3 bisector = a + b;
        if (bisector.norm() > 1e-12)
            return bisector.normalized();

        // Tile between tx and rx on one line: any normal orthogonal to the line passes the ray straight on
        Vec3 n = fallback - fallback.dot(a) * a;
        if (n.norm() <= 1e-12)
        {
            Eigen::Index axis = 0;
            a.cwiseAbs().minCoeff(&axis);
            n = Vec3::Unit(axis) - a[axis] * a;
        }
        return n.normalized();
    }

    std::vector<TileConfiguration> configure(const TileSet &tiles, const Scene &scene, const Vec3 &tx, const Vec3 &rx)
    {
        if (!scene.contains(tx) || !scene.contains(rx))
            throw std::invalid_argument("configure: tx and rx must lie inside the scene volume");

        std::vector<TileConfiguration> out;
        out.reserve(tiles.tiles.size());
        for (std::size_t i = 0; i < tiles.tiles.size(); ++i)
        {
            const Tile &t = tiles.tiles[i];
            const Surface &host = scene.surface(t.host_surface_id);
            TileConfiguration c{i, host.normal(), false};
            const bool front = host.signed_distance(tx) > grazing_tolerance_m &&
                               host.signed_distance(rx) > grazing_tolerance_m;
            if (front && !is_occluded(t.center, tx, scene, {host.id()}) &&
                !is_occluded(t.center, rx, scene, {host.id()}))
            {
                c.normal = solve_tile_normal(tx, t.center, rx, host.normal());
                c.active = true;
            }
            out.push_back(c);
        }
        return out;
    }

    std::vector<PathGain> assisted_paths(std::span<const TileConfiguration> config, const TileSet &tiles,
                                         const Scene &scene, const Vec3 &tx, const Vec3 &rx, double f_hz,
                                         const AbsorptionTable &table)
    {
        (void)scene;
        std::vector<PathGain> out;
        const double redirection = tiles.redirection_loss_db(f_hz);
        for (const auto &c : config)
        {
            if (!c.active)
                continue;
            if (c.tile_index >= tiles.tiles.size())
                throw std::out_of_range(fmt::format("Tile configuration references tile {}", c.tile_index));
            const Tile &t = tiles.tiles[c.tile_index];
            PathGain g;
            g.path = make_path(PathKind::surface_assisted, {tx, t.center, rx}, {t.host_surface_id});
            g.frequency_hz = f_hz;
            const double d1 = (t.center - tx).norm(), d2 = (rx - t.center).norm();
            if (tiles.model == RedirectionModel::specular)
                g.spreading_loss_db = spreading_loss_db(f_hz, d1 + d2);
            else
                g.spreading_loss_db = 20.0 * std::log10(4.0 * std::numbers::pi * d1 * d2 / t.area_m2);
            g.absorption_loss_db = absorption_loss_db(f_hz, d1 + d2, table);
            g.reflection_loss_db = redirection;
            g.total_gain_db = -(g.spreading_loss_db + g.absorption_loss_db + g.reflection_loss_db);
            out.push_back(std::move(g));
        }
        return out;
    }
}
