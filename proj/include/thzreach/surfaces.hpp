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

#ifndef THZREACH_SURFACES_HPP
#define THZREACH_SURFACES_HPP

#include "thzreach/channel.hpp"
#include "thzreach/geometry.hpp"

#include <span>
#include <string_view>
#include <vector>

namespace thzreach
{
    enum class TileKind
    {
        reflectarray,
        hypersurface
    };

    std::string_view to_string(TileKind kind); // "REFLECTARRAY", "HYPERSURFACE"
    TileKind parse_tile_kind(std::string_view s);

    // Spreading model of a tile redirection.
    //  specular: the tile acts as a mirror, loss = Friis over d1 + d2
    //  scatter:  finite plate of area A, loss = 20 log10(4 pi d1 d2 / A) (frequency independent)
    enum class RedirectionModel
    {
        specular,
        scatter
    };

    std::string_view to_string(RedirectionModel model);
    RedirectionModel parse_redirection_model(std::string_view s);

    struct Tile
    {
        Vec3 center = Vec3::Zero();
        double area_m2 = 0.0;
        int host_surface_id = 0;
    };

    struct TileSet
    {
        TileKind kind = TileKind::hypersurface;
        std::vector<Tile> tiles;
        double efficiency_db = 3.0;              // loss per redirection, >= 0
        double cutoff_frequency_hz = 120e9;      // reflectarray only
        double rolloff_db_per_octave = 6.0;      // reflectarray only
        RedirectionModel model = RedirectionModel::specular;

        // Redirection loss at f: efficiency plus, for reflectarrays above cutoff,
        // rolloff * log2(f / cutoff)
        double redirection_loss_db(double f_hz) const;

        // Throws std::invalid_argument if a tile is off its host surface or a loss is negative
        void validate(const Scene &scene) const;
    };

    struct TileConfiguration
    {
        std::size_t tile_index = 0;
        Vec3 normal = Vec3::UnitZ();
        bool active = false;
    };

    /// Uniform grid of square tiles (pitch x pitch) centered on each listed host surface
    TileSet make_tile_grid(const Scene &scene, std::span<const int> host_surface_ids, double pitch_m,
                           TileKind kind = TileKind::hypersurface);

    /// Unit bisector of (tile -> tx) and (tile -> rx). When the two directions are opposite the
    /// bisector is not unique; the component of `fallback` orthogonal to them is returned
    /// (or any orthogonal axis if that vanishes). Throws std::invalid_argument if tx or rx is at the tile.
    Vec3 solve_tile_normal(const Vec3 &tx, const Vec3 &tile_center, const Vec3 &rx,
                           const Vec3 &fallback = Vec3::UnitZ());

    /// Activates every tile that sees both tx and rx from the front side of its host surface and
    /// steers it toward the specular bisector. Other tiles stay parallel to their host wall.
    /// Throws std::invalid_argument if tx or rx is outside the scene volume.
    std::vector<TileConfiguration> configure(const TileSet &tiles, const Scene &scene, const Vec3 &tx, const Vec3 &rx);

    // Tx -> tile -> Rx path gains for the active tiles
    std::vector<PathGain> assisted_paths(std::span<const TileConfiguration> config, const TileSet &tiles,
                                         const Scene &scene, const Vec3 &tx, const Vec3 &rx, double f_hz,
                                         const AbsorptionTable &table);
}

#endif
