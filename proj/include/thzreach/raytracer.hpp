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

#ifndef THZREACH_RAYTRACER_HPP
#define THZREACH_RAYTRACER_HPP

#include "thzreach/geometry.hpp"

#include <iosfwd>
#include <optional>
#include <string_view>
#include <vector>

namespace thzreach
{
    enum class PathKind
    {
        los,
        reflect1,
        reflect2,
        surface_assisted
    };

    std::string_view to_string(PathKind kind); // "LOS", "REFLECT1", "REFLECT2", "SURFACE_ASSISTED"

    // Tx -> (bounces) -> Rx vertex chain. For surface-assisted paths the single bounce surface is
    // the host wall of the redirecting tile.
    struct PropagationPath
    {
        PathKind kind = PathKind::los;
        std::vector<Vec3> vertices;
        std::vector<int> bounce_surfaces;
        double length_m = 0.0;

        std::size_t order() const { return bounce_surfaces.size(); }
    };

    // Builds a path and fills in its length
    PropagationPath make_path(PathKind kind, std::vector<Vec3> vertices, std::vector<int> bounce_surfaces);

    // Max reflection order accepted by trace_reflections
    inline constexpr int max_reflection_order = 2;

    // Tolerance on the specular reflection law (radians)
    inline constexpr double specular_tolerance_rad = 1e-6;

    std::optional<PropagationPath> trace_los(const Scene &scene, const Vec3 &tx, const Vec3 &rx);

    /// Image-method enumeration of all specular paths with 1..max_order bounces.
    /// Sorted by (order, length, surface tuple). Throws std::invalid_argument unless max_order is 1 or 2.
    std::vector<PropagationPath> trace_reflections(const Scene &scene, const Vec3 &tx, const Vec3 &rx, int max_order);

    // LOS (if any) followed by reflections up to max_order; max_order = 0 gives LOS only
    std::vector<PropagationPath> trace_paths(const Scene &scene, const Vec3 &tx, const Vec3 &rx, int max_order);

    /// Checks kind/bounce-count consistency, the length sum, that each bounce vertex lies on its
    /// surface, the specular law for REFLECT paths and that no segment is occluded.
    bool validate_path(const PropagationPath &path, const Scene &scene);

    // Largest deviation from the specular law over all bounces of a REFLECT path (radians)
    double specular_error_rad(const PropagationPath &path, const Scene &scene);

    // One JSON object per line:
    // {"kind":"REFLECT1","order":1,"length_m":..,"vertices":[[x,y,z],..],"surfaces":[id,..]}
    void write_paths_jsonl(std::ostream &os, const std::vector<PropagationPath> &paths);
}

#endif
