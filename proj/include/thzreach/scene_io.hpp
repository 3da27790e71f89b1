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

#ifndef THZREACH_SCENE_IO_HPP
#define THZREACH_SCENE_IO_HPP

#include "thzreach/geometry.hpp"

#include <json.hpp>

#include <iosfwd>
#include <optional>
#include <string>

namespace thzreach
{
    // Scene document (JSON):
    //
    //   {
    //     "height_m": 3.0,
    //     "materials": [ {"id": 0, "name": "concrete wall", "reflectance": 0.75}, ... ],
    //     "surfaces":  [ {"id": 0, "corner": [x, y, z], "edge_u": [..], "edge_v": [..],
    //                     "material_id": 0, "label": "junction_1"}, ... ],
    //     "cells":     [ {"min": [x, y, z], "max": [x, y, z]}, ... ],            (optional)
    //     "endpoints": { "tx": [x, y, z],
    //                    "rx": [ {"id": 0, "position": [x, y, z], "los": true,
    //                             "nominal_distance_m": 10.0}, ... ] }       (optional)
    //   }
    //
    // All coordinates in meters. "label" is optional; surfaces labelled "junction*" are the
    // default tile hosts.
    struct SceneDocument
    {
        Scene scene;
        std::optional<EndpointSet> endpoints;
    };

    nlohmann::json scene_to_json(const Scene &scene, const EndpointSet *endpoints = nullptr);
    SceneDocument scene_from_json(const nlohmann::json &doc);

    nlohmann::json endpoints_to_json(const EndpointSet &endpoints);
    EndpointSet endpoints_from_json(const nlohmann::json &ep);

    // Throws std::runtime_error with the file name prefixed on I/O, parse or validation errors
    SceneDocument load_scene_file(const std::string &path);
    void write_scene(std::ostream &os, const Scene &scene, const EndpointSet *endpoints = nullptr);

    nlohmann::json vec_to_json(const Vec3 &v);
    Vec3 vec_from_json(const nlohmann::json &j);
}

#endif
