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

#include "thzreach/raytracer.hpp"
#include "thzreach/scene_io.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

namespace thzreach
{
    std::string_view to_string(PathKind kind)
    {
        switch (kind)
        {
        case PathKind::los:
            return "LOS";
        case PathKind::reflect1:
            return "REFLECT1";
        case PathKind::reflect2:
            return "REFLECT2";
        case PathKind::surface_assisted:
            return "SURFACE_ASSISTED";
        }
        return "?";
    }

    PropagationPath make_path(PathKind kind, std::vector<Vec3> vertices, std::vector<int> bounce_surfaces)
    {
        PropagationPath p{kind, std::move(vertices), std::move(bounce_surfaces), 0.0};
        for (std::size_t i = 1; i < p.vertices.size(); ++i)
            p.length_m += (p.vertices[i] - p.vertices[i - 1]).norm();
        return p;
    }

    std::optional<PropagationPath> trace_los(const Scene &scene, const Vec3 &tx, const Vec3 &rx)
    {
        if ((tx - rx).norm() <= geometry_tolerance_m)
            throw std::invalid_argument("trace_los: tx and rx coincide");
        if (is_occluded(tx, rx, scene))
            return std::nullopt;
        return make_path(PathKind::los, {tx, rx}, {});
    }

    std::vector<PropagationPath> trace_reflections(const Scene &scene, const Vec3 &tx, const Vec3 &rx, int max_order)
    {
        if (max_order < 1 || max_order > max_reflection_order)
            throw std::invalid_argument("trace_reflections: max_order must be 1 or 2");
        if ((tx - rx).norm() <= geometry_tolerance_m)
            throw std::invalid_argument("trace_reflections: tx and rx coincide");

        std::vector<PropagationPath> out;
        const auto &surfaces = scene.surfaces();

        for (const auto &s1 : surfaces)
        {
            const Vec3 img1 = mirror_point(tx, s1);

            auto p1 = segment_hits_surface(img1, rx, s1);
            if (p1 && !is_occluded(tx, *p1, scene, {s1.id()}) && !is_occluded(*p1, rx, scene, {s1.id()}))
                out.push_back(make_path(PathKind::reflect1, {tx, *p1, rx}, {s1.id()}));

            if (max_order < 2)
                continue;

            for (const auto &s2 : surfaces)
            {
                if (s2.id() == s1.id())
                    continue;
                const Vec3 img2 = mirror_point(img1, s2);
                auto q2 = segment_hits_surface(img2, rx, s2);
                if (!q2)
                    continue;
                auto q1 = segment_hits_surface(img1, *q2, s1);
                if (!q1)
                    continue;
                if (is_occluded(tx, *q1, scene, {s1.id()}) || is_occluded(*q1, *q2, scene, {s1.id(), s2.id()}) ||
                    is_occluded(*q2, rx, scene, {s2.id()}))
                    continue;
                out.push_back(make_path(PathKind::reflect2, {tx, *q1, *q2, rx}, {s1.id(), s2.id()}));
            }
        }

        std::sort(out.begin(), out.end(), [](const PropagationPath &a, const PropagationPath &b)
                  {
                      if (a.order() != b.order())
                          return a.order() < b.order();
                      if (a.length_m != b.length_m)
                          return a.length_m < b.length_m;
                      return a.bounce_surfaces < b.bounce_surfaces; });
        return out;
    }

    std::vector<PropagationPath> trace_paths(const Scene &scene, const Vec3 &tx, const Vec3 &rx, int max_order)
    {
        std::vector<PropagationPath> out;
        if (auto los = trace_los(scene, tx, rx))
            out.push_back(std::move(*los));
        if (max_order > 0)
        {
            auto refl = trace_reflections(scene, tx, rx, max_order);
            out.insert(out.end(), std::make_move_iterator(refl.begin()), std::make_move_iterator(refl.end()));
        }
        return out;
    }

    namespace
    {
        std::size_t expected_bounces(PathKind kind)
        {
            switch (kind)
            {
            case PathKind::los:
                return 0;
            case PathKind::reflect2:
                return 2;
            default:
                return 1;
            }
        }

        // Angle between the mirrored incident direction and the departure direction at vertex i
        double bounce_error(const PropagationPath &path, std::size_t i, const Surface &s)
        {
            const Vec3 d_in = (path.vertices[i] - path.vertices[i - 1]).normalized();
            const Vec3 d_out = (path.vertices[i + 1] - path.vertices[i]).normalized();
            const Vec3 mirrored = d_in - 2.0 * d_in.dot(s.normal()) * s.normal();
            return std::atan2(mirrored.cross(d_out).norm(), mirrored.dot(d_out));
        }
    }

    double specular_error_rad(const PropagationPath &path, const Scene &scene)
    {
        double worst = 0.0;
        for (std::size_t b = 0; b < path.bounce_surfaces.size(); ++b)
            worst = std::max(worst, bounce_error(path, b + 1, scene.surface(path.bounce_surfaces[b])));
        return worst;
    }

    bool validate_path(const PropagationPath &path, const Scene &scene)
    {
        const std::size_t n_bounce = path.bounce_surfaces.size();
        if (n_bounce != expected_bounces(path.kind) || path.vertices.size() != n_bounce + 2)
            return false;
        for (int id : path.bounce_surfaces)
            if (!scene.has_surface(id))
                return false;

        double sum = 0.0;
        for (std::size_t i = 1; i < path.vertices.size(); ++i)
        {
            const double seg = (path.vertices[i] - path.vertices[i - 1]).norm();
            if (seg <= geometry_tolerance_m)
                return false;
            sum += seg;
        }
        if (std::abs(sum - path.length_m) > 1e-9 * std::max(1.0, sum))
            return false;

        for (std::size_t b = 0; b < n_bounce; ++b)
        {
            const Surface &s = scene.surface(path.bounce_surfaces[b]);
            if (!s.contains(path.vertices[b + 1], geometry_tolerance_m))
                return false;
            if (path.kind != PathKind::surface_assisted &&
                bounce_error(path, b + 1, s) > specular_tolerance_rad)
                return false;
        }

        for (std::size_t i = 1; i < path.vertices.size(); ++i)
        {
            std::set<int> ignore;
            if (i >= 2)
                ignore.insert(path.bounce_surfaces[i - 2]);
            if (i - 1 < n_bounce)
                ignore.insert(path.bounce_surfaces[i - 1]);
            if (is_occluded(path.vertices[i - 1], path.vertices[i], scene, ignore))
                return false;
        }
        return true;
    }

    void write_paths_jsonl(std::ostream &os, const std::vector<PropagationPath> &paths)
    {
        for (const auto &p : paths)
        {
            nlohmann::json j;
            j["kind"] = std::string(to_string(p.kind));
            j["order"] = p.order();
            j["length_m"] = p.length_m;
            j["vertices"] = nlohmann::json::array();
            for (const auto &v : p.vertices)
                j["vertices"].push_back(vec_to_json(v));
            j["surfaces"] = p.bounce_surfaces;
            os << j.dump() << '\n';
        }
    }
}
