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

#include "thzreach/geometry.hpp"

#include <fmt/format.h>

#include <array>
#include <cmath>
#include <stdexcept>

namespace thzreach
{
    namespace
    {
        // Number of nonzero components of an edge vector
        int nonzero_axes(const Vec3 &v)
        {
            int n = 0;
            for (int i = 0; i < 3; ++i)
                if (v[i] != 0.0)
                    ++n;
            return n;
        }
    }

    Surface::Surface(int id, const Vec3 &corner, const Vec3 &edge_u, const Vec3 &edge_v, int material_id,
                     std::string label)
        : id_(id), corner_(corner), edge_u_(edge_u), edge_v_(edge_v), material_id_(material_id),
          label_(std::move(label))
    {
        if (!corner.allFinite() || !edge_u.allFinite() || !edge_v.allFinite())
            throw std::invalid_argument(fmt::format("Surface {}: non-finite coordinates", id));
        if (edge_u.norm() <= geometry_tolerance_m || edge_v.norm() <= geometry_tolerance_m)
            throw std::invalid_argument(fmt::format("Surface {}: edges must have positive length", id));
        if (nonzero_axes(edge_u) != 1 || nonzero_axes(edge_v) != 1)
            throw std::invalid_argument(fmt::format("Surface {}: edges must be axis-aligned", id));
        if (std::abs(edge_u.dot(edge_v)) > geometry_tolerance_m)
            throw std::invalid_argument(fmt::format("Surface {}: edges must be perpendicular", id));
        normal_ = edge_u.cross(edge_v).normalized();
    }

    bool Surface::contains(const Vec3 &p, double tol) const
    {
        if (std::abs(signed_distance(p)) > tol)
            return false;
        const Vec3 rel = p - corner_;
        const double lu = edge_u_.norm(), lv = edge_v_.norm();
        const double su = rel.dot(edge_u_) / lu; // meters along u
        const double sv = rel.dot(edge_v_) / lv;
        return su >= -tol && su <= lu + tol && sv >= -tol && sv <= lv + tol;
    }

    Surface make_axis_rect(int id, int material_id, const Vec3 &lo, const Vec3 &hi, bool normal_positive,
                           std::string label)
    {
        int plane_axis = -1;
        for (int i = 0; i < 3; ++i)
        {
            if (lo[i] == hi[i])
            {
                if (plane_axis != -1)
                    throw std::invalid_argument(fmt::format("Surface {}: degenerate rectangle", id));
                plane_axis = i;
            }
        }
        if (plane_axis == -1)
            throw std::invalid_argument(fmt::format("Surface {}: corners do not share a plane", id));

        // (b, c) cyclic after the plane axis, so e_b x e_c points along +plane_axis
        const int b = (plane_axis + 1) % 3, c = (plane_axis + 2) % 3;
        Vec3 corner = lo.cwiseMin(hi);
        Vec3 eb = Vec3::Zero(), ec = Vec3::Zero();
        eb[b] = std::abs(hi[b] - lo[b]);
        ec[c] = std::abs(hi[c] - lo[c]);
        if (normal_positive)
            return Surface(id, corner, eb, ec, material_id, std::move(label));
        return Surface(id, corner, ec, eb, material_id, std::move(label));
    }

    bool Box::contains(const Vec3 &p, double tol) const
    {
        for (int i = 0; i < 3; ++i)
            if (p[i] < min[i] - tol || p[i] > max[i] + tol)
                return false;
        return true;
    }

    Scene::Scene(std::vector<Material> materials, std::vector<Surface> surfaces, double height_m,
                 std::vector<Box> cells)
        : materials_(std::move(materials)), surfaces_(std::move(surfaces)), cells_(std::move(cells)),
          height_(height_m)
    {
        for (std::size_t i = 0; i < materials_.size(); ++i)
        {
            const auto &m = materials_[i];
            if (!(m.reflectance >= 0.0 && m.reflectance <= 1.0))
                throw std::invalid_argument(
                    fmt::format("Material {} ('{}'): reflectance {} outside [0, 1]", m.id, m.name, m.reflectance));
            if (!material_index_.emplace(m.id, i).second)
                throw std::invalid_argument(fmt::format("Duplicate material id {}", m.id));
        }
        for (std::size_t i = 0; i < surfaces_.size(); ++i)
        {
            const auto &s = surfaces_[i];
            if (!material_index_.contains(s.material_id()))
                throw std::invalid_argument(
                    fmt::format("Surface {} references unknown material {}", s.id(), s.material_id()));
            if (!surface_index_.emplace(s.id(), i).second)
                throw std::invalid_argument(fmt::format("Duplicate surface id {}", s.id()));
        }
        if (height_ < 0.0)
            throw std::invalid_argument("Scene height must be non-negative");
    }

    const Surface &Scene::surface(int id) const
    {
        auto it = surface_index_.find(id);
        if (it == surface_index_.end())
            throw std::out_of_range(fmt::format("Unknown surface id {}", id));
        return surfaces_[it->second];
    }

    const Material &Scene::material(int id) const
    {
        auto it = material_index_.find(id);
        if (it == material_index_.end())
            throw std::out_of_range(fmt::format("Unknown material id {}", id));
        return materials_[it->second];
    }

    bool Scene::contains(const Vec3 &p) const
    {
        if (!cells_.empty())
        {
            for (const auto &c : cells_)
                if (c.contains(p))
                    return true;
            return false;
        }
        if (surfaces_.empty())
            return true;
        Box bb{surfaces_.front().corner(), surfaces_.front().corner()};
        for (const auto &s : surfaces_)
        {
            for (const Vec3 &q : {s.corner(), Vec3(s.corner() + s.edge_u() + s.edge_v())})
            {
                bb.min = bb.min.cwiseMin(q);
                bb.max = bb.max.cwiseMax(q);
            }
        }
        return bb.contains(p);
    }

    // ------------------------------------------------------------------------
    // E hallway
    //
    // Spine: x in [0, L], y in [5 - w/2, 5 + w/2], with L = 97 + w.
    // Arms extend along +y from the spine's north wall, centered at x = 35, 75 and at the far end.
    // NLOS receivers sit on the arm center lines; their nominal distance is the route length
    // (along the spine center line to the arm, then up the arm) from the Tx.
    // ------------------------------------------------------------------------

    Hallway build_e_hallway(const HallwayParams &params)
    {
        const double w = params.corridor_width_m;
        const double arm_len = params.arm_length_m;
        if (!(w > 0.0) || !std::isfinite(w))
            throw std::invalid_argument("build_e_hallway: corridor_width must be positive");
        if (!(arm_len > 0.0) || !std::isfinite(arm_len))
            throw std::invalid_argument("build_e_hallway: arm_length must be positive");

        constexpr double height = 3.0;
        constexpr double rx_height = 1.5;
        const Vec3 tx(5.0, 5.0, 2.95);

        const double y_s = tx.y() - 0.5 * w; // south wall of the spine
        const double y_n = tx.y() + 0.5 * w; // north wall of the spine
        const double spine_len = 97.0 + w;
        const double y_end = y_n + arm_len;

        // Arm center x positions; the last arm closes the spine's far end
        const std::array<double, 3> arm_x = {35.0, 75.0, spine_len - 0.5 * w};

        std::vector<Material> materials = {{wall_material_id, "concrete wall", 0.75},
                                           {floor_material_id, "floor", 0.5},
                                           {ceiling_material_id, "ceiling", 0.8}};
        std::vector<Surface> surfaces;
        std::vector<int> junction_ids;
        int next_id = 0;
        auto add = [&](int mat, const Vec3 &lo, const Vec3 &hi, bool positive, std::string label)
        {
            surfaces.push_back(make_axis_rect(next_id, mat, lo, hi, positive, std::move(label)));
            return next_id++;
        };

        // Floor and ceiling pieces
        add(floor_material_id, {0, y_s, 0}, {spine_len, y_n, 0}, true, "spine_floor");
        add(ceiling_material_id, {0, y_s, height}, {spine_len, y_n, height}, false, "spine_ceiling");
        for (std::size_t a = 0; a < arm_x.size(); ++a)
        {
            const double x0 = arm_x[a] - 0.5 * w, x1 = arm_x[a] + 0.5 * w;
            add(floor_material_id, {x0, y_n, 0}, {x1, y_end, 0}, true, fmt::format("arm{}_floor", a + 1));
            add(ceiling_material_id, {x0, y_n, height}, {x1, y_end, height}, false,
                fmt::format("arm{}_ceiling", a + 1));
        }

        // Spine end walls
        add(wall_material_id, {0, y_s, 0}, {0, y_n, height}, true, "spine_west");
        add(wall_material_id, {spine_len, y_s, 0}, {spine_len, y_n, height}, false, "spine_east");

        // South wall, split so the segments opposite the arm openings can host tiles
        double x_prev = 0.0;
        for (std::size_t a = 0; a < arm_x.size(); ++a)
        {
            const double x0 = arm_x[a] - 0.5 * w, x1 = arm_x[a] + 0.5 * w;
            if (x0 > x_prev)
                add(wall_material_id, {x_prev, y_s, 0}, {x0, y_s, height}, true, fmt::format("spine_south_{}", a + 1));
            junction_ids.push_back(
                add(wall_material_id, {x0, y_s, 0}, {x1, y_s, height}, true, fmt::format("junction_{}", a + 1)));
            x_prev = x1;
        }
        if (x_prev < spine_len)
            add(wall_material_id, {x_prev, y_s, 0}, {spine_len, y_s, height}, true, "spine_south_end");

        // North wall segments between the arm openings
        x_prev = 0.0;
        for (std::size_t a = 0; a < arm_x.size(); ++a)
        {
            const double x0 = arm_x[a] - 0.5 * w;
            if (x0 > x_prev)
                add(wall_material_id, {x_prev, y_n, 0}, {x0, y_n, height}, false, fmt::format("spine_north_{}", a + 1));
            x_prev = arm_x[a] + 0.5 * w;
        }
        if (x_prev < spine_len)
            add(wall_material_id, {x_prev, y_n, 0}, {spine_len, y_n, height}, false, "spine_north_end");

        // Arm walls
        for (std::size_t a = 0; a < arm_x.size(); ++a)
        {
            const double x0 = arm_x[a] - 0.5 * w, x1 = arm_x[a] + 0.5 * w;
            add(wall_material_id, {x0, y_n, 0}, {x0, y_end, height}, true, fmt::format("arm{}_west", a + 1));
            add(wall_material_id, {x1, y_n, 0}, {x1, y_end, height}, false, fmt::format("arm{}_east", a + 1));
            add(wall_material_id, {x0, y_end, 0}, {x1, y_end, height}, false, fmt::format("arm{}_end", a + 1));
        }

        std::vector<Box> cells;
        cells.push_back({{0, y_s, 0}, {spine_len, y_n, height}});
        for (double xc : arm_x)
            cells.push_back({{xc - 0.5 * w, y_n, 0}, {xc + 0.5 * w, y_end, height}});

        Hallway out{Scene(std::move(materials), std::move(surfaces), height, cells), {}, std::move(junction_ids)};
        out.endpoints.tx = tx;

        int rx_id = 0;
        for (int d = 10; d <= 90; d += 10)
            out.endpoints.rx.push_back({rx_id++, Vec3(tx.x() + d, tx.y(), rx_height), true, double(d)});

        // NLOS route distances per arm
        const std::array<std::pair<std::size_t, std::array<int, 3>>, 2> nlos = {{{0, {40, 50, 60}}, {1, {80, 90, 100}}}};
        for (const auto &[arm, routes] : nlos)
        {
            const double along_spine = arm_x[arm] - tx.x();
            for (int route : routes)
            {
                const Vec3 p(arm_x[arm], tx.y() + (route - along_spine), rx_height);
                out.endpoints.rx.push_back({rx_id++, p, false, double(route)});
            }
        }

        // Every endpoint must be inside the volume; NLOS endpoints must be inside their arm past the spine
        auto inside = [](const Box &b, const Vec3 &p)
        {
            for (int i = 0; i < 3; ++i)
                if (!(p[i] > b.min[i] + grazing_tolerance_m && p[i] < b.max[i] - grazing_tolerance_m))
                    return false;
            return true;
        };
        if (!inside(cells[0], tx))
            throw std::invalid_argument("build_e_hallway: Tx outside the spine");
        for (const auto &r : out.endpoints.rx)
        {
            bool ok = false;
            if (r.los)
                ok = inside(cells[0], r.position);
            else
                for (std::size_t a = 1; a < cells.size(); ++a)
                    ok = ok || inside(cells[a], r.position);
            if (!ok)
                throw std::invalid_argument(fmt::format(
                    "build_e_hallway: Rx {} at ({}, {}, {}) falls outside the enclosed volume", r.id,
                    r.position.x(), r.position.y(), r.position.z()));
        }
        return out;
    }

    Vec3 mirror_point(const Vec3 &p, const Surface &s)
    {
        return p - 2.0 * s.signed_distance(p) * s.normal();
    }

    std::optional<Vec3> segment_hits_surface(const Vec3 &a, const Vec3 &b, const Surface &s)
    {
        const double da = s.signed_distance(a);
        const double db = s.signed_distance(b);
        const double denom = da - db;
        if (std::abs(denom) < 1e-15 * std::max(1.0, (b - a).norm()))
            return std::nullopt; // parallel
        const double t = da / denom;
        if (!(t > 0.0 && t < 1.0))
            return std::nullopt;
        const Vec3 hit = a + t * (b - a);
        if (!s.contains(hit, geometry_tolerance_m))
            return std::nullopt;
        return hit;
    }

    bool is_occluded(const Vec3 &a, const Vec3 &b, const Scene &scene, const std::set<int> &ignore)
    {
        for (const auto &s : scene.surfaces())
        {
            if (ignore.contains(s.id()))
                continue;
            auto hit = segment_hits_surface(a, b, s);
            if (hit && (*hit - a).norm() > grazing_tolerance_m && (*hit - b).norm() > grazing_tolerance_m)
                return true;
        }
        return false;
    }
}
