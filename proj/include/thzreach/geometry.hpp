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

#ifndef THZREACH_GEOMETRY_HPP
#define THZREACH_GEOMETRY_HPP

#include <Eigen/Core>
#include <Eigen/Geometry>

#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

namespace thzreach
{
    using Vec3 = Eigen::Vector3d;

    // Tolerance for on-plane / inside-rectangle predicates (meters)
    inline constexpr double geometry_tolerance_m = 1e-9;

    // Intersections closer than this to a segment endpoint are treated as grazing contacts (meters)
    inline constexpr double grazing_tolerance_m = 1e-6;

    struct Material
    {
        int id = 0;
        std::string name;
        double reflectance = 1.0; // Power ratio in [0, 1]
    };

    // Planar rectangle spanned by two perpendicular, axis-aligned edges from a corner.
    // The normal is (edge_u x edge_v) / |edge_u x edge_v|, so the edge order selects the facing side.
    class Surface
    {
    public:
        Surface(int id, const Vec3 &corner, const Vec3 &edge_u, const Vec3 &edge_v, int material_id,
                std::string label = {});

        int id() const { return id_; }
        const Vec3 &corner() const { return corner_; }
        const Vec3 &edge_u() const { return edge_u_; }
        const Vec3 &edge_v() const { return edge_v_; }
        const Vec3 &normal() const { return normal_; }
        int material_id() const { return material_id_; }
        const std::string &label() const { return label_; }

        double area() const { return edge_u_.norm() * edge_v_.norm(); }
        Vec3 center() const { return corner_ + 0.5 * (edge_u_ + edge_v_); }

        // Signed distance of p from the infinite plane, positive on the normal side
        double signed_distance(const Vec3 &p) const { return normal_.dot(p - corner_); }

        // True if p lies on the plane and inside the rectangle bounds, both within tol
        bool contains(const Vec3 &p, double tol = geometry_tolerance_m) const;

    private:
        int id_;
        Vec3 corner_, edge_u_, edge_v_, normal_;
        int material_id_;
        std::string label_;
    };

    // Builds an axis-aligned rectangle from two opposite corners that share exactly one coordinate.
    // The shared coordinate defines the plane; the normal points along +axis if normal_positive.
    Surface make_axis_rect(int id, int material_id, const Vec3 &lo, const Vec3 &hi, bool normal_positive,
                           std::string label = {});

    // Axis-aligned box; used to describe the enclosed volume of a scene as a union of cells
    struct Box
    {
        Vec3 min = Vec3::Zero();
        Vec3 max = Vec3::Zero();
        bool contains(const Vec3 &p, double tol = geometry_tolerance_m) const;
    };

    class Scene
    {
    public:
        Scene() = default; // free space
        Scene(std::vector<Material> materials, std::vector<Surface> surfaces, double height_m,
              std::vector<Box> cells = {});

        const std::vector<Material> &materials() const { return materials_; }
        const std::vector<Surface> &surfaces() const { return surfaces_; }
        const std::vector<Box> &cells() const { return cells_; }
        double height() const { return height_; }

        const Surface &surface(int id) const;     // throws std::out_of_range
        const Material &material(int id) const;   // throws std::out_of_range
        const Material &material_of(const Surface &s) const { return material(s.material_id()); }
        bool has_surface(int id) const { return surface_index_.contains(id); }

        // Point-in-volume test. Uses the cells when present, otherwise the bounding box of all
        // surfaces; a scene without surfaces is unbounded.
        bool contains(const Vec3 &p) const;

    private:
        std::vector<Material> materials_;
        std::vector<Surface> surfaces_;
        std::vector<Box> cells_;
        double height_ = 0.0;
        std::unordered_map<int, std::size_t> surface_index_;
        std::unordered_map<int, std::size_t> material_index_;
    };

    struct Receiver
    {
        int id = 0;
        Vec3 position = Vec3::Zero();
        bool los = true;
        double nominal_distance_m = 0.0;
    };

    struct EndpointSet
    {
        Vec3 tx = Vec3::Zero();
        std::vector<Receiver> rx;
    };

    // Parameters of the "E" hallway: one spine corridor along +x and three arms along +y
    struct HallwayParams
    {
        double corridor_width_m = 3.0;
        double arm_length_m = 30.0;
    };

    struct Hallway
    {
        Scene scene;
        EndpointSet endpoints;
        std::vector<int> junction_wall_ids; // spine wall segments facing the arm openings
    };

    // Material ids used by the hallway builder
    inline constexpr int wall_material_id = 0;
    inline constexpr int floor_material_id = 1;
    inline constexpr int ceiling_material_id = 2;

    /// Builds the E-shaped hallway with one Tx and 15 Rx (9 LOS along the spine, 6 NLOS in two arms).
    /// Throws std::invalid_argument on non-positive dimensions or when an Rx would leave the volume.
    Hallway build_e_hallway(const HallwayParams &params = {});

    // Reflection of p across the infinite plane containing s
    Vec3 mirror_point(const Vec3 &p, const Surface &s);

    // Intersection of the open segment (a, b) with the bounded rectangle s
    std::optional<Vec3> segment_hits_surface(const Vec3 &a, const Vec3 &b, const Surface &s);

    // True iff a surface not listed in ignore cuts the segment strictly between a and b
    bool is_occluded(const Vec3 &a, const Vec3 &b, const Scene &scene, const std::set<int> &ignore = {});
}

#endif
