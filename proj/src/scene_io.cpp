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

#include "thzreach/scene_io.hpp"

#include <fmt/format.h>

#include <fstream>
#include <stdexcept>

namespace thzreach
{
    nlohmann::json vec_to_json(const Vec3 &v)
    {
        return nlohmann::json::array({v.x(), v.y(), v.z()});
    }

    Vec3 vec_from_json(const nlohmann::json &j)
    {
        if (!j.is_array() || j.size() != 3)
            throw std::invalid_argument("expected a 3-vector [x, y, z]");
        return {j.at(0).get<double>(), j.at(1).get<double>(), j.at(2).get<double>()};
    }

    nlohmann::json scene_to_json(const Scene &scene, const EndpointSet *endpoints)
    {
        nlohmann::json doc;
        doc["height_m"] = scene.height();
        doc["materials"] = nlohmann::json::array();
        for (const auto &m : scene.materials())
            doc["materials"].push_back({{"id", m.id}, {"name", m.name}, {"reflectance", m.reflectance}});
        doc["surfaces"] = nlohmann::json::array();
        for (const auto &s : scene.surfaces())
        {
            nlohmann::json js = {{"id", s.id()},
                                 {"corner", vec_to_json(s.corner())},
                                 {"edge_u", vec_to_json(s.edge_u())},
                                 {"edge_v", vec_to_json(s.edge_v())},
                                 {"material_id", s.material_id()}};
            if (!s.label().empty())
                js["label"] = s.label();
            doc["surfaces"].push_back(std::move(js));
        }
        if (!scene.cells().empty())
        {
            doc["cells"] = nlohmann::json::array();
            for (const auto &c : scene.cells())
                doc["cells"].push_back({{"min", vec_to_json(c.min)}, {"max", vec_to_json(c.max)}});
        }
        if (endpoints)
            doc["endpoints"] = endpoints_to_json(*endpoints);
        return doc;
    }

    nlohmann::json endpoints_to_json(const EndpointSet &endpoints)
    {
        nlohmann::json ep;
        ep["tx"] = vec_to_json(endpoints.tx);
        ep["rx"] = nlohmann::json::array();
        for (const auto &r : endpoints.rx)
            ep["rx"].push_back({{"id", r.id},
                                {"position", vec_to_json(r.position)},
                                {"los", r.los},
                                {"nominal_distance_m", r.nominal_distance_m}});
        return ep;
    }

    EndpointSet endpoints_from_json(const nlohmann::json &ep)
    {
        EndpointSet set;
        set.tx = vec_from_json(ep.at("tx"));
        for (const auto &r : ep.at("rx"))
            set.rx.push_back({r.at("id").get<int>(), vec_from_json(r.at("position")), r.value("los", true),
                              r.value("nominal_distance_m", 0.0)});
        return set;
    }

    SceneDocument scene_from_json(const nlohmann::json &doc)
    {
        std::vector<Material> materials;
        for (const auto &m : doc.at("materials"))
            materials.push_back({m.at("id").get<int>(), m.value("name", std::string{}), m.at("reflectance").get<double>()});

        std::vector<Surface> surfaces;
        for (const auto &s : doc.at("surfaces"))
            surfaces.emplace_back(s.at("id").get<int>(), vec_from_json(s.at("corner")), vec_from_json(s.at("edge_u")),
                                  vec_from_json(s.at("edge_v")), s.at("material_id").get<int>(),
                                  s.value("label", std::string{}));

        std::vector<Box> cells;
        if (doc.contains("cells"))
            for (const auto &c : doc.at("cells"))
                cells.push_back({vec_from_json(c.at("min")), vec_from_json(c.at("max"))});

        SceneDocument out{Scene(std::move(materials), std::move(surfaces), doc.value("height_m", 0.0), std::move(cells)),
                          std::nullopt};
        if (doc.contains("endpoints"))
            out.endpoints = endpoints_from_json(doc.at("endpoints"));
        return out;
    }

    SceneDocument load_scene_file(const std::string &path)
    {
        std::ifstream in(path);
        if (!in)
            throw std::runtime_error(fmt::format("{}: cannot open scene file", path));
        try
        {
            return scene_from_json(nlohmann::json::parse(in));
        }
        catch (const std::exception &e)
        {
            throw std::runtime_error(fmt::format("{}: {}", path, e.what()));
        }
    }

    void write_scene(std::ostream &os, const Scene &scene, const EndpointSet *endpoints)
    {
        os << scene_to_json(scene, endpoints).dump(2) << '\n';
    }
}
