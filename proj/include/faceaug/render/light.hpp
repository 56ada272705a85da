/*
 * faceaug - Geometric face data augmentation from a single image and a 3D face mesh.
 *
 * File: include/faceaug/render/light.hpp
 *
 * Copyright 2026 The faceaug Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#pragma once

#ifndef FACEAUG_RENDER_LIGHT_HPP
#define FACEAUG_RENDER_LIGHT_HPP

#include "faceaug/core/error.hpp"
#include "faceaug/core/random.hpp"
#include "faceaug/core/types.hpp"
#include "faceaug/mesh/mesh.hpp"
#include "faceaug/pose/pose.hpp"

#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace faceaug {

enum class LightId : std::uint8_t { top = 0, left = 1, right = 2, bottom = 3 };

inline constexpr std::array<LightId, 4> all_light_ids{LightId::top, LightId::left, LightId::right, LightId::bottom};

inline std::string_view to_string(LightId id)
{
    switch (id) {
    case LightId::top: return "top";
    case LightId::left: return "left";
    case LightId::right: return "right";
    case LightId::bottom: return "bottom";
    }
    return "?";
}

inline LightId light_id_from_string(std::string_view name)
{
    for (auto id : all_light_ids) {
        if (to_string(id) == name) {
            return id;
        }
    }
    throw InvalidArgument("unknown light id '" + std::string(name) + "'");
}

struct SpotLight
{
    Vec3 position = Vec3::Zero();
    Vec3 aim = -Vec3::UnitZ(); ///< unit direction the cone points along
    double intensity = 1.2;
    double cone_half_angle_deg = 40.0;
    double falloff_exponent = 1.0;
};

struct LightRigConfig
{
    double radius_factor = 2.0; ///< distance from the centroid in units of bbox_diag
    double intensity = 1.2;
    double cone_half_angle_deg = 40.0;
    double falloff_exponent = 1.0;
};

/// Four spot lights indexed by LightId.
struct LightRig
{
    std::array<SpotLight, 4> lights;

    const SpotLight& operator[](LightId id) const { return lights[static_cast<std::size_t>(id)]; }
};

/**
 * Places the four spots around the mesh in its own frame: top (+y), bottom (-y), left (-x)
 * and right (+x) of the centroid at radius_factor * bbox_diag, each aimed at the centroid.
 */
inline LightRig make_light_rig(const Mesh& mesh, const LightRigConfig& config = {})
{
    if (!(mesh.bbox_diag > 0.0)) {
        throw DegenerateInput("make_light_rig: mesh has zero diagonal");
    }
    if (!(config.radius_factor >= 1.5 && config.radius_factor <= 3.0)) {
        throw InvalidArgument("make_light_rig: radius_factor must lie in [1.5, 3]");
    }
    const Vec3 centre = mesh.centroid();
    const double radius = config.radius_factor * mesh.bbox_diag;
    const std::array<Vec3, 4> offsets{Vec3::UnitY(), -Vec3::UnitX(), Vec3::UnitX(), -Vec3::UnitY()};
    LightRig rig;
    for (std::size_t i = 0; i < 4; ++i) {
        SpotLight& light = rig.lights[i];
        light.position = centre + radius * offsets[i];
        light.aim = -offsets[i];
        light.intensity = config.intensity;
        light.cone_half_angle_deg = config.cone_half_angle_deg;
        light.falloff_exponent = config.falloff_exponent;
    }
    return rig;
}

/// The rig moves rigidly with the face: positions by the full pose, aim directions by R.
inline LightRig transform_rig(const LightRig& rig, const RigidPose& pose)
{
    LightRig out = rig;
    for (auto& light : out.lights) {
        light.position = pose.apply(light.position);
        light.aim = (pose.rotation * light.aim).normalized();
    }
    return out;
}

/// Uniform draw over the four lights, a pure function of the seed.
inline LightId select_random_light(std::uint64_t seed)
{
    return static_cast<LightId>(splitmix64(seed) >> 62);
}

} // namespace faceaug

#endif // FACEAUG_RENDER_LIGHT_HPP
