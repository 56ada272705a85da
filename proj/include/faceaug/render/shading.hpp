/*
 * faceaug - Geometric face data augmentation from a single image and a 3D face mesh.
 *
 * File: include/faceaug/render/shading.hpp
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

#ifndef FACEAUG_RENDER_SHADING_HPP
#define FACEAUG_RENDER_SHADING_HPP

#include "faceaug/core/error.hpp"
#include "faceaug/core/image.hpp"
#include "faceaug/core/types.hpp"
#include "faceaug/render/light.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <optional>
#include <variant>

namespace faceaug {

/// Paints the source photograph on a plane behind the head.
struct SourceImageBackground
{
    std::shared_ptr<const RgbImage> image;
};

struct SolidBackground
{
    Rgb color = Rgb::Zero();
};

using Background = std::variant<SourceImageBackground, SolidBackground>;

struct RenderConfig
{
    double emission_weight = 0.6; ///< 1 = pure emission (baked colours), 0 = pure diffuse
    double ambient = 0.55;
    LightRigConfig rig;
    Background background = SolidBackground{};
    /// Camera-frame z of the background plane; geometry behind it is hidden.
    double background_plane_z = -std::numeric_limits<double>::infinity();
    int threads = 1;

    void validate() const
    {
        if (!(emission_weight >= 0.0 && emission_weight <= 1.0)) {
            throw InvalidArgument("RenderConfig: emission_weight must lie in [0, 1]");
        }
        if (!(ambient >= 0.0)) {
            throw InvalidArgument("RenderConfig: ambient must be non-negative");
        }
        if (threads < 1) {
            throw InvalidArgument("RenderConfig: threads must be >= 1");
        }
    }
};

/// Cone attenuation of \p light at \p point: cos(angle)^falloff inside the cone, 0 outside.
inline double spot_attenuation(const SpotLight& light, const Vec3& point)
{
    const Vec3 to_point = point - light.position;
    const double dist = to_point.norm();
    if (dist == 0.0) {
        return 0.0;
    }
    const double cos_angle = light.aim.dot(to_point) / dist;
    if (cos_angle < std::cos(deg_to_rad(light.cone_half_angle_deg))) {
        return 0.0;
    }
    return std::pow(cos_angle, light.falloff_exponent);
}

/**
 * Emission/diffuse mix:
 *
 *     w * albedo + (1 - w) * albedo * (ambient + max(0, n.l) * attenuation * intensity)
 *
 * clamped to [0, 1]; l points from \p position to the light. Without an active light only the
 * ambient term remains in the diffuse part.
 */
inline Rgb shade_vertex(const Rgb& albedo, const Vec3& normal, const Vec3& position, const SpotLight* light,
                        const RenderConfig& config)
{
    double diffuse = config.ambient;
    if (light != nullptr) {
        const Vec3 to_light = light->position - position;
        const double dist = to_light.norm();
        if (dist > 0.0) {
            const double lambert = std::max(0.0, normal.dot(to_light / dist));
            diffuse += lambert * spot_attenuation(*light, position) * light->intensity;
        }
    }
    const double w = config.emission_weight;
    const Rgb color = w * albedo + (1.0 - w) * diffuse * albedo;
    return color.cwiseMax(0.0).cwiseMin(1.0);
}

} // namespace faceaug

#endif // FACEAUG_RENDER_SHADING_HPP
