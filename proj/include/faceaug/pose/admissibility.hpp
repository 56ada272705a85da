/*
 * faceaug - Geometric face data augmentation from a single image and a 3D face mesh.
 *
 * File: include/faceaug/pose/admissibility.hpp
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

#ifndef FACEAUG_POSE_ADMISSIBILITY_HPP
#define FACEAUG_POSE_ADMISSIBILITY_HPP

#include "faceaug/core/types.hpp"
#include "faceaug/mesh/planes.hpp"
#include "faceaug/pose/pose.hpp"

#include <cmath>
#include <span>
#include <vector>

namespace faceaug {

/// Largest |pitch| offset ever planned. Big pitch changes only show forehead or chin.
inline constexpr double default_pitch_cap_deg = 45.0;

/**
 * The two rotation constraints that keep self-occluded and back regions of the mesh out of
 * view, evaluated for the candidate total pose \p q with the viewing direction v = (0, 0, 1):
 *
 *     [R n_bilateral x v]_y >= 0
 *     (R n_back) . v       <= 0
 *
 * Plane normals are in the mesh frame and rotate with R only; translation and scale of \p q do
 * not enter.
 */
inline bool check_rotation_admissible(const RigidPose& q, const Plane& bilateral, const Plane& back)
{
    const Vec3 view = Camera::viewing_direction();
    const Vec3 bilateral_cam = q.rotation * bilateral.normal;
    const Vec3 back_cam = q.rotation * back.normal;
    return bilateral_cam.cross(view).y() >= 0.0 && back_cam.dot(view) <= 0.0;
}

/**
 * Returns \p bilateral with its normal sign chosen so that the base pose itself satisfies the
 * bilateral inequality. The fitted plane's orientation is arbitrary (it follows the order of
 * the landmark pairs); orienting it against the source view makes the inequality bound how far
 * the face may turn from the source view.
 */
inline Plane orient_bilateral_for_view(const Plane& bilateral, const RigidPose& base)
{
    const Vec3 n = base.rotation * bilateral.normal;
    if (n.cross(Camera::viewing_direction()).y() < 0.0) {
        return Plane{-bilateral.normal, -bilateral.offset};
    }
    return bilateral;
}

struct FacePlanes
{
    Plane bilateral;
    Plane back;
};

/**
 * Filters head-rotation offsets for a source face at \p base: drops |pitch| > pitch_cap and
 * any offset whose total pose fails check_rotation_admissible (with the bilateral plane
 * oriented against the base view). Order is preserved. Offsets outside [-90, 90] are dropped.
 */
inline std::vector<EulerOffsets> admissible_offset_set(const RigidPose& base, const FacePlanes& planes,
                                                       std::span<const EulerOffsets> candidates,
                                                       double pitch_cap_deg = default_pitch_cap_deg)
{
    const Plane bilateral = orient_bilateral_for_view(planes.bilateral, base);
    std::vector<EulerOffsets> kept;
    for (const auto& c : candidates) {
        if (!std::isfinite(c.yaw) || !std::isfinite(c.pitch) || std::abs(c.yaw) > 90.0 ||
            std::abs(c.pitch) > 90.0 || std::abs(c.pitch) > pitch_cap_deg) {
            continue;
        }
        RigidPose q = base;
        q.rotation = compose_rotation(c).rotation * base.rotation;
        if (check_rotation_admissible(q, bilateral, planes.back)) {
            kept.push_back(c);
        }
    }
    return kept;
}

} // namespace faceaug

#endif // FACEAUG_POSE_ADMISSIBILITY_HPP
