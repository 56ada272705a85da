/*
 * faceaug - Geometric face data augmentation from a single image and a 3D face mesh.
 *
 * File: include/faceaug/annotate/landmarks.hpp
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

#ifndef FACEAUG_ANNOTATE_LANDMARKS_HPP
#define FACEAUG_ANNOTATE_LANDMARKS_HPP

#include "faceaug/annotate/face.hpp"
#include "faceaug/core/error.hpp"
#include "faceaug/mesh/bvh.hpp"
#include "faceaug/pose/pose.hpp"

#include <array>
#include <limits>
#include <optional>

namespace faceaug {

struct VisibilityConfig
{
    double tau = 2e-3; ///< fraction of the mesh bbox diagonal

    void validate() const
    {
        if (!(tau > 0.0)) {
            throw InvalidArgument("VisibilityConfig: tau must be positive");
        }
    }
};

enum class LiftStatus : std::uint8_t { hit, miss };

/// Landmarks lifted onto the mesh, in the mesh frame.
struct Landmark3DSet
{
    std::array<Vec3, landmark_count> points{};
    std::array<LiftStatus, landmark_count> status{};
    std::array<Vec2, landmark_count> source_points{}; ///< the 2D points that were lifted

    std::size_t hit_count() const
    {
        return static_cast<std::size_t>(std::count(status.begin(), status.end(), LiftStatus::hit));
    }
};

struct ProjectedLandmark
{
    Vec2 point = Vec2::Zero();
    bool visible = false;
};

namespace detail {

// Orthographic view ray through camera-frame (x, y), starting in front of the whole posed mesh
// and travelling away from the viewer, expressed in the mesh frame.
inline Ray view_ray_in_mesh_frame(const Mesh& mesh, const RigidPose& pose, double x, double y)
{
    const double front = pose.apply(mesh.centroid()).z() + 2.0 * pose.scale * mesh.bbox_diag;
    const Vec3 origin = pose.apply_inverse(Vec3(x, y, front));
    const Vec3 direction = (pose.rotation.transpose() * -Camera::viewing_direction()).normalized();
    return Ray(origin, direction);
}

} // namespace detail

/**
 * Casts the orthographic view ray through each 2D landmark and keeps the first surface hit.
 *
 * @throws DegenerateInput when more than half of the landmarks miss the mesh.
 */
inline Landmark3DSet lift_landmarks_to_3d(const std::array<Vec2, landmark_count>& landmarks, const Bvh& bvh,
                                          const RigidPose& pose, const Camera& camera)
{
    pose.validate();
    camera.validate();
    Landmark3DSet out;
    out.source_points = landmarks;
    for (std::size_t i = 0; i < landmark_count; ++i) {
        const Vec2 xy = camera.unproject(landmarks[i]);
        const auto hit = bvh.intersect(detail::view_ray_in_mesh_frame(bvh.mesh(), pose, xy.x(), xy.y()));
        if (hit) {
            out.points[i] = hit->point;
            out.status[i] = LiftStatus::hit;
        } else {
            out.points[i] = Vec3::Zero();
            out.status[i] = LiftStatus::miss;
        }
    }
    if (2 * out.hit_count() < landmark_count) {
        throw DegenerateInput("lift_landmarks_to_3d: more than half of the landmarks miss the mesh");
    }
    return out;
}

/**
 * A mesh point is visible under \p pose when the view ray aimed at it first meets the surface
 * within tau * bbox_diag of the point (mesh-frame distance). A ray that meets nothing grazes
 * the silhouette and counts as visible.
 */
inline bool landmark_visibility(const Vec3& p3, const Bvh& bvh, const RigidPose& pose, const Camera& camera,
                                const VisibilityConfig& cfg = {})
{
    cfg.validate();
    camera.validate();
    const Vec3 pc = pose.apply(p3);
    const auto hit = bvh.intersect(detail::view_ray_in_mesh_frame(bvh.mesh(), pose, pc.x(), pc.y()));
    if (!hit) {
        return true;
    }
    return (hit->point - p3).norm() <= cfg.tau * bvh.mesh().bbox_diag;
}

/**
 * Projects lifted landmarks into the view given by \p pose. A landmark whose lift missed takes
 * its source point moved by the 2D displacement of the nearest (in the source image) lifted
 * landmark, and is reported occluded.
 */
inline std::array<ProjectedLandmark, landmark_count> project_landmarks(const Landmark3DSet& l3, const Bvh& bvh,
                                                                       const RigidPose& pose, const Camera& camera,
                                                                       const VisibilityConfig& cfg = {})
{
    std::array<ProjectedLandmark, landmark_count> out;
    for (std::size_t i = 0; i < landmark_count; ++i) {
        if (l3.status[i] == LiftStatus::hit) {
            out[i].point = camera.project(pose.apply(l3.points[i]));
            out[i].visible = landmark_visibility(l3.points[i], bvh, pose, camera, cfg);
        }
    }
    for (std::size_t i = 0; i < landmark_count; ++i) {
        if (l3.status[i] == LiftStatus::hit) {
            continue;
        }
        std::size_t nearest = landmark_count;
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < landmark_count; ++j) {
            if (l3.status[j] != LiftStatus::hit) {
                continue;
            }
            const double d = (l3.source_points[j] - l3.source_points[i]).squaredNorm();
            if (d < best) {
                best = d;
                nearest = j;
            }
        }
        if (nearest == landmark_count) {
            throw DegenerateInput("project_landmarks: no lifted landmark");
        }
        out[i].point = l3.source_points[i] + (out[nearest].point - l3.source_points[nearest]);
        out[i].visible = false;
    }
    return out;
}

inline LandmarkSet to_landmark_set(const std::array<ProjectedLandmark, landmark_count>& projected)
{
    LandmarkSet out;
    for (std::size_t i = 0; i < landmark_count; ++i) {
        out.points[i] = projected[i].point;
        out.visible[i] = projected[i].visible;
    }
    return out;
}

} // namespace faceaug

#endif // FACEAUG_ANNOTATE_LANDMARKS_HPP
