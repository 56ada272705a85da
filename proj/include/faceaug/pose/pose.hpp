/*
 * faceaug - Geometric face data augmentation from a single image and a 3D face mesh.
 *
 * File: include/faceaug/pose/pose.hpp
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

#ifndef FACEAUG_POSE_POSE_HPP
#define FACEAUG_POSE_POSE_HPP

#include "faceaug/core/error.hpp"
#include "faceaug/core/types.hpp"

#include "Eigen/Geometry"

#include <algorithm>
#include <cmath>

namespace faceaug {

/**
 * Rigid pose with orthographic scale: a mesh-frame point X maps to the camera-frame point
 * scale * rotation * X + translation.
 *
 * The camera frame is right-handed with x to the image right, y up and z towards the viewer;
 * (0, 0, 1) is the viewing direction the admissibility constraints are stated against.
 */
struct RigidPose
{
    Mat3 rotation = Mat3::Identity();
    Vec3 translation = Vec3::Zero();
    double scale = 1.0;

    Vec3 apply(const Vec3& x) const { return scale * (rotation * x) + translation; }
    Vec3 apply_inverse(const Vec3& p) const { return rotation.transpose() * (p - translation) / scale; }

    /// Throws InvalidArgument unless R is orthonormal with det +1 and scale > 0 (tolerance 1e-9).
    void validate() const
    {
        if (!((rotation.transpose() * rotation - Mat3::Identity()).cwiseAbs().maxCoeff() <= 1e-9) ||
            !(std::abs(rotation.determinant() - 1.0) <= 1e-9)) {
            throw InvalidArgument("RigidPose: rotation is not a proper orthonormal matrix");
        }
        if (!(scale > 0.0) || !std::isfinite(scale) || !translation.allFinite()) {
            throw InvalidArgument("RigidPose: scale must be positive and translation finite");
        }
    }
};

/**
 * Orthographic camera. Camera-frame coordinates are divided by pixel_scale and centred on the
 * middle of the pixel grid; the image y axis points down.
 */
struct Camera
{
    int image_width = 0;
    int image_height = 0;
    double pixel_scale = 1.0; ///< camera-frame units per pixel

    static Vec3 viewing_direction() { return Vec3::UnitZ(); }

    double cx() const { return 0.5 * (image_width - 1); }
    double cy() const { return 0.5 * (image_height - 1); }

    /// Camera-frame point to continuous pixel coordinates.
    Vec2 project(const Vec3& p) const { return {cx() + p.x() / pixel_scale, cy() - p.y() / pixel_scale}; }

    /// Pixel coordinates to the camera-frame (x, y) of the orthographic view ray.
    Vec2 unproject(const Vec2& px) const { return {(px.x() - cx()) * pixel_scale, (cy() - px.y()) * pixel_scale}; }

    /// Distance along the view ray; smaller is closer to the viewer.
    static double depth(const Vec3& p) { return -p.z(); }

    void validate() const
    {
        if (image_width <= 0 || image_height <= 0 || !(pixel_scale > 0.0)) {
            throw InvalidArgument("Camera: image size and pixel_scale must be positive");
        }
    }
};

/// Head rotation offsets in degrees: yaw about y, pitch about x.
struct EulerOffsets
{
    double yaw = 0.0;
    double pitch = 0.0;

    bool operator==(const EulerOffsets&) const = default;

    void validate() const
    {
        if (!(std::abs(yaw) <= 90.0) || !(std::abs(pitch) <= 90.0)) {
            throw InvalidArgument("EulerOffsets: yaw and pitch must lie in [-90, 90] degrees");
        }
    }
};

inline Mat3 rotation_y(double radians) { return Eigen::AngleAxisd(radians, Vec3::UnitY()).toRotationMatrix(); }
inline Mat3 rotation_x(double radians) { return Eigen::AngleAxisd(radians, Vec3::UnitX()).toRotationMatrix(); }
inline Mat3 rotation_z(double radians) { return Eigen::AngleAxisd(radians, Vec3::UnitZ()).toRotationMatrix(); }

/// R = R_y(yaw) * R_x(pitch) with zero translation and unit scale. Yaw is the outer rotation.
inline RigidPose compose_rotation(const EulerOffsets& offsets)
{
    offsets.validate();
    RigidPose pose;
    pose.rotation = rotation_y(deg_to_rad(offsets.yaw)) * rotation_x(deg_to_rad(offsets.pitch));
    return pose;
}

/// Yaw, pitch and roll in degrees with R = R_y(yaw) * R_x(pitch) * R_z(roll).
struct EulerAngles
{
    double yaw = 0.0;
    double pitch = 0.0;
    double roll = 0.0;
};

inline Mat3 rotation_from_euler(const EulerAngles& e)
{
    return rotation_y(deg_to_rad(e.yaw)) * rotation_x(deg_to_rad(e.pitch)) * rotation_z(deg_to_rad(e.roll));
}

inline EulerAngles euler_from_rotation(const Mat3& r)
{
    EulerAngles e;
    e.pitch = rad_to_deg(std::asin(std::clamp(-r(1, 2), -1.0, 1.0)));
    if (std::abs(r(1, 2)) < 1.0 - 1e-12) {
        e.yaw = rad_to_deg(std::atan2(r(0, 2), r(2, 2)));
        e.roll = rad_to_deg(std::atan2(r(1, 0), r(1, 1)));
    } else {
        // Gimbal lock: fold everything into yaw.
        e.yaw = rad_to_deg(std::atan2(-r(2, 0), r(0, 0)));
        e.roll = 0.0;
    }
    return e;
}

/**
 * Applies head-rotation offsets to a base pose, rotating about the camera-frame position of
 * \p pivot (a mesh-frame point, usually the centroid) so the head stays in place in the image.
 */
inline RigidPose apply_offsets(const RigidPose& base, const EulerOffsets& offsets, const Vec3& pivot)
{
    const Mat3 r_off = compose_rotation(offsets).rotation;
    const Vec3 centre = base.apply(pivot);
    RigidPose total;
    total.scale = base.scale;
    total.rotation = r_off * base.rotation;
    total.translation = centre - total.scale * (total.rotation * pivot);
    return total;
}

/// Angle of the relative rotation a^T b, in radians.
inline double rotation_angle_between(const Mat3& a, const Mat3& b)
{
    const Eigen::Quaterniond q(Mat3(a.transpose() * b));
    return 2.0 * std::atan2(q.vec().norm(), std::abs(q.w()));
}

} // namespace faceaug

#endif // FACEAUG_POSE_POSE_HPP
