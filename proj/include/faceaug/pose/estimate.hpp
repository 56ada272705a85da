/*
 * faceaug - Geometric face data augmentation from a single image and a 3D face mesh.
 *
 * File: include/faceaug/pose/estimate.hpp
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

#ifndef FACEAUG_POSE_ESTIMATE_HPP
#define FACEAUG_POSE_ESTIMATE_HPP

#include "faceaug/core/error.hpp"
#include "faceaug/core/types.hpp"
#include "faceaug/pose/pose.hpp"

#include "Eigen/Cholesky"
#include "Eigen/Eigenvalues"
#include "Eigen/SVD"

#include <cmath>
#include <span>
#include <string>
#include <vector>

namespace faceaug {

struct PoseEstimate
{
    RigidPose pose;
    double rms_residual_px = 0.0; ///< Root-mean-square reprojection error in pixels.
};

namespace detail {

inline Mat3 skew(const Vec3& v)
{
    Mat3 m;
    m << 0.0, -v.z(), v.y(), v.z(), 0.0, -v.x(), -v.y(), v.x(), 0.0;
    return m;
}

inline double orthographic_cost(const RigidPose& pose, std::span<const Vec2> image, std::span<const Vec3> model)
{
    double cost = 0.0;
    for (std::size_t i = 0; i < image.size(); ++i) {
        cost += (pose.apply(model[i]).head<2>() - image[i]).squaredNorm();
    }
    return cost;
}

} // namespace detail

/**
 * Scaled orthographic pose from 2D-3D landmark correspondences.
 *
 * Minimises sum_i |P(s R X_i + t) - x_i|^2 where P keeps the camera-frame x and y. The
 * closed-form start fits an unconstrained 2x3 affine camera by linear least squares and projects
 * it onto the nearest scaled pair of orthonormal rows through its SVD; Gauss-Newton over
 * (rotation increment, scale, tx, ty) then converges to the constrained minimum. The depth
 * translation is chosen so the landmark centroid sits at camera z = 0.
 *
 * Noise-free correspondences are recovered exactly by the closed form.
 */
inline PoseEstimate estimate_pose(std::span<const Vec2> landmarks_px, std::span<const Vec3> landmarks_3d,
                                  const Camera& camera)
{
    camera.validate();
    if (landmarks_px.size() != landmarks_3d.size()) {
        throw InvalidArgument("estimate_pose: 2D and 3D landmark counts differ");
    }
    const std::size_t n = landmarks_px.size();
    if (n < 4) {
        throw InvalidArgument("estimate_pose: need at least 4 correspondences, got " + std::to_string(n));
    }

    std::vector<Vec2> image(n);
    Vec2 image_mean = Vec2::Zero();
    Vec3 model_mean = Vec3::Zero();
    for (std::size_t i = 0; i < n; ++i) {
        image[i] = camera.unproject(landmarks_px[i]);
        image_mean += image[i];
        model_mean += landmarks_3d[i];
    }
    image_mean /= double(n);
    model_mean /= double(n);

    Mat3 model_scatter = Mat3::Zero();
    Eigen::Matrix<double, 2, 3> cross = Eigen::Matrix<double, 2, 3>::Zero();
    for (std::size_t i = 0; i < n; ++i) {
        const Vec3 x = landmarks_3d[i] - model_mean;
        model_scatter += x * x.transpose();
        cross += (image[i] - image_mean) * x.transpose();
    }
    const Eigen::SelfAdjointEigenSolver<Mat3> scatter_eig(model_scatter);
    if (!(scatter_eig.eigenvalues()[0] > 1e-12 * scatter_eig.eigenvalues()[2])) {
        throw DegenerateInput("estimate_pose: 3D landmarks are coplanar or collinear");
    }
    const Eigen::Matrix<double, 2, 3> affine = cross * model_scatter.inverse();

    const Eigen::JacobiSVD<Eigen::Matrix<double, 2, 3>> svd(affine, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const Vec2 sigma = svd.singularValues();
    if (!(sigma[1] > 1e-12 * sigma[0])) {
        throw DegenerateInput("estimate_pose: projected configuration is rank deficient");
    }
    const Eigen::Matrix<double, 2, 3> rows = svd.matrixU() * svd.matrixV().leftCols<2>().transpose();

    RigidPose pose;
    pose.rotation.row(0) = rows.row(0);
    pose.rotation.row(1) = rows.row(1);
    pose.rotation.row(2) = rows.row(0).cross(rows.row(1));
    pose.scale = 0.5 * (sigma[0] + sigma[1]);
    pose.translation.head<2>() = image_mean - pose.scale * (pose.rotation * model_mean).head<2>();

    // Gauss-Newton refinement on the true scaled-orthographic residual.
    double cost = detail::orthographic_cost(pose, image, landmarks_3d);
    for (int iter = 0; iter < 50 && cost > 0.0; ++iter) {
        Eigen::Matrix<double, 6, 6> jtj = Eigen::Matrix<double, 6, 6>::Zero();
        Eigen::Matrix<double, 6, 1> jtr = Eigen::Matrix<double, 6, 1>::Zero();
        for (std::size_t i = 0; i < n; ++i) {
            const Vec3 rx = pose.rotation * landmarks_3d[i];
            const Vec2 r = (pose.scale * rx + pose.translation).head<2>() - image[i];
            Eigen::Matrix<double, 2, 6> j;
            j.leftCols<3>() = (-pose.scale * detail::skew(rx)).topRows<2>();
            j.col(3) = rx.head<2>();
            j.rightCols<2>().setIdentity();
            jtj += j.transpose() * j;
            jtr += j.transpose() * r;
        }
        const Eigen::Matrix<double, 6, 1> step = -jtj.ldlt().solve(jtr);
        if (!step.allFinite()) {
            break;
        }
        RigidPose candidate = pose;
        const Vec3 omega = step.head<3>();
        if (omega.norm() > 0.0) {
            candidate.rotation = Eigen::AngleAxisd(omega.norm(), omega.normalized()).toRotationMatrix() * pose.rotation;
        }
        candidate.scale = pose.scale + step[3];
        candidate.translation.head<2>() += step.tail<2>();
        const double candidate_cost = detail::orthographic_cost(candidate, image, landmarks_3d);
        if (!(candidate.scale > 0.0) || !(candidate_cost < cost)) {
            break;
        }
        const bool converged = cost - candidate_cost <= 1e-15 * cost;
        pose = candidate;
        cost = candidate_cost;
        if (converged) {
            break;
        }
    }
    // Re-orthonormalise to remove drift from the incremental updates.
    const Eigen::JacobiSVD<Mat3> rsvd(pose.rotation, Eigen::ComputeFullU | Eigen::ComputeFullV);
    pose.rotation = rsvd.matrixU() * rsvd.matrixV().transpose();
    pose.translation.z() = -pose.scale * (pose.rotation * model_mean).z();

    PoseEstimate estimate;
    estimate.pose = pose;
    estimate.rms_residual_px =
        std::sqrt(detail::orthographic_cost(pose, image, landmarks_3d) / double(n)) / camera.pixel_scale;
    return estimate;
}

} // namespace faceaug

#endif // FACEAUG_POSE_ESTIMATE_HPP
