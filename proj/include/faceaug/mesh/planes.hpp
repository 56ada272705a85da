/*
 * faceaug - Geometric face data augmentation from a single image and a 3D face mesh.
 *
 * File: include/faceaug/mesh/planes.hpp
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

#ifndef FACEAUG_MESH_PLANES_HPP
#define FACEAUG_MESH_PLANES_HPP

#include "faceaug/core/error.hpp"
#include "faceaug/core/types.hpp"
#include "faceaug/mesh/mesh.hpp"

#include "Eigen/Eigenvalues"

#include <algorithm>
#include <cmath>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace faceaug {

/// Oriented plane {x : normal . x + offset = 0} with unit normal.
struct Plane
{
    Vec3 normal = Vec3::UnitX();
    double offset = 0.0;

    double signed_distance(const Vec3& x) const { return normal.dot(x) + offset; }
};

using PointPair = std::pair<Vec3, Vec3>;

/**
 * Fits the bilateral symmetry plane from mirrored point pairs (e.g. eye and mouth corners
 * lifted to 3D). The normal is the least-squares direction of the pair difference vectors
 * (dominant eigenvector of their scatter matrix) and the plane passes through the mean of the
 * pair midpoints. It is oriented so that the first point of the first pair lies on the positive
 * side.
 *
 * @throws InvalidArgument for fewer than 3 pairs; DegenerateInput when the difference vectors
 *         vanish (no direction to fit) or the first pair cannot orient the plane.
 */
inline Plane fit_bilateral_plane(std::span<const PointPair> pairs)
{
    if (pairs.size() < 3) {
        throw InvalidArgument("fit_bilateral_plane: need at least 3 mirrored pairs, got " +
                              std::to_string(pairs.size()));
    }
    Mat3 scatter = Mat3::Zero();
    Vec3 midpoint_sum = Vec3::Zero();
    double scale = 0.0;
    for (const auto& [p, q] : pairs) {
        const Vec3 d = p - q;
        scatter += d * d.transpose();
        midpoint_sum += 0.5 * (p + q);
        scale = std::max({scale, p.norm(), q.norm()});
    }
    const Eigen::SelfAdjointEigenSolver<Mat3> eig(scatter);
    const Vec3 values = eig.eigenvalues(); // ascending
    if (!(values[2] > 1e-24 * std::max(1.0, scale * scale))) {
        throw DegenerateInput("fit_bilateral_plane: pair difference vectors are all zero");
    }
    Plane plane;
    plane.normal = eig.eigenvectors().col(2).normalized();
    plane.offset = -plane.normal.dot(midpoint_sum / static_cast<double>(pairs.size()));
    const double first = plane.signed_distance(pairs.front().first);
    if (first == 0.0) {
        throw DegenerateInput("fit_bilateral_plane: first pair lies on the fitted plane");
    }
    if (first < 0.0) {
        plane.normal = -plane.normal;
        plane.offset = -plane.offset;
    }
    return plane;
}

/// Same as above with pairs given as vertex indices into \p mesh.
inline Plane fit_bilateral_plane(const Mesh& mesh, std::span<const std::pair<std::uint32_t, std::uint32_t>> index_pairs)
{
    std::vector<PointPair> pairs;
    pairs.reserve(index_pairs.size());
    for (const auto& [a, b] : index_pairs) {
        if (a >= mesh.vertices.size() || b >= mesh.vertices.size()) {
            throw InvalidArgument("fit_bilateral_plane: vertex index out of range");
        }
        pairs.emplace_back(mesh.vertices[a], mesh.vertices[b]);
    }
    return fit_bilateral_plane(pairs);
}

/**
 * The back plane: normal opposite to the face gaze direction, passing through the mesh
 * centroid. \p frontal_axis is the mesh-frame gaze direction, (0, 0, 1) in the canonical frame.
 */
inline Plane back_plane(const Mesh& mesh, const Vec3& frontal_axis = Vec3::UnitZ())
{
    const double len = frontal_axis.norm();
    if (!(len > 0.0) || !std::isfinite(len)) {
        throw InvalidArgument("back_plane: frontal axis must be a non-zero finite vector");
    }
    Plane plane;
    plane.normal = -frontal_axis / len;
    plane.offset = -plane.normal.dot(mesh.centroid());
    return plane;
}

} // namespace faceaug

#endif // FACEAUG_MESH_PLANES_HPP
