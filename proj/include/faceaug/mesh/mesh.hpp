/*
 * faceaug - Geometric face data augmentation from a single image and a 3D face mesh.
 *
 * File: include/faceaug/mesh/mesh.hpp
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

#ifndef FACEAUG_MESH_MESH_HPP
#define FACEAUG_MESH_MESH_HPP

#include "faceaug/core/error.hpp"
#include "faceaug/core/types.hpp"

#include "Eigen/Geometry"

#include <algorithm>
#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace faceaug {

using Triangle = std::array<std::uint32_t, 3>;

/**
 * An immutable triangle mesh in the canonical face frame: +x towards the subject's left,
 * +y up, +z out of the face.
 *
 * Construct through make_mesh(), which validates the invariants and caches the derived
 * quantities (bounding box diagonal, centroid).
 */
struct Mesh
{
    std::vector<Vec3> vertices;
    std::vector<Triangle> triangles;
    std::optional<std::vector<Rgb>> vertex_colors;

    double bbox_diag = 0.0;
    Vec3 bbox_min = Vec3::Zero();
    Vec3 bbox_max = Vec3::Zero();

    /// Mean of the vertex positions.
    Vec3 centroid() const
    {
        Vec3 sum = Vec3::Zero();
        for (const auto& v : vertices) {
            sum += v;
        }
        return sum / static_cast<double>(vertices.size());
    }
};

/// Unnormalised face normal (length = 2 x area) using the triangle's winding.
inline Vec3 face_normal_scaled(const Mesh& mesh, const Triangle& tri)
{
    const Vec3& a = mesh.vertices[tri[0]];
    const Vec3& b = mesh.vertices[tri[1]];
    const Vec3& c = mesh.vertices[tri[2]];
    return (b - a).cross(c - a);
}

/**
 * Builds a mesh and checks every invariant: indices in range, non-empty triangle list, no
 * triangle with area below 1e-12 * bbox_diag^2, one colour per vertex when colours are given.
 *
 * @throws InvalidArgument or DegenerateInput on violation.
 */
inline Mesh make_mesh(std::vector<Vec3> vertices, std::vector<Triangle> triangles,
                      std::optional<std::vector<Rgb>> vertex_colors = std::nullopt)
{
    if (triangles.empty()) {
        throw InvalidArgument("mesh has no triangles");
    }
    if (vertex_colors && vertex_colors->size() != vertices.size()) {
        throw InvalidArgument("mesh vertex_colors has " + std::to_string(vertex_colors->size()) +
                              " entries for " + std::to_string(vertices.size()) + " vertices");
    }
    Mesh mesh;
    mesh.vertices = std::move(vertices);
    mesh.triangles = std::move(triangles);
    mesh.vertex_colors = std::move(vertex_colors);

    for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
        for (auto idx : mesh.triangles[t]) {
            if (idx >= mesh.vertices.size()) {
                throw InvalidArgument("triangle " + std::to_string(t) + " references vertex " +
                                      std::to_string(idx) + " of " + std::to_string(mesh.vertices.size()));
            }
        }
    }
    mesh.bbox_min = mesh.vertices.front();
    mesh.bbox_max = mesh.vertices.front();
    for (const auto& v : mesh.vertices) {
        if (!v.allFinite()) {
            throw InvalidArgument("mesh has a non-finite vertex");
        }
        mesh.bbox_min = mesh.bbox_min.cwiseMin(v);
        mesh.bbox_max = mesh.bbox_max.cwiseMax(v);
    }
    mesh.bbox_diag = (mesh.bbox_max - mesh.bbox_min).norm();
    if (!(mesh.bbox_diag > 0.0)) {
        throw DegenerateInput("mesh bounding box has zero diagonal");
    }
    const double min_area = 1e-12 * mesh.bbox_diag * mesh.bbox_diag;
    for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
        if (0.5 * face_normal_scaled(mesh, mesh.triangles[t]).norm() <= min_area) {
            throw DegenerateInput("triangle " + std::to_string(t) + " is degenerate");
        }
    }
    return mesh;
}

/// Area-weighted per-vertex normals, unit length (zero for isolated vertices).
inline std::vector<Vec3> vertex_normals(const Mesh& mesh)
{
    std::vector<Vec3> normals(mesh.vertices.size(), Vec3::Zero());
    for (const auto& tri : mesh.triangles) {
        const Vec3 n = face_normal_scaled(mesh, tri);
        for (auto idx : tri) {
            normals[idx] += n;
        }
    }
    for (auto& n : normals) {
        const double len = n.norm();
        if (len > 0.0) {
            n /= len;
        }
    }
    return normals;
}

/// Sorted, de-duplicated vertex adjacency over triangle edges.
inline std::vector<std::vector<std::uint32_t>> vertex_adjacency(const Mesh& mesh)
{
    std::vector<std::vector<std::uint32_t>> adjacency(mesh.vertices.size());
    for (const auto& tri : mesh.triangles) {
        for (int i = 0; i < 3; ++i) {
            const auto a = tri[i];
            const auto b = tri[(i + 1) % 3];
            adjacency[a].push_back(b);
            adjacency[b].push_back(a);
        }
    }
    for (auto& list : adjacency) {
        std::sort(list.begin(), list.end());
        list.erase(std::unique(list.begin(), list.end()), list.end());
    }
    return adjacency;
}

} // namespace faceaug

#endif // FACEAUG_MESH_MESH_HPP
