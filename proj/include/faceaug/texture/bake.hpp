/*
 * faceaug - Geometric face data augmentation from a single image and a 3D face mesh.
 *
 * File: include/faceaug/texture/bake.hpp
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

#ifndef FACEAUG_TEXTURE_BAKE_HPP
#define FACEAUG_TEXTURE_BAKE_HPP

#include "faceaug/core/error.hpp"
#include "faceaug/core/image.hpp"
#include "faceaug/mesh/mesh.hpp"
#include "faceaug/pose/pose.hpp"

#include <array>
#include <cmath>
#include <cstdint>
#include <deque>
#include <vector>

namespace faceaug {

/// A mesh with one linear-RGB colour per vertex.
struct ColoredMesh
{
    Mesh mesh;
    std::vector<Rgb> colors;
    std::vector<bool> textured_mask; ///< true where the colour came straight from a source pixel

    /// Copy of the mesh carrying the colours, for OBJ export.
    Mesh to_mesh() const
    {
        Mesh out = mesh;
        out.vertex_colors = colors;
        return out;
    }
};

/// Pixel nearest to a continuous image coordinate, rounding halves away from zero on both axes.
inline std::array<long, 2> nearest_pixel(const Vec2& px) { return {std::lround(px.x()), std::lround(px.y())}; }

/**
 * Transfers source-image colours onto the mesh vertices. Every vertex is projected with the
 * orthographic camera under \p pose and takes the colour of the nearest pixel; no depth test is
 * applied. Vertices projecting outside the raster are filled afterwards by breadth-first
 * propagation over mesh edges from the nearest textured vertex (ties resolved by vertex order).
 * Vertices in components with no textured vertex get the mean textured colour.
 *
 * @throws InvalidArgument for an empty image; DegenerateInput when no vertex lands inside the
 *         image (wrong pose or scale).
 */
inline ColoredMesh bake_vertex_colors(const Mesh& mesh, const RgbImage& image, const RigidPose& pose,
                                      const Camera& camera)
{
    if (image.empty()) {
        throw InvalidArgument("bake_vertex_colors: empty image");
    }
    camera.validate();

    ColoredMesh out;
    out.mesh = mesh;
    out.colors.assign(mesh.vertices.size(), Rgb::Zero());
    out.textured_mask.assign(mesh.vertices.size(), false);

    std::deque<std::uint32_t> frontier;
    Rgb sum = Rgb::Zero();
    std::size_t textured = 0;
    for (std::uint32_t v = 0; v < mesh.vertices.size(); ++v) {
        const auto [x, y] = nearest_pixel(camera.project(pose.apply(mesh.vertices[v])));
        if (x >= 0 && y >= 0 && x < image.width && y < image.height) {
            out.colors[v] = image.at(static_cast<int>(x), static_cast<int>(y));
            out.textured_mask[v] = true;
            frontier.push_back(v);
            sum += out.colors[v];
            ++textured;
        }
    }
    if (textured == 0) {
        throw DegenerateInput("bake_vertex_colors: no vertex projects inside the image");
    }

    std::vector<bool> filled = out.textured_mask;
    if (textured < mesh.vertices.size()) {
        const auto adjacency = vertex_adjacency(mesh);
        while (!frontier.empty()) {
            const auto v = frontier.front();
            frontier.pop_front();
            for (auto w : adjacency[v]) {
                if (!filled[w]) {
                    filled[w] = true;
                    out.colors[w] = out.colors[v];
                    frontier.push_back(w);
                }
            }
        }
        const Rgb mean = sum / static_cast<double>(textured);
        for (std::size_t v = 0; v < filled.size(); ++v) {
            if (!filled[v]) {
                out.colors[v] = mean;
            }
        }
    }
    return out;
}

} // namespace faceaug

#endif // FACEAUG_TEXTURE_BAKE_HPP
