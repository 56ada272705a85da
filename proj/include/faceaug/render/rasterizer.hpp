/*
 * faceaug - Geometric face data augmentation from a single image and a 3D face mesh.
 *
 * File: include/faceaug/render/rasterizer.hpp
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

#ifndef FACEAUG_RENDER_RASTERIZER_HPP
#define FACEAUG_RENDER_RASTERIZER_HPP

#include "faceaug/core/error.hpp"
#include "faceaug/core/image.hpp"
#include "faceaug/pose/pose.hpp"
#include "faceaug/render/light.hpp"
#include "faceaug/render/shading.hpp"
#include "faceaug/texture/bake.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <thread>
#include <vector>

namespace faceaug {

struct RenderOutput
{
    RgbImage image;
    ScalarImage depth;                  ///< Camera::depth() of the visible surface, +inf on background
    std::vector<std::uint8_t> coverage; ///< 1 where the mesh is visible

    bool covered(int x, int y) const { return coverage[static_cast<std::size_t>(y) * image.width + x] != 0; }

    std::vector<bool> coverage_mask() const { return {coverage.begin(), coverage.end()}; }
};

namespace detail {

struct ScreenVertex
{
    double x;
    double y;
    double depth;
};

inline double edge(const ScreenVertex& a, const ScreenVertex& b, double px, double py)
{
    return (b.x - a.x) * (py - a.y) - (b.y - a.y) * (px - a.x);
}

inline Rgb background_color(const Background& bg, int x, int y)
{
    if (const auto* src = std::get_if<SourceImageBackground>(&bg)) {
        return src->image->at(x, y);
    }
    return std::get<SolidBackground>(bg).color;
}

} // namespace detail

/**
 * Orthographic z-buffer rasteriser with Gouraud shading.
 *
 * Vertex colours are shaded once (see shade_vertex()) with normals and the light rig carried into
 * the camera frame by \p pose, then interpolated with screen-space barycentrics at pixel centres.
 * A pixel is covered when its centre lies inside or on the edge of a triangle; the nearest depth
 * wins and equal depths keep the lower triangle id. Pixels without geometry in front of the
 * background plane show the background.
 *
 * Rows are split into bands rendered in parallel when config.threads > 1; each band writes only
 * its own rows, so the output does not depend on the thread count.
 */
inline RenderOutput rasterize(const ColoredMesh& cm, const RigidPose& pose, const Camera& camera,
                              std::optional<LightId> light, const RenderConfig& config)
{
    config.validate();
    if (camera.image_width <= 0 || camera.image_height <= 0) {
        throw InvalidArgument("rasterize: zero-size output");
    }
    camera.validate();
    const int width = camera.image_width;
    const int height = camera.image_height;
    if (const auto* src = std::get_if<SourceImageBackground>(&config.background)) {
        if (!src->image || src->image->width != width || src->image->height != height) {
            throw InvalidArgument("rasterize: background image must match the camera size");
        }
    }

    const Mesh& mesh = cm.mesh;
    const auto normals = vertex_normals(mesh);
    std::optional<SpotLight> active;
    if (light) {
        active = transform_rig(make_light_rig(mesh, config.rig), pose)[*light];
    }

    std::vector<detail::ScreenVertex> screen(mesh.vertices.size());
    std::vector<Rgb> shaded(mesh.vertices.size());
    for (std::size_t v = 0; v < mesh.vertices.size(); ++v) {
        const Vec3 p = pose.apply(mesh.vertices[v]);
        const Vec2 px = camera.project(p);
        screen[v] = {px.x(), px.y(), Camera::depth(p)};
        const Vec3 n = pose.rotation * normals[v];
        shaded[v] = shade_vertex(cm.colors[v], n, p, active ? &*active : nullptr, config);
    }
    const double background_depth = -config.background_plane_z;

    RenderOutput out;
    out.image = RgbImage(width, height);
    out.depth = ScalarImage(width, height, std::numeric_limits<double>::infinity());
    out.coverage.assign(static_cast<std::size_t>(width) * height, 0);

    const auto render_rows = [&](int row_begin, int row_end) {
        for (std::uint32_t t = 0; t < mesh.triangles.size(); ++t) {
            const auto& tri = mesh.triangles[t];
            const auto& a = screen[tri[0]];
            const auto& b = screen[tri[1]];
            const auto& c = screen[tri[2]];
            const double area = detail::edge(a, b, c.x, c.y);
            if (area == 0.0 || !std::isfinite(area)) {
                continue;
            }
            const int x0 = std::max(0, static_cast<int>(std::ceil(std::min({a.x, b.x, c.x}))));
            const int x1 = std::min(width - 1, static_cast<int>(std::floor(std::max({a.x, b.x, c.x}))));
            const int y0 = std::max(row_begin, static_cast<int>(std::ceil(std::min({a.y, b.y, c.y}))));
            const int y1 = std::min(row_end - 1, static_cast<int>(std::floor(std::max({a.y, b.y, c.y}))));
            const double sign = area > 0.0 ? 1.0 : -1.0;
            const double inv_area = 1.0 / std::abs(area);
            for (int y = y0; y <= y1; ++y) {
                for (int x = x0; x <= x1; ++x) {
                    const double w0 = sign * detail::edge(b, c, x, y);
                    const double w1 = sign * detail::edge(c, a, x, y);
                    const double w2 = sign * detail::edge(a, b, x, y);
                    if (w0 < 0.0 || w1 < 0.0 || w2 < 0.0) {
                        continue;
                    }
                    const double l0 = w0 * inv_area;
                    const double l1 = w1 * inv_area;
                    const double l2 = w2 * inv_area;
                    const double z = l0 * a.depth + l1 * b.depth + l2 * c.depth;
                    double& zbuf = out.depth.at(x, y);
                    if (!(z < zbuf) || !(z < background_depth)) {
                        continue;
                    }
                    zbuf = z;
                    out.image.at(x, y) = l0 * shaded[tri[0]] + l1 * shaded[tri[1]] + l2 * shaded[tri[2]];
                    out.coverage[static_cast<std::size_t>(y) * width + x] = 1;
                }
            }
        }
        for (int y = row_begin; y < row_end; ++y) {
            for (int x = 0; x < width; ++x) {
                if (!out.coverage[static_cast<std::size_t>(y) * width + x]) {
                    out.image.at(x, y) = detail::background_color(config.background, x, y);
                }
            }
        }
    };

    const int bands = std::min(config.threads, height);
    if (bands <= 1) {
        render_rows(0, height);
    } else {
        std::vector<std::thread> workers;
        for (int i = 0; i < bands; ++i) {
            const int begin = height * i / bands;
            const int end = height * (i + 1) / bands;
            workers.emplace_back(render_rows, begin, end);
        }
        for (auto& w : workers) {
            w.join();
        }
    }
    return out;
}

} // namespace faceaug

#endif // FACEAUG_RENDER_RASTERIZER_HPP
