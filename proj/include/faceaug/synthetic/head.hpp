/*
 * faceaug - Geometric face data augmentation from a single image and a 3D face mesh.
 *
 * File: include/faceaug/synthetic/head.hpp
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

#ifndef FACEAUG_SYNTHETIC_HEAD_HPP
#define FACEAUG_SYNTHETIC_HEAD_HPP

#include "faceaug/core/error.hpp"
#include "faceaug/core/image.hpp"
#include "faceaug/core/types.hpp"
#include "faceaug/mesh/mesh.hpp"
#include "faceaug/mesh/planes.hpp"
#include "faceaug/pose/pose.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <utility>
#include <vector>

namespace faceaug {


/**
 * Left-right mirror permutation of the 68-point scheme: mirror_68[i] is the landmark that
 * lands on i when the face is reflected across its symmetry plane.
 */
inline constexpr std::array<std::uint8_t, landmark_count> mirror_68 = {
    16, 15, 14, 13, 12, 11, 10, 9,  8,  7,  6,  5,  4,  3,  2,  1,  0,  // jaw
    26, 25, 24, 23, 22, 21, 20, 19, 18, 17,                              // brows
    27, 28, 29, 30,                                                      // nose bridge
    35, 34, 33, 32, 31,                                                  // nostrils
    45, 44, 43, 42, 47, 46,                                              // right eye -> left eye
    39, 38, 37, 36, 41, 40,                                              // left eye -> right eye
    54, 53, 52, 51, 50, 49, 48, 59, 58, 57, 56, 55,                      // outer lip
    64, 63, 62, 61, 60, 67, 66, 65                                       // inner lip
};

struct SyntheticHead
{
    Mesh mesh;
    std::array<std::uint32_t, landmark_count> landmark_vertex_ids{};
    std::uint32_t nose_apex_id = 0;
    Plane known_bilateral; ///< x = 0, normal +x
    Plane known_back;

    /// Mirrored landmark pairs with the +x (subject's left) point first.
    std::vector<std::pair<std::uint32_t, std::uint32_t>> mirrored_vertex_pairs() const
    {
        std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs;
        for (std::size_t i = 0; i < landmark_count; ++i) {
            const auto j = mirror_68[i];
            const auto a = landmark_vertex_ids[i];
            const auto b = landmark_vertex_ids[j];
            if (mesh.vertices[a].x() > 0.0 && a != b) {
                pairs.emplace_back(a, b);
            }
        }
        return pairs;
    }

    /**
     * A frontal pose that fills about 80% of the image height with the head, centred. The
     * camera-frame origin sits at the head's bounding-box centre.
     */
    RigidPose frontal_pose(const Camera& camera) const
    {
        RigidPose pose;
        const double height = mesh.bbox_max.y() - mesh.bbox_min.y();
        pose.scale = 0.8 * std::min(camera.image_width, camera.image_height) * camera.pixel_scale / height;
        const Vec3 centre = 0.5 * (mesh.bbox_min + mesh.bbox_max);
        pose.translation = Vec3(-pose.scale * centre.x(), -pose.scale * centre.y(), -pose.scale * centre.z());
        pose.translation.x() = 0.0; // keep x = 0 on the image's vertical mid-line exactly
        return pose;
    }
};

namespace detail {

inline double signed_pow(double w, double e) { return std::copysign(std::pow(std::abs(w), e), w); }

struct LandmarkAngle
{
    double lon_deg; ///< negative = subject's right (-x)
    double lat_deg;
};

// Subject's-right half of the 68 scheme plus the mid-line points; the rest are mirrored.
inline constexpr std::array<std::pair<std::uint8_t, LandmarkAngle>, 39> landmark_angles = {{
    {0, {-70, 10}},  {1, {-68, 0}},   {2, {-65, -10}}, {3, {-60, -20}}, {4, {-52, -30}},
    {5, {-42, -38}}, {6, {-30, -45}}, {7, {-15, -50}}, {8, {0, -52}},
    {17, {-45, 25}}, {18, {-37, 27}}, {19, {-29, 28}}, {20, {-21, 27}}, {21, {-13, 25}},
    {27, {0, 15}},   {28, {0, 10}},   {29, {0, 5}},    {30, {0, 0}},
    {31, {-10, -10}}, {32, {-5, -10}}, {33, {0, -10}},
    {36, {-40, 10}}, {37, {-35, 15}}, {38, {-25, 15}}, {39, {-20, 10}}, {40, {-25, 5}}, {41, {-35, 5}},
    {48, {-20, -25}}, {49, {-15, -20}}, {50, {-5, -20}}, {51, {0, -20}},
    {57, {0, -35}},  {58, {-5, -35}}, {59, {-15, -30}},
    {60, {-15, -25}}, {61, {-5, -25}}, {62, {0, -25}}, {66, {0, -30}}, {67, {-5, -30}},
}};

inline double gaussian(double d, double sigma) { return std::exp(-(d * d) / (sigma * sigma)); }

/// Face-feature displacement along +z, a function of (|lon|, lat) so the surface stays symmetric.
inline double face_relief(double lon_deg, double lat_deg)
{
    const double a = std::abs(lon_deg);
    const double nose = 0.25 * gaussian(a, 9.0) * gaussian(lat_deg, lat_deg > 0.0 ? 18.0 : 8.0);
    const double brow = 0.06 * gaussian(lat_deg - 22.0, 6.0) * gaussian(a, 40.0);
    const double eye = -0.05 * gaussian(lat_deg - 10.0, 6.0) * gaussian(a - 30.0, 9.0);
    const double mouth = 0.03 * gaussian(lat_deg + 25.0, 8.0) * gaussian(a, 20.0);
    const double chin = 0.04 * gaussian(lat_deg + 50.0, 8.0) * gaussian(a, 15.0);
    return nose + brow + eye + mouth + chin;
}

} // namespace detail

/**
 * Procedural face-like head: a superellipsoid with nose, brow, eye-socket, mouth and chin
 * relief, sampled on a latitude/longitude grid.
 *
 * The latitude band count is \p resolution rounded up to even (so the equator, where the nose
 * apex sits, is a grid line) and there are twice as many longitudes. Vertices on the x < 0 half
 * are mirrored from the x > 0 half and quad diagonals are mirrored too, so the mesh is exactly
 * symmetric about x = 0 (positions and topology). resolution = 36 gives 5040 triangles.
 *
 * @throws InvalidArgument for resolution < 8.
 */
inline SyntheticHead generate_head(int resolution = 36)
{
    if (resolution < 8) {
        throw InvalidArgument("generate_head: resolution must be >= 8");
    }
    const int n_lat = resolution + (resolution % 2);
    const int n_lon = 2 * n_lat;
    const int front = n_lat; // longitude index of lon = 0
    const double d_lat = 180.0 / n_lat;
    const double d_lon = 360.0 / n_lon;

    constexpr double half_width = 0.75, half_height = 1.0, half_depth = 0.85;
    constexpr double e_lat = 0.9, e_lon = 0.8;

    // Vertex layout: bottom pole, rings i = 1 .. n_lat-1 (n_lon each), top pole.
    const auto ring_vertex = [n_lon](int i, int k) {
        return static_cast<std::uint32_t>(1 + (i - 1) * n_lon + ((k % n_lon) + n_lon) % n_lon);
    };
    const std::uint32_t bottom_pole = 0;
    const auto top_pole = static_cast<std::uint32_t>(1 + (n_lat - 1) * n_lon);

    std::vector<Vec3> vertices(static_cast<std::size_t>(top_pole) + 1);
    vertices[bottom_pole] = Vec3(0.0, -half_height, 0.0);
    vertices[top_pole] = Vec3(0.0, half_height, 0.0);
    for (int i = 1; i < n_lat; ++i) {
        const double lat_deg = -90.0 + d_lat * i;
        const double lat = deg_to_rad(lat_deg);
        const double c_lat = detail::signed_pow(std::cos(lat), e_lat);
        const double y = half_height * detail::signed_pow(std::sin(lat), e_lat);
        for (int k = 0; k <= front; ++k) {
            const double lon_deg = -180.0 + d_lon * k;
            const double lon = deg_to_rad(lon_deg);
            double x = half_width * c_lat * detail::signed_pow(std::sin(lon), e_lon);
            if (k == 0 || k == front) {
                x = 0.0;
            }
            const double z =
                half_depth * c_lat * detail::signed_pow(std::cos(lon), e_lon) + detail::face_relief(lon_deg, lat_deg);
            vertices[ring_vertex(i, k)] = Vec3(x, y, z);
            if (k > 0 && k < front) {
                vertices[ring_vertex(i, n_lon - k)] = Vec3(-x, y, z);
            }
        }
    }

    const auto v = [&](int i, int k) -> std::uint32_t {
        if (i == 0) {
            return bottom_pole;
        }
        if (i == n_lat) {
            return top_pole;
        }
        return ring_vertex(i, k);
    };
    std::vector<Triangle> triangles;
    triangles.reserve(static_cast<std::size_t>(2 * n_lon * (n_lat - 1)));
    for (int i = 0; i < n_lat; ++i) {
        for (int k = 0; k < n_lon; ++k) {
            const bool mirrored_half = k >= front;
            // Diagonal (i,k)-(i+1,k+1) on the x < 0 half, (i,k+1)-(i+1,k) on the x > 0 half.
            std::array<Triangle, 2> quad;
            if (!mirrored_half) {
                quad = {Triangle{v(i, k), v(i, k + 1), v(i + 1, k + 1)}, Triangle{v(i, k), v(i + 1, k + 1), v(i + 1, k)}};
            } else {
                quad = {Triangle{v(i, k), v(i, k + 1), v(i + 1, k)}, Triangle{v(i, k + 1), v(i + 1, k + 1), v(i + 1, k)}};
            }
            for (const auto& t : quad) {
                if (t[0] != t[1] && t[1] != t[2] && t[0] != t[2]) {
                    triangles.push_back(t);
                }
            }
        }
    }

    SyntheticHead head;
    head.mesh = make_mesh(std::move(vertices), std::move(triangles));

    const auto snap = [&](const detail::LandmarkAngle& a) {
        const int i = static_cast<int>(std::lround((a.lat_deg + 90.0) / d_lat));
        const int k = front + static_cast<int>(std::lround(a.lon_deg / d_lon));
        return v(std::clamp(i, 1, n_lat - 1), k);
    };
    const auto mirror_vertex = [&](std::uint32_t id) {
        if (id == bottom_pole || id == top_pole) {
            return id;
        }
        const int i = 1 + static_cast<int>((id - 1) / n_lon);
        const int k = static_cast<int>((id - 1) % n_lon);
        return ring_vertex(i, n_lon - k);
    };
    std::array<bool, landmark_count> assigned{};
    for (const auto& [index, angle] : detail::landmark_angles) {
        head.landmark_vertex_ids[index] = snap(angle);
        assigned[index] = true;
    }
    for (std::size_t i = 0; i < landmark_count; ++i) {
        if (!assigned[i]) {
            head.landmark_vertex_ids[i] = mirror_vertex(head.landmark_vertex_ids[mirror_68[i]]);
        }
    }
    head.nose_apex_id = v(n_lat / 2, front);
    head.known_bilateral = Plane{Vec3::UnitX(), 0.0};
    head.known_back = back_plane(head.mesh, Vec3::UnitZ());
    return head;
}

/**
 * Smooth procedural photograph for baking tests: low-frequency colour gradients over a
 * mid-grey base. With \p symmetric the pattern depends only on the distance from the vertical
 * mid-line, so it is an exact left-right mirror image.
 */
inline RgbImage make_test_image(int width, int height, bool symmetric = false)
{
    RgbImage image(width, height);
    const double cx = 0.5 * (width - 1);
    for (int y = 0; y < height; ++y) {
        for (int x = 0; x < width; ++x) {
            const double u = symmetric ? std::abs(x - cx) / width : (x - cx) / width;
            const double w = double(y) / height;
            const double r = 0.45 + 0.30 * std::sin(2.0 * std::numbers::pi * (0.8 * u + 0.15)) * std::cos(2.1 * w);
            const double g = 0.40 + 0.25 * std::cos(2.0 * std::numbers::pi * 0.6 * w + 1.3 * u);
            const double b = 0.35 + 0.20 * std::sin(3.1 * u * u + 2.0 * w);
            image.at(x, y) = Rgb(std::clamp(r, 0.0, 1.0), std::clamp(g, 0.0, 1.0), std::clamp(b, 0.0, 1.0));
        }
    }
    return image;
}

/// Pixel positions of mesh vertices \p ids under \p pose.
template <typename Ids>
std::vector<Vec2> project_vertices(const Mesh& mesh, const Ids& ids, const RigidPose& pose, const Camera& camera)
{
    std::vector<Vec2> points;
    for (auto id : ids) {
        points.push_back(camera.project(pose.apply(mesh.vertices[id])));
    }
    return points;
}

} // namespace faceaug

#endif // FACEAUG_SYNTHETIC_HEAD_HPP
