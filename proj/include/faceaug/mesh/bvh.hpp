/*
 * faceaug - Geometric face data augmentation from a single image and a 3D face mesh.
 *
 * File: include/faceaug/mesh/bvh.hpp
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

#ifndef FACEAUG_MESH_BVH_HPP
#define FACEAUG_MESH_BVH_HPP

#include "faceaug/core/error.hpp"
#include "faceaug/core/types.hpp"
#include "faceaug/mesh/mesh.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <memory>
#include <numeric>
#include <optional>
#include <vector>

namespace faceaug {

/// Ray with unit direction.
struct Ray
{
    Vec3 origin;
    Vec3 direction;

    Ray(const Vec3& origin, const Vec3& direction) : origin(origin), direction(direction)
    {
        const double len = direction.norm();
        if (std::abs(len - 1.0) > 1e-9) {
            throw InvalidArgument("Ray: direction must be unit length");
        }
    }

    Vec3 at(double t) const { return origin + t * direction; }
};

struct Hit
{
    std::uint32_t triangle_id = 0;
    Vec3 point = Vec3::Zero();
    double distance = 0.0;
    Vec3 barycentric = Vec3::Zero(); ///< Weights of the triangle's three vertices, in index order.
};

/// Determinant cutoff used by all ray-triangle tests on \p mesh.
inline double ray_epsilon(const Mesh& mesh) { return 1e-9 * mesh.bbox_diag * mesh.bbox_diag; }

/// Barycentric coordinates may undershoot 0 (or overshoot 1) by this much and still count as a hit.
inline constexpr double barycentric_slack = 1e-10;

/**
 * Möller-Trumbore ray-triangle test, two-sided. Edges and vertices count as inside, with a
 * barycentric_slack margin so that a ray through a shared vertex or edge cannot slip between
 * neighbouring triangles under rounding. Hits at distance 0 are accepted.
 */
inline std::optional<Hit> intersect_triangle(const Mesh& mesh, std::uint32_t triangle_id, const Ray& ray,
                                             double det_epsilon)
{
    const Triangle& tri = mesh.triangles[triangle_id];
    const Vec3& a = mesh.vertices[tri[0]];
    const Vec3& b = mesh.vertices[tri[1]];
    const Vec3& c = mesh.vertices[tri[2]];
    const Vec3 e1 = b - a;
    const Vec3 e2 = c - a;
    const Vec3 p = ray.direction.cross(e2);
    const double det = e1.dot(p);
    if (std::abs(det) < det_epsilon) {
        return std::nullopt;
    }
    const double inv_det = 1.0 / det;
    const Vec3 s = ray.origin - a;
    const double u = s.dot(p) * inv_det;
    if (u < -barycentric_slack || u > 1.0 + barycentric_slack) {
        return std::nullopt;
    }
    const Vec3 q = s.cross(e1);
    const double v = ray.direction.dot(q) * inv_det;
    if (v < -barycentric_slack || u + v > 1.0 + barycentric_slack) {
        return std::nullopt;
    }
    const double t = e2.dot(q) * inv_det;
    if (t < 0.0) {
        return std::nullopt;
    }
    Hit hit;
    hit.triangle_id = triangle_id;
    hit.distance = t;
    hit.barycentric = Vec3(1.0 - u - v, u, v);
    hit.point = hit.barycentric[0] * a + hit.barycentric[1] * b + hit.barycentric[2] * c;
    return hit;
}

namespace detail {

/// Nearest hit wins; equal distances go to the lowest triangle id.
inline bool closer(const Hit& candidate, const std::optional<Hit>& best)
{
    return !best || candidate.distance < best->distance ||
           (candidate.distance == best->distance && candidate.triangle_id < best->triangle_id);
}

} // namespace detail

/// Exhaustive nearest-hit search, the reference the BVH must reproduce.
inline std::optional<Hit> intersect_brute_force(const Mesh& mesh, const Ray& ray)
{
    const double eps = ray_epsilon(mesh);
    std::optional<Hit> best;
    for (std::uint32_t t = 0; t < mesh.triangles.size(); ++t) {
        if (auto hit = intersect_triangle(mesh, t, ray, eps); hit && detail::closer(*hit, best)) {
            best = hit;
        }
    }
    return best;
}

/**
 * Bounding volume hierarchy over the triangles of a mesh, answering nearest-hit queries with
 * results identical to intersect_brute_force().
 *
 * Built with a binned surface-area heuristic. Node boxes are padded by a small multiple of the
 * mesh diagonal so rounding in the slab test can never cull a triangle the exact test would hit.
 * Immutable after construction; queries are safe from many threads.
 */
class Bvh
{
public:
    explicit Bvh(Mesh mesh) : mesh_(std::make_shared<const Mesh>(std::move(mesh)))
    {
        build();
    }

    const Mesh& mesh() const noexcept { return *mesh_; }
    std::size_t node_count() const noexcept { return nodes_.size(); }

    std::optional<Hit> intersect(const Ray& ray) const
    {
        const Mesh& mesh = *mesh_;
        const double eps = ray_epsilon(mesh);
        std::optional<Hit> best;
        double best_t = std::numeric_limits<double>::infinity();

        std::array<std::uint32_t, 128> stack;
        std::size_t top = 0;
        double root_t;
        if (!box_entry(nodes_[0], ray, best_t, root_t)) {
            return std::nullopt;
        }
        stack[top++] = 0;
        while (top > 0) {
            const Node& node = nodes_[stack[--top]];
            // Boxes were pushed before best_t shrank; re-check.
            double entry;
            if (!box_entry(node, ray, best_t, entry)) {
                continue;
            }
            if (node.count > 0) {
                for (std::uint32_t i = node.first; i < node.first + node.count; ++i) {
                    const auto tri = order_[i];
                    if (auto hit = intersect_triangle(mesh, tri, ray, eps); hit && detail::closer(*hit, best)) {
                        best = hit;
                        best_t = hit->distance;
                    }
                }
                continue;
            }
            const std::uint32_t left = node.first;
            const std::uint32_t right = node.first + 1;
            double t_left, t_right;
            const bool hit_left = box_entry(nodes_[left], ray, best_t, t_left);
            const bool hit_right = box_entry(nodes_[right], ray, best_t, t_right);
            // Push the farther child first so the nearer one is visited first.
            if (hit_left && hit_right) {
                if (t_left <= t_right) {
                    stack[top++] = right;
                    stack[top++] = left;
                } else {
                    stack[top++] = left;
                    stack[top++] = right;
                }
            } else if (hit_left) {
                stack[top++] = left;
            } else if (hit_right) {
                stack[top++] = right;
            }
        }
        return best;
    }

private:
    struct Node
    {
        Vec3 lo;
        Vec3 hi;
        std::uint32_t first = 0; ///< Leaf: first index into order_. Interior: index of the left child.
        std::uint32_t count = 0; ///< Number of triangles in a leaf, 0 for interior nodes.
    };

    static constexpr std::uint32_t max_leaf_size = 4;
    static constexpr int bin_count = 12;

    /// Slab test. Succeeds when the box overlaps the ray within [0, t_max]; entry gets the near distance.
    static bool box_entry(const Node& node, const Ray& ray, double t_max, double& entry)
    {
        double t0 = 0.0;
        double t1 = t_max;
        for (int axis = 0; axis < 3; ++axis) {
            const double o = ray.origin[axis];
            const double d = ray.direction[axis];
            if (d == 0.0) {
                if (o < node.lo[axis] || o > node.hi[axis]) {
                    return false;
                }
                continue;
            }
            const double inv = 1.0 / d;
            double near = (node.lo[axis] - o) * inv;
            double far = (node.hi[axis] - o) * inv;
            if (near > far) {
                std::swap(near, far);
            }
            t0 = std::max(t0, near);
            t1 = std::min(t1, far);
            if (t0 > t1) {
                return false;
            }
        }
        entry = t0;
        return true;
    }

    void build()
    {
        const Mesh& mesh = *mesh_;
        const std::size_t n = mesh.triangles.size();
        if (n >= std::numeric_limits<std::uint32_t>::max() / 2) {
            throw InvalidArgument("Bvh: too many triangles");
        }
        tri_lo_.resize(n);
        tri_hi_.resize(n);
        centroids_.resize(n);
        for (std::size_t t = 0; t < n; ++t) {
            const auto& tri = mesh.triangles[t];
            const Vec3& a = mesh.vertices[tri[0]];
            const Vec3& b = mesh.vertices[tri[1]];
            const Vec3& c = mesh.vertices[tri[2]];
            tri_lo_[t] = a.cwiseMin(b).cwiseMin(c);
            tri_hi_[t] = a.cwiseMax(b).cwiseMax(c);
            centroids_[t] = (a + b + c) / 3.0;
        }
        order_.resize(n);
        std::iota(order_.begin(), order_.end(), 0u);
        pad_ = 1e-7 * mesh.bbox_diag;

        nodes_.reserve(2 * n);
        nodes_.push_back({});
        split(0, 0, static_cast<std::uint32_t>(n), 0);

        tri_lo_.clear();
        tri_hi_.clear();
        centroids_.clear();
    }

    void fit(Node& node, std::uint32_t first, std::uint32_t count) const
    {
        node.lo = Vec3::Constant(std::numeric_limits<double>::infinity());
        node.hi = Vec3::Constant(-std::numeric_limits<double>::infinity());
        for (std::uint32_t i = first; i < first + count; ++i) {
            node.lo = node.lo.cwiseMin(tri_lo_[order_[i]]);
            node.hi = node.hi.cwiseMax(tri_hi_[order_[i]]);
        }
        node.lo.array() -= pad_;
        node.hi.array() += pad_;
    }

    static double half_area(const Vec3& lo, const Vec3& hi)
    {
        const Vec3 e = (hi - lo).cwiseMax(0.0);
        return e.x() * e.y() + e.y() * e.z() + e.z() * e.x();
    }

    void split(std::uint32_t node_index, std::uint32_t first, std::uint32_t count, int depth)
    {
        fit(nodes_[node_index], first, count);
        if (count <= max_leaf_size || depth >= 60) {
            nodes_[node_index].first = first;
            nodes_[node_index].count = count;
            return;
        }

        Vec3 c_lo = Vec3::Constant(std::numeric_limits<double>::infinity());
        Vec3 c_hi = -c_lo;
        for (std::uint32_t i = first; i < first + count; ++i) {
            c_lo = c_lo.cwiseMin(centroids_[order_[i]]);
            c_hi = c_hi.cwiseMax(centroids_[order_[i]]);
        }

        // Binned SAH over all three axes.
        double best_cost = std::numeric_limits<double>::infinity();
        int best_axis = -1;
        int best_bin = 0;
        for (int axis = 0; axis < 3; ++axis) {
            const double extent = c_hi[axis] - c_lo[axis];
            if (!(extent > 0.0)) {
                continue;
            }
            std::array<std::uint32_t, bin_count> counts{};
            std::array<Vec3, bin_count> lo, hi;
            lo.fill(Vec3::Constant(std::numeric_limits<double>::infinity()));
            hi.fill(Vec3::Constant(-std::numeric_limits<double>::infinity()));
            for (std::uint32_t i = first; i < first + count; ++i) {
                const auto t = order_[i];
                const int b = bin_of(centroids_[t][axis], c_lo[axis], extent);
                ++counts[b];
                lo[b] = lo[b].cwiseMin(tri_lo_[t]);
                hi[b] = hi[b].cwiseMax(tri_hi_[t]);
            }
            std::array<double, bin_count> right_area{};
            std::array<std::uint32_t, bin_count> right_count{};
            Vec3 r_lo = Vec3::Constant(std::numeric_limits<double>::infinity());
            Vec3 r_hi = -r_lo;
            std::uint32_t r_n = 0;
            for (int b = bin_count - 1; b > 0; --b) {
                r_lo = r_lo.cwiseMin(lo[b]);
                r_hi = r_hi.cwiseMax(hi[b]);
                r_n += counts[b];
                right_area[b] = half_area(r_lo, r_hi);
                right_count[b] = r_n;
            }
            Vec3 l_lo = Vec3::Constant(std::numeric_limits<double>::infinity());
            Vec3 l_hi = -l_lo;
            std::uint32_t l_n = 0;
            for (int b = 0; b < bin_count - 1; ++b) {
                l_lo = l_lo.cwiseMin(lo[b]);
                l_hi = l_hi.cwiseMax(hi[b]);
                l_n += counts[b];
                if (l_n == 0 || right_count[b + 1] == 0) {
                    continue;
                }
                const double cost = half_area(l_lo, l_hi) * l_n + right_area[b + 1] * right_count[b + 1];
                if (cost < best_cost) {
                    best_cost = cost;
                    best_axis = axis;
                    best_bin = b;
                }
            }
        }

        std::uint32_t mid;
        if (best_axis >= 0) {
            const double extent = c_hi[best_axis] - c_lo[best_axis];
            auto* begin = order_.data() + first;
            auto* part = std::stable_partition(begin, begin + count, [&](std::uint32_t t) {
                return bin_of(centroids_[t][best_axis], c_lo[best_axis], extent) <= best_bin;
            });
            mid = first + static_cast<std::uint32_t>(part - begin);
        } else {
            // All centroids coincide: split the index range in half.
            mid = first + count / 2;
        }
        if (mid == first || mid == first + count) {
            mid = first + count / 2;
        }

        const auto left = static_cast<std::uint32_t>(nodes_.size());
        nodes_.push_back({});
        nodes_.push_back({});
        nodes_[node_index].first = left;
        nodes_[node_index].count = 0;
        split(left, first, mid - first, depth + 1);
        split(left + 1, mid, first + count - mid, depth + 1);
    }

    static int bin_of(double value, double lo, double extent)
    {
        const int b = static_cast<int>(bin_count * (value - lo) / extent);
        return std::clamp(b, 0, bin_count - 1);
    }

    std::shared_ptr<const Mesh> mesh_;
    std::vector<Node> nodes_;
    std::vector<std::uint32_t> order_;
    double pad_ = 0.0;

    // Build-time scratch.
    std::vector<Vec3> tri_lo_, tri_hi_, centroids_;
};

inline Bvh build_bvh(const Mesh& mesh) { return Bvh(mesh); }

inline std::optional<Hit> ray_intersect(const Bvh& bvh, const Ray& ray) { return bvh.intersect(ray); }

} // namespace faceaug

#endif // FACEAUG_MESH_BVH_HPP
