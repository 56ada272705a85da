/*
 * faceaug - Geometric face data augmentation from a single image and a 3D face mesh.
 *
 * File: include/faceaug/annotate/alignment.hpp
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

#ifndef FACEAUG_ANNOTATE_ALIGNMENT_HPP
#define FACEAUG_ANNOTATE_ALIGNMENT_HPP

#include "faceaug/annotate/face.hpp"
#include "faceaug/core/error.hpp"
#include "faceaug/core/image.hpp"
#include "faceaug/core/random.hpp"
#include "faceaug/core/types.hpp"

#include "Eigen/Eigenvalues"

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace faceaug {

/// p -> scale * R(angle) * p + translation, in pixel coordinates.
struct Similarity2D
{
    double scale = 1.0;
    double angle_rad = 0.0;
    Vec2 translation = Vec2::Zero();

    Eigen::Matrix2d linear() const
    {
        const double c = std::cos(angle_rad), s = std::sin(angle_rad);
        Eigen::Matrix2d m;
        m << c, -s, s, c;
        return scale * m;
    }

    Vec2 apply(const Vec2& p) const { return linear() * p + translation; }

    Similarity2D inverse() const
    {
        Similarity2D inv;
        inv.scale = 1.0 / scale;
        inv.angle_rad = -angle_rad;
        inv.translation = -(inv.linear() * translation);
        return inv;
    }
};

/**
 * Least-squares similarity taking \p src onto \p dst, in closed form: with both sets centred
 * and read as complex numbers, the optimal scale-rotation is sum(conj(z) w) / sum(|z|^2).
 *
 * @throws InvalidArgument on size mismatch or fewer than 2 points; DegenerateInput when the
 *         source points are collinear.
 */
inline Similarity2D estimate_similarity_2d(std::span<const Vec2> src, std::span<const Vec2> dst)
{
    if (src.size() != dst.size() || src.size() < 2) {
        throw InvalidArgument("estimate_similarity_2d: need two equally sized sets of at least 2 points");
    }
    Vec2 src_mean = Vec2::Zero(), dst_mean = Vec2::Zero();
    for (std::size_t i = 0; i < src.size(); ++i) {
        src_mean += src[i];
        dst_mean += dst[i];
    }
    src_mean /= double(src.size());
    dst_mean /= double(dst.size());

    Eigen::Matrix2d scatter = Eigen::Matrix2d::Zero();
    std::complex<double> num = 0.0;
    double den = 0.0;
    for (std::size_t i = 0; i < src.size(); ++i) {
        const Vec2 a = src[i] - src_mean;
        const Vec2 b = dst[i] - dst_mean;
        scatter += a * a.transpose();
        const std::complex<double> z(a.x(), a.y()), w(b.x(), b.y());
        num += std::conj(z) * w;
        den += std::norm(z);
    }
    const Eigen::Vector2d ev = Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d>(scatter).eigenvalues();
    if (!(ev[1] > 0.0) || ev[0] <= 1e-12 * ev[1]) {
        throw DegenerateInput("estimate_similarity_2d: source points are collinear");
    }
    const std::complex<double> c = num / den;
    Similarity2D out;
    out.scale = std::abs(c);
    out.angle_rad = std::arg(c);
    if (!(out.scale > 0.0)) {
        throw DegenerateInput("estimate_similarity_2d: target points collapse to one point");
    }
    out.translation = dst_mean - out.linear() * src_mean;
    return out;
}

/// Canonical five-point template on a square crop.
struct AlignmentTemplate
{
    std::array<Vec2, 5> points;
    int output_size = 112;

    /// Eyes at 30% / 70% width and 40% height; nose tip and mouth corners below on the mid-line.
    static AlignmentTemplate standard(int size = 112)
    {
        const double s = size;
        return {{Vec2(0.30 * s, 0.40 * s), Vec2(0.70 * s, 0.40 * s), Vec2(0.50 * s, 0.56 * s),
                 Vec2(0.35 * s, 0.74 * s), Vec2(0.65 * s, 0.74 * s)},
                size};
    }
};

/**
 * Warps \p image so that output(p) = image(T^-1(p)) with bilinear sampling; pixels whose source
 * falls outside the image get \p fill.
 */
inline RgbImage warp_similarity(const RgbImage& image, const Similarity2D& transform, int width, int height,
                                const Rgb& fill = Rgb::Zero())
{
    const Similarity2D inv = transform.inverse();
    RgbImage out(width, height, fill);
    for (int y = 0; y < height; ++y) {
        for (int x = 0; x < width; ++x) {
            const Vec2 s = inv.apply(Vec2(x, y));
            if (s.x() < -0.5 || s.y() < -0.5 || s.x() > image.width - 0.5 || s.y() > image.height - 0.5) {
                continue;
            }
            out.at(x, y) = sample_bilinear(image, s.x(), s.y());
        }
    }
    return out;
}

struct AlignedCrop
{
    RgbImage image;
    Similarity2D transform; ///< source pixels to crop pixels
};

inline AlignedCrop align_5pt(const RgbImage& image, const std::array<Vec2, 5>& points,
                             const AlignmentTemplate& tmpl = AlignmentTemplate::standard())
{
    if (image.empty()) {
        throw InvalidArgument("align_5pt: empty image");
    }
    if (tmpl.output_size <= 0) {
        throw InvalidArgument("align_5pt: output size must be positive");
    }
    AlignedCrop out;
    out.transform = estimate_similarity_2d(points, tmpl.points);
    out.image = warp_similarity(image, out.transform, tmpl.output_size, tmpl.output_size);
    return out;
}

/// In-plane rotation about the image centre (angle in pixel coordinates) followed by a shift.
struct Similarity2DParams
{
    double rotation_deg = 0.0;
    Vec2 translation_px = Vec2::Zero();
};

inline Similarity2D similarity_about_centre(const Similarity2DParams& params, int width, int height)
{
    if (!std::isfinite(params.rotation_deg) || !params.translation_px.allFinite()) {
        throw InvalidArgument("similarity_2d_augment: parameters must be finite");
    }
    const Vec2 centre(0.5 * (width - 1), 0.5 * (height - 1));
    Similarity2D t;
    t.angle_rad = deg_to_rad(params.rotation_deg);
    t.translation = centre - t.linear() * centre + params.translation_px;
    return t;
}

/// Rotation uniform in [-max_rotation, max_rotation], each shift uniform in [-max_shift, max_shift].
inline Similarity2DParams sample_similarity_params(std::uint64_t seed, double max_rotation_deg, double max_shift_px)
{
    std::mt19937_64 rng(seed);
    Similarity2DParams p;
    p.rotation_deg = (2.0 * uniform_unit(rng) - 1.0) * max_rotation_deg;
    p.translation_px.x() = (2.0 * uniform_unit(rng) - 1.0) * max_shift_px;
    p.translation_px.y() = (2.0 * uniform_unit(rng) - 1.0) * max_shift_px;
    return p;
}

/// 2D baseline augmentation: the same similarity moves the pixels and the landmarks.
inline std::pair<RgbImage, LandmarkSet> similarity_2d_augment(const RgbImage& image, const LandmarkSet& landmarks,
                                                              const Similarity2DParams& params)
{
    const Similarity2D t = similarity_about_centre(params, image.width, image.height);
    LandmarkSet moved = landmarks;
    for (auto& p : moved.points) {
        p = t.apply(p);
    }
    return {warp_similarity(image, t, image.width, image.height), moved};
}

} // namespace faceaug

#endif // FACEAUG_ANNOTATE_ALIGNMENT_HPP
