/*
 * faceaug - Geometric face data augmentation from a single image and a 3D face mesh.
 *
 * File: include/faceaug/pipeline/overlay.hpp
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

#ifndef FACEAUG_PIPELINE_OVERLAY_HPP
#define FACEAUG_PIPELINE_OVERLAY_HPP

#include "faceaug/annotate/face.hpp"
#include "faceaug/core/error.hpp"
#include "faceaug/core/image.hpp"
#include "faceaug/pipeline/manifest.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <optional>
#include <span>
#include <vector>

namespace faceaug {

struct OverlayItem
{
    RgbImage image;
    LandmarkSet landmarks;
};

struct OverlayConfig
{
    int tile_size = 256;
    int columns = 0; ///< 0 = ceil(sqrt(n))
    int dot_radius = 2;
    Rgb visible_color = Rgb(0.0, 1.0, 0.0);
    Rgb occluded_color = Rgb(1.0, 0.0, 0.0);
    Rgb fill = Rgb::Zero();

    void validate() const
    {
        if (tile_size < 1 || columns < 0 || dot_radius < 0) {
            throw InvalidArgument("OverlayConfig: tile_size must be >= 1, columns and dot_radius >= 0");
        }
    }
};

/// Fills the disc of \p radius pixels around \p centre, clipped to the image.
inline void draw_dot(RgbImage& image, const Vec2& centre, int radius, const Rgb& color)
{
    if (!centre.allFinite()) {
        return;
    }
    const long cx = std::lround(centre.x());
    const long cy = std::lround(centre.y());
    for (long y = cy - radius; y <= cy + radius; ++y) {
        for (long x = cx - radius; x <= cx + radius; ++x) {
            if (x < 0 || y < 0 || x >= image.width || y >= image.height) {
                continue;
            }
            if ((x - cx) * (x - cx) + (y - cy) * (y - cy) <= long(radius) * radius) {
                image.at(int(x), int(y)) = color;
            }
        }
    }
}

/// Copy of \p image with one dot per landmark, green when visible and red when occluded.
inline RgbImage draw_landmarks(const RgbImage& image, const LandmarkSet& landmarks, const OverlayConfig& config = {})
{
    RgbImage out = image;
    for (std::size_t i = 0; i < landmark_count; ++i) {
        draw_dot(out, landmarks.points[i], config.dot_radius,
                 landmarks.visible[i] ? config.visible_color : config.occluded_color);
    }
    return out;
}

/// The item scaled to fit a square tile (aspect kept, centred, bilinear), dots drawn at tile scale.
inline RgbImage overlay_tile(const OverlayItem& item, const OverlayConfig& config = {})
{
    config.validate();
    if (item.image.empty()) {
        throw InvalidArgument("overlay_tile: empty image");
    }
    const int t = config.tile_size;
    const double s = double(t) / std::max(item.image.width, item.image.height);
    const double ox = 0.5 * (t - s * item.image.width);
    const double oy = 0.5 * (t - s * item.image.height);
    RgbImage tile(t, t, config.fill);
    for (int y = 0; y < t; ++y) {
        for (int x = 0; x < t; ++x) {
            const double sx = (x + 0.5 - ox) / s - 0.5;
            const double sy = (y + 0.5 - oy) / s - 0.5;
            if (sx < -0.5 || sy < -0.5 || sx > item.image.width - 0.5 || sy > item.image.height - 0.5) {
                continue;
            }
            tile.at(x, y) = sample_bilinear(item.image, sx, sy);
        }
    }
    LandmarkSet scaled = item.landmarks;
    for (auto& p : scaled.points) {
        p = Vec2(ox + s * (p.x() + 0.5) - 0.5, oy + s * (p.y() + 0.5) - 0.5);
    }
    return draw_landmarks(tile, scaled, config);
}

/// Tiles in row-major order; nullopt for an empty list.
inline std::optional<RgbImage> overlay_grid(std::span<const OverlayItem> items, const OverlayConfig& config = {})
{
    config.validate();
    if (items.empty()) {
        return std::nullopt;
    }
    const int n = static_cast<int>(items.size());
    const int cols = config.columns > 0 ? std::min(config.columns, n)
                                        : static_cast<int>(std::ceil(std::sqrt(static_cast<double>(n))));
    const int rows = (n + cols - 1) / cols;
    const int t = config.tile_size;
    RgbImage grid(cols * t, rows * t, config.fill);
    for (int i = 0; i < n; ++i) {
        const RgbImage tile = overlay_tile(items[i], config);
        const int gx = (i % cols) * t;
        const int gy = (i / cols) * t;
        for (int y = 0; y < t; ++y) {
            for (int x = 0; x < t; ++x) {
                grid.at(gx + x, gy + y) = tile.at(x, y);
            }
        }
    }
    return grid;
}

/// Writes the grid as a PNG. Returns false, writing nothing, for an empty list.
inline bool emit_overlays(std::span<const OverlayItem> items, const std::filesystem::path& path,
                          const OverlayConfig& config = {})
{
    const auto grid = overlay_grid(items, config);
    if (!grid) {
        return false;
    }
    if (path.has_parent_path()) {
        std::filesystem::create_directories(path.parent_path());
    }
    write_png(path, *grid);
    return true;
}

/// Loads the images of the selected manifest records (all records when \p indices is empty).
inline std::vector<OverlayItem> overlay_items(const DatasetManifest& manifest, std::span<const std::size_t> indices = {})
{
    std::vector<OverlayItem> items;
    const auto add = [&](const ManifestRecord& r) {
        items.push_back({read_image(manifest.resolve(r.face.image, r.face.is_synthetic)), r.face.landmarks});
    };
    if (indices.empty()) {
        for (const auto& r : manifest.records) {
            add(r);
        }
    } else {
        for (const auto i : indices) {
            if (i >= manifest.records.size()) {
                throw InvalidArgument("overlay_items: record index out of range");
            }
            add(manifest.records[i]);
        }
    }
    return items;
}

} // namespace faceaug

#endif // FACEAUG_PIPELINE_OVERLAY_HPP
