/*
 * faceaug - Geometric face data augmentation from a single image and a 3D face mesh.
 *
 * File: include/faceaug/annotate/face.hpp
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

#ifndef FACEAUG_ANNOTATE_FACE_HPP
#define FACEAUG_ANNOTATE_FACE_HPP

#include "faceaug/core/error.hpp"
#include "faceaug/core/text.hpp"
#include "faceaug/core/types.hpp"
#include "faceaug/render/light.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace faceaug {

/// Left eye, right eye, nose tip, mouth left, mouth right (image left/right).
inline constexpr std::array<std::uint8_t, 5> default_five_points{36, 45, 30, 48, 54};

struct BoundingBox
{
    double x = 0.0; ///< left edge, pixels
    double y = 0.0; ///< top edge, pixels
    double width = 0.0;
    double height = 0.0;

    bool operator==(const BoundingBox&) const = default;
};

/// 68 image points with a visibility flag each.
struct LandmarkSet
{
    std::array<Vec2, landmark_count> points{};
    std::array<bool, landmark_count> visible{};

    LandmarkSet() { visible.fill(true); }

    bool operator==(const LandmarkSet&) const = default;
};

struct AnnotatedFace
{
    std::string image;
    int image_width = 0;
    int image_height = 0;
    LandmarkSet landmarks;
    std::array<std::uint8_t, 5> five_points = default_five_points;
    BoundingBox bbox;
    std::string identity;
    std::string age;    ///< years or class label, kept verbatim
    std::string gender;
    double yaw_deg = 0.0;
    double pitch_deg = 0.0;
    bool is_synthetic = false;
    std::optional<LightId> light_id;

    bool operator==(const AnnotatedFace&) const = default;

    std::array<Vec2, 5> five_point_coords() const
    {
        std::array<Vec2, 5> out;
        for (std::size_t i = 0; i < 5; ++i) {
            out[i] = landmarks.points[five_points[i]];
        }
        return out;
    }

    /// Landmarks within the image grown by 20% on each side; five_points valid and distinct.
    void validate() const
    {
        if (image_width <= 0 || image_height <= 0) {
            throw InvalidArgument("AnnotatedFace: image size must be positive");
        }
        const double mx = 0.2 * image_width;
        const double my = 0.2 * image_height;
        for (const auto& p : landmarks.points) {
            if (!(p.x() >= -mx && p.x() <= image_width + mx && p.y() >= -my && p.y() <= image_height + my)) {
                throw InvalidArgument("AnnotatedFace: landmark outside the image margin");
            }
        }
        for (std::size_t i = 0; i < 5; ++i) {
            if (five_points[i] >= landmark_count) {
                throw InvalidArgument("AnnotatedFace: five_points index out of range");
            }
            for (std::size_t j = 0; j < i; ++j) {
                if (five_points[i] == five_points[j]) {
                    throw InvalidArgument("AnnotatedFace: five_points indices must be distinct");
                }
            }
        }
    }
};

/// Axis-aligned box around the landmarks.
inline BoundingBox landmark_box(const LandmarkSet& lms)
{
    Vec2 lo = lms.points[0], hi = lms.points[0];
    for (const auto& p : lms.points) {
        lo = lo.cwiseMin(p);
        hi = hi.cwiseMax(p);
    }
    return {lo.x(), lo.y(), hi.x() - lo.x(), hi.y() - lo.y()};
}

// Landmark text format: one set per line, 68 triples "x y v" separated by whitespace, v in {0, 1}.

inline LandmarkSet parse_landmark_line(std::string_view line, std::size_t line_no = 0)
{
    const auto tokens = detail::split_ws(line);
    if (tokens.size() != 3 * landmark_count) {
        throw ParseError("expected " + std::to_string(3 * landmark_count) + " values, got " +
                             std::to_string(tokens.size()),
                         line_no);
    }
    LandmarkSet out;
    for (std::size_t i = 0; i < landmark_count; ++i) {
        double x, y, v;
        if (!detail::parse_double(tokens[3 * i], x) || !detail::parse_double(tokens[3 * i + 1], y) ||
            !detail::parse_double(tokens[3 * i + 2], v) || !std::isfinite(x) || !std::isfinite(y)) {
            throw ParseError("bad number in landmark " + std::to_string(i), line_no);
        }
        if (v != 0.0 && v != 1.0) {
            throw ParseError("visibility flag must be 0 or 1", line_no);
        }
        out.points[i] = Vec2(x, y);
        out.visible[i] = v == 1.0;
    }
    return out;
}

inline std::string format_landmark_line(const LandmarkSet& lms)
{
    std::string out;
    for (std::size_t i = 0; i < landmark_count; ++i) {
        if (i > 0) {
            out.push_back(' ');
        }
        out += format_double(lms.points[i].x());
        out.push_back(' ');
        out += format_double(lms.points[i].y());
        out += lms.visible[i] ? " 1" : " 0";
    }
    return out;
}

inline std::vector<LandmarkSet> read_landmark_file(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) {
        throw Error("cannot open landmark file " + path.string());
    }
    std::vector<LandmarkSet> sets;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty() || trim(line).front() == '#') {
            continue;
        }
        sets.push_back(parse_landmark_line(line, line_no));
    }
    return sets;
}

inline void write_landmark_file(const std::filesystem::path& path, const std::vector<LandmarkSet>& sets)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw Error("cannot write landmark file " + path.string());
    }
    for (const auto& s : sets) {
        out << format_landmark_line(s) << '\n';
    }
}

} // namespace faceaug

#endif // FACEAUG_ANNOTATE_FACE_HPP
