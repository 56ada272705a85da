/*
 * faceaug - Geometric face data augmentation from a single image and a 3D face mesh.
 *
 * File: include/faceaug/mesh/obj.hpp
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

#ifndef FACEAUG_MESH_OBJ_HPP
#define FACEAUG_MESH_OBJ_HPP

#include "faceaug/core/error.hpp"
#include "faceaug/core/text.hpp"
#include "faceaug/mesh/mesh.hpp"

#include <charconv>
#include <cmath>
#include <optional>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace faceaug {

/**
 * Parses the OBJ subset the pipeline consumes: `v x y z [r g b]` and `f i j k ...` lines.
 * Face indices are 1-based (negative indices are relative to the current vertex count);
 * `/vt/vn` suffixes are stripped; polygons are fan-triangulated as (1,2,3), (1,3,4), ...
 * Every other statement (vt, vn, g, o, s, usemtl, mtllib, comments) is ignored.
 *
 * Vertex colours are captured when the `v` lines carry six numbers; they must do so either on
 * every `v` line or on none.
 *
 * @throws ParseError with the offending line number.
 */
inline Mesh parse_obj(std::string_view text)
{
    std::vector<Vec3> vertices;
    std::vector<Rgb> colors;
    std::vector<Triangle> triangles;
    std::size_t line_no = 0;
    std::optional<bool> has_colors;

    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t eol = text.find('\n', pos);
        const std::string_view line = text.substr(pos, eol == std::string_view::npos ? std::string_view::npos : eol - pos);
        pos = (eol == std::string_view::npos) ? text.size() + 1 : eol + 1;
        ++line_no;

        const auto tokens = detail::split_ws(line);
        if (tokens.empty() || tokens[0].front() == '#') {
            continue;
        }
        if (tokens[0] == "v") {
            if (tokens.size() != 4 && tokens.size() != 7) {
                throw ParseError("vertex needs 3 or 6 numbers", line_no);
            }
            double values[6];
            for (std::size_t i = 1; i < tokens.size(); ++i) {
                if (!detail::parse_double(tokens[i], values[i - 1]) || !std::isfinite(values[i - 1])) {
                    throw ParseError("bad number '" + std::string(tokens[i]) + "'", line_no);
                }
            }
            const bool colored = tokens.size() == 7;
            if (has_colors && *has_colors != colored) {
                throw ParseError("vertex colours present on some vertices only", line_no);
            }
            has_colors = colored;
            vertices.emplace_back(values[0], values[1], values[2]);
            if (colored) {
                for (int c = 3; c < 6; ++c) {
                    if (values[c] < 0.0 || values[c] > 1.0) {
                        throw ParseError("vertex colour outside [0, 1]", line_no);
                    }
                }
                colors.emplace_back(values[3], values[4], values[5]);
            }
        } else if (tokens[0] == "f") {
            if (tokens.size() < 4) {
                throw ParseError("face needs at least 3 vertices", line_no);
            }
            std::vector<std::uint32_t> polygon;
            for (std::size_t i = 1; i < tokens.size(); ++i) {
                const auto slash = tokens[i].find('/');
                long idx = 0;
                if (!detail::parse_long(tokens[i].substr(0, slash), idx) || idx == 0) {
                    throw ParseError("bad face index '" + std::string(tokens[i]) + "'", line_no);
                }
                const long resolved = idx > 0 ? idx - 1 : static_cast<long>(vertices.size()) + idx;
                if (resolved < 0 || resolved >= static_cast<long>(vertices.size())) {
                    throw ParseError("face index " + std::to_string(idx) + " out of range (" +
                                         std::to_string(vertices.size()) + " vertices)",
                                     line_no);
                }
                polygon.push_back(static_cast<std::uint32_t>(resolved));
            }
            for (std::size_t i = 1; i + 1 < polygon.size(); ++i) {
                triangles.push_back({polygon[0], polygon[i], polygon[i + 1]});
            }
        }
    }
    if (vertices.empty() || triangles.empty()) {
        throw ParseError("empty mesh");
    }
    std::optional<std::vector<Rgb>> vertex_colors;
    if (has_colors.value_or(false)) {
        vertex_colors = std::move(colors);
    }
    try {
        return make_mesh(std::move(vertices), std::move(triangles), std::move(vertex_colors));
    } catch (const Error& e) {
        throw ParseError(e.what());
    }
}

/**
 * `v x y z [r g b]` lines followed by 1-based `f a b c` lines. Numbers use the shortest decimal
 * form that parses back to the identical double (short decimals such as 0.25 stay short), so
 * parse_obj(serialize_obj(m)) is exact.
 */
inline std::string serialize_obj(const Mesh& mesh)
{
    std::string out;
    out.reserve(mesh.vertices.size() * 48 + mesh.triangles.size() * 24);
    for (std::size_t i = 0; i < mesh.vertices.size(); ++i) {
        out.push_back('v');
        for (int c = 0; c < 3; ++c) {
            detail::append_number(out, mesh.vertices[i][c]);
        }
        if (mesh.vertex_colors) {
            for (int c = 0; c < 3; ++c) {
                detail::append_number(out, (*mesh.vertex_colors)[i][c]);
            }
        }
        out.push_back('\n');
    }
    char buf[64];
    for (const auto& tri : mesh.triangles) {
        const int n = std::snprintf(buf, sizeof(buf), "f %u %u %u\n", tri[0] + 1, tri[1] + 1, tri[2] + 1);
        out.append(buf, static_cast<std::size_t>(n));
    }
    return out;
}

inline Mesh read_obj(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error("cannot open OBJ file " + path.string());
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_obj(ss.str());
}

inline void write_obj(const std::filesystem::path& path, const Mesh& mesh)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw Error("cannot write OBJ file " + path.string());
    }
    out << serialize_obj(mesh);
}

} // namespace faceaug

#endif // FACEAUG_MESH_OBJ_HPP
