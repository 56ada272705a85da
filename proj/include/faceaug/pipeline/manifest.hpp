/*
 * faceaug - Geometric face data augmentation from a single image and a 3D face mesh.
 *
 * File: include/faceaug/pipeline/manifest.hpp
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

#ifndef FACEAUG_PIPELINE_MANIFEST_HPP
#define FACEAUG_PIPELINE_MANIFEST_HPP

#include "faceaug/annotate/alignment.hpp"
#include "faceaug/annotate/face.hpp"
#include "faceaug/annotate/labels.hpp"
#include "faceaug/core/error.hpp"
#include "faceaug/pose/pose.hpp"

#include "json.hpp"

#include <array>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace faceaug {

inline constexpr std::string_view manifest_schema = "faceaug-manifest";
inline constexpr int manifest_version = 1;
/// Environment variable that replaces the manifest's declared root.
inline constexpr const char* root_env_var = "FACEAUG_ROOT";

/**
 * First line of a manifest. Real records resolve their paths under root (relative roots are taken
 * from the manifest's directory); synthetic records resolve under synthetic_root when declared.
 */
struct ManifestHeader
{
    std::string root = ".";
    std::optional<std::string> synthetic_root;
    std::string units = "pixels";
    AlignmentTemplate alignment = AlignmentTemplate::standard();
};

/**
 * One record line. face.image_width/height stay 0 until the image is loaded. raw keeps the
 * verbatim input line so real records can be re-emitted unchanged.
 */
struct ManifestRecord
{
    AnnotatedFace face;
    std::optional<double> yaw_label;
    std::optional<double> pitch_label;
    std::optional<std::string> mesh;
    std::optional<std::string> mesh_landmarks;
    std::optional<RigidPose> pose;
    std::string raw;
    std::size_t line = 0;
};

/// A record line that could not be parsed.
struct RejectedLine
{
    std::size_t line = 0;
    std::string message;
};

struct DatasetManifest
{
    ManifestHeader header;
    std::filesystem::path base_dir; ///< directory relative roots are resolved against
    std::optional<std::string> root_override;
    std::vector<ManifestRecord> records;
    std::vector<RejectedLine> rejected;

    std::filesystem::path root_path() const
    {
        const std::filesystem::path root = root_override ? *root_override : header.root;
        return (root.is_absolute() ? root : base_dir / root).lexically_normal();
    }

    std::filesystem::path resolve(const std::string& path, bool synthetic) const
    {
        const std::filesystem::path p(path);
        if (p.is_absolute()) {
            return p;
        }
        if (synthetic && header.synthetic_root) {
            const std::filesystem::path s(*header.synthetic_root);
            return ((s.is_absolute() ? s : base_dir / s) / p).lexically_normal();
        }
        return (root_path() / p).lexically_normal();
    }

    std::size_t real_count() const
    {
        std::size_t n = 0;
        for (const auto& r : records) {
            n += r.face.is_synthetic ? 0 : 1;
        }
        return n;
    }
};

/// Value of FACEAUG_ROOT, if set and non-empty.
inline std::optional<std::string> root_override_from_env()
{
    const char* value = std::getenv(root_env_var);
    if (value == nullptr || *value == '\0') {
        return std::nullopt;
    }
    return std::string(value);
}

namespace detail {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

inline double json_number(const json& j, const char* what)
{
    if (!j.is_number()) {
        throw InvalidArgument(std::string("manifest: '") + what + "' must be a number");
    }
    const double v = j.get<double>();
    if (!std::isfinite(v)) {
        throw InvalidArgument(std::string("manifest: '") + what + "' must be finite");
    }
    return v;
}

inline std::string json_string(const json& j, const char* what)
{
    if (j.is_string()) {
        return j.get<std::string>();
    }
    if (j.is_number()) {
        return j.dump();
    }
    throw InvalidArgument(std::string("manifest: '") + what + "' must be a string");
}

inline std::optional<std::string> optional_string(const json& obj, const char* key)
{
    const auto it = obj.find(key);
    if (it == obj.end() || it->is_null()) {
        return std::nullopt;
    }
    return json_string(*it, key);
}

inline LandmarkSet landmarks_from_json(const json& j)
{
    if (!j.is_array() || j.size() != landmark_count) {
        throw InvalidArgument("manifest: 'landmarks' must hold 68 points");
    }
    LandmarkSet out;
    for (std::size_t i = 0; i < landmark_count; ++i) {
        const auto& p = j[i];
        if (!p.is_array() || (p.size() != 2 && p.size() != 3)) {
            throw InvalidArgument("manifest: landmark " + std::to_string(i) + " must be [x, y] or [x, y, v]");
        }
        out.points[i] = Vec2(json_number(p[0], "landmarks"), json_number(p[1], "landmarks"));
        if (p.size() == 3) {
            const double v = json_number(p[2], "landmarks");
            if (v != 0.0 && v != 1.0) {
                throw InvalidArgument("manifest: landmark visibility must be 0 or 1");
            }
            out.visible[i] = v == 1.0;
        }
    }
    return out;
}

inline RigidPose pose_from_json(const json& j)
{
    if (!j.is_object() || !j.contains("rotation") || !j.contains("translation")) {
        throw InvalidArgument("manifest: 'pose' needs 'rotation' (9 numbers) and 'translation' (3 numbers)");
    }
    const auto& r = j["rotation"];
    const auto& t = j["translation"];
    if (!r.is_array() || r.size() != 9 || !t.is_array() || t.size() != 3) {
        throw InvalidArgument("manifest: 'pose' needs 'rotation' (9 numbers) and 'translation' (3 numbers)");
    }
    RigidPose pose;
    for (int i = 0; i < 9; ++i) {
        pose.rotation(i / 3, i % 3) = json_number(r[i], "pose.rotation");
    }
    for (int i = 0; i < 3; ++i) {
        pose.translation[i] = json_number(t[i], "pose.translation");
    }
    if (j.contains("scale")) {
        pose.scale = json_number(j["scale"], "pose.scale");
    }
    pose.validate();
    return pose;
}

inline ordered_json pose_to_json(const RigidPose& pose)
{
    ordered_json j;
    j["rotation"] = ordered_json::array();
    for (int i = 0; i < 9; ++i) {
        j["rotation"].push_back(pose.rotation(i / 3, i % 3));
    }
    j["translation"] = {pose.translation.x(), pose.translation.y(), pose.translation.z()};
    j["scale"] = pose.scale;
    return j;
}

inline ManifestHeader parse_header(std::string_view line)
{
    json j;
    try {
        j = json::parse(line);
    } catch (const json::exception& e) {
        throw ParseError(std::string("manifest header: ") + e.what(), 1);
    }
    if (!j.is_object() || j.value("schema", std::string()) != manifest_schema) {
        throw ParseError("manifest header: schema must be \"" + std::string(manifest_schema) + "\"", 1);
    }
    if (!j.contains("version") || !j["version"].is_number_integer() || j["version"].get<int>() != manifest_version) {
        throw ParseError("manifest header: unsupported version (expected " + std::to_string(manifest_version) + ")", 1);
    }
    ManifestHeader h;
    try {
        h.root = optional_string(j, "root").value_or(".");
        h.synthetic_root = optional_string(j, "synthetic_root");
        h.units = optional_string(j, "units").value_or("pixels");
        if (h.units != "pixels") {
            throw InvalidArgument("manifest header: units must be \"pixels\"");
        }
        if (j.contains("template")) {
            const auto& t = j["template"];
            h.alignment.output_size = t.value("size", 112);
            const auto& pts = t.at("points");
            if (!pts.is_array() || pts.size() != 5 || h.alignment.output_size <= 0) {
                throw InvalidArgument("manifest header: template needs a positive size and 5 points");
            }
            for (std::size_t i = 0; i < 5; ++i) {
                h.alignment.points[i] = Vec2(json_number(pts[i].at(0), "template"), json_number(pts[i].at(1), "template"));
            }
        }
    } catch (const json::exception& e) {
        throw ParseError(std::string("manifest header: ") + e.what(), 1);
    } catch (const InvalidArgument& e) {
        throw ParseError(e.what(), 1);
    }
    return h;
}

} // namespace detail

/**
 * Parses one record line. Paths stay as written; landmarks_file (if used instead of inline
 * landmarks) is resolved through \p manifest and read immediately.
 */
inline ManifestRecord parse_manifest_record(std::string_view line, const DatasetManifest& manifest,
                                            std::size_t line_no = 0)
{
    using detail::json;
    json j;
    try {
        j = json::parse(line);
    } catch (const json::exception& e) {
        throw ParseError(e.what(), line_no);
    }
    if (!j.is_object()) {
        throw ParseError("record must be a JSON object", line_no);
    }
    ManifestRecord rec;
    rec.raw = std::string(line);
    rec.line = line_no;
    auto& f = rec.face;
    try {
        f.image = detail::optional_string(j, "image").value_or("");
        f.identity = detail::optional_string(j, "identity").value_or("");
        if (f.image.empty() || f.identity.empty()) {
            throw InvalidArgument("record needs non-empty 'image' and 'identity'");
        }
        f.age = detail::optional_string(j, "age").value_or("");
        f.gender = detail::optional_string(j, "gender").value_or("");
        f.is_synthetic = j.value("synthetic", false);
        if (const auto light = detail::optional_string(j, "light")) {
            f.light_id = light_id_from_string(*light);
        }
        if (j.contains("landmarks")) {
            f.landmarks = detail::landmarks_from_json(j["landmarks"]);
        } else if (const auto file = detail::optional_string(j, "landmarks_file")) {
            const auto sets = read_landmark_file(manifest.resolve(*file, f.is_synthetic));
            const auto index = j.value("landmarks_index", std::size_t{0});
            if (index >= sets.size()) {
                throw InvalidArgument("landmarks_index " + std::to_string(index) + " out of range for " + *file);
            }
            f.landmarks = sets[index];
        } else {
            throw InvalidArgument("record needs 'landmarks' or 'landmarks_file'");
        }
        if (j.contains("five_points")) {
            const auto& fp = j["five_points"];
            if (!fp.is_array() || fp.size() != 5) {
                throw InvalidArgument("'five_points' must hold 5 landmark indices");
            }
            for (std::size_t i = 0; i < 5; ++i) {
                const auto idx = fp[i].get<long>();
                if (idx < 0 || idx >= static_cast<long>(landmark_count)) {
                    throw InvalidArgument("'five_points' index out of range");
                }
                f.five_points[i] = static_cast<std::uint8_t>(idx);
            }
        }
        if (j.contains("bbox")) {
            const auto& b = j["bbox"];
            if (!b.is_array() || b.size() != 4) {
                throw InvalidArgument("'bbox' must be [x, y, width, height]");
            }
            f.bbox = {detail::json_number(b[0], "bbox"), detail::json_number(b[1], "bbox"),
                      detail::json_number(b[2], "bbox"), detail::json_number(b[3], "bbox")};
        } else {
            f.bbox = landmark_box(f.landmarks);
        }
        if (j.contains("yaw") && !j["yaw"].is_null()) {
            rec.yaw_label = detail::json_number(j["yaw"], "yaw");
            f.yaw_deg = *rec.yaw_label;
        }
        if (j.contains("pitch") && !j["pitch"].is_null()) {
            rec.pitch_label = detail::json_number(j["pitch"], "pitch");
            f.pitch_deg = *rec.pitch_label;
        }
        rec.mesh = detail::optional_string(j, "mesh");
        rec.mesh_landmarks = detail::optional_string(j, "mesh_landmarks");
        if (j.contains("pose") && !j["pose"].is_null()) {
            rec.pose = detail::pose_from_json(j["pose"]);
        }
    } catch (const json::exception& e) {
        throw ParseError(e.what(), line_no);
    } catch (const ParseError&) {
        throw;
    } catch (const Error& e) {
        throw ParseError(e.what(), line_no);
    }
    return rec;
}

/**
 * Parses manifest text: a header line followed by one JSON record per line. Blank lines are
 * skipped. Bad record lines land in DatasetManifest::rejected; a bad header throws ParseError.
 * An empty text is an empty manifest with a default header.
 */
inline DatasetManifest parse_manifest(std::string_view text, const std::filesystem::path& base_dir = {},
                                      std::optional<std::string> root_override = std::nullopt)
{
    DatasetManifest m;
    m.base_dir = base_dir;
    m.root_override = std::move(root_override);
    std::size_t line_no = 0;
    bool have_header = false;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t eol = text.find('\n', pos);
        std::string_view line = text.substr(pos, eol == std::string_view::npos ? std::string_view::npos : eol - pos);
        pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
        ++line_no;
        if (!line.empty() && line.back() == '\r') {
            line.remove_suffix(1);
        }
        if (trim(line).empty()) {
            continue;
        }
        if (!have_header) {
            if (line_no != 1) {
                throw ParseError("manifest header must be the first line", line_no);
            }
            m.header = detail::parse_header(line);
            have_header = true;
            continue;
        }
        try {
            m.records.push_back(parse_manifest_record(line, m, line_no));
        } catch (const ParseError& e) {
            m.rejected.push_back({line_no, e.what()});
        }
    }
    return m;
}

/// Reads a manifest file; FACEAUG_ROOT (if set) replaces the declared root.
inline DatasetManifest read_manifest(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw InvalidArgument("read_manifest: cannot open " + path.string());
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_manifest(ss.str(), path.parent_path(), root_override_from_env());
}

inline std::string format_manifest_header(const ManifestHeader& h)
{
    detail::ordered_json j;
    j["schema"] = manifest_schema;
    j["version"] = manifest_version;
    j["root"] = h.root;
    if (h.synthetic_root) {
        j["synthetic_root"] = *h.synthetic_root;
    }
    j["units"] = h.units;
    j["template"]["size"] = h.alignment.output_size;
    j["template"]["points"] = detail::ordered_json::array();
    for (const auto& p : h.alignment.points) {
        j["template"]["points"].push_back({p.x(), p.y()});
    }
    return j.dump();
}

/// Provenance fields written with every synthesized record.
struct SyntheticSource
{
    std::string image;
    std::size_t line = 0;
    ViewSpec view;
};

/// One manifest line for a face. Landmarks are written as [x, y, v] triples.
inline std::string format_manifest_record(const AnnotatedFace& f, const std::optional<SyntheticSource>& source = {})
{
    detail::ordered_json j;
    j["image"] = f.image;
    j["identity"] = f.identity;
    j["age"] = f.age;
    j["gender"] = f.gender;
    j["yaw"] = f.yaw_deg;
    j["pitch"] = f.pitch_deg;
    j["bbox"] = {f.bbox.x, f.bbox.y, f.bbox.width, f.bbox.height};
    j["five_points"] = detail::ordered_json::array();
    for (const auto idx : f.five_points) {
        j["five_points"].push_back(int(idx));
    }
    j["landmarks"] = detail::ordered_json::array();
    for (std::size_t i = 0; i < landmark_count; ++i) {
        const auto& p = f.landmarks.points[i];
        j["landmarks"].push_back({p.x(), p.y(), f.landmarks.visible[i] ? 1 : 0});
    }
    j["synthetic"] = f.is_synthetic;
    if (f.light_id) {
        j["light"] = std::string(to_string(*f.light_id));
    } else {
        j["light"] = nullptr;
    }
    if (source) {
        j["source"] = source->image;
        j["source_line"] = source->line;
        j["view"]["yaw"] = source->view.offsets.yaw;
        j["view"]["pitch"] = source->view.offsets.pitch;
    }
    return j.dump();
}

} // namespace faceaug

#endif // FACEAUG_PIPELINE_MANIFEST_HPP
