/*
 * faceaug - Geometric face data augmentation from a single image and a 3D face mesh.
 *
 * File: include/faceaug/pipeline/config.hpp
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

#ifndef FACEAUG_PIPELINE_CONFIG_HPP
#define FACEAUG_PIPELINE_CONFIG_HPP

#include "faceaug/annotate/landmarks.hpp"
#include "faceaug/core/error.hpp"
#include "faceaug/core/text.hpp"
#include "faceaug/pose/admissibility.hpp"
#include "faceaug/render/shading.hpp"
#include "faceaug/sampler/planner.hpp"
#include "faceaug/sampler/strategy.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <string_view>

namespace faceaug {

enum class SamplingScheme { random, entropy };
enum class MeshSource { per_record, generic };
enum class BackgroundMode { source, solid };

inline std::string_view to_string(SamplingScheme s) { return s == SamplingScheme::random ? "random" : "entropy"; }
inline std::string_view to_string(MeshSource s) { return s == MeshSource::per_record ? "per_record" : "generic"; }
inline std::string_view to_string(BackgroundMode b) { return b == BackgroundMode::source ? "source" : "solid"; }

/**
 * Settings of an augmentation run.
 *
 * Ranges: ratio_cap finite and >= 0; entropy_cutoff >= 0; near_frontal_deg in (0, 90];
 * pitch_cap_deg in [0, 90]; emission_weight in [0, 1]; ambient >= 0; light_* > 0; tau in (0, 1];
 * yaw_edges positive and strictly ascending;
 * head_resolution >= 8; workers and render_threads >= 1; max_failure_rate in [0, 1].
 *
 * With mesh_source = per_record, records without a mesh fall back to the generic mesh, which is
 * generic_mesh when set and the built-in synthetic head otherwise.
 */
struct RunConfig
{
    Task task = Task::landmark;
    SamplingScheme scheme = SamplingScheme::random;
    PlanConfig plan;
    double near_frontal_deg = default_near_frontal_deg;
    double pitch_cap_deg = default_pitch_cap_deg;
    RenderConfig render;
    BackgroundMode background = BackgroundMode::source;
    Rgb background_color = Rgb::Zero();
    VisibilityConfig visibility;
    std::uint64_t seed = 0;
    MeshSource mesh_source = MeshSource::per_record;
    std::filesystem::path generic_mesh;
    std::filesystem::path generic_mesh_landmarks;
    int head_resolution = 36;
    int workers = 1;
    double max_failure_rate = 0.2;

    void validate() const
    {
        const auto require = [](bool ok, const char* msg) {
            if (!ok) {
                throw InvalidArgument(std::string("RunConfig: ") + msg);
            }
        };
        plan.validate();
        render.validate();
        visibility.validate();
        require(near_frontal_deg > 0.0 && near_frontal_deg <= 90.0, "near_frontal_deg must lie in (0, 90]");
        require(pitch_cap_deg >= 0.0 && pitch_cap_deg <= 90.0, "pitch_cap_deg must lie in [0, 90]");
        require(render.rig.radius_factor > 0.0 && render.rig.intensity > 0.0 && render.rig.cone_half_angle_deg > 0.0 &&
                    render.rig.cone_half_angle_deg < 180.0 && render.rig.falloff_exponent > 0.0,
                "light parameters must be positive (cone below 180 deg)");
        require(visibility.tau <= 1.0, "tau must lie in (0, 1]");
        require(background_color.allFinite() && background_color.minCoeff() >= 0.0 && background_color.maxCoeff() <= 1.0,
                "background_color components must lie in [0, 1]");
        require(head_resolution >= 8, "head_resolution must be >= 8");
        require(workers >= 1, "workers must be >= 1");
        require(max_failure_rate >= 0.0 && max_failure_rate <= 1.0, "max_failure_rate must lie in [0, 1]");
        PoseHistogram::with_edges(plan.yaw_edges);
        require(generic_mesh_landmarks.empty() || !generic_mesh.empty(), "generic_mesh_landmarks needs generic_mesh");
    }
};

namespace detail {

inline double config_double(std::string_view v, const std::string& key)
{
    double d = 0.0;
    if (!parse_double(v, d) || !std::isfinite(d)) {
        throw InvalidArgument("'" + key + "' expects a number, got '" + std::string(v) + "'");
    }
    return d;
}

inline long config_long(std::string_view v, const std::string& key)
{
    long n = 0;
    if (!parse_long(v, n)) {
        throw InvalidArgument("'" + key + "' expects an integer, got '" + std::string(v) + "'");
    }
    return n;
}

inline bool config_bool(std::string_view v, const std::string& key)
{
    if (v == "true" || v == "1" || v == "yes" || v == "on") {
        return true;
    }
    if (v == "false" || v == "0" || v == "no" || v == "off") {
        return false;
    }
    throw InvalidArgument("'" + key + "' expects true or false, got '" + std::string(v) + "'");
}

inline std::vector<double> config_list(std::string_view v, const std::string& key)
{
    std::vector<double> out;
    for (const auto field : split(v, ',')) {
        out.push_back(config_double(trim(field), key));
    }
    return out;
}

using ConfigSetter = std::function<void(RunConfig&, std::string_view, const std::string&)>;

inline const std::map<std::string, ConfigSetter, std::less<>>& config_setters()
{
    static const std::map<std::string, ConfigSetter, std::less<>> setters = {
        {"task", [](RunConfig& c, std::string_view v, const std::string&) { c.task = task_from_string(v); }},
        {"scheme",
         [](RunConfig& c, std::string_view v, const std::string& k) {
             if (v == "random") {
                 c.scheme = SamplingScheme::random;
             } else if (v == "entropy") {
                 c.scheme = SamplingScheme::entropy;
             } else {
                 throw InvalidArgument("'" + k + "' expects random or entropy");
             }
         }},
        {"ratio_cap", [](RunConfig& c, std::string_view v, const std::string& k) { c.plan.ratio_cap = config_double(v, k); }},
        {"entropy_cutoff",
         [](RunConfig& c, std::string_view v, const std::string& k) { c.plan.entropy_cutoff = config_double(v, k); }},
        {"yaw_edges", [](RunConfig& c, std::string_view v, const std::string& k) { c.plan.yaw_edges = config_list(v, k); }},
        {"augment_pose",
         [](RunConfig& c, std::string_view v, const std::string& k) { c.plan.augment_pose = config_bool(v, k); }},
        {"augment_illumination",
         [](RunConfig& c, std::string_view v, const std::string& k) { c.plan.augment_illumination = config_bool(v, k); }},
        {"near_frontal_deg",
         [](RunConfig& c, std::string_view v, const std::string& k) { c.near_frontal_deg = config_double(v, k); }},
        {"pitch_cap_deg", [](RunConfig& c, std::string_view v, const std::string& k) { c.pitch_cap_deg = config_double(v, k); }},
        {"emission_weight",
         [](RunConfig& c, std::string_view v, const std::string& k) { c.render.emission_weight = config_double(v, k); }},
        {"ambient", [](RunConfig& c, std::string_view v, const std::string& k) { c.render.ambient = config_double(v, k); }},
        {"light_radius_factor",
         [](RunConfig& c, std::string_view v, const std::string& k) { c.render.rig.radius_factor = config_double(v, k); }},
        {"light_intensity",
         [](RunConfig& c, std::string_view v, const std::string& k) { c.render.rig.intensity = config_double(v, k); }},
        {"light_cone_deg",
         [](RunConfig& c, std::string_view v, const std::string& k) { c.render.rig.cone_half_angle_deg = config_double(v, k); }},
        {"light_falloff",
         [](RunConfig& c, std::string_view v, const std::string& k) { c.render.rig.falloff_exponent = config_double(v, k); }},
        {"render_threads",
         [](RunConfig& c, std::string_view v, const std::string& k) { c.render.threads = static_cast<int>(config_long(v, k)); }},
        {"background",
         [](RunConfig& c, std::string_view v, const std::string& k) {
             if (v == "source") {
                 c.background = BackgroundMode::source;
             } else if (v == "solid") {
                 c.background = BackgroundMode::solid;
             } else {
                 throw InvalidArgument("'" + k + "' expects source or solid");
             }
         }},
        {"background_color",
         [](RunConfig& c, std::string_view v, const std::string& k) {
             const auto rgb = config_list(v, k);
             if (rgb.size() != 3) {
                 throw InvalidArgument("'" + k + "' expects r,g,b");
             }
             c.background_color = Rgb(rgb[0], rgb[1], rgb[2]);
         }},
        {"tau", [](RunConfig& c, std::string_view v, const std::string& k) { c.visibility.tau = config_double(v, k); }},
        {"seed",
         [](RunConfig& c, std::string_view v, const std::string& k) {
             std::uint64_t s = 0;
             const auto r = std::from_chars(v.data(), v.data() + v.size(), s);
             if (r.ec != std::errc() || r.ptr != v.data() + v.size()) {
                 throw InvalidArgument("'" + k + "' expects a non-negative integer");
             }
             c.seed = s;
         }},
        {"mesh_source",
         [](RunConfig& c, std::string_view v, const std::string& k) {
             if (v == "per_record") {
                 c.mesh_source = MeshSource::per_record;
             } else if (v == "generic") {
                 c.mesh_source = MeshSource::generic;
             } else {
                 throw InvalidArgument("'" + k + "' expects per_record or generic");
             }
         }},
        {"generic_mesh", [](RunConfig& c, std::string_view v, const std::string&) { c.generic_mesh = std::string(v); }},
        {"generic_mesh_landmarks",
         [](RunConfig& c, std::string_view v, const std::string&) { c.generic_mesh_landmarks = std::string(v); }},
        {"head_resolution",
         [](RunConfig& c, std::string_view v, const std::string& k) { c.head_resolution = static_cast<int>(config_long(v, k)); }},
        {"workers",
         [](RunConfig& c, std::string_view v, const std::string& k) { c.workers = static_cast<int>(config_long(v, k)); }},
        {"max_failure_rate",
         [](RunConfig& c, std::string_view v, const std::string& k) { c.max_failure_rate = config_double(v, k); }},
    };
    return setters;
}

} // namespace detail

/**
 * Parses a `key = value` config. Blank lines and lines starting with '#' are ignored; unknown or
 * repeated keys are errors. Relative mesh paths are resolved against \p base_dir. The result is
 * validated.
 *
 * @throws ParseError (with the line number) for malformed lines or values; InvalidArgument when
 *         a value is out of range.
 */
inline RunConfig parse_config(std::string_view text, const std::filesystem::path& base_dir = {})
{
    RunConfig config;
    std::set<std::string, std::less<>> seen;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t eol = text.find('\n', pos);
        const auto raw = text.substr(pos, eol == std::string_view::npos ? std::string_view::npos : eol - pos);
        pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
        ++line_no;
        const auto line = trim(raw);
        if (line.empty() || line.front() == '#') {
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw ParseError("expected 'key = value'", line_no);
        }
        const std::string key(trim(line.substr(0, eq)));
        const auto value = trim(line.substr(eq + 1));
        const auto& setters = detail::config_setters();
        const auto it = setters.find(key);
        if (it == setters.end()) {
            throw ParseError("unknown config key '" + key + "'", line_no);
        }
        if (!seen.insert(key).second) {
            throw ParseError("config key '" + key + "' given twice", line_no);
        }
        try {
            it->second(config, value, key);
        } catch (const InvalidArgument& e) {
            throw ParseError(e.what(), line_no);
        }
    }
    for (auto* p : {&config.generic_mesh, &config.generic_mesh_landmarks}) {
        if (!p->empty() && p->is_relative()) {
            *p = (base_dir / *p).lexically_normal();
        }
    }
    config.validate();
    return config;
}

inline RunConfig read_config(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw InvalidArgument("read_config: cannot open " + path.string());
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str(), path.parent_path());
}

/// Canonical text form; parse_config(format_config(c)) == c for every valid c.
inline std::string format_config(const RunConfig& c)
{
    std::string out;
    const auto put = [&out](std::string_view key, const std::string& value) {
        out.append(key).append(" = ").append(value).push_back('\n');
    };
    const auto list = [](const auto& values) {
        std::string s;
        for (const double v : values) {
            s += (s.empty() ? "" : ",") + format_double(v);
        }
        return s;
    };
    put("task", std::string(to_string(c.task)));
    put("scheme", std::string(to_string(c.scheme)));
    put("ratio_cap", format_double(c.plan.ratio_cap));
    put("entropy_cutoff", format_double(c.plan.entropy_cutoff));
    put("yaw_edges", list(c.plan.yaw_edges));
    put("augment_pose", c.plan.augment_pose ? "true" : "false");
    put("augment_illumination", c.plan.augment_illumination ? "true" : "false");
    put("near_frontal_deg", format_double(c.near_frontal_deg));
    put("pitch_cap_deg", format_double(c.pitch_cap_deg));
    put("emission_weight", format_double(c.render.emission_weight));
    put("ambient", format_double(c.render.ambient));
    put("light_radius_factor", format_double(c.render.rig.radius_factor));
    put("light_intensity", format_double(c.render.rig.intensity));
    put("light_cone_deg", format_double(c.render.rig.cone_half_angle_deg));
    put("light_falloff", format_double(c.render.rig.falloff_exponent));
    put("render_threads", std::to_string(c.render.threads));
    put("background", std::string(to_string(c.background)));
    put("background_color", list(std::array<double, 3>{c.background_color[0], c.background_color[1], c.background_color[2]}));
    put("tau", format_double(c.visibility.tau));
    put("seed", std::to_string(c.seed));
    put("mesh_source", std::string(to_string(c.mesh_source)));
    if (!c.generic_mesh.empty()) {
        put("generic_mesh", c.generic_mesh.string());
    }
    if (!c.generic_mesh_landmarks.empty()) {
        put("generic_mesh_landmarks", c.generic_mesh_landmarks.string());
    }
    put("head_resolution", std::to_string(c.head_resolution));
    put("workers", std::to_string(c.workers));
    put("max_failure_rate", format_double(c.max_failure_rate));
    return out;
}

} // namespace faceaug

#endif // FACEAUG_PIPELINE_CONFIG_HPP
