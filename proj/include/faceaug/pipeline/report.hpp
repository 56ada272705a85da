/*
 * faceaug - Geometric face data augmentation from a single image and a 3D face mesh.
 *
 * File: include/faceaug/pipeline/report.hpp
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

#ifndef FACEAUG_PIPELINE_REPORT_HPP
#define FACEAUG_PIPELINE_REPORT_HPP

#include "faceaug/core/error.hpp"
#include "faceaug/core/text.hpp"
#include "faceaug/pipeline/manifest.hpp"
#include "faceaug/sampler/entropy.hpp"
#include "faceaug/sampler/planner.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <string>
#include <vector>

namespace faceaug {

/// One step of the cumulative entropy curves: the quantile-th smallest entropy before and after.
struct EntropyCurvePoint
{
    double quantile = 0.0;
    double before = 0.0;
    double after = 0.0;
};

/**
 * Sorted cumulative curves over identities. Row k holds the (k+1)-th smallest entropy of each
 * column at quantile (k+1)/n; the two columns are sorted independently.
 */
inline std::vector<EntropyCurvePoint> cumulative_entropy_curve(const std::vector<EntropyChange>& changes)
{
    std::vector<double> before, after;
    for (const auto& c : changes) {
        before.push_back(c.before);
        after.push_back(c.after);
    }
    std::sort(before.begin(), before.end());
    std::sort(after.begin(), after.end());
    std::vector<EntropyCurvePoint> curve;
    const double n = static_cast<double>(changes.size());
    for (std::size_t k = 0; k < changes.size(); ++k) {
        curve.push_back({static_cast<double>(k + 1) / n, before[k], after[k]});
    }
    return curve;
}

namespace detail {

inline std::string csv_field(const std::string& s)
{
    if (s.find_first_of(",\"\n\r") == std::string::npos) {
        return s;
    }
    std::string out = "\"";
    for (const char c : s) {
        if (c == '"') {
            out += '"';
        }
        out += c;
    }
    return out + '"';
}

inline void write_text_file(const std::filesystem::path& path, const std::string& text)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw InvalidArgument("cannot write " + path.string());
    }
    out << text;
    if (!out) {
        throw InvalidArgument("failed writing " + path.string());
    }
}

} // namespace detail

inline std::string entropy_report_csv(const std::vector<EntropyChange>& changes)
{
    std::string out = "identity,entropy_before,entropy_after,selected\n";
    for (const auto& c : changes) {
        out += detail::csv_field(c.identity) + ',' + format_double(c.before) + ',' + format_double(c.after) + ',' +
               (c.selected ? "1" : "0") + '\n';
    }
    return out;
}

inline std::string entropy_curve_csv(const std::vector<EntropyChange>& changes)
{
    std::string out = "quantile,entropy_before,entropy_after\n";
    for (const auto& p : cumulative_entropy_curve(changes)) {
        out += format_double(p.quantile) + ',' + format_double(p.before) + ',' + format_double(p.after) + '\n';
    }
    return out;
}

/// Writes entropy.csv and entropy_curve.csv into \p dir (created if needed).
inline void emit_entropy_report(const std::vector<EntropyChange>& changes, const std::filesystem::path& dir)
{
    std::filesystem::create_directories(dir);
    detail::write_text_file(dir / "entropy.csv", entropy_report_csv(changes));
    detail::write_text_file(dir / "entropy_curve.csv", entropy_curve_csv(changes));
}

/**
 * Per-identity yaw entropy of a manifest: before counts the real records, after adds the
 * synthetic ones. Real records without a yaw label are ignored. selected marks identities that
 * gained synthetic records.
 */
inline std::vector<EntropyChange> entropy_changes_from_manifest(const DatasetManifest& manifest,
                                                                const std::vector<double>& yaw_edges = default_yaw_edges())
{
    std::vector<std::string> ids;
    std::map<std::string, std::pair<PoseHistogram, PoseHistogram>> hists;
    std::map<std::string, bool> gained;
    for (const auto& r : manifest.records) {
        const bool has_yaw = r.face.is_synthetic || r.yaw_label.has_value();
        if (!has_yaw) {
            continue;
        }
        auto [it, inserted] = hists.try_emplace(r.face.identity, PoseHistogram::with_edges(yaw_edges),
                                                PoseHistogram::with_edges(yaw_edges));
        if (inserted) {
            ids.push_back(r.face.identity);
        }
        if (!r.face.is_synthetic) {
            it->second.first.add(r.face.yaw_deg);
        } else {
            gained[r.face.identity] = true;
        }
        it->second.second.add(r.face.yaw_deg);
    }
    std::vector<EntropyChange> out;
    for (const auto& id : ids) {
        const auto& [before, after] = hists.at(id);
        if (before.total() == 0) {
            continue; // synthetic-only identity, no real baseline
        }
        out.push_back({id, yaw_entropy(before), yaw_entropy(after), gained.count(id) > 0});
    }
    return out;
}

} // namespace faceaug

#endif // FACEAUG_PIPELINE_REPORT_HPP
