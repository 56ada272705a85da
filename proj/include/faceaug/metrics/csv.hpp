/*
 * faceaug - Geometric face data augmentation from a single image and a 3D face mesh.
 *
 * File: include/faceaug/metrics/csv.hpp
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

#ifndef FACEAUG_METRICS_CSV_HPP
#define FACEAUG_METRICS_CSV_HPP

#include "faceaug/core/error.hpp"
#include "faceaug/core/text.hpp"
#include "faceaug/metrics/identification.hpp"
#include "faceaug/metrics/verification.hpp"

#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

namespace faceaug {

/// Comma-separated rows with fields trimmed; blank lines and lines starting with '#' are skipped.
struct CsvRow
{
    std::size_t line = 0;
    std::vector<std::string> fields;
};

inline std::vector<CsvRow> parse_csv(std::string_view text)
{
    std::vector<CsvRow> rows;
    std::size_t line_no = 0;
    for (std::string_view line : split(text, '\n')) {
        ++line_no;
        line = trim(line);
        if (line.empty() || line.front() == '#') {
            continue;
        }
        CsvRow row{line_no, {}};
        for (auto f : split(line, ',')) {
            row.fields.emplace_back(trim(f));
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

inline std::string read_text_file(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error("cannot open " + path.string());
    }
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline double csv_number(const CsvRow& row, std::size_t col)
{
    double v;
    if (col >= row.fields.size() || !detail::parse_double(row.fields[col], v) || !std::isfinite(v)) {
        throw ParseError("expected a number in column " + std::to_string(col + 1), row.line);
    }
    return v;
}

inline bool csv_label(const CsvRow& row, std::size_t col)
{
    if (col < row.fields.size()) {
        const auto& f = row.fields[col];
        if (f == "1" || f == "genuine" || f == "true" || f == "mated") {
            return true;
        }
        if (f == "0" || f == "imposter" || f == "impostor" || f == "false" || f == "non-mated") {
            return false;
        }
    }
    throw ParseError("expected a genuine/imposter label in column " + std::to_string(col + 1), row.line);
}

// A first row whose numeric column does not parse is a header.
inline void drop_header(std::vector<CsvRow>& rows, std::size_t numeric_col)
{
    double v;
    if (!rows.empty() &&
        (numeric_col >= rows.front().fields.size() || !detail::parse_double(rows.front().fields[numeric_col], v))) {
        rows.erase(rows.begin());
    }
}

/// Score file rows: id_a, id_b, score, label[, yaw_a, yaw_b].
struct ScoreRow
{
    std::string id_a;
    std::string id_b;
    ScoredPair pair;
    bool has_yaw = false;
};

inline std::vector<ScoreRow> parse_score_csv(std::string_view text)
{
    auto rows = parse_csv(text);
    drop_header(rows, 2);
    std::vector<ScoreRow> out;
    for (const auto& row : rows) {
        if (row.fields.size() != 4 && row.fields.size() != 6) {
            throw ParseError("score rows need 4 or 6 columns", row.line);
        }
        ScoreRow r;
        r.id_a = row.fields[0];
        r.id_b = row.fields[1];
        r.pair.score = csv_number(row, 2);
        r.pair.genuine = csv_label(row, 3);
        if (row.fields.size() == 6) {
            r.pair.yaw_a = csv_number(row, 4);
            r.pair.yaw_b = csv_number(row, 5);
            r.has_yaw = true;
        }
        out.push_back(std::move(r));
    }
    return out;
}

inline ScoreSet to_score_set(const std::vector<ScoreRow>& rows)
{
    ScoreSet s;
    for (const auto& r : rows) {
        (r.pair.genuine ? s.genuine : s.imposter).push_back(r.pair.score);
    }
    return s;
}

/// Embedding rows: role (gallery|probe), identity (may be empty for probes), v1, ..., vn.
inline std::pair<std::vector<GalleryEntry>, std::vector<Probe>> parse_embedding_csv(std::string_view text)
{
    auto rows = parse_csv(text);
    drop_header(rows, 2);
    std::vector<GalleryEntry> gallery;
    std::vector<Probe> probes;
    for (const auto& row : rows) {
        if (row.fields.size() < 3) {
            throw ParseError("embedding rows need role, identity and at least one value", row.line);
        }
        Embedding e(static_cast<Eigen::Index>(row.fields.size() - 2));
        for (std::size_t i = 2; i < row.fields.size(); ++i) {
            e[static_cast<Eigen::Index>(i - 2)] = csv_number(row, i);
        }
        if (row.fields[0] == "gallery") {
            gallery.push_back({row.fields[1], std::move(e)});
        } else if (row.fields[0] == "probe") {
            Probe p;
            if (!row.fields[1].empty()) {
                p.identity = row.fields[1];
            }
            p.embedding = std::move(e);
            probes.push_back(std::move(p));
        } else {
            throw ParseError("role must be 'gallery' or 'probe'", row.line);
        }
    }
    return {std::move(gallery), std::move(probes)};
}

} // namespace faceaug

#endif // FACEAUG_METRICS_CSV_HPP
