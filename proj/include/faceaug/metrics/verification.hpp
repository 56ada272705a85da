/*
 * faceaug - Geometric face data augmentation from a single image and a 3D face mesh.
 *
 * File: include/faceaug/metrics/verification.hpp
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

#ifndef FACEAUG_METRICS_VERIFICATION_HPP
#define FACEAUG_METRICS_VERIFICATION_HPP

#include "faceaug/core/error.hpp"
#include "faceaug/core/yaw_groups.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace faceaug {

/// Similarity scores, higher meaning more similar.
struct ScoreSet
{
    std::vector<double> genuine;
    std::vector<double> imposter;
};

struct OperatingPoint
{
    double rate = 0.0;      ///< TAR (or TPIR)
    double threshold = 0.0; ///< a score passes when score >= threshold
};

namespace detail {

inline std::size_t count_at_least(const std::vector<double>& sorted, double t)
{
    return static_cast<std::size_t>(sorted.end() - std::lower_bound(sorted.begin(), sorted.end(), t));
}

inline std::vector<double> sorted_copy(std::span<const double> v)
{
    std::vector<double> s(v.begin(), v.end());
    for (double x : s) {
        if (std::isnan(x)) {
            throw InvalidArgument("score is NaN");
        }
    }
    std::sort(s.begin(), s.end());
    return s;
}

/**
 * Smallest candidate score t with #{negatives >= t} / #negatives <= target. Without such a
 * candidate the threshold sits just above the largest candidate, where nothing passes.
 */
inline double empirical_threshold(const std::vector<double>& negatives_sorted, std::vector<double> candidates,
                                  double target)
{
    const double n = static_cast<double>(negatives_sorted.size());
    std::sort(candidates.begin(), candidates.end());
    candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());
    // The pass rate is non-increasing in t, so binary search for the first qualifying candidate.
    const auto it = std::partition_point(candidates.begin(), candidates.end(), [&](double t) {
        return static_cast<double>(count_at_least(negatives_sorted, t)) / n > target;
    });
    if (it == candidates.end()) {
        return std::nextafter(candidates.back(), std::numeric_limits<double>::infinity());
    }
    return *it;
}

inline void check_rate_target(double target, std::size_t negatives, const char* what)
{
    if (!(target > 0.0 && target < 1.0)) {
        throw InvalidArgument(std::string(what) + ": target rate must lie in (0, 1)");
    }
    if (negatives == 0) {
        throw InvalidArgument(std::string(what) + ": no negative scores to calibrate against");
    }
    if (target < 1.0 / static_cast<double>(negatives)) {
        throw UnsupportedOperatingPoint(std::string(what) + ": target rate below 1/#negatives resolution");
    }
}

} // namespace detail

/**
 * Empirical ROC operating point: the threshold is the smallest observed score whose imposter pass
 * rate is at most \p far, and TAR is the genuine pass rate there.
 *
 * @throws InvalidArgument unless 0 < far < 1 and both score lists are non-empty;
 *         UnsupportedOperatingPoint when far < 1 / #imposter.
 */
inline OperatingPoint roc_tar_at_far(const ScoreSet& s, double far)
{
    if (s.genuine.empty()) {
        throw InvalidArgument("roc_tar_at_far: no genuine scores");
    }
    detail::check_rate_target(far, s.imposter.size(), "roc_tar_at_far");
    const auto imp = detail::sorted_copy(s.imposter);
    const auto gen = detail::sorted_copy(s.genuine);
    std::vector<double> candidates = imp;
    candidates.insert(candidates.end(), gen.begin(), gen.end());
    const double t = detail::empirical_threshold(imp, std::move(candidates), far);
    return {static_cast<double>(detail::count_at_least(gen, t)) / static_cast<double>(gen.size()), t};
}

inline double fnmr_at_far(const ScoreSet& s, double far) { return 1.0 - roc_tar_at_far(s, far).rate; }

/// A scored comparison with the yaw of both images.
struct ScoredPair
{
    double score = 0.0;
    bool genuine = false;
    double yaw_a = 0.0;
    double yaw_b = 0.0;
};

inline double pair_yaw(const ScoredPair& p) { return std::max(std::abs(p.yaw_a), std::abs(p.yaw_b)); }

struct CovariateCell
{
    std::size_t genuine_count = 0;
    std::optional<double> tar; ///< absent when the group has no genuine pair
};

struct CovariateTable
{
    double far = 0.0;
    double threshold = 0.0;
    std::vector<CovariateCell> cells; ///< one per yaw group
};

/**
 * TAR per pose group at one global threshold per FAR target. A pair's yaw is the larger absolute
 * yaw of its two images.
 */
inline std::vector<CovariateTable> covariate_breakdown(std::span<const ScoredPair> pairs,
                                                       std::span<const double> far_targets,
                                                       const std::vector<double>& edges = default_yaw_edges())
{
    ScoreSet all;
    for (const auto& p : pairs) {
        (p.genuine ? all.genuine : all.imposter).push_back(p.score);
    }
    std::vector<CovariateTable> out;
    for (double far : far_targets) {
        CovariateTable table;
        table.far = far;
        table.threshold = roc_tar_at_far(all, far).threshold;
        std::vector<std::size_t> passed(edges.size(), 0);
        table.cells.assign(edges.size(), {});
        for (const auto& p : pairs) {
            if (!p.genuine) {
                continue;
            }
            const std::size_t bin = pose_group(pair_yaw(p), edges);
            ++table.cells[bin].genuine_count;
            passed[bin] += p.score >= table.threshold ? 1 : 0;
        }
        for (std::size_t b = 0; b < edges.size(); ++b) {
            if (table.cells[b].genuine_count > 0) {
                table.cells[b].tar =
                    static_cast<double>(passed[b]) / static_cast<double>(table.cells[b].genuine_count);
            }
        }
        out.push_back(std::move(table));
    }
    return out;
}

} // namespace faceaug

#endif // FACEAUG_METRICS_VERIFICATION_HPP
