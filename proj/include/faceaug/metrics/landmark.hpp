/*
 * faceaug - Geometric face data augmentation from a single image and a 3D face mesh.
 *
 * File: include/faceaug/metrics/landmark.hpp
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

#ifndef FACEAUG_METRICS_LANDMARK_HPP
#define FACEAUG_METRICS_LANDMARK_HPP

#include "faceaug/annotate/face.hpp"
#include "faceaug/core/error.hpp"
#include "faceaug/core/types.hpp"
#include "faceaug/core/yaw_groups.hpp"

#include <cmath>
#include <optional>
#include <span>
#include <vector>

namespace faceaug {

struct LandmarkEval
{
    std::vector<Vec2> predicted;
    std::vector<Vec2> ground_truth;
    BoundingBox bbox;
    double yaw_deg = 0.0; ///< only used by nme_by_yaw
};

/// Mean point error over sqrt(box width * box height), in percent.
inline double nme(std::span<const Vec2> predicted, std::span<const Vec2> ground_truth, const BoundingBox& bbox)
{
    if (predicted.size() != ground_truth.size() || predicted.empty()) {
        throw InvalidArgument("nme: point sets must be non-empty and of equal size");
    }
    const double area = bbox.width * bbox.height;
    if (!(area > 0.0) || bbox.width <= 0.0) {
        throw InvalidArgument("nme: bounding box must have positive area");
    }
    double sum = 0.0;
    for (std::size_t i = 0; i < predicted.size(); ++i) {
        sum += (predicted[i] - ground_truth[i]).norm();
    }
    return 100.0 * sum / (static_cast<double>(predicted.size()) * std::sqrt(area));
}

inline double nme(const LandmarkEval& e) { return nme(e.predicted, e.ground_truth, e.bbox); }

struct BinMean
{
    double mean = 0.0;
    std::size_t count = 0;
};

/// Mean NME per absolute-yaw group; groups without records are absent.
inline std::vector<std::optional<BinMean>> nme_by_yaw(std::span<const LandmarkEval> evals,
                                                      const std::vector<double>& edges = default_yaw_edges())
{
    std::vector<double> sums(edges.size(), 0.0);
    std::vector<std::size_t> counts(edges.size(), 0);
    for (const auto& e : evals) {
        const std::size_t bin = pose_group(e.yaw_deg, edges);
        sums[bin] += nme(e);
        ++counts[bin];
    }
    std::vector<std::optional<BinMean>> out(edges.size());
    for (std::size_t b = 0; b < edges.size(); ++b) {
        if (counts[b] > 0) {
            out[b] = BinMean{sums[b] / static_cast<double>(counts[b]), counts[b]};
        }
    }
    return out;
}

/// Mean absolute error.
inline double mae(std::span<const double> predicted, std::span<const double> truth)
{
    if (predicted.size() != truth.size() || predicted.empty()) {
        throw InvalidArgument("mae: inputs must be non-empty and of equal length");
    }
    double sum = 0.0;
    for (std::size_t i = 0; i < predicted.size(); ++i) {
        sum += std::abs(predicted[i] - truth[i]);
    }
    return sum / static_cast<double>(predicted.size());
}

} // namespace faceaug

#endif // FACEAUG_METRICS_LANDMARK_HPP
