/*
 * faceaug - Geometric face data augmentation from a single image and a 3D face mesh.
 *
 * File: include/faceaug/metrics/identification.hpp
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

#ifndef FACEAUG_METRICS_IDENTIFICATION_HPP
#define FACEAUG_METRICS_IDENTIFICATION_HPP

#include "faceaug/core/error.hpp"
#include "faceaug/metrics/verification.hpp"

#include "Eigen/Core"

#include <cmath>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace faceaug {

using Embedding = Eigen::VectorXd;

enum class SimilarityMetric { cosine, negative_l2 };

inline SimilarityMetric similarity_metric_from_string(std::string_view name)
{
    if (name == "cosine") {
        return SimilarityMetric::cosine;
    }
    if (name == "l2" || name == "negative_l2") {
        return SimilarityMetric::negative_l2;
    }
    throw InvalidArgument("unknown similarity '" + std::string(name) + "'");
}

inline double similarity(const Embedding& a, const Embedding& b, SimilarityMetric metric)
{
    if (a.size() != b.size()) {
        throw InvalidArgument("similarity: dimension mismatch");
    }
    if (metric == SimilarityMetric::negative_l2) {
        return -(a - b).norm();
    }
    const double na = a.norm(), nb = b.norm();
    if (!(na > 0.0) || !(nb > 0.0)) {
        throw DegenerateInput("similarity: zero embedding under cosine similarity");
    }
    return a.dot(b) / (na * nb);
}

/**
 * Media pooling: embeddings are averaged within each media group, the group means are averaged,
 * and the result is L2-normalised. Empty groups are skipped.
 */
inline Embedding template_pool(const std::vector<std::vector<Embedding>>& media_groups)
{
    Embedding sum;
    std::size_t groups = 0;
    for (const auto& group : media_groups) {
        if (group.empty()) {
            continue;
        }
        Embedding mean = Embedding::Zero(group.front().size());
        for (const auto& e : group) {
            if (e.size() != mean.size()) {
                throw InvalidArgument("template_pool: dimension mismatch");
            }
            mean += e;
        }
        mean /= static_cast<double>(group.size());
        if (groups == 0) {
            sum = mean;
        } else if (mean.size() != sum.size()) {
            throw InvalidArgument("template_pool: dimension mismatch");
        } else {
            sum += mean;
        }
        ++groups;
    }
    if (groups == 0) {
        throw InvalidArgument("template_pool: empty template");
    }
    sum /= static_cast<double>(groups);
    const double n = sum.norm();
    if (!(n > 0.0)) {
        throw DegenerateInput("template_pool: pooled embedding is zero");
    }
    return sum / n;
}

/// Mean over the two templates of each template's largest absolute yaw.
inline double template_pair_yaw(std::span<const double> yaws_a, std::span<const double> yaws_b)
{
    if (yaws_a.empty() || yaws_b.empty()) {
        throw InvalidArgument("template_pair_yaw: empty template");
    }
    const auto max_abs = [](std::span<const double> ys) {
        double m = 0.0;
        for (double y : ys) {
            m = std::max(m, std::abs(y));
        }
        return m;
    };
    return 0.5 * (max_abs(yaws_a) + max_abs(yaws_b));
}

struct GalleryEntry
{
    std::string identity;
    Embedding embedding;
};

struct Probe
{
    std::optional<std::string> identity; ///< absent or not enrolled = non-mated
    Embedding embedding;
};

struct OpenSetResult
{
    std::vector<OperatingPoint> tpir; ///< one per FPIR target
    double rank1 = 0.0;
    std::size_t mated = 0;
    std::size_t non_mated = 0;
};

/// Best gallery match of each probe; equal scores go to the lower gallery index.
struct TopMatch
{
    std::size_t index = 0;
    double score = 0.0;
};

inline TopMatch top_match(const Embedding& probe, std::span<const GalleryEntry> gallery, SimilarityMetric metric)
{
    TopMatch best{0, -std::numeric_limits<double>::infinity()};
    for (std::size_t g = 0; g < gallery.size(); ++g) {
        const double s = similarity(probe, gallery[g].embedding, metric);
        if (s > best.score) {
            best = {g, s};
        }
    }
    return best;
}

/**
 * Open-set identification. The threshold for each FPIR target is calibrated on the top scores
 * of the non-mated probes (same empirical rule as roc_tar_at_far); TPIR counts mated probes
 * whose top match is correct and scores at least the threshold; rank-1 ignores the threshold.
 *
 * @throws InvalidArgument for an empty gallery, no mated or no non-mated probes, or a target
 *         outside (0, 1); UnsupportedOperatingPoint for a target below 1/#non-mated.
 */
inline OpenSetResult open_set_tpir(std::span<const Probe> probes, std::span<const GalleryEntry> gallery,
                                   std::span<const double> fpir_targets, SimilarityMetric metric)
{
    if (gallery.empty()) {
        throw InvalidArgument("open_set_tpir: empty gallery");
    }
    std::vector<double> non_mated_top, mated_correct_top, all_top;
    std::size_t mated = 0;
    for (const auto& p : probes) {
        const TopMatch m = top_match(p.embedding, gallery, metric);
        all_top.push_back(m.score);
        bool enrolled = false;
        if (p.identity) {
            for (const auto& g : gallery) {
                enrolled = enrolled || g.identity == *p.identity;
            }
        }
        if (!enrolled) {
            non_mated_top.push_back(m.score);
            continue;
        }
        ++mated;
        if (gallery[m.index].identity == *p.identity) {
            mated_correct_top.push_back(m.score);
        }
    }
    if (mated == 0) {
        throw InvalidArgument("open_set_tpir: no mated probes");
    }
    if (non_mated_top.empty()) {
        throw InvalidArgument("open_set_tpir: no non-mated probes to calibrate FPIR");
    }
    OpenSetResult out;
    out.mated = mated;
    out.non_mated = non_mated_top.size();
    out.rank1 = static_cast<double>(mated_correct_top.size()) / static_cast<double>(mated);
    const auto negatives = detail::sorted_copy(non_mated_top);
    const auto correct = detail::sorted_copy(mated_correct_top);
    for (double fpir : fpir_targets) {
        detail::check_rate_target(fpir, negatives.size(), "open_set_tpir");
        const double t = detail::empirical_threshold(negatives, all_top, fpir);
        out.tpir.push_back(
            {static_cast<double>(detail::count_at_least(correct, t)) / static_cast<double>(mated), t});
    }
    return out;
}

} // namespace faceaug

#endif // FACEAUG_METRICS_IDENTIFICATION_HPP
