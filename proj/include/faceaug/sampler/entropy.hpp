/*
 * faceaug - Geometric face data augmentation from a single image and a 3D face mesh.
 *
 * File: include/faceaug/sampler/entropy.hpp
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

#ifndef FACEAUG_SAMPLER_ENTROPY_HPP
#define FACEAUG_SAMPLER_ENTROPY_HPP

#include "faceaug/core/error.hpp"
#include "faceaug/core/yaw_groups.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <string>
#include <vector>

namespace faceaug {

/// Half the maximum entropy over five groups.
inline const double default_entropy_cutoff = 0.5 * std::log(5.0);

struct PoseHistogram
{
    std::vector<double> bin_edges = default_yaw_edges();
    std::vector<std::uint64_t> counts = std::vector<std::uint64_t>(default_yaw_edges().size(), 0);

    static PoseHistogram with_edges(std::vector<double> edges)
    {
        if (edges.empty() || !std::is_sorted(edges.begin(), edges.end()) ||
            std::adjacent_find(edges.begin(), edges.end()) != edges.end() || edges.front() <= 0.0) {
            throw InvalidArgument("PoseHistogram: edges must be positive and strictly ascending");
        }
        PoseHistogram h;
        h.counts.assign(edges.size(), 0);
        h.bin_edges = std::move(edges);
        return h;
    }

    template <typename Range>
    static PoseHistogram of(const Range& yaws, std::vector<double> edges = default_yaw_edges())
    {
        PoseHistogram h = with_edges(std::move(edges));
        for (double y : yaws) {
            h.add(y);
        }
        return h;
    }

    void add(double yaw_deg) { ++counts[pose_group(yaw_deg, bin_edges)]; }

    std::uint64_t total() const
    {
        std::uint64_t n = 0;
        for (auto c : counts) {
            n += c;
        }
        return n;
    }

    std::vector<double> densities() const
    {
        const double n = static_cast<double>(total());
        std::vector<double> p(counts.size(), 0.0);
        if (n > 0) {
            for (std::size_t i = 0; i < counts.size(); ++i) {
                p[i] = static_cast<double>(counts[i]) / n;
            }
        }
        return p;
    }
};

/**
 * Shannon entropy in nats, sum of -p_i ln p_i with 0 ln 0 = 0. When every non-empty group holds
 * the same count the distribution is uniform on its support and the value is ln(k) exactly.
 *
 * @throws InvalidArgument for an empty histogram.
 */
inline double yaw_entropy(const PoseHistogram& hist)
{
    const std::uint64_t n = hist.total();
    if (n == 0) {
        throw InvalidArgument("yaw_entropy: empty histogram");
    }
    std::uint64_t first = 0;
    std::size_t support = 0;
    bool uniform = true;
    for (auto c : hist.counts) {
        if (c == 0) {
            continue;
        }
        if (support == 0) {
            first = c;
        }
        uniform = uniform && c == first;
        ++support;
    }
    if (uniform) {
        return std::log(static_cast<double>(support));
    }
    double e = 0.0;
    for (auto c : hist.counts) {
        if (c > 0) {
            const double p = static_cast<double>(c) / static_cast<double>(n);
            e -= p * std::log(p);
        }
    }
    return e;
}

struct EntropyStat
{
    std::string identity;
    double entropy = 0.0;
};

inline EntropyStat identity_yaw_entropy(const std::string& identity, const PoseHistogram& hist)
{
    return {identity, yaw_entropy(hist)};
}

/// Identities with entropy strictly below \p cutoff, in input order.
inline std::vector<std::string> entropy_cutoff_selection(const std::vector<EntropyStat>& stats, double cutoff)
{
    if (!(cutoff >= 0.0)) {
        throw InvalidArgument("entropy_cutoff_selection: cutoff must be >= 0");
    }
    std::vector<std::string> out;
    for (const auto& s : stats) {
        if (s.entropy < cutoff) {
            out.push_back(s.identity);
        }
    }
    return out;
}

} // namespace faceaug

#endif // FACEAUG_SAMPLER_ENTROPY_HPP
