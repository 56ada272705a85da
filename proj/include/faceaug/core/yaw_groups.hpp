/*
 * faceaug - Geometric face data augmentation from a single image and a 3D face mesh.
 *
 * File: include/faceaug/core/yaw_groups.hpp
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

#ifndef FACEAUG_CORE_YAW_GROUPS_HPP
#define FACEAUG_CORE_YAW_GROUPS_HPP

#include "faceaug/core/error.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace faceaug {

/// Upper edges of the absolute-yaw pose groups [0,10], (10,30], (30,50], (50,70], (70,90].
inline const std::vector<double>& default_yaw_edges()
{
    static const std::vector<double> edges{10.0, 30.0, 50.0, 70.0, 90.0};
    return edges;
}

/// Group of |yaw| with right-closed edges; |yaw| beyond the last edge falls in the last group.
inline std::size_t pose_group(double yaw_deg, const std::vector<double>& edges = default_yaw_edges())
{
    if (std::isnan(yaw_deg)) {
        throw InvalidArgument("pose_group: yaw is NaN");
    }
    if (edges.empty()) {
        throw InvalidArgument("pose_group: no bin edges");
    }
    const double a = std::abs(yaw_deg);
    const auto it = std::lower_bound(edges.begin(), edges.end(), a);
    return it == edges.end() ? edges.size() - 1 : static_cast<std::size_t>(it - edges.begin());
}

} // namespace faceaug

#endif // FACEAUG_CORE_YAW_GROUPS_HPP
