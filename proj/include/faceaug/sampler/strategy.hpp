/*
 * faceaug - Geometric face data augmentation from a single image and a 3D face mesh.
 *
 * File: include/faceaug/sampler/strategy.hpp
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

#ifndef FACEAUG_SAMPLER_STRATEGY_HPP
#define FACEAUG_SAMPLER_STRATEGY_HPP

#include "faceaug/core/error.hpp"
#include "faceaug/pose/pose.hpp"

#include <cmath>
#include <string>
#include <string_view>
#include <vector>

namespace faceaug {

enum class Task { landmark, attributes, recognition };

inline std::string_view to_string(Task task)
{
    switch (task) {
    case Task::landmark: return "landmark";
    case Task::attributes: return "attributes";
    case Task::recognition: return "recognition";
    }
    return "?";
}

inline Task task_from_string(std::string_view name)
{
    for (auto t : {Task::landmark, Task::attributes, Task::recognition}) {
        if (to_string(t) == name) {
            return t;
        }
    }
    throw InvalidArgument("unknown task '" + std::string(name) + "'");
}

inline const double default_near_frontal_deg = 15.0;

/**
 * Pose offsets per task. Landmark and recognition: yaw -40, -20, 20, 40. Attributes: yaw
 * +-10, +-20, +-40, +-60 crossed with pitch -20, 0, 20. Lights are chosen per view by the planner.
 */
inline std::vector<EulerOffsets> task_strategy(Task task)
{
    std::vector<EulerOffsets> menu;
    switch (task) {
    case Task::landmark:
    case Task::recognition:
        for (double yaw : {-40.0, -20.0, 20.0, 40.0}) {
            menu.push_back({yaw, 0.0});
        }
        return menu;
    case Task::attributes:
        for (double yaw : {-60.0, -40.0, -20.0, -10.0, 10.0, 20.0, 40.0, 60.0}) {
            for (double pitch : {-20.0, 0.0, 20.0}) {
                menu.push_back({yaw, pitch});
            }
        }
        return menu;
    }
    throw InvalidArgument("task_strategy: unknown task");
}

inline bool near_frontal(double yaw_deg, double threshold_deg = default_near_frontal_deg)
{
    return std::abs(yaw_deg) < threshold_deg;
}

} // namespace faceaug

#endif // FACEAUG_SAMPLER_STRATEGY_HPP
