/*
 * faceaug - Geometric face data augmentation from a single image and a 3D face mesh.
 *
 * File: include/faceaug/core/types.hpp
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

#ifndef FACEAUG_CORE_TYPES_HPP
#define FACEAUG_CORE_TYPES_HPP

#include "Eigen/Core"

#include <cstddef>
#include <numbers>

namespace faceaug {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

/// Linear RGB, each channel in [0, 1].
using Rgb = Eigen::Vector3d;

constexpr double deg_to_rad(double degrees) noexcept { return degrees * std::numbers::pi / 180.0; }
constexpr double rad_to_deg(double radians) noexcept { return radians * 180.0 / std::numbers::pi; }

/// Points in the 68-landmark annotation scheme.
inline constexpr std::size_t landmark_count = 68;

} // namespace faceaug

#endif // FACEAUG_CORE_TYPES_HPP
