/*
 * faceaug - Geometric face data augmentation from a single image and a 3D face mesh.
 *
 * File: include/faceaug/annotate/labels.hpp
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

#ifndef FACEAUG_ANNOTATE_LABELS_HPP
#define FACEAUG_ANNOTATE_LABELS_HPP

#include "faceaug/annotate/face.hpp"
#include "faceaug/pose/pose.hpp"
#include "faceaug/render/light.hpp"

#include <optional>

namespace faceaug {

/// One synthesized view: rotation offsets plus the toggled light, if any.
struct ViewSpec
{
    EulerOffsets offsets;
    std::optional<LightId> light;

    bool operator==(const ViewSpec&) const = default;
};

/// Identity, age and gender carry over unchanged; pose labels shift by the view offsets.
inline AnnotatedFace propagate_labels(const AnnotatedFace& src, const ViewSpec& view)
{
    AnnotatedFace out = src;
    out.yaw_deg = src.yaw_deg + view.offsets.yaw;
    out.pitch_deg = src.pitch_deg + view.offsets.pitch;
    out.is_synthetic = true;
    out.light_id = view.light;
    return out;
}

} // namespace faceaug

#endif // FACEAUG_ANNOTATE_LABELS_HPP
