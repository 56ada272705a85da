/*
 * faceaug - Geometric face data augmentation from a single image and a 3D face mesh.
 *
 * File: include/faceaug/faceaug.hpp
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

#ifndef FACEAUG_FACEAUG_HPP
#define FACEAUG_FACEAUG_HPP

#include "faceaug/annotate/alignment.hpp"
#include "faceaug/annotate/face.hpp"
#include "faceaug/annotate/labels.hpp"
#include "faceaug/annotate/landmarks.hpp"
#include "faceaug/core/error.hpp"
#include "faceaug/core/image.hpp"
#include "faceaug/core/random.hpp"
#include "faceaug/core/text.hpp"
#include "faceaug/core/types.hpp"
#include "faceaug/core/yaw_groups.hpp"
#include "faceaug/mesh/bvh.hpp"
#include "faceaug/mesh/mesh.hpp"
#include "faceaug/mesh/obj.hpp"
#include "faceaug/mesh/planes.hpp"
#include "faceaug/metrics/csv.hpp"
#include "faceaug/metrics/identification.hpp"
#include "faceaug/metrics/landmark.hpp"
#include "faceaug/metrics/verification.hpp"
#include "faceaug/pipeline/config.hpp"
#include "faceaug/pipeline/demo_dataset.hpp"
#include "faceaug/pipeline/manifest.hpp"
#include "faceaug/pipeline/overlay.hpp"
#include "faceaug/pipeline/report.hpp"
#include "faceaug/pipeline/run.hpp"
#include "faceaug/pose/admissibility.hpp"
#include "faceaug/pose/estimate.hpp"
#include "faceaug/pose/pose.hpp"
#include "faceaug/render/light.hpp"
#include "faceaug/render/rasterizer.hpp"
#include "faceaug/render/shading.hpp"
#include "faceaug/sampler/entropy.hpp"
#include "faceaug/sampler/planner.hpp"
#include "faceaug/sampler/strategy.hpp"
#include "faceaug/synthetic/head.hpp"
#include "faceaug/texture/bake.hpp"

#endif // FACEAUG_FACEAUG_HPP
