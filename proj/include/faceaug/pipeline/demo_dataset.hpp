/*
 * faceaug - Geometric face data augmentation from a single image and a 3D face mesh.
 *
 * File: include/faceaug/pipeline/demo_dataset.hpp
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

#ifndef FACEAUG_PIPELINE_DEMO_DATASET_HPP
#define FACEAUG_PIPELINE_DEMO_DATASET_HPP

#include "faceaug/annotate/face.hpp"
#include "faceaug/annotate/landmarks.hpp"
#include "faceaug/core/error.hpp"
#include "faceaug/core/image.hpp"
#include "faceaug/core/random.hpp"
#include "faceaug/pipeline/config.hpp"
#include "faceaug/pipeline/manifest.hpp"
#include "faceaug/pipeline/report.hpp"
#include "faceaug/render/rasterizer.hpp"
#include "faceaug/synthetic/head.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <random>
#include <string>

namespace faceaug {

struct DemoDatasetConfig
{
    int identities = 6;
    int images_per_identity = 4;
    int image_size = 128;
    int head_resolution = 24;
    std::uint64_t seed = 7;

    void validate() const
    {
        if (identities < 0 || images_per_identity < 0 || image_size < 16 || head_resolution < 8) {
            throw InvalidArgument("DemoDatasetConfig: counts must be >= 0, image_size >= 16, head_resolution >= 8");
        }
    }
};

/**
 * Writes a small labelled dataset rendered from the synthetic head: images/<id>_<k>.png,
 * manifest.jsonl (root ".") with ground-truth landmarks, visibility and yaw labels, and an
 * augment.cfg using the same head as the generic mesh. Most yaws are near frontal; about one
 * image in four is turned 20 to 60 degrees. Returns the manifest path.
 */
inline std::filesystem::path write_demo_dataset(const std::filesystem::path& dir, const DemoDatasetConfig& cfg = {})
{
    cfg.validate();
    std::filesystem::create_directories(dir / "images");
    const SyntheticHead head = generate_head(cfg.head_resolution);
    const Bvh bvh(head.mesh);
    const Camera camera{cfg.image_size, cfg.image_size, 1.0};
    const RigidPose frontal = head.frontal_pose(camera);
    const Vec3 pivot = head.mesh.centroid();

    ManifestHeader header;
    std::string text = format_manifest_header(header) + '\n';
    for (int id = 0; id < cfg.identities; ++id) {
        std::mt19937_64 rng(derive_seed(cfg.seed, static_cast<std::uint64_t>(id)));
        const Rgb tint(0.70 + 0.2 * uniform_unit(rng), 0.50 + 0.2 * uniform_unit(rng), 0.40 + 0.2 * uniform_unit(rng));
        const Rgb backdrop(0.2 * uniform_unit(rng), 0.3 * uniform_unit(rng), 0.4 * uniform_unit(rng));
        ColoredMesh colored;
        colored.mesh = head.mesh;
        for (const auto& v : head.mesh.vertices) {
            const double shade = 0.85 + 0.15 * std::sin(4.0 * v.y() + 2.0 * std::abs(v.x()));
            colored.colors.push_back((shade * tint).cwiseMin(1.0));
        }
        colored.textured_mask.assign(head.mesh.vertices.size(), true);
        RenderConfig render;
        render.emission_weight = 1.0;
        render.background = SolidBackground{backdrop};

        char id_name[32];
        std::snprintf(id_name, sizeof(id_name), "id_%03d", id);
        for (int k = 0; k < cfg.images_per_identity; ++k) {
            double yaw = 0.0;
            if (uniform_unit(rng) < 0.25) {
                yaw = (uniform_unit(rng) < 0.5 ? -1.0 : 1.0) * (20.0 + 40.0 * uniform_unit(rng));
            } else {
                yaw = -8.0 + 4.0 * static_cast<double>(uniform_index(rng, 5));
            }
            const RigidPose pose = apply_offsets(frontal, {yaw, 0.0}, pivot);
            const RenderOutput out = rasterize(colored, pose, camera, std::nullopt, render);

            AnnotatedFace face;
            face.image = "images/" + std::string(id_name) + "_" + std::to_string(k) + ".png";
            face.identity = id_name;
            face.age = std::to_string(20 + 7 * id % 50);
            face.gender = id % 2 == 0 ? "f" : "m";
            face.yaw_deg = yaw;
            for (std::size_t i = 0; i < landmark_count; ++i) {
                const Vec3& p = head.mesh.vertices[head.landmark_vertex_ids[i]];
                face.landmarks.points[i] = camera.project(pose.apply(p));
                face.landmarks.visible[i] = landmark_visibility(p, bvh, pose, camera);
            }
            face.bbox = landmark_box(face.landmarks);
            write_png(dir / face.image, out.image);
            text += format_manifest_record(face) + '\n';
        }
    }
    detail::write_text_file(dir / "manifest.jsonl", text);

    RunConfig run;
    run.task = Task::landmark;
    run.scheme = SamplingScheme::entropy;
    run.mesh_source = MeshSource::generic;
    run.head_resolution = cfg.head_resolution;
    run.seed = cfg.seed;
    detail::write_text_file(dir / "augment.cfg", format_config(run));
    return dir / "manifest.jsonl";
}

} // namespace faceaug

#endif // FACEAUG_PIPELINE_DEMO_DATASET_HPP
