/*
 * faceaug - Geometric face data augmentation from a single image and a 3D face mesh.
 *
 * File: include/faceaug/pipeline/run.hpp
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

#ifndef FACEAUG_PIPELINE_RUN_HPP
#define FACEAUG_PIPELINE_RUN_HPP

#include "faceaug/annotate/face.hpp"
#include "faceaug/annotate/labels.hpp"
#include "faceaug/annotate/landmarks.hpp"
#include "faceaug/core/error.hpp"
#include "faceaug/core/image.hpp"
#include "faceaug/mesh/bvh.hpp"
#include "faceaug/mesh/obj.hpp"
#include "faceaug/mesh/planes.hpp"
#include "faceaug/pipeline/config.hpp"
#include "faceaug/pipeline/manifest.hpp"
#include "faceaug/pipeline/report.hpp"
#include "faceaug/pose/admissibility.hpp"
#include "faceaug/pose/estimate.hpp"
#include "faceaug/render/rasterizer.hpp"
#include "faceaug/sampler/planner.hpp"
#include "faceaug/sampler/strategy.hpp"
#include "faceaug/synthetic/head.hpp"
#include "faceaug/texture/bake.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

namespace faceaug {

/**
 * A mesh ready for augmentation: the BVH (which owns the mesh), the vertex id of each of the 68
 * landmarks when known, and the face planes in the mesh frame. Meshes follow the canonical frame:
 * +y up, +z out of the face.
 */
struct MeshAsset
{
    std::shared_ptr<const Bvh> bvh;
    std::optional<std::array<std::uint32_t, landmark_count>> landmark_ids;
    FacePlanes planes;

    const Mesh& mesh() const { return bvh->mesh(); }
};

/// 68 whitespace-separated vertex indices; '#' starts a comment line.
inline std::array<std::uint32_t, landmark_count> read_mesh_landmark_ids(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) {
        throw InvalidArgument("read_mesh_landmark_ids: cannot open " + path.string());
    }
    std::vector<long> ids;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty() || trim(line).front() == '#') {
            continue;
        }
        for (const auto token : detail::split_ws(line)) {
            long id = 0;
            if (!detail::parse_long(token, id) || id < 0) {
                throw ParseError("mesh landmark ids must be non-negative integers", line_no);
            }
            ids.push_back(id);
        }
    }
    if (ids.size() != landmark_count) {
        throw ParseError(path.string() + ": expected 68 vertex ids, got " + std::to_string(ids.size()));
    }
    std::array<std::uint32_t, landmark_count> out{};
    std::transform(ids.begin(), ids.end(), out.begin(), [](long v) { return static_cast<std::uint32_t>(v); });
    return out;
}

/**
 * Builds the BVH and planes. With landmark ids the bilateral plane is fitted to the mirrored
 * landmark vertices; without them it is the plane x = centroid.x. The back plane passes through
 * the centroid facing -z.
 */
inline MeshAsset make_mesh_asset(Mesh mesh, std::optional<std::array<std::uint32_t, landmark_count>> ids)
{
    MeshAsset asset;
    if (ids) {
        for (const auto id : *ids) {
            if (id >= mesh.vertices.size()) {
                throw InvalidArgument("make_mesh_asset: landmark vertex id out of range");
            }
        }
        std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs;
        for (std::size_t i = 0; i < landmark_count; ++i) {
            const auto j = mirror_68[i];
            if (i < j && (*ids)[i] != (*ids)[j]) {
                pairs.emplace_back((*ids)[i], (*ids)[j]);
            }
        }
        asset.planes.bilateral = fit_bilateral_plane(mesh, pairs);
    } else {
        asset.planes.bilateral = Plane{Vec3::UnitX(), -mesh.centroid().x()};
    }
    asset.planes.back = back_plane(mesh);
    asset.landmark_ids = ids;
    asset.bvh = std::make_shared<const Bvh>(std::move(mesh));
    return asset;
}

/// The built-in synthetic head with its exact planes.
inline MeshAsset synthetic_head_asset(int resolution = 36)
{
    SyntheticHead head = generate_head(resolution);
    MeshAsset asset;
    asset.planes = {head.known_bilateral, head.known_back};
    asset.landmark_ids = head.landmark_vertex_ids;
    asset.bvh = std::make_shared<const Bvh>(std::move(head.mesh));
    return asset;
}

/// The shared mesh of a run: generic_mesh when configured, the synthetic head otherwise.
inline MeshAsset generic_mesh_asset(const RunConfig& config)
{
    if (config.generic_mesh.empty()) {
        return synthetic_head_asset(config.head_resolution);
    }
    std::optional<std::array<std::uint32_t, landmark_count>> ids;
    if (!config.generic_mesh_landmarks.empty()) {
        ids = read_mesh_landmark_ids(config.generic_mesh_landmarks);
    }
    return make_mesh_asset(read_obj(config.generic_mesh), ids);
}

struct RecordFailure
{
    std::size_t line = 0;
    std::string image;
    std::string message;
};

struct RunSummary
{
    std::size_t input_records = 0; ///< record lines, including rejected ones
    std::size_t real_records = 0;
    std::size_t passthrough_synthetic = 0; ///< synthetic records already in the input
    std::size_t augmented_records = 0;
    std::size_t synthetic_records = 0; ///< newly synthesized
    bool within_cap = true;
    std::vector<RecordFailure> failures;
    std::vector<EntropyChange> entropy;

    double failure_rate() const
    {
        return input_records == 0 ? 0.0 : static_cast<double>(failures.size()) / static_cast<double>(input_records);
    }
};

namespace detail {

/**
 * Runs fn(i) for i in [0, n) on up to \p workers threads. Indices are handed out in order; each
 * call owns its slot in any output array, so results never depend on scheduling. fn must not throw.
 */
template <typename Fn>
void parallel_for_index(std::size_t n, int workers, Fn&& fn)
{
    const auto threads = std::min<std::size_t>(static_cast<std::size_t>(std::max(workers, 1)), n);
    if (threads <= 1) {
        for (std::size_t i = 0; i < n; ++i) {
            fn(i);
        }
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (std::size_t t = 0; t < threads; ++t) {
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < n; i = next++) {
                fn(i);
            }
        });
    }
}

template <typename Fn>
std::optional<std::string> capture_failure(Fn&& fn)
{
    try {
        fn();
    } catch (const std::exception& e) {
        return std::string(e.what());
    } catch (...) {
        return std::string("unknown error");
    }
    return std::nullopt;
}

struct PreparedRecord
{
    std::optional<std::string> failure;
    std::shared_ptr<const MeshAsset> asset;
    RigidPose pose;
    AnnotatedFace face; ///< input face with image size and (if unlabelled) pose-derived yaw/pitch
    std::vector<EulerOffsets> menu;
};

struct RenderedRecord
{
    std::optional<std::string> failure;
    std::vector<std::string> lines;
    std::vector<ViewSpec> views;
};

inline std::shared_ptr<const MeshAsset> record_asset(const ManifestRecord& rec, const DatasetManifest& manifest,
                                                     const RunConfig& config,
                                                     const std::shared_ptr<const MeshAsset>& generic)
{
    if (config.mesh_source == MeshSource::generic || !rec.mesh) {
        return generic;
    }
    const auto mesh_path = manifest.resolve(*rec.mesh, false);
    std::optional<std::array<std::uint32_t, landmark_count>> ids;
    if (rec.mesh_landmarks) {
        ids = read_mesh_landmark_ids(manifest.resolve(*rec.mesh_landmarks, false));
    } else if (auto sidecar = std::filesystem::path(mesh_path).concat(".lmk"); std::filesystem::exists(sidecar)) {
        ids = read_mesh_landmark_ids(sidecar);
    }
    return std::make_shared<const MeshAsset>(make_mesh_asset(read_obj(mesh_path), ids));
}

inline RigidPose record_pose(const ManifestRecord& rec, const MeshAsset& asset, const Camera& camera)
{
    if (rec.pose) {
        return *rec.pose;
    }
    if (!asset.landmark_ids) {
        throw InvalidArgument("record has no pose and its mesh has no landmark vertex ids");
    }
    std::vector<Vec2> px;
    std::vector<Vec3> model;
    for (std::size_t i = 0; i < landmark_count; ++i) {
        if (rec.face.landmarks.visible[i]) {
            px.push_back(rec.face.landmarks.points[i]);
            model.push_back(asset.mesh().vertices[(*asset.landmark_ids)[i]]);
        }
    }
    return estimate_pose(px, model, camera).pose;
}

inline PreparedRecord prepare_record(const ManifestRecord& rec, const DatasetManifest& manifest, const RunConfig& config,
                                     const std::shared_ptr<const MeshAsset>& generic)
{
    PreparedRecord out;
    out.failure = capture_failure([&] {
        out.face = rec.face;
        const RgbImage image = read_image(manifest.resolve(rec.face.image, false));
        out.face.image_width = image.width;
        out.face.image_height = image.height;
        out.face.validate();
        out.asset = record_asset(rec, manifest, config, generic);
        const Camera camera{image.width, image.height, 1.0};
        out.pose = record_pose(rec, *out.asset, camera);
        const auto euler = euler_from_rotation(out.pose.rotation);
        if (!rec.yaw_label) {
            out.face.yaw_deg = euler.yaw;
        }
        if (!rec.pitch_label) {
            out.face.pitch_deg = euler.pitch;
        }
        if (near_frontal(out.face.yaw_deg, config.near_frontal_deg)) {
            out.menu = admissible_offset_set(out.pose, out.asset->planes, task_strategy(config.task),
                                             config.pitch_cap_deg);
        }
        if (out.menu.empty()) {
            out.asset.reset();
        }
    });
    return out;
}

inline std::string synthetic_image_name(std::size_t line, std::size_t k)
{
    char buf[48];
    std::snprintf(buf, sizeof(buf), "synthetic/%06zu_%zu.png", line, k);
    return buf;
}

inline RenderedRecord render_record(const ManifestRecord& rec, const PreparedRecord& prep,
                                    const std::vector<ViewSpec>& views, const DatasetManifest& manifest,
                                    const RunConfig& config, const std::filesystem::path& out_dir)
{
    RenderedRecord out;
    out.failure = capture_failure([&] {
        const auto image = std::make_shared<const RgbImage>(read_image(manifest.resolve(rec.face.image, false)));
        const Camera camera{image->width, image->height, 1.0};
        const MeshAsset& asset = *prep.asset;
        const ColoredMesh colored = bake_vertex_colors(asset.mesh(), *image, prep.pose, camera);
        const Landmark3DSet lifted = lift_landmarks_to_3d(prep.face.landmarks.points, *asset.bvh, prep.pose, camera);
        RenderConfig render = config.render;
        if (config.background == BackgroundMode::source) {
            render.background = SourceImageBackground{image};
        } else {
            render.background = SolidBackground{config.background_color};
        }
        const Vec3 pivot = asset.mesh().centroid();
        std::vector<std::pair<std::string, RgbImage>> images;
        for (std::size_t k = 0; k < views.size(); ++k) {
            const RigidPose total = apply_offsets(prep.pose, views[k].offsets, pivot);
            RenderOutput rendered = rasterize(colored, total, camera, views[k].light, render);
            AnnotatedFace face = propagate_labels(prep.face, views[k]);
            face.image = synthetic_image_name(rec.line, k);
            face.landmarks = to_landmark_set(project_landmarks(lifted, *asset.bvh, total, camera, config.visibility));
            face.bbox = landmark_box(face.landmarks);
            out.lines.push_back(format_manifest_record(face, SyntheticSource{rec.face.image, rec.line, views[k]}));
            images.emplace_back(face.image, std::move(rendered.image));
        }
        for (const auto& [name, img] : images) {
            write_png(out_dir / name, img);
        }
        out.views = views;
    });
    if (out.failure) {
        out.lines.clear();
        out.views.clear();
    }
    return out;
}

} // namespace detail

/**
 * End-to-end augmentation of a manifest into \p out_dir.
 *
 * Stage 1 loads every real record's image and mesh (per-record or generic), estimates its pose
 * from the visible landmarks (unless the record carries one) and builds the admissible view menu
 * for near-frontal records. Stage 2 plans views over the dataset with the configured scheme.
 * Stage 3 bakes, renders each planned view, projects the lifted landmarks and propagates labels.
 * Records are processed by config.workers threads; outputs are merged in input order, so results
 * are identical for every worker count.
 *
 * Written files: manifest.jsonl (header, then each input record line verbatim followed by its
 * synthetic records), the PNGs under synthetic/, report/entropy.csv, report/entropy_curve.csv,
 * failures.log and config.txt. Failed records are logged and skipped; the caller decides what
 * failure rate is fatal (see RunSummary::failure_rate and config.max_failure_rate).
 *
 * @throws InvalidArgument for an invalid config or an unwritable output directory.
 */
inline RunSummary run_augmentation(const DatasetManifest& manifest, const RunConfig& config,
                                   const std::filesystem::path& out_dir)
{
    config.validate();
    std::filesystem::create_directories(out_dir / "synthetic");
    std::filesystem::create_directories(out_dir / "report");

    const auto& records = manifest.records;
    const std::size_t n = records.size();
    RunSummary summary;
    summary.input_records = n + manifest.rejected.size();

    std::shared_ptr<const MeshAsset> generic;
    for (const auto& r : records) {
        if (!r.face.is_synthetic && (config.mesh_source == MeshSource::generic || !r.mesh)) {
            generic = std::make_shared<const MeshAsset>(generic_mesh_asset(config));
            break;
        }
    }

    // Stage 1.
    std::vector<detail::PreparedRecord> prepared(n);
    detail::parallel_for_index(n, config.workers, [&](std::size_t i) {
        if (!records[i].face.is_synthetic) {
            prepared[i] = detail::prepare_record(records[i], manifest, config, generic);
        }
    });

    // Stage 2.
    std::vector<PlanRecord> plan_records;
    std::vector<std::size_t> plan_index; // plan record -> manifest record
    for (std::size_t i = 0; i < n; ++i) {
        const auto& r = records[i];
        if (r.face.is_synthetic) {
            ++summary.passthrough_synthetic;
            continue;
        }
        ++summary.real_records;
        if (prepared[i].failure && !r.yaw_label) {
            continue;
        }
        const double yaw = prepared[i].failure ? *r.yaw_label : prepared[i].face.yaw_deg;
        plan_records.push_back({r.face.identity, yaw, prepared[i].menu});
        plan_index.push_back(i);
    }
    const AugmentationPlan plan = config.scheme == SamplingScheme::random
                                      ? plan_random(plan_records, config.plan, config.seed)
                                      : plan_entropy(plan_records, config.plan, config.seed);

    // Stage 3.
    std::vector<std::vector<ViewSpec>> views(n);
    std::vector<std::size_t> work;
    for (std::size_t p = 0; p < plan_records.size(); ++p) {
        if (!plan.views[p].empty()) {
            views[plan_index[p]] = plan.views[p];
            work.push_back(plan_index[p]);
        }
    }
    std::vector<detail::RenderedRecord> rendered(n);
    detail::parallel_for_index(work.size(), config.workers, [&](std::size_t w) {
        const std::size_t i = work[w];
        rendered[i] = detail::render_record(records[i], prepared[i], views[i], manifest, config, out_dir);
    });

    // Merge in input order.
    ManifestHeader header = manifest.header;
    header.root = std::filesystem::absolute(manifest.root_path()).lexically_normal().generic_string();
    header.synthetic_root = ".";
    std::string text = format_manifest_header(header) + '\n';
    AugmentationPlan realized;
    realized.views.resize(plan_records.size());
    for (std::size_t p = 0; p < plan_records.size(); ++p) {
        realized.views[p] = rendered[plan_index[p]].views;
    }
    std::vector<RecordFailure> failures;
    for (const auto& rej : manifest.rejected) {
        failures.push_back({rej.line, "", rej.message});
    }
    for (std::size_t i = 0; i < n; ++i) {
        text += records[i].raw + '\n';
        for (const auto& line : rendered[i].lines) {
            text += line + '\n';
        }
        summary.synthetic_records += rendered[i].lines.size();
        summary.augmented_records += rendered[i].lines.empty() ? 0 : 1;
        if (prepared[i].failure) {
            failures.push_back({records[i].line, records[i].face.image, "prepare: " + *prepared[i].failure});
        } else if (rendered[i].failure) {
            failures.push_back({records[i].line, records[i].face.image, "render: " + *rendered[i].failure});
        }
    }
    std::sort(failures.begin(), failures.end(), [](const auto& a, const auto& b) { return a.line < b.line; });
    summary.failures = failures;
    summary.within_cap = summary.synthetic_records <= synth_budget(summary.real_records, config.plan.ratio_cap);
    summary.entropy = entropy_changes(plan_records, realized, config.plan);

    detail::write_text_file(out_dir / "manifest.jsonl", text);
    emit_entropy_report(summary.entropy, out_dir / "report");
    std::string log;
    for (const auto& f : summary.failures) {
        log += "line " + std::to_string(f.line) + '\t' + f.image + '\t' + f.message + '\n';
    }
    detail::write_text_file(out_dir / "failures.log", log);
    detail::write_text_file(out_dir / "config.txt", format_config(config));
    return summary;
}

} // namespace faceaug

#endif // FACEAUG_PIPELINE_RUN_HPP
