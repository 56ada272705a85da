/*
 * faceaug - Geometric face data augmentation from a single image and a 3D face mesh.
 *
 * File: tools/faceaug.cpp
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

#include "CLI11.hpp"

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using namespace faceaug;

namespace {

std::string fmt(double v) { return format_double(v); }

std::string yaw_group_label(const std::vector<double>& edges, std::size_t b)
{
    return (b == 0 ? std::string("0") : fmt(edges[b - 1])) + "-" + fmt(edges[b]);
}

int run_augment(const fs::path& manifest_path, const fs::path& config_path, const fs::path& out,
                std::optional<std::uint64_t> seed, std::optional<int> workers)
{
    RunConfig config = read_config(config_path);
    if (seed) {
        config.seed = *seed;
    }
    if (workers) {
        config.workers = *workers;
    }
    config.validate();
    const auto summary = run_augmentation(read_manifest(manifest_path), config, out);
    std::cout << "records: " << summary.input_records << "\n"
              << "real: " << summary.real_records << "\n"
              << "augmented: " << summary.augmented_records << "\n"
              << "synthetic: " << summary.synthetic_records << "\n"
              << "failures: " << summary.failures.size() << "\n"
              << "output: " << (out / "manifest.jsonl").string() << "\n";
    if (summary.failure_rate() > config.max_failure_rate) {
        std::cerr << "faceaug: failure rate " << fmt(summary.failure_rate()) << " exceeds "
                  << fmt(config.max_failure_rate) << ", see " << (out / "failures.log").string() << "\n";
        return 2;
    }
    return 0;
}

int run_report_entropy(const fs::path& manifest_path, const fs::path& out, const std::vector<double>& edges)
{
    const auto changes = entropy_changes_from_manifest(read_manifest(manifest_path), edges);
    emit_entropy_report(changes, out);
    std::cout << "identities: " << changes.size() << "\n"
              << "output: " << (out / "entropy.csv").string() << "\n";
    return 0;
}

int run_overlay(const fs::path& manifest_path, const fs::path& out, std::size_t limit, const std::string& which,
                const OverlayConfig& cfg)
{
    const auto manifest = read_manifest(manifest_path);
    std::vector<std::size_t> picked;
    for (std::size_t i = 0; i < manifest.records.size() && picked.size() < limit; ++i) {
        const bool synthetic = manifest.records[i].face.is_synthetic;
        if (which == "all" || (which == "synthetic") == synthetic) {
            picked.push_back(i);
        }
    }
    const auto items = overlay_items(manifest, picked);
    if (!emit_overlays(items, out, cfg)) {
        std::cout << "no records selected, nothing written\n";
        return 0;
    }
    std::cout << "tiles: " << items.size() << "\n"
              << "output: " << out.string() << "\n";
    return 0;
}

int run_metrics_nme(const fs::path& predicted, const fs::path& manifest_path, const std::vector<double>& edges)
{
    const auto manifest = read_manifest(manifest_path);
    const auto preds = read_landmark_file(predicted);
    if (preds.size() != manifest.records.size()) {
        throw InvalidArgument("nme: " + std::to_string(preds.size()) + " predictions for " +
                              std::to_string(manifest.records.size()) + " manifest records");
    }
    std::vector<LandmarkEval> evals;
    double total = 0.0;
    for (std::size_t i = 0; i < preds.size(); ++i) {
        const auto& f = manifest.records[i].face;
        LandmarkEval e;
        e.predicted.assign(preds[i].points.begin(), preds[i].points.end());
        e.ground_truth.assign(f.landmarks.points.begin(), f.landmarks.points.end());
        e.bbox = f.bbox;
        e.yaw_deg = f.yaw_deg;
        total += nme(e);
        evals.push_back(std::move(e));
    }
    std::cout << "group,count,nme_percent\n";
    const auto groups = nme_by_yaw(evals, edges);
    for (std::size_t b = 0; b < groups.size(); ++b) {
        if (groups[b]) {
            std::cout << yaw_group_label(edges, b) << ',' << groups[b]->count << ',' << fmt(groups[b]->mean) << '\n';
        }
    }
    if (!evals.empty()) {
        std::cout << "all," << evals.size() << ',' << fmt(total / double(evals.size())) << '\n';
    }
    return 0;
}

int run_metrics_mae(const fs::path& csv)
{
    auto rows = parse_csv(read_text_file(csv));
    drop_header(rows, 0);
    std::vector<double> predicted, truth;
    for (const auto& row : rows) {
        predicted.push_back(csv_number(row, 0));
        truth.push_back(csv_number(row, 1));
    }
    std::cout << "count,mae\n" << rows.size() << ',' << fmt(mae(predicted, truth)) << '\n';
    return 0;
}

int run_metrics_roc(const fs::path& scores, const std::vector<double>& fars)
{
    const auto set = to_score_set(parse_score_csv(read_text_file(scores)));
    std::cout << "far,tar,fnmr,threshold\n";
    for (const double far : fars) {
        const auto op = roc_tar_at_far(set, far);
        std::cout << fmt(far) << ',' << fmt(op.rate) << ',' << fmt(1.0 - op.rate) << ',' << fmt(op.threshold) << '\n';
    }
    return 0;
}

int run_metrics_covariate(const fs::path& scores, const std::vector<double>& fars, const std::vector<double>& edges)
{
    std::vector<ScoredPair> pairs;
    for (const auto& r : parse_score_csv(read_text_file(scores))) {
        if (!r.has_yaw) {
            throw InvalidArgument("covariate: score rows need yaw_a and yaw_b columns");
        }
        pairs.push_back(r.pair);
    }
    std::cout << "far,threshold,group,genuine,tar\n";
    for (const auto& table : covariate_breakdown(pairs, fars, edges)) {
        for (std::size_t b = 0; b < table.cells.size(); ++b) {
            const auto& c = table.cells[b];
            std::cout << fmt(table.far) << ',' << fmt(table.threshold) << ',' << yaw_group_label(edges, b) << ','
                      << c.genuine_count << ',' << (c.tar ? fmt(*c.tar) : std::string()) << '\n';
        }
    }
    return 0;
}

int run_metrics_openset(const fs::path& embeddings, const std::vector<double>& fpirs, const std::string& metric)
{
    const auto [gallery, probes] = parse_embedding_csv(read_text_file(embeddings));
    const auto result = open_set_tpir(probes, gallery, fpirs, similarity_metric_from_string(metric));
    std::cout << "fpir,tpir,threshold\n";
    for (std::size_t i = 0; i < fpirs.size(); ++i) {
        std::cout << fmt(fpirs[i]) << ',' << fmt(result.tpir[i].rate) << ',' << fmt(result.tpir[i].threshold) << '\n';
    }
    std::cout << "rank1," << fmt(result.rank1) << ",\n"
              << "mated," << result.mated << ",\n"
              << "non_mated," << result.non_mated << ",\n";
    return 0;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"faceaug: pose and lighting augmentation of annotated face datasets"};
    app.require_subcommand(1);
    int status = 0;
    const std::vector<double> default_edges = default_yaw_edges();

    auto* augment = app.add_subcommand("augment", "Synthesize new views for a manifest");
    fs::path manifest, config, out;
    std::optional<std::uint64_t> seed;
    std::optional<int> workers;
    augment->add_option("--manifest", manifest, "Input manifest (JSONL)")->required()->check(CLI::ExistingFile);
    augment->add_option("--config", config, "Run config (key = value)")->required()->check(CLI::ExistingFile);
    augment->add_option("--out", out, "Output directory")->required();
    augment->add_option("--seed", seed, "Override the config seed");
    augment->add_option("--workers", workers, "Override the worker count")->check(CLI::PositiveNumber);
    augment->callback([&] { status = run_augment(manifest, config, out, seed, workers); });

    auto* report = app.add_subcommand("report-entropy", "Per-identity yaw entropy before/after augmentation");
    std::vector<double> edges = default_edges;
    report->add_option("--manifest", manifest, "Manifest, usually an augment output")->required()->check(CLI::ExistingFile);
    report->add_option("--out", out, "Output directory")->required();
    report->add_option("--yaw-edges", edges, "Upper edges of the yaw groups")->delimiter(',');
    report->callback([&] { status = run_report_entropy(manifest, out, edges); });

    auto* overlay = app.add_subcommand("overlay", "Landmark overlay grid (green visible, red occluded)");
    std::size_t limit = 16;
    std::string which = "all";
    OverlayConfig overlay_cfg;
    overlay->add_option("--manifest", manifest, "Manifest")->required()->check(CLI::ExistingFile);
    overlay->add_option("--out", out, "Output PNG")->required();
    overlay->add_option("--limit", limit, "Maximum number of tiles")->capture_default_str();
    overlay->add_option("--records", which, "all, real or synthetic")
        ->check(CLI::IsMember({"all", "real", "synthetic"}))
        ->capture_default_str();
    overlay->add_option("--tile", overlay_cfg.tile_size, "Tile size in pixels")->capture_default_str();
    overlay->add_option("--columns", overlay_cfg.columns, "Grid columns (0 = square)")->capture_default_str();
    overlay->add_option("--radius", overlay_cfg.dot_radius, "Dot radius in pixels")->capture_default_str();
    overlay->callback([&] { status = run_overlay(manifest, out, limit, which, overlay_cfg); });

    auto* metrics = app.add_subcommand("metrics", "Evaluation metrics");
    metrics->require_subcommand(1);
    fs::path input;
    std::vector<double> rates = {1e-3, 1e-2, 1e-1};
    std::string metric = "cosine";

    auto* m_nme = metrics->add_subcommand("nme", "NME against a manifest, overall and per yaw group");
    m_nme->add_option("--predicted", input, "Landmark file, one line per manifest record")->required()->check(CLI::ExistingFile);
    m_nme->add_option("--manifest", manifest, "Ground-truth manifest")->required()->check(CLI::ExistingFile);
    m_nme->add_option("--yaw-edges", edges, "Upper edges of the yaw groups")->delimiter(',');
    m_nme->callback([&] { status = run_metrics_nme(input, manifest, edges); });

    auto* m_mae = metrics->add_subcommand("mae", "Mean absolute error of predicted,truth rows");
    m_mae->add_option("--csv", input, "CSV with predicted,truth columns")->required()->check(CLI::ExistingFile);
    m_mae->callback([&] { status = run_metrics_mae(input); });

    auto* m_roc = metrics->add_subcommand("roc", "TAR and FNMR at FAR targets");
    m_roc->add_option("--scores", input, "Score CSV: id_a,id_b,score,label[,yaw_a,yaw_b]")->required()->check(CLI::ExistingFile);
    m_roc->add_option("--far", rates, "FAR targets")->delimiter(',');
    m_roc->callback([&] { status = run_metrics_roc(input, rates); });

    auto* m_cov = metrics->add_subcommand("covariate", "TAR per pair-yaw group at global thresholds");
    m_cov->add_option("--scores", input, "Score CSV with yaw columns")->required()->check(CLI::ExistingFile);
    m_cov->add_option("--far", rates, "FAR targets")->delimiter(',');
    m_cov->add_option("--yaw-edges", edges, "Upper edges of the yaw groups")->delimiter(',');
    m_cov->callback([&] { status = run_metrics_covariate(input, rates, edges); });

    auto* m_open = metrics->add_subcommand("openset", "TPIR at FPIR targets and rank-1");
    m_open->add_option("--embeddings", input, "CSV: role,identity,v1..vn")->required()->check(CLI::ExistingFile);
    m_open->add_option("--fpir", rates, "FPIR targets")->delimiter(',');
    m_open->add_option("--metric", metric, "cosine or l2")->capture_default_str();
    m_open->callback([&] { status = run_metrics_openset(input, rates, metric); });

    auto* demo = app.add_subcommand("make-demo", "Write a small dataset rendered from the built-in head");
    DemoDatasetConfig demo_cfg;
    demo->add_option("--out", out, "Output directory")->required();
    demo->add_option("--identities", demo_cfg.identities, "Number of identities")->capture_default_str();
    demo->add_option("--images", demo_cfg.images_per_identity, "Images per identity")->capture_default_str();
    demo->add_option("--size", demo_cfg.image_size, "Image size in pixels")->capture_default_str();
    demo->add_option("--seed", demo_cfg.seed, "Seed")->capture_default_str();
    demo->callback([&] {
        const auto path = write_demo_dataset(out, demo_cfg);
        std::cout << "manifest: " << path.string() << "\n"
                  << "config: " << (out / "augment.cfg").string() << "\n";
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const std::exception& e) {
        std::cerr << "faceaug: " << e.what() << "\n";
        return 1;
    }
    return status;
}
