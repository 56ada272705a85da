/*
 * faceaug - Geometric face data augmentation from a single image and a 3D face mesh.
 *
 * File: demo/augment_demo.cpp
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
// Builds a small dataset from the built-in head, augments it and writes an overlay of the result.
//
// usage: augment_demo [output_dir]

#include "faceaug/pipeline/demo_dataset.hpp"
#include "faceaug/pipeline/overlay.hpp"
#include "faceaug/pipeline/run.hpp"

#include <filesystem>
#include <iostream>

int main(int argc, char** argv)
{
    namespace fs = std::filesystem;
    using namespace faceaug;
    const fs::path root = argc > 1 ? fs::path(argv[1]) : fs::path("faceaug_demo");

    try {
        DemoDatasetConfig demo;
        demo.identities = 8;
        demo.images_per_identity = 4;
        const fs::path manifest_path = write_demo_dataset(root / "data", demo);

        RunConfig config = read_config(root / "data" / "augment.cfg");
        config.workers = 2;
        const auto summary = run_augmentation(read_manifest(manifest_path), config, root / "augmented");
        std::cout << "real images:      " << summary.real_records << "\n"
                  << "synthetic images: " << summary.synthetic_records << "\n"
                  << "failures:         " << summary.failures.size() << "\n";

        std::cout << "\nidentity  entropy before -> after\n";
        for (const auto& e : summary.entropy) {
            std::cout << e.identity << "   " << e.before << " -> " << e.after << (e.selected ? "  (selected)" : "")
                      << "\n";
        }

        const auto augmented = read_manifest(root / "augmented" / "manifest.jsonl");
        std::vector<std::size_t> synthetic;
        for (std::size_t i = 0; i < augmented.records.size() && synthetic.size() < 12; ++i) {
            if (augmented.records[i].face.is_synthetic) {
                synthetic.push_back(i);
            }
        }
        OverlayConfig overlay;
        overlay.tile_size = 160;
        if (emit_overlays(overlay_items(augmented, synthetic), root / "overlay.png", overlay)) {
            std::cout << "\noverlay: " << (root / "overlay.png").string() << "\n";
        }
    } catch (const std::exception& e) {
        std::cerr << "augment_demo: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
