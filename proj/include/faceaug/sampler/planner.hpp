/*
 * faceaug - Geometric face data augmentation from a single image and a 3D face mesh.
 *
 * File: include/faceaug/sampler/planner.hpp
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

#ifndef FACEAUG_SAMPLER_PLANNER_HPP
#define FACEAUG_SAMPLER_PLANNER_HPP

#include "faceaug/annotate/labels.hpp"
#include "faceaug/core/error.hpp"
#include "faceaug/core/random.hpp"
#include "faceaug/render/light.hpp"
#include "faceaug/sampler/entropy.hpp"

#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace faceaug {

/// What the planners need to know about one real image.
struct PlanRecord
{
    std::string identity;
    double yaw_deg = 0.0;
    std::vector<EulerOffsets> menu; ///< admissible offsets for this image; empty = not augmented
};

struct PlanConfig
{
    double ratio_cap = 0.5;
    bool augment_pose = true;
    bool augment_illumination = true;
    double entropy_cutoff = default_entropy_cutoff;
    std::vector<double> yaw_edges = default_yaw_edges();

    void validate() const
    {
        if (!(ratio_cap >= 0.0) || !std::isfinite(ratio_cap)) {
            throw InvalidArgument("PlanConfig: ratio_cap must be finite and >= 0");
        }
        if (!(entropy_cutoff >= 0.0)) {
            throw InvalidArgument("PlanConfig: entropy_cutoff must be >= 0");
        }
    }
};

struct AugmentationPlan
{
    std::vector<std::vector<ViewSpec>> views; ///< indexed like the input records
    std::size_t real_count = 0;
    std::size_t synth_count = 0;

    bool within_cap(double ratio_cap) const
    {
        return static_cast<double>(synth_count) <= ratio_cap * static_cast<double>(real_count);
    }
};

/// Largest synthetic count the cap allows.
inline std::size_t synth_budget(std::size_t real_count, double ratio_cap)
{
    auto budget = static_cast<std::size_t>(std::floor(ratio_cap * static_cast<double>(real_count)));
    while (budget > 0 && static_cast<double>(budget) > ratio_cap * static_cast<double>(real_count)) {
        --budget;
    }
    return budget;
}

namespace detail {

// Offsets each record may draw from once pose and illumination switches are applied.
inline std::vector<std::vector<EulerOffsets>> effective_menus(const std::vector<PlanRecord>& records,
                                                              const PlanConfig& cfg)
{
    std::vector<std::vector<EulerOffsets>> menus(records.size());
    if (!cfg.augment_pose && !cfg.augment_illumination) {
        return menus;
    }
    for (std::size_t i = 0; i < records.size(); ++i) {
        if (records[i].menu.empty()) {
            continue;
        }
        if (cfg.augment_pose) {
            menus[i] = records[i].menu;
        } else {
            menus[i] = {EulerOffsets{0.0, 0.0}};
        }
    }
    return menus;
}

inline std::optional<LightId> draw_light(const PlanConfig& cfg, std::uint64_t seed, std::uint64_t view_index)
{
    if (!cfg.augment_illumination) {
        return std::nullopt;
    }
    return select_random_light(derive_seed(seed, view_index));
}

inline void validate_records(const std::vector<PlanRecord>& records)
{
    for (const auto& r : records) {
        if (!std::isfinite(r.yaw_deg)) {
            throw InvalidArgument("planner: record yaw must be finite");
        }
    }
}

} // namespace detail

/**
 * Random scheme. Records with a non-empty menu are visited in a seeded random order, round-robin,
 * each visit drawing one unused offset uniformly from that record's menu, until the synthetic
 * budget floor(ratio_cap * real) is spent or every menu is exhausted.
 */
inline AugmentationPlan plan_random(const std::vector<PlanRecord>& records, const PlanConfig& cfg, std::uint64_t seed)
{
    cfg.validate();
    detail::validate_records(records);
    AugmentationPlan plan;
    plan.views.resize(records.size());
    plan.real_count = records.size();
    const std::size_t budget = synth_budget(records.size(), cfg.ratio_cap);
    auto menus = detail::effective_menus(records, cfg);

    std::vector<std::size_t> order;
    for (std::size_t i = 0; i < records.size(); ++i) {
        if (!menus[i].empty()) {
            order.push_back(i);
        }
    }
    std::mt19937_64 rng(derive_seed(seed, 0x72616e646f6dULL));
    deterministic_shuffle(order.begin(), order.end(), rng);

    bool progress = true;
    while (plan.synth_count < budget && progress) {
        progress = false;
        for (std::size_t i : order) {
            if (plan.synth_count >= budget) {
                break;
            }
            auto& menu = menus[i];
            if (menu.empty()) {
                continue;
            }
            const auto pick = static_cast<std::ptrdiff_t>(uniform_index(rng, menu.size()));
            const EulerOffsets offsets = menu[pick];
            menu.erase(menu.begin() + pick);
            plan.views[i].push_back({offsets, detail::draw_light(cfg, seed, plan.synth_count)});
            ++plan.synth_count;
            progress = true;
        }
    }
    return plan;
}

/// Entropy before and after augmentation for one identity.
struct EntropyChange
{
    std::string identity;
    double before = 0.0;
    double after = 0.0;
    bool selected = false;
};

/// Yaw histograms of every identity, real images plus the planned views, in first-seen order.
inline std::vector<EntropyChange> entropy_changes(const std::vector<PlanRecord>& records,
                                                  const AugmentationPlan& plan, const PlanConfig& cfg)
{
    std::vector<std::string> ids;
    std::map<std::string, std::pair<PoseHistogram, PoseHistogram>> hists;
    for (std::size_t i = 0; i < records.size(); ++i) {
        const auto& r = records[i];
        auto [it, inserted] = hists.try_emplace(r.identity, PoseHistogram::with_edges(cfg.yaw_edges),
                                                PoseHistogram::with_edges(cfg.yaw_edges));
        if (inserted) {
            ids.push_back(r.identity);
        }
        it->second.first.add(r.yaw_deg);
        it->second.second.add(r.yaw_deg);
        if (i < plan.views.size()) {
            for (const auto& v : plan.views[i]) {
                it->second.second.add(r.yaw_deg + v.offsets.yaw);
            }
        }
    }
    std::vector<EntropyChange> out;
    for (const auto& id : ids) {
        const auto& [before, after] = hists.at(id);
        const double e = yaw_entropy(before);
        out.push_back({id, e, yaw_entropy(after), e < cfg.entropy_cutoff});
    }
    return out;
}

/**
 * Entropy-cutoff scheme. Only identities whose yaw entropy is strictly below the cutoff are
 * augmented. They take turns in a seeded random order; on its turn an identity adds the unused
 * (record, offset) candidate whose resulting yaw lands in its currently least-filled group (ties
 * broken at random), provided the identity's entropy does not drop. An identity with no such
 * candidate is finished. The global budget floor(ratio_cap * real) bounds the total.
 */
inline AugmentationPlan plan_entropy(const std::vector<PlanRecord>& records, const PlanConfig& cfg, std::uint64_t seed)
{
    cfg.validate();
    detail::validate_records(records);
    AugmentationPlan plan;
    plan.views.resize(records.size());
    plan.real_count = records.size();
    const std::size_t budget = synth_budget(records.size(), cfg.ratio_cap);
    auto menus = detail::effective_menus(records, cfg);

    struct Group
    {
        std::string identity;
        std::vector<std::size_t> records;
        PoseHistogram hist;
        bool done = false;
    };
    std::vector<Group> groups;
    std::map<std::string, std::size_t> index;
    for (std::size_t i = 0; i < records.size(); ++i) {
        auto [it, inserted] = index.try_emplace(records[i].identity, groups.size());
        if (inserted) {
            groups.push_back({records[i].identity, {}, PoseHistogram::with_edges(cfg.yaw_edges), false});
        }
        Group& g = groups[it->second];
        g.records.push_back(i);
        g.hist.add(records[i].yaw_deg);
    }

    std::vector<EntropyStat> stats;
    for (const auto& g : groups) {
        stats.push_back({g.identity, yaw_entropy(g.hist)});
    }
    std::vector<std::size_t> active;
    for (const auto& id : entropy_cutoff_selection(stats, cfg.entropy_cutoff)) {
        active.push_back(index.at(id));
    }
    std::mt19937_64 rng(derive_seed(seed, 0x656e74726f7079ULL));
    deterministic_shuffle(active.begin(), active.end(), rng);

    struct Candidate
    {
        std::size_t record;
        std::size_t menu_pos;
    };
    bool progress = true;
    while (plan.synth_count < budget && progress) {
        progress = false;
        for (std::size_t gi : active) {
            if (plan.synth_count >= budget) {
                break;
            }
            Group& g = groups[gi];
            if (g.done) {
                continue;
            }
            std::vector<Candidate> best;
            std::uint64_t best_count = 0;
            for (std::size_t r : g.records) {
                for (std::size_t k = 0; k < menus[r].size(); ++k) {
                    const std::size_t bin = pose_group(records[r].yaw_deg + menus[r][k].yaw, cfg.yaw_edges);
                    const std::uint64_t c = g.hist.counts[bin];
                    if (best.empty() || c < best_count) {
                        best = {{r, k}};
                        best_count = c;
                    } else if (c == best_count) {
                        best.push_back({r, k});
                    }
                }
            }
            if (best.empty()) {
                g.done = true;
                continue;
            }
            const Candidate pick = best[uniform_index(rng, best.size())];
            const EulerOffsets offsets = menus[pick.record][pick.menu_pos];
            PoseHistogram next = g.hist;
            next.add(records[pick.record].yaw_deg + offsets.yaw);
            if (yaw_entropy(next) < yaw_entropy(g.hist)) {
                g.done = true;
                continue;
            }
            g.hist = std::move(next);
            menus[pick.record].erase(menus[pick.record].begin() + static_cast<std::ptrdiff_t>(pick.menu_pos));
            plan.views[pick.record].push_back({offsets, detail::draw_light(cfg, seed, plan.synth_count)});
            ++plan.synth_count;
            progress = true;
        }
    }
    return plan;
}

} // namespace faceaug

#endif // FACEAUG_SAMPLER_PLANNER_HPP
