#include "faceaug/sampler/entropy.hpp"
#include "faceaug/sampler/planner.hpp"
#include "faceaug/sampler/strategy.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

using namespace faceaug;

namespace {

// Oracle: textbook summation over densities, no shortcuts.
double entropy_oracle(const std::vector<std::uint64_t>& counts)
{
    long double n = 0;
    for (auto c : counts) {
        n += c;
    }
    long double e = 0;
    for (auto c : counts) {
        if (c != 0) {
            const long double p = c / n;
            e += -p * std::log(p);
        }
    }
    return static_cast<double>(e);
}

PoseHistogram hist(std::vector<std::uint64_t> counts)
{
    PoseHistogram h;
    h.counts = std::move(counts);
    return h;
}

std::vector<PlanRecord> toy_dataset(std::size_t identities, std::size_t per_identity, std::uint64_t seed,
                                    Task task = Task::landmark)
{
    std::mt19937_64 rng(seed);
    std::vector<PlanRecord> out;
    for (std::size_t i = 0; i < identities; ++i) {
        // Each identity leans toward one yaw range, some strongly frontal.
        const double centre = std::uniform_real_distribution<double>(-60, 60)(rng);
        const double spread = std::uniform_real_distribution<double>(1, 30)(rng);
        for (std::size_t k = 0; k < per_identity; ++k) {
            PlanRecord r;
            r.identity = "id_" + std::to_string(i);
            r.yaw_deg = std::clamp(centre + spread * std::normal_distribution<double>()(rng), -90.0, 90.0);
            if (near_frontal(r.yaw_deg)) {
                r.menu = task_strategy(task);
            }
            out.push_back(r);
        }
    }
    return out;
}

void expect_views_from_menu(const std::vector<PlanRecord>& records, const AugmentationPlan& plan)
{
    ASSERT_EQ(plan.views.size(), records.size());
    std::size_t total = 0;
    for (std::size_t i = 0; i < records.size(); ++i) {
        std::set<std::pair<double, double>> seen;
        for (const auto& v : plan.views[i]) {
            EXPECT_NE(std::find(records[i].menu.begin(), records[i].menu.end(), v.offsets), records[i].menu.end());
            EXPECT_TRUE(seen.insert({v.offsets.yaw, v.offsets.pitch}).second) << "duplicate view";
        }
        total += plan.views[i].size();
    }
    EXPECT_EQ(total, plan.synth_count);
}

} // namespace

TEST(PoseGroup, TableEdges)
{
    EXPECT_EQ(pose_group(-5.0), 0u);
    EXPECT_EQ(pose_group(30.0), 1u);
    EXPECT_EQ(pose_group(89.0), 4u);
    EXPECT_EQ(pose_group(0.0), 0u);
    EXPECT_EQ(pose_group(10.0), 0u);
    EXPECT_EQ(pose_group(std::nextafter(10.0, 11.0)), 1u);
    EXPECT_EQ(pose_group(-50.0), 2u);
    EXPECT_EQ(pose_group(70.5), 4u);
    EXPECT_EQ(pose_group(90.0), 4u);
    EXPECT_EQ(pose_group(-135.0), 4u);
    EXPECT_THROW(pose_group(std::nan("")), InvalidArgument);
}

TEST(YawEntropy, ClosedCases)
{
    EXPECT_EQ(yaw_entropy(hist({7, 0, 0, 0, 0})), 0.0);
    EXPECT_EQ(yaw_entropy(hist({0, 0, 0, 1, 0})), 0.0);
    EXPECT_EQ(yaw_entropy(hist({3, 3, 3, 3, 3})), std::log(5.0));
    EXPECT_EQ(yaw_entropy(hist({1, 1, 1, 1, 1})), std::log(5.0));
    EXPECT_THROW(yaw_entropy(hist({0, 0, 0, 0, 0})), InvalidArgument);
}

TEST(YawEntropy, MatchesDirectSummation)
{
    const double e = yaw_entropy(hist({2, 1, 1, 0, 0}));
    EXPECT_NEAR(e, -(0.5 * std::log(0.5) + 2 * 0.25 * std::log(0.25)), 1e-15);
    EXPECT_NEAR(e, 1.0397, 1e-4);

    std::mt19937_64 rng(11);
    std::uniform_int_distribution<int> count(0, 40);
    for (int trial = 0; trial < 10000; ++trial) {
        std::vector<std::uint64_t> c(5);
        for (auto& x : c) {
            x = trial % 3 == 0 ? count(rng) % 3 : count(rng);
        }
        if (std::all_of(c.begin(), c.end(), [](auto x) { return x == 0; })) {
            continue;
        }
        const double v = yaw_entropy(hist(c));
        EXPECT_NEAR(v, entropy_oracle(c), 1e-12);
        EXPECT_GE(v, 0.0);
        EXPECT_LE(v, std::log(5.0));
        std::vector<std::uint64_t> perm = c;
        std::shuffle(perm.begin(), perm.end(), rng);
        EXPECT_NEAR(yaw_entropy(hist(perm)), v, 1e-14);
    }
}

TEST(YawEntropy, HistogramFromYaws)
{
    const std::vector<double> yaws{-5, 3, 12, -29, 30, 31, 89, -91};
    const PoseHistogram h = PoseHistogram::of(yaws);
    EXPECT_EQ(h.counts, (std::vector<std::uint64_t>{2, 3, 1, 0, 2}));
    const auto p = h.densities();
    EXPECT_DOUBLE_EQ(p[1], 3.0 / 8.0);
    EXPECT_EQ(identity_yaw_entropy("x", h).identity, "x");
    EXPECT_THROW(PoseHistogram::with_edges({10, 5}), InvalidArgument);
}

TEST(EntropyCutoffSelection, StrictComparison)
{
    const std::vector<EntropyStat> stats{{"a", 0.2}, {"b", 1.0}, {"c", 1.6}};
    EXPECT_TRUE(entropy_cutoff_selection(stats, 0.0).empty());
    EXPECT_EQ(entropy_cutoff_selection(stats, 1.0), (std::vector<std::string>{"a"}));
    EXPECT_EQ(entropy_cutoff_selection(stats, std::log(5.0) + 1e-9).size(), 3u);
    EXPECT_THROW(entropy_cutoff_selection(stats, -1.0), InvalidArgument);
    EXPECT_NEAR(default_entropy_cutoff, 0.8047, 1e-4);
}

TEST(TaskStrategy, Menus)
{
    const auto lm = task_strategy(Task::landmark);
    EXPECT_EQ(lm, (std::vector<EulerOffsets>{{-40, 0}, {-20, 0}, {20, 0}, {40, 0}}));
    EXPECT_EQ(task_strategy(Task::recognition), lm);
    const auto attr = task_strategy(Task::attributes);
    EXPECT_EQ(attr.size(), 24u);
    EXPECT_NE(std::find(attr.begin(), attr.end(), EulerOffsets{60, 20}), attr.end());
    EXPECT_NE(std::find(attr.begin(), attr.end(), EulerOffsets{-60, -20}), attr.end());
    EXPECT_EQ(task_from_string("attributes"), Task::attributes);
    EXPECT_THROW(task_from_string("pose"), InvalidArgument);
}

TEST(NearFrontal, StrictThreshold)
{
    EXPECT_TRUE(near_frontal(3.0, 15.0));
    EXPECT_FALSE(near_frontal(40.0));
    EXPECT_FALSE(near_frontal(15.0));
    EXPECT_FALSE(near_frontal(-15.0));
    EXPECT_TRUE(near_frontal(-14.999));
}

TEST(PlanRandom, RespectsCap)
{
    std::vector<PlanRecord> records(100);
    for (std::size_t i = 0; i < records.size(); ++i) {
        records[i].identity = "id_" + std::to_string(i / 4);
        records[i].menu = task_strategy(Task::landmark);
    }
    PlanConfig cfg;
    const AugmentationPlan plan = plan_random(records, cfg, 5);
    EXPECT_EQ(plan.real_count, 100u);
    EXPECT_EQ(plan.synth_count, 50u);
    EXPECT_LE(2 * plan.synth_count, plan.real_count);
    expect_views_from_menu(records, plan);

    records.pop_back();
    EXPECT_EQ(plan_random(records, cfg, 5).synth_count, 49u);

    cfg.ratio_cap = 0.0;
    const AugmentationPlan empty = plan_random(records, cfg, 5);
    EXPECT_EQ(empty.synth_count, 0u);
    for (const auto& v : empty.views) {
        EXPECT_TRUE(v.empty());
    }
}

TEST(PlanRandom, DeterministicUnderSeed)
{
    const auto records = toy_dataset(30, 8, 1);
    const PlanConfig cfg;
    const AugmentationPlan a = plan_random(records, cfg, 99);
    const AugmentationPlan b = plan_random(records, cfg, 99);
    EXPECT_EQ(a.views, b.views);
    EXPECT_NE(a.views, plan_random(records, cfg, 100).views);
}

TEST(PlanRandom, SpreadsOverRecordsAndStopsWhenMenusRunOut)
{
    std::vector<PlanRecord> records(10);
    for (auto& r : records) {
        r.identity = "a";
    }
    records[0].menu = {{20, 0}, {40, 0}};
    records[1].menu = {{-20, 0}};
    PlanConfig cfg;
    cfg.ratio_cap = 2.0;
    const AugmentationPlan plan = plan_random(records, cfg, 1);
    EXPECT_EQ(plan.synth_count, 3u);
    EXPECT_EQ(plan.views[0].size(), 2u);
    EXPECT_EQ(plan.views[1].size(), 1u);

    cfg.ratio_cap = 0.2; // budget 2: one view each before any record gets a second
    const AugmentationPlan capped = plan_random(records, cfg, 1);
    EXPECT_EQ(capped.views[0].size(), 1u);
    EXPECT_EQ(capped.views[1].size(), 1u);
}

TEST(PlanRandom, IlluminationAndPoseSwitches)
{
    const auto records = toy_dataset(20, 6, 2);
    PlanConfig cfg;
    cfg.augment_illumination = false;
    for (const auto& vs : plan_random(records, cfg, 3).views) {
        for (const auto& v : vs) {
            EXPECT_FALSE(v.light.has_value());
        }
    }
    cfg.augment_illumination = true;
    cfg.augment_pose = false;
    const AugmentationPlan lights = plan_random(records, cfg, 3);
    EXPECT_GT(lights.synth_count, 0u);
    for (const auto& vs : lights.views) {
        EXPECT_LE(vs.size(), 1u);
        for (const auto& v : vs) {
            EXPECT_EQ(v.offsets, (EulerOffsets{0, 0}));
            EXPECT_TRUE(v.light.has_value());
        }
    }
    cfg.augment_illumination = false;
    EXPECT_EQ(plan_random(records, cfg, 3).synth_count, 0u);
}

TEST(PlanEntropy, FrontalOnlyIdentityGainsEntropy)
{
    std::vector<PlanRecord> records;
    for (int i = 0; i < 6; ++i) {
        records.push_back({"frontal", double(i % 3) - 1.0, task_strategy(Task::landmark)});
    }
    for (double yaw : {0.0, 20.0, 40.0, 60.0, 80.0}) {
        records.push_back({"uniform", yaw, near_frontal(yaw) ? task_strategy(Task::landmark) : std::vector<EulerOffsets>{}});
    }
    PlanConfig cfg;
    cfg.entropy_cutoff = 0.5;
    const AugmentationPlan plan = plan_entropy(records, cfg, 7);
    EXPECT_GT(plan.synth_count, 0u);
    EXPECT_TRUE(plan.views[6].empty()); // the uniform identity is never selected
    const auto changes = entropy_changes(records, plan, cfg);
    ASSERT_EQ(changes.size(), 2u);
    EXPECT_EQ(changes[0].identity, "frontal");
    EXPECT_EQ(changes[0].before, 0.0);
    EXPECT_GT(changes[0].after, 0.0);
    EXPECT_TRUE(changes[0].selected);
    EXPECT_EQ(changes[1].before, std::log(5.0));
    EXPECT_FALSE(changes[1].selected);
    EXPECT_EQ(changes[1].after, changes[1].before);
}

TEST(PlanEntropy, ToySetRecomputedEntropiesNeverDrop)
{
    const std::vector<PlanRecord> records{
        {"a", 0.0, task_strategy(Task::landmark)},  {"a", 5.0, task_strategy(Task::landmark)},
        {"a", 45.0, {}},                            {"b", -3.0, task_strategy(Task::landmark)},
        {"b", 12.0, task_strategy(Task::landmark)}, {"c", 2.0, task_strategy(Task::attributes)},
    };
    PlanConfig cfg;
    cfg.entropy_cutoff = 10.0;
    cfg.ratio_cap = 3.0;
    const AugmentationPlan plan = plan_entropy(records, cfg, 1);
    expect_views_from_menu(records, plan);
    // Oracle: rebuild every identity's histogram from scratch and compare direct-summation entropies.
    std::map<std::string, std::vector<std::uint64_t>> before, after;
    for (std::size_t i = 0; i < records.size(); ++i) {
        auto& b = before.try_emplace(records[i].identity, 5, 0).first->second;
        auto& a = after.try_emplace(records[i].identity, 5, 0).first->second;
        ++b[pose_group(records[i].yaw_deg)];
        ++a[pose_group(records[i].yaw_deg)];
        for (const auto& v : plan.views[i]) {
            ++a[pose_group(records[i].yaw_deg + v.offsets.yaw)];
        }
    }
    for (const auto& [id, b] : before) {
        EXPECT_GE(entropy_oracle(after[id]) + 1e-12, entropy_oracle(b)) << id;
    }
    EXPECT_GT(entropy_oracle(after["c"]), 0.0);
}

TEST(PlanEntropy, HundredIdentitiesAndCap)
{
    const auto records = toy_dataset(100, 10, 3);
    for (double cap : {0.5, 0.1, 0.0}) {
        PlanConfig cfg;
        cfg.ratio_cap = cap;
        const AugmentationPlan plan = plan_entropy(records, cfg, 4);
        EXPECT_TRUE(plan.within_cap(cap));
        if (cap == 0.5) {
            EXPECT_LE(2 * plan.synth_count, plan.real_count);
        }
        expect_views_from_menu(records, plan);
        for (const auto& c : entropy_changes(records, plan, cfg)) {
            EXPECT_GE(c.after, c.before) << c.identity;
            if (!c.selected) {
                EXPECT_EQ(c.after, c.before);
            }
        }
    }
    const PlanConfig cfg;
    EXPECT_EQ(plan_entropy(records, cfg, 4).views, plan_entropy(records, cfg, 4).views);
}

TEST(SynthBudget, ExactIntegerCap)
{
    for (std::size_t real = 0; real < 500; ++real) {
        const std::size_t b = synth_budget(real, 0.5);
        EXPECT_LE(2 * b, real);
        EXPECT_GT(2 * (b + 1), real);
    }
    EXPECT_EQ(synth_budget(10, 0.3), 3u);
}
