#include "faceaug/texture/bake.hpp"

#include "test_helpers.hpp"

#include <gtest/gtest.h>

#include <limits>
#include <random>

using namespace faceaug;

namespace {

// Oracle: scan every pixel for the one whose centre is closest to the projected point. Ties go to
// the later pixel in scan order, i.e. halves round up, which is away from zero inside the raster.
std::array<long, 2> exhaustive_nearest(const Vec2& px, int width, int height)
{
    double best = std::numeric_limits<double>::infinity();
    std::array<long, 2> arg{-1, -1};
    for (int y = 0; y < height; ++y) {
        for (int x = 0; x < width; ++x) {
            const double d = (Vec2(x, y) - px).squaredNorm();
            if (d <= best) {
                best = d;
                arg = {x, y};
            }
        }
    }
    return arg;
}

} // namespace

TEST(BakeVertexColors, UniformGray)
{
    const auto& head = test::default_head();
    const Camera cam = test::test_camera(128);
    const Rgb gray(0.37, 0.37, 0.37);
    const RgbImage image(128, 128, gray);
    const ColoredMesh cm = bake_vertex_colors(head.mesh, image, head.frontal_pose(cam), cam);
    ASSERT_EQ(cm.colors.size(), head.mesh.vertices.size());
    for (std::size_t v = 0; v < cm.colors.size(); ++v) {
        EXPECT_EQ(cm.colors[v], gray);
    }
}

TEST(BakeVertexColors, VertexOnPixelCentre)
{
    const Camera cam{64, 64, 1.0};
    // (10, 20) in pixels is (10 - 31.5, 31.5 - 20) in the camera frame.
    const Mesh mesh = make_mesh({Vec3(-21.5, 11.5, 0.0), Vec3(-15.2, 11.1, 0.0), Vec3(-18.7, 4.3, 0.0)}, {{0, 1, 2}});
    const RgbImage image = make_test_image(64, 64);
    const ColoredMesh cm = bake_vertex_colors(mesh, image, RigidPose{}, cam);
    EXPECT_EQ(cm.colors[0], image.at(10, 20));
    EXPECT_TRUE(cm.textured_mask[0]);
}

TEST(BakeVertexColors, ReprojectionOracle)
{
    const auto& head = test::default_head();
    const Camera cam = test::test_camera(96);
    const RgbImage image = make_test_image(96, 96);
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 3; ++trial) {
        RigidPose pose = head.frontal_pose(cam);
        if (trial > 0) {
            pose.rotation = compose_rotation({std::uniform_real_distribution<double>(-50, 50)(rng), 10.0}).rotation;
            pose.translation += Vec3(3.3, -1.7, 0.0);
        }
        const ColoredMesh cm = bake_vertex_colors(head.mesh, image, pose, cam);
        for (std::size_t v = 0; v < head.mesh.vertices.size(); ++v) {
            const Vec3 p = pose.scale * (pose.rotation * head.mesh.vertices[v]) + pose.translation;
            const Vec2 px(cam.cx() + p.x() / cam.pixel_scale, cam.cy() - p.y() / cam.pixel_scale);
            const auto [x, y] = exhaustive_nearest(px, 96, 96);
            const bool inside = px.x() > -0.5 && px.y() > -0.5 && px.x() < 95.5 && px.y() < 95.5;
            ASSERT_EQ(cm.textured_mask[v], inside) << "vertex " << v;
            if (inside) {
                ASSERT_EQ(cm.colors[v], image.at(int(x), int(y))) << "vertex " << v;
            }
        }
    }
}

TEST(BakeVertexColors, Idempotent)
{
    const auto& head = test::default_head();
    const Camera cam = test::test_camera(128);
    const RgbImage image = make_test_image(128, 128);
    RigidPose pose = head.frontal_pose(cam);
    pose.translation.x() += 50.0;
    const ColoredMesh a = bake_vertex_colors(head.mesh, image, pose, cam);
    const ColoredMesh b = bake_vertex_colors(head.mesh, image, pose, cam);
    EXPECT_EQ(a.colors, b.colors);
    EXPECT_EQ(a.textured_mask, b.textured_mask);
}

TEST(BakeVertexColors, FillUsesNearestTexturedVertex)
{
    const auto& head = test::default_head();
    const Camera cam = test::test_camera(128);
    const RgbImage image = make_test_image(128, 128);
    RigidPose pose = head.frontal_pose(cam);
    pose.translation.x() += 45.0; // push the subject's left side off the raster
    const ColoredMesh cm = bake_vertex_colors(head.mesh, image, pose, cam);

    const std::size_t n = head.mesh.vertices.size();
    std::size_t untextured = 0;
    for (std::size_t v = 0; v < n; ++v) {
        untextured += cm.textured_mask[v] ? 0 : 1;
        for (int c = 0; c < 3; ++c) {
            EXPECT_TRUE(cm.colors[v][c] >= 0.0 && cm.colors[v][c] <= 1.0);
        }
    }
    ASSERT_GT(untextured, 0u);

    // Oracle: hop distance of every vertex to the textured set, via repeated relaxation over edges.
    std::vector<int> hops(n, std::numeric_limits<int>::max());
    for (std::size_t v = 0; v < n; ++v) {
        if (cm.textured_mask[v]) {
            hops[v] = 0;
        }
    }
    for (bool changed = true; changed;) {
        changed = false;
        for (const auto& t : head.mesh.triangles) {
            for (int i = 0; i < 3; ++i) {
                const auto a = t[i], b = t[(i + 1) % 3];
                for (auto [u, w] : {std::pair{a, b}, std::pair{b, a}}) {
                    if (hops[u] != std::numeric_limits<int>::max() && hops[u] + 1 < hops[w]) {
                        hops[w] = hops[u] + 1;
                        changed = true;
                    }
                }
            }
        }
    }
    for (std::size_t v = 0; v < n; ++v) {
        if (cm.textured_mask[v]) {
            continue;
        }
        ASSERT_NE(hops[v], std::numeric_limits<int>::max());
        // The colour must come from some textured vertex exactly hops[v] edges away.
        std::vector<int> dist(n, -1);
        std::vector<std::uint32_t> queue{static_cast<std::uint32_t>(v)};
        dist[v] = 0;
        const auto adjacency = vertex_adjacency(head.mesh);
        bool found = false;
        for (std::size_t q = 0; q < queue.size() && !found; ++q) {
            const auto u = queue[q];
            if (dist[u] > hops[v]) {
                break;
            }
            if (cm.textured_mask[u] && dist[u] == hops[v] && cm.colors[u] == cm.colors[v]) {
                found = true;
            }
            for (auto w : adjacency[u]) {
                if (dist[w] < 0) {
                    dist[w] = dist[u] + 1;
                    queue.push_back(w);
                }
            }
        }
        EXPECT_TRUE(found) << "vertex " << v;
        if (!found) {
            break;
        }
    }
}

TEST(BakeVertexColors, DisconnectedComponentGetsMeanColour)
{
    const Camera cam{16, 16, 1.0};
    // First triangle inside the raster, second one far outside with no shared edge.
    const Mesh mesh = make_mesh({Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(0, 1, 0), Vec3(100, 100, 0), Vec3(101, 100, 0),
                                 Vec3(100, 101, 0)},
                                {{0, 1, 2}, {3, 4, 5}});
    const RgbImage image = make_test_image(16, 16);
    const ColoredMesh cm = bake_vertex_colors(mesh, image, RigidPose{}, cam);
    const Rgb mean = (cm.colors[0] + cm.colors[1] + cm.colors[2]) / 3.0;
    for (int v = 3; v < 6; ++v) {
        EXPECT_FALSE(cm.textured_mask[v]);
        EXPECT_LT((cm.colors[v] - mean).norm(), 1e-15);
    }
}

TEST(BakeVertexColors, Errors)
{
    const auto& head = test::default_head();
    const Camera cam = test::test_camera(64);
    EXPECT_THROW(bake_vertex_colors(head.mesh, RgbImage{}, RigidPose{}, cam), InvalidArgument);
    RigidPose far;
    far.translation = Vec3(1000, 0, 0);
    EXPECT_THROW(bake_vertex_colors(head.mesh, RgbImage(64, 64), far, cam), DegenerateInput);
}

TEST(BakeVertexColors, ExportsAsColouredObjMesh)
{
    const auto& head = test::default_head();
    const Camera cam = test::test_camera(64);
    const ColoredMesh cm = bake_vertex_colors(head.mesh, make_test_image(64, 64), head.frontal_pose(cam), cam);
    const Mesh m = cm.to_mesh();
    ASSERT_TRUE(m.vertex_colors.has_value());
    EXPECT_EQ(*m.vertex_colors, cm.colors);
}
