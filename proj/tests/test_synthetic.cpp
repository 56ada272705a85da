#include "faceaug/mesh/obj.hpp"
#include "faceaug/render/rasterizer.hpp"
#include "faceaug/synthetic/head.hpp"

#include "test_helpers.hpp"

#include <gtest/gtest.h>

#include <map>
#include <set>

using namespace faceaug;

TEST(GenerateHead, DefaultSize)
{
    const SyntheticHead head = generate_head();
    EXPECT_EQ(head.mesh.triangles.size(), 5040u);
    EXPECT_THROW(generate_head(7), InvalidArgument);
}

TEST(GenerateHead, Deterministic)
{
    const SyntheticHead a = generate_head(20);
    const SyntheticHead b = generate_head(20);
    EXPECT_EQ(a.mesh.vertices, b.mesh.vertices);
    EXPECT_EQ(a.mesh.triangles, b.mesh.triangles);
    EXPECT_EQ(a.landmark_vertex_ids, b.landmark_vertex_ids);
}

class HeadAtResolution : public ::testing::TestWithParam<int>
{
};

TEST_P(HeadAtResolution, NoseApexHasStrictlyMaximalDepth)
{
    const SyntheticHead head = generate_head(GetParam());
    const double apex = head.mesh.vertices[head.nose_apex_id].z();
    for (std::uint32_t v = 0; v < head.mesh.vertices.size(); ++v) {
        if (v != head.nose_apex_id) {
            ASSERT_LT(head.mesh.vertices[v].z(), apex) << "vertex " << v;
        }
    }
    EXPECT_EQ(head.landmark_vertex_ids[30], head.nose_apex_id);
}

TEST_P(HeadAtResolution, VertexSetClosedUnderMirror)
{
    const SyntheticHead head = generate_head(GetParam());
    const auto& verts = head.mesh.vertices;
    // Oracle: sort both sets lexicographically and compare elementwise.
    const auto key = [](const Vec3& p) { return std::array<double, 3>{p.x(), p.y(), p.z()}; };
    std::vector<std::array<double, 3>> original, mirrored;
    for (const auto& p : verts) {
        original.push_back(key(p));
        mirrored.push_back(key(Vec3(p.x() == 0.0 ? 0.0 : -p.x(), p.y(), p.z())));
    }
    std::sort(original.begin(), original.end());
    std::sort(mirrored.begin(), mirrored.end());
    for (std::size_t i = 0; i < original.size(); ++i) {
        for (int c = 0; c < 3; ++c) {
            ASSERT_NEAR(original[i][c], mirrored[i][c], 1e-12);
        }
    }
}

TEST_P(HeadAtResolution, TopologyMirrorsToo)
{
    const SyntheticHead head = generate_head(GetParam());
    const auto& verts = head.mesh.vertices;
    std::map<std::array<double, 3>, std::uint32_t> index;
    for (std::uint32_t v = 0; v < verts.size(); ++v) {
        index[{verts[v].x(), verts[v].y(), verts[v].z()}] = v;
    }
    const auto mirror = [&](std::uint32_t v) {
        const Vec3& p = verts[v];
        return index.at({p.x() == 0.0 ? 0.0 : -p.x(), p.y(), p.z()});
    };
    std::set<std::array<std::uint32_t, 3>> tris;
    for (auto t : head.mesh.triangles) {
        std::sort(t.begin(), t.end());
        tris.insert(t);
    }
    for (const auto& t : head.mesh.triangles) {
        std::array<std::uint32_t, 3> m{mirror(t[0]), mirror(t[1]), mirror(t[2])};
        std::sort(m.begin(), m.end());
        ASSERT_TRUE(tris.count(m));
    }
}

TEST_P(HeadAtResolution, BilateralPlaneRecovered)
{
    const SyntheticHead head = generate_head(GetParam());
    const Plane p = fit_bilateral_plane(head.mesh, head.mirrored_vertex_pairs());
    EXPECT_LT((p.normal - Vec3::UnitX()).norm(), 1e-9);
    EXPECT_LT(std::abs(p.offset), 1e-9);
}

TEST_P(HeadAtResolution, LandmarksMirrorThroughPermutation)
{
    const SyntheticHead head = generate_head(GetParam());
    for (std::size_t i = 0; i < landmark_count; ++i) {
        const Vec3& a = head.mesh.vertices[head.landmark_vertex_ids[i]];
        const Vec3& b = head.mesh.vertices[head.landmark_vertex_ids[mirror_68[i]]];
        EXPECT_NEAR(a.x(), -b.x(), 1e-12) << i;
        EXPECT_EQ(a.y(), b.y()) << i;
        EXPECT_EQ(a.z(), b.z()) << i;
        EXPECT_EQ(mirror_68[mirror_68[i]], i);
    }
    // Subject's right eye corner (36) sits on the -x side.
    EXPECT_LT(head.mesh.vertices[head.landmark_vertex_ids[36]].x(), 0.0);
}

TEST_P(HeadAtResolution, ObjRoundTrip)
{
    const SyntheticHead head = generate_head(GetParam());
    const Mesh back = parse_obj(serialize_obj(head.mesh));
    EXPECT_EQ(back.vertices, head.mesh.vertices);
    EXPECT_EQ(back.triangles, head.mesh.triangles);
}

INSTANTIATE_TEST_SUITE_P(Resolutions, HeadAtResolution, ::testing::Values(8, 13, 24, 36, 50));

TEST(GenerateHead, RenderedHalvesMirror)
{
    const SyntheticHead& head = test::default_head();
    const Camera cam = test::test_camera(256);
    const auto src = std::make_shared<const RgbImage>(make_test_image(256, 256, true));
    const RigidPose pose = head.frontal_pose(cam);
    const ColoredMesh cm = bake_vertex_colors(head.mesh, *src, pose, cam);
    RenderConfig cfg;
    cfg.background = SourceImageBackground{src};
    for (std::optional<LightId> light : {std::optional<LightId>{}, std::optional{LightId::top},
                                         std::optional{LightId::bottom}}) {
        const RenderOutput out = rasterize(cm, pose, cam, light, cfg);
        double worst = 0.0;
        int coverage_mismatch = 0;
        for (int y = 0; y < 256; ++y) {
            for (int x = 0; x < 128; ++x) {
                const int mx = 255 - x;
                worst = std::max(worst, (out.image.at(x, y) - out.image.at(mx, y)).cwiseAbs().maxCoeff());
                coverage_mismatch += out.covered(x, y) != out.covered(mx, y);
            }
        }
        EXPECT_EQ(coverage_mismatch, 0);
        EXPECT_LE(worst, 1.0 / 255.0);
    }
}
