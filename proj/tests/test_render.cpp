#include "faceaug/render/rasterizer.hpp"
#include "faceaug/synthetic/head.hpp"

#include "test_helpers.hpp"

#include <gtest/gtest.h>

#include <chrono>
#include <random>

using namespace faceaug;

namespace {

Mesh octahedron(const Vec3& centre, double r)
{
    std::vector<Vec3> v{centre + r * Vec3::UnitX(), centre - r * Vec3::UnitX(), centre + r * Vec3::UnitY(),
                        centre - r * Vec3::UnitY(), centre + r * Vec3::UnitZ(), centre - r * Vec3::UnitZ()};
    return make_mesh(std::move(v), {{0, 2, 4}, {2, 1, 4}, {1, 3, 4}, {3, 0, 4}, {2, 0, 5}, {1, 2, 5}, {3, 1, 5}, {0, 3, 5}});
}

ColoredMesh with_colors(const Mesh& mesh, const std::vector<Rgb>& colors)
{
    ColoredMesh cm;
    cm.mesh = mesh;
    cm.colors = colors;
    cm.textured_mask.assign(colors.size(), true);
    return cm;
}

} // namespace

TEST(LightRig, Construction)
{
    const Mesh mesh = octahedron(Vec3::Zero(), 1.0);
    const LightRig rig = make_light_rig(mesh);
    const double d = mesh.bbox_diag;
    EXPECT_LT((rig[LightId::top].position - Vec3(0, 2 * d, 0)).norm(), 1e-15);
    EXPECT_LT((rig[LightId::bottom].position - Vec3(0, -2 * d, 0)).norm(), 1e-15);
    EXPECT_LT((rig[LightId::left].position - Vec3(-2 * d, 0, 0)).norm(), 1e-15);
    EXPECT_LT((rig[LightId::right].position - Vec3(2 * d, 0, 0)).norm(), 1e-15);
    for (auto id : all_light_ids) {
        const SpotLight& l = rig[id];
        EXPECT_LT((l.aim - (-l.position).normalized()).norm(), 1e-15);
        EXPECT_NEAR(l.position.norm() / d, 2.0, 1e-15);
    }
}

TEST(LightRig, TranslatesWithMesh)
{
    const Vec3 shift(3.0, -2.0, 7.5);
    const LightRig a = make_light_rig(octahedron(Vec3::Zero(), 1.0));
    const LightRig b = make_light_rig(octahedron(shift, 1.0));
    for (auto id : all_light_ids) {
        EXPECT_LT((b[id].position - a[id].position - shift).norm(), 1e-12);
        EXPECT_EQ(b[id].aim, a[id].aim);
    }
}

TEST(LightRig, FollowsPose)
{
    const Mesh mesh = octahedron(Vec3(0.1, 0.2, 0.3), 1.0);
    const LightRig rig = make_light_rig(mesh);
    const RigidPose q = apply_offsets(RigidPose{}, {35, -15}, Vec3::Zero());
    const LightRig moved = transform_rig(rig, q);
    for (auto id : all_light_ids) {
        EXPECT_LT((moved[id].position - q.apply(rig[id].position)).norm(), 1e-12);
        EXPECT_LT((moved[id].aim - q.rotation * rig[id].aim).norm(), 1e-12);
    }
}

TEST(LightRig, Errors)
{
    LightRigConfig cfg;
    cfg.radius_factor = 4.0;
    EXPECT_THROW(make_light_rig(octahedron(Vec3::Zero(), 1.0), cfg), InvalidArgument);
    EXPECT_THROW(light_id_from_string("front"), InvalidArgument);
    for (auto id : all_light_ids) {
        EXPECT_EQ(light_id_from_string(to_string(id)), id);
    }
}

TEST(ShadeVertex, PureEmission)
{
    RenderConfig cfg;
    cfg.emission_weight = 1.0;
    SpotLight light;
    light.position = Vec3(0, 0, 5);
    const Rgb albedo(0.2, 0.5, 0.9);
    EXPECT_EQ(shade_vertex(albedo, Vec3::UnitZ(), Vec3::Zero(), &light, cfg), albedo);
    EXPECT_EQ(shade_vertex(albedo, Vec3::UnitZ(), Vec3::Zero(), nullptr, cfg), albedo);
}

TEST(ShadeVertex, FullDiffuseAlongNormal)
{
    RenderConfig cfg;
    cfg.emission_weight = 0.0;
    cfg.ambient = 0.0;
    SpotLight light;
    light.position = Vec3(0, 0, 5);
    light.aim = -Vec3::UnitZ();
    light.intensity = 1.0;
    const Rgb albedo(0.2, 0.5, 0.9);
    EXPECT_LT((shade_vertex(albedo, Vec3::UnitZ(), Vec3::Zero(), &light, cfg) - albedo).norm(), 1e-15);
}

TEST(ShadeVertex, PerpendicularLightLeavesAmbient)
{
    RenderConfig cfg;
    cfg.emission_weight = 0.0;
    cfg.ambient = 0.3;
    SpotLight light;
    light.position = Vec3(5, 0, 0);
    light.aim = -Vec3::UnitX();
    const Rgb albedo(0.2, 0.5, 0.9);
    EXPECT_LT((shade_vertex(albedo, Vec3::UnitZ(), Vec3::Zero(), &light, cfg) - 0.3 * albedo).norm(), 1e-15);
    EXPECT_LT((shade_vertex(albedo, Vec3::UnitZ(), Vec3::Zero(), nullptr, cfg) - 0.3 * albedo).norm(), 1e-15);
}

TEST(ShadeVertex, SpotCone)
{
    SpotLight light;
    light.position = Vec3(0, 0, 10);
    light.aim = -Vec3::UnitZ();
    light.cone_half_angle_deg = 40.0;
    light.falloff_exponent = 2.0;
    EXPECT_DOUBLE_EQ(spot_attenuation(light, Vec3::Zero()), 1.0);
    const Vec3 at30(10 * std::tan(deg_to_rad(30.0)), 0, 0);
    EXPECT_NEAR(spot_attenuation(light, at30), std::pow(std::cos(deg_to_rad(30.0)), 2.0), 1e-12);
    const Vec3 at50(10 * std::tan(deg_to_rad(50.0)), 0, 0);
    EXPECT_EQ(spot_attenuation(light, at50), 0.0);
}

TEST(ShadeVertex, ClampsToUnitRange)
{
    RenderConfig cfg;
    cfg.emission_weight = 0.0;
    cfg.ambient = 3.0;
    const Rgb out = shade_vertex(Rgb(0.9, 0.5, 0.1), Vec3::UnitZ(), Vec3::Zero(), nullptr, cfg);
    EXPECT_EQ(out[0], 1.0);
    EXPECT_EQ(out[1], 1.0);
    EXPECT_NEAR(out[2], 0.3, 1e-15);
}

TEST(SelectRandomLight, DeterministicAndUniform)
{
    EXPECT_EQ(select_random_light(1234), select_random_light(1234));
    std::array<int, 4> counts{};
    std::array<std::array<int, 4>, 4> joint{};
    constexpr int n = 100000;
    for (int i = 0; i < n; ++i) {
        const auto a = static_cast<int>(select_random_light(derive_seed(99, 2 * i)));
        const auto b = static_cast<int>(select_random_light(derive_seed(99, 2 * i + 1)));
        ++counts[a];
        ++joint[a][b];
    }
    double chi2 = 0.0;
    for (int c : counts) {
        EXPECT_NEAR(c / double(n), 0.25, 0.01);
        chi2 += (c - n / 4.0) * (c - n / 4.0) / (n / 4.0);
    }
    EXPECT_LT(chi2, 16.27); // chi-square, 3 dof, p = 0.001
    double chi2_joint = 0.0;
    for (const auto& row : joint) {
        for (int c : row) {
            chi2_joint += (c - n / 16.0) * (c - n / 16.0) / (n / 16.0);
        }
    }
    EXPECT_LT(chi2_joint, 30.58); // 15 dof, p = 0.01: two streams look independent
}

TEST(Rasterize, MeshBehindBackgroundPlaneShowsBackground)
{
    const auto& head = test::default_head();
    const Camera cam = test::test_camera(64);
    const auto bg = std::make_shared<const RgbImage>(make_test_image(64, 64));
    RenderConfig cfg;
    cfg.background = SourceImageBackground{bg};
    RigidPose pose = head.frontal_pose(cam);
    pose.translation.z() -= 1000.0;
    cfg.background_plane_z = -500.0;
    const ColoredMesh cm = bake_vertex_colors(head.mesh, *bg, pose, cam);
    const RenderOutput out = rasterize(cm, pose, cam, LightId::top, cfg);
    EXPECT_EQ(out.image, *bg);
    for (int y = 0; y < 64; ++y) {
        for (int x = 0; x < 64; ++x) {
            EXPECT_FALSE(out.covered(x, y));
            EXPECT_EQ(out.depth.at(x, y), std::numeric_limits<double>::infinity());
        }
    }
}

TEST(Rasterize, FrontTriangleWins)
{
    const Camera cam{32, 32, 1.0};
    // Two overlapping triangles; the red one is nearer the camera (larger z).
    const Mesh mesh = make_mesh({Vec3(-10, -8, 1), Vec3(10, -8, 1), Vec3(0, 10, 1), Vec3(-12, 6, -1), Vec3(12, 6, -1),
                                 Vec3(0, -12, -1)},
                                {{3, 4, 5}, {0, 1, 2}});
    const Rgb red(1, 0, 0), blue(0, 0, 1);
    const ColoredMesh cm = with_colors(mesh, {red, red, red, blue, blue, blue});
    RenderConfig cfg;
    cfg.emission_weight = 1.0;
    const RenderOutput out = rasterize(cm, RigidPose{}, cam, std::nullopt, cfg);

    // Oracle: painter's order, far triangle first, with an independent inside test.
    const auto inside = [&](const std::array<Vec3, 3>& tri, int x, int y) {
        Eigen::Matrix2d m;
        const Vec2 a = cam.project(tri[0]), b = cam.project(tri[1]), c = cam.project(tri[2]);
        m << b.x() - a.x(), c.x() - a.x(), b.y() - a.y(), c.y() - a.y();
        const Vec2 l = m.inverse() * (Vec2(x, y) - a);
        return l.x() >= 0 && l.y() >= 0 && l.x() + l.y() <= 1;
    };
    int red_pixels = 0;
    for (int y = 0; y < 32; ++y) {
        for (int x = 0; x < 32; ++x) {
            Rgb expected = Rgb::Zero();
            bool covered = false;
            if (inside({mesh.vertices[3], mesh.vertices[4], mesh.vertices[5]}, x, y)) {
                expected = blue;
                covered = true;
            }
            if (inside({mesh.vertices[0], mesh.vertices[1], mesh.vertices[2]}, x, y)) {
                expected = red;
                covered = true;
                ++red_pixels;
            }
            EXPECT_EQ(out.covered(x, y), covered) << x << "," << y;
            EXPECT_LT((out.image.at(x, y) - expected).cwiseAbs().maxCoeff(), 1e-12) << x << "," << y;
        }
    }
    EXPECT_GT(red_pixels, 100);
}

TEST(Rasterize, RandomScenesMatchDepthSortedReference)
{
    constexpr int size = 40;
    const Camera cam{size, size, 1.0};
    std::mt19937_64 rng(77);
    std::uniform_real_distribution<double> coord(-25.0, 25.0);
    std::uniform_real_distribution<double> depth(-10.0, 10.0);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_int_distribution<int> count(1, 10);
    RenderConfig cfg;
    cfg.emission_weight = 1.0;
    cfg.background = SolidBackground{Rgb(0.1, 0.2, 0.3)};
    for (int scene = 0; scene < 100; ++scene) {
        std::vector<Vec3> verts;
        std::vector<Triangle> tris;
        std::vector<Rgb> colors;
        const int n = count(rng);
        for (int t = 0; t < n; ++t) {
            const Vec3 c(coord(rng), coord(rng), depth(rng));
            for (int k = 0; k < 3; ++k) {
                verts.push_back(c + Vec3(coord(rng) / 2, coord(rng) / 2, depth(rng) / 2));
                colors.emplace_back(unit(rng), unit(rng), unit(rng));
            }
            const auto b = static_cast<std::uint32_t>(3 * t);
            tris.push_back({b, b + 1, b + 2});
        }
        Mesh mesh;
        try {
            mesh = make_mesh(verts, tris);
        } catch (const DegenerateInput&) {
            continue;
        }
        const ColoredMesh cm = with_colors(mesh, colors);
        const RenderOutput out = rasterize(cm, RigidPose{}, cam, std::nullopt, cfg);

        // Reference: per pixel, every triangle's barycentrics from a 2x2 solve; keep the nearest.
        for (int y = 0; y < size; ++y) {
            for (int x = 0; x < size; ++x) {
                double best = std::numeric_limits<double>::infinity();
                Rgb color(0.1, 0.2, 0.3);
                for (const auto& t : tris) {
                    const Vec2 a = cam.project(verts[t[0]]), b = cam.project(verts[t[1]]), c = cam.project(verts[t[2]]);
                    Eigen::Matrix2d m;
                    m << b.x() - a.x(), c.x() - a.x(), b.y() - a.y(), c.y() - a.y();
                    if (std::abs(m.determinant()) < 1e-12) {
                        continue;
                    }
                    const Vec2 l = m.inverse() * (Vec2(x, y) - a);
                    const double l0 = 1 - l.x() - l.y();
                    if (l.x() < 0 || l.y() < 0 || l0 < 0) {
                        continue;
                    }
                    const double z = -(l0 * verts[t[0]].z() + l.x() * verts[t[1]].z() + l.y() * verts[t[2]].z());
                    if (z < best) {
                        best = z;
                        color = l0 * colors[t[0]] + l.x() * colors[t[1]] + l.y() * colors[t[2]];
                    }
                }
                ASSERT_EQ(out.covered(x, y), std::isfinite(best)) << "scene " << scene << " pixel " << x << "," << y;
                ASSERT_LT((out.image.at(x, y) - color).cwiseAbs().maxCoeff(), 1.0 / 255.0)
                    << "scene " << scene << " pixel " << x << "," << y;
                if (std::isfinite(best)) {
                    ASSERT_NEAR(out.depth.at(x, y), best, 1e-9);
                }
            }
        }
    }
}

TEST(Rasterize, DepthFiniteExactlyOnCoverage)
{
    const auto& head = test::default_head();
    const Camera cam = test::test_camera(96);
    const RigidPose pose = apply_offsets(head.frontal_pose(cam), {30, 10}, Vec3::Zero());
    const ColoredMesh cm = bake_vertex_colors(head.mesh, make_test_image(96, 96), head.frontal_pose(cam), cam);
    const RenderOutput out = rasterize(cm, pose, cam, LightId::left, RenderConfig{});
    int covered = 0;
    for (int y = 0; y < 96; ++y) {
        for (int x = 0; x < 96; ++x) {
            EXPECT_EQ(std::isfinite(out.depth.at(x, y)), out.covered(x, y));
            covered += out.covered(x, y);
        }
    }
    EXPECT_GT(covered, 96 * 96 / 4);
}

TEST(Rasterize, RoundTripReproducesSource)
{
    const auto& head = test::default_head();
    const Camera cam = test::test_camera(256);
    const auto src = std::make_shared<const RgbImage>(make_test_image(256, 256));
    const RigidPose pose = head.frontal_pose(cam);
    RenderConfig cfg;
    cfg.emission_weight = 1.0;
    cfg.background = SourceImageBackground{src};
    const ColoredMesh cm = bake_vertex_colors(head.mesh, *src, pose, cam);
    const RenderOutput out = rasterize(cm, pose, cam, std::nullopt, cfg);
    EXPECT_GE(psnr_srgb8(out.image, *src, out.coverage_mask()), 30.0);
}

TEST(Rasterize, EmissionOnlyIgnoresLight)
{
    const auto& head = test::default_head();
    const Camera cam = test::test_camera(96);
    const RigidPose pose = head.frontal_pose(cam);
    const ColoredMesh cm = bake_vertex_colors(head.mesh, make_test_image(96, 96), pose, cam);
    RenderConfig cfg;
    cfg.emission_weight = 1.0;
    const RenderOutput none = rasterize(cm, pose, cam, std::nullopt, cfg);
    for (auto id : all_light_ids) {
        EXPECT_EQ(rasterize(cm, pose, cam, id, cfg).image, none.image);
    }
}

TEST(Rasterize, LightChangesShading)
{
    const auto& head = test::default_head();
    const Camera cam = test::test_camera(96);
    const RigidPose pose = head.frontal_pose(cam);
    const ColoredMesh cm = bake_vertex_colors(head.mesh, make_test_image(96, 96), pose, cam);
    const RenderOutput none = rasterize(cm, pose, cam, std::nullopt, RenderConfig{});
    const RenderOutput top = rasterize(cm, pose, cam, LightId::top, RenderConfig{});
    EXPECT_NE(top.image, none.image);
    EXPECT_EQ(top.coverage, none.coverage);
}

TEST(Rasterize, PoseAndRigCovariance)
{
    // Moving the mesh by a pose with no rotation, then rendering at the identity, matches rendering
    // the original mesh under that pose, lights included.
    const auto& head = test::default_head();
    const Camera cam = test::test_camera(96);
    const RigidPose pose = head.frontal_pose(cam);
    const ColoredMesh cm = bake_vertex_colors(head.mesh, make_test_image(96, 96), pose, cam);
    std::vector<Vec3> moved;
    for (const auto& v : head.mesh.vertices) {
        moved.push_back(pose.apply(v));
    }
    const ColoredMesh cm_moved = with_colors(make_mesh(moved, head.mesh.triangles), cm.colors);
    for (auto id : all_light_ids) {
        const RenderOutput a = rasterize(cm, pose, cam, id, RenderConfig{});
        const RenderOutput b = rasterize(cm_moved, RigidPose{}, cam, id, RenderConfig{});
        EXPECT_EQ(a.coverage, b.coverage);
        double worst = 0.0;
        for (std::size_t i = 0; i < a.image.pixels.size(); ++i) {
            worst = std::max(worst, (a.image.pixels[i] - b.image.pixels[i]).cwiseAbs().maxCoeff());
        }
        EXPECT_LT(worst, 1e-12) << to_string(id);
    }
}

TEST(Rasterize, DeterministicAndThreadCountInvariant)
{
    const auto& head = test::default_head();
    const Camera cam = test::test_camera(128);
    const RigidPose pose = apply_offsets(head.frontal_pose(cam), {-25, 5}, Vec3::Zero());
    const ColoredMesh cm = bake_vertex_colors(head.mesh, make_test_image(128, 128), head.frontal_pose(cam), cam);
    RenderConfig cfg;
    const RenderOutput a = rasterize(cm, pose, cam, LightId::right, cfg);
    const RenderOutput b = rasterize(cm, pose, cam, LightId::right, cfg);
    EXPECT_EQ(a.image, b.image);
    for (int threads : {2, 3, 7}) {
        cfg.threads = threads;
        const RenderOutput c = rasterize(cm, pose, cam, LightId::right, cfg);
        EXPECT_EQ(c.image, a.image);
        EXPECT_EQ(c.coverage, a.coverage);
    }
}

TEST(Rasterize, Errors)
{
    const auto& head = test::default_head();
    const Camera cam = test::test_camera(32);
    const ColoredMesh cm = bake_vertex_colors(head.mesh, RgbImage(32, 32, Rgb::Constant(0.5)), head.frontal_pose(cam), cam);
    EXPECT_THROW(rasterize(cm, RigidPose{}, Camera{0, 32, 1.0}, std::nullopt, RenderConfig{}), InvalidArgument);
    RenderConfig cfg;
    cfg.background = SourceImageBackground{std::make_shared<const RgbImage>(16, 16)};
    EXPECT_THROW(rasterize(cm, RigidPose{}, cam, std::nullopt, cfg), InvalidArgument);
    cfg = RenderConfig{};
    cfg.emission_weight = 1.5;
    EXPECT_THROW(rasterize(cm, RigidPose{}, cam, std::nullopt, cfg), InvalidArgument);
}
