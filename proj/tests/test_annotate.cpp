#include "faceaug/annotate/alignment.hpp"
#include "faceaug/annotate/face.hpp"
#include "faceaug/annotate/labels.hpp"
#include "faceaug/annotate/landmarks.hpp"
#include "faceaug/render/rasterizer.hpp"
#include "faceaug/synthetic/head.hpp"

#include "test_helpers.hpp"

#include "Eigen/Geometry"
#include <gtest/gtest.h>

#include <filesystem>
#include <random>

using namespace faceaug;

namespace {

struct Scene
{
    Camera cam = test::test_camera(256);
    RigidPose base;
    std::array<Vec2, landmark_count> source{};
};

Scene frontal_scene()
{
    const auto& head = test::default_head();
    Scene s;
    s.base = head.frontal_pose(s.cam);
    const auto pts = project_vertices(head.mesh, head.landmark_vertex_ids, s.base, s.cam);
    std::copy(pts.begin(), pts.end(), s.source.begin());
    return s;
}

RigidPose view(const RigidPose& base, double yaw, double pitch = 0.0)
{
    return apply_offsets(base, {yaw, pitch}, test::default_head().mesh.centroid());
}

} // namespace

TEST(LiftLandmarks, NoseTipLandsOnApex)
{
    const auto& head = test::default_head();
    const Scene s = frontal_scene();
    const Landmark3DSet l3 = lift_landmarks_to_3d(s.source, test::default_head_bvh(), s.base, s.cam);
    ASSERT_EQ(l3.status[30], LiftStatus::hit);
    EXPECT_LT((l3.points[30] - head.mesh.vertices[head.nose_apex_id]).norm(), 1e-3 * head.mesh.bbox_diag);
}

TEST(LiftLandmarks, HitsLieOnLandmarkVertices)
{
    const auto& head = test::default_head();
    const Scene s = frontal_scene();
    const Landmark3DSet l3 = lift_landmarks_to_3d(s.source, test::default_head_bvh(), s.base, s.cam);
    EXPECT_EQ(l3.hit_count(), landmark_count);
    for (std::size_t i = 0; i < landmark_count; ++i) {
        EXPECT_LT((l3.points[i] - head.mesh.vertices[head.landmark_vertex_ids[i]]).norm(), 1e-6 * head.mesh.bbox_diag)
            << "landmark " << i;
    }
}

TEST(LiftLandmarks, OffMeshPointMisses)
{
    Scene s = frontal_scene();
    s.source[0] = Vec2(2.0, 3.0);
    const Landmark3DSet l3 = lift_landmarks_to_3d(s.source, test::default_head_bvh(), s.base, s.cam);
    EXPECT_EQ(l3.status[0], LiftStatus::miss);
    EXPECT_EQ(l3.hit_count(), landmark_count - 1);
}

TEST(LiftLandmarks, MostlyMissingSignalsPoseFailure)
{
    Scene s = frontal_scene();
    for (std::size_t i = 0; i < 35; ++i) {
        s.source[i] = Vec2(1.0, 1.0);
    }
    EXPECT_THROW(lift_landmarks_to_3d(s.source, test::default_head_bvh(), s.base, s.cam), DegenerateInput);
    for (std::size_t i = 0; i < 34; ++i) {
        s.source[i] = Vec2(1.0, 1.0);
    }
    s.source[34] = frontal_scene().source[34];
    EXPECT_NO_THROW(lift_landmarks_to_3d(s.source, test::default_head_bvh(), s.base, s.cam));
}

TEST(ProjectLandmarks, RoundTripAtSourcePose)
{
    std::mt19937_64 rng(3);
    for (double yaw : {0.0, 25.0, -35.0}) {
        const auto& head = test::default_head();
        Scene s = frontal_scene();
        s.base = view(s.base, yaw);
        const auto pts = project_vertices(head.mesh, head.landmark_vertex_ids, s.base, s.cam);
        std::copy(pts.begin(), pts.end(), s.source.begin());
        // Off-vertex jitter: the round trip must hold for any pixel over the mesh.
        std::uniform_real_distribution<double> jitter(-1.0, 1.0);
        for (auto& p : s.source) {
            p += Vec2(jitter(rng), jitter(rng));
        }
        const Landmark3DSet l3 = lift_landmarks_to_3d(s.source, test::default_head_bvh(), s.base, s.cam);
        const auto proj = project_landmarks(l3, test::default_head_bvh(), s.base, s.cam);
        for (std::size_t i = 0; i < landmark_count; ++i) {
            if (l3.status[i] != LiftStatus::hit) {
                continue;
            }
            EXPECT_LT((proj[i].point - s.source[i]).norm(), 0.5) << "yaw " << yaw << " landmark " << i;
            EXPECT_TRUE(proj[i].visible) << "yaw " << yaw << " landmark " << i;
        }
    }
}

TEST(ProjectLandmarks, MatchesDirectFormula)
{
    const Scene s = frontal_scene();
    const Landmark3DSet l3 = lift_landmarks_to_3d(s.source, test::default_head_bvh(), s.base, s.cam);
    const RigidPose q = view(s.base, 40.0);
    const auto proj = project_landmarks(l3, test::default_head_bvh(), q, s.cam);
    for (std::size_t i = 0; i < landmark_count; ++i) {
        const Vec3 x = q.scale * (q.rotation * l3.points[i]) + q.translation;
        const Vec2 expected(0.5 * (s.cam.image_width - 1) + x.x() / s.cam.pixel_scale,
                            0.5 * (s.cam.image_height - 1) - x.y() / s.cam.pixel_scale);
        EXPECT_LT((proj[i].point - expected).norm(), 1e-9);
    }
    // Subject's right cheek (landmark 2) turns toward the camera at positive yaw and its x spreads out;
    // the subject's left cheek (14) compresses toward the silhouette.
    const auto frontal = project_landmarks(l3, test::default_head_bvh(), s.base, s.cam);
    const double cx = s.cam.cx();
    EXPECT_LT(std::abs(proj[14].point.x() - cx) - std::abs(proj[13].point.x() - cx),
              std::abs(frontal[14].point.x() - cx) - std::abs(frontal[13].point.x() - cx));
}

TEST(ProjectLandmarks, SymmetricHeadMirrorsUnderOppositeYaw)
{
    const Scene s = frontal_scene();
    const Landmark3DSet l3 = lift_landmarks_to_3d(s.source, test::default_head_bvh(), s.base, s.cam);
    for (double theta : {10.0, 20.0, 40.0}) {
        const auto plus = project_landmarks(l3, test::default_head_bvh(), view(s.base, theta), s.cam);
        const auto minus = project_landmarks(l3, test::default_head_bvh(), view(s.base, -theta), s.cam);
        for (std::size_t i = 0; i < landmark_count; ++i) {
            const Vec2 a = plus[i].point;
            const Vec2 b = minus[mirror_68[i]].point;
            EXPECT_LT((Vec2(2.0 * s.cam.cx() - a.x(), a.y()) - b).norm(), 0.5) << theta << " " << i;
            EXPECT_EQ(plus[i].visible, minus[mirror_68[i]].visible) << theta << " " << i;
        }
    }
}

TEST(ProjectLandmarks, MissedLiftFollowsNearestNeighbour)
{
    Scene s = frontal_scene();
    s.source[0] += Vec2(-60.0, 0.0); // off the silhouette
    const Landmark3DSet l3 = lift_landmarks_to_3d(s.source, test::default_head_bvh(), s.base, s.cam);
    ASSERT_EQ(l3.status[0], LiftStatus::miss);
    const RigidPose q = view(s.base, 20.0);
    const auto proj = project_landmarks(l3, test::default_head_bvh(), q, s.cam);
    std::size_t nearest = 1;
    for (std::size_t j = 1; j < landmark_count; ++j) {
        if ((s.source[j] - s.source[0]).norm() < (s.source[nearest] - s.source[0]).norm()) {
            nearest = j;
        }
    }
    EXPECT_FALSE(proj[0].visible);
    EXPECT_LT((proj[0].point - (s.source[0] + proj[nearest].point - s.source[nearest])).norm(), 1e-12);
}

TEST(LandmarkVisibility, FarEyeCornerOccludedAtLargeYaw)
{
    const auto& head = test::default_head();
    const Scene s = frontal_scene();
    const RigidPose q = view(s.base, 70.0);
    const Vec3 left_outer = head.mesh.vertices[head.landmark_vertex_ids[45]];
    const Vec3 right_outer = head.mesh.vertices[head.landmark_vertex_ids[36]];
    EXPECT_FALSE(landmark_visibility(left_outer, test::default_head_bvh(), q, s.cam));
    EXPECT_TRUE(landmark_visibility(right_outer, test::default_head_bvh(), q, s.cam));

    // Z-buffer oracle from the renderer's depth output.
    const ColoredMesh cm = bake_vertex_colors(head.mesh, RgbImage(256, 256, Rgb::Constant(0.5)), s.base, s.cam);
    const RenderOutput out = rasterize(cm, q, s.cam, std::nullopt, RenderConfig{});
    const Vec3 pc = q.apply(left_outer);
    const auto [x, y] = nearest_pixel(s.cam.project(pc));
    EXPECT_LT(out.depth.at(int(x), int(y)), Camera::depth(pc) - 2e-3 * q.scale * head.mesh.bbox_diag);
}

TEST(LandmarkVisibility, MonotoneInTau)
{
    const auto& head = test::default_head();
    const Scene s = frontal_scene();
    std::vector<double> taus{1e-6, 1e-4, 1e-3, 2e-3, 1e-2, 0.1, 0.5, 2.0};
    for (double yaw : {-80.0, -50.0, 30.0, 60.0, 85.0}) {
        const RigidPose q = view(s.base, yaw, 15.0);
        for (std::uint32_t v = 0; v < head.mesh.vertices.size(); v += 7) {
            bool was_visible = false;
            for (double tau : taus) {
                const bool vis = landmark_visibility(head.mesh.vertices[v], test::default_head_bvh(), q, s.cam, {tau});
                EXPECT_TRUE(!was_visible || vis) << "vertex " << v << " tau " << tau;
                was_visible = vis;
            }
        }
    }
    EXPECT_THROW(VisibilityConfig{0.0}.validate(), InvalidArgument);
}

TEST(PropagateLabels, CopiesIdentityAndShiftsPose)
{
    AnnotatedFace src;
    src.identity = "id_7";
    src.age = "34";
    src.gender = "f";
    src.yaw_deg = -5.0;
    src.pitch_deg = 2.0;
    const AnnotatedFace out = propagate_labels(src, {{20, 0}, LightId::top});
    EXPECT_EQ(out.identity, "id_7");
    EXPECT_EQ(out.yaw_deg, 15.0);
    EXPECT_EQ(out.pitch_deg, 2.0);
    EXPECT_TRUE(out.is_synthetic);
    EXPECT_EQ(out.light_id, LightId::top);

    AnnotatedFace same = propagate_labels(src, {{0, 0}, std::nullopt});
    EXPECT_TRUE(same.is_synthetic);
    same.is_synthetic = false;
    EXPECT_EQ(same, src);

    for (double yaw : {-60, -40, -20, -10, 10, 20, 40, 60}) {
        const AnnotatedFace v = propagate_labels(src, {{yaw, 0}, std::nullopt});
        EXPECT_EQ(v.gender, src.gender);
        EXPECT_EQ(v.age, src.age);
        EXPECT_EQ(v.identity, src.identity);
    }
}

TEST(LandmarkFile, RoundTripAndErrors)
{
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> coord(-10, 300);
    std::vector<LandmarkSet> sets(3);
    for (auto& s : sets) {
        for (std::size_t i = 0; i < landmark_count; ++i) {
            s.points[i] = Vec2(coord(rng), coord(rng));
            s.visible[i] = (rng() & 1) != 0;
        }
    }
    const auto path = std::filesystem::temp_directory_path() / "faceaug_landmarks_test.txt";
    write_landmark_file(path, sets);
    EXPECT_EQ(read_landmark_file(path), sets);
    std::filesystem::remove(path);

    EXPECT_THROW(parse_landmark_line("1 2 1"), ParseError);
    std::string line = format_landmark_line(sets[0]);
    line.back() = '2';
    EXPECT_THROW(parse_landmark_line(line), ParseError);
}

TEST(AnnotatedFace, Validation)
{
    AnnotatedFace f;
    f.image_width = 100;
    f.image_height = 100;
    for (auto& p : f.landmarks.points) {
        p = Vec2(50, 50);
    }
    EXPECT_NO_THROW(f.validate());
    f.landmarks.points[3] = Vec2(119, -19);
    EXPECT_NO_THROW(f.validate());
    f.landmarks.points[3] = Vec2(121, 0);
    EXPECT_THROW(f.validate(), InvalidArgument);
    f.landmarks.points[3] = Vec2(50, 50);
    f.five_points = {36, 36, 30, 48, 54};
    EXPECT_THROW(f.validate(), InvalidArgument);
    f.five_points = {36, 45, 30, 48, 68};
    EXPECT_THROW(f.validate(), InvalidArgument);
}

TEST(Align5pt, TemplateInputIsIdentity)
{
    const AlignmentTemplate tmpl = AlignmentTemplate::standard();
    const RgbImage image = make_test_image(200, 160);
    const AlignedCrop crop = align_5pt(image, tmpl.points, tmpl);
    EXPECT_NEAR(crop.transform.scale, 1.0, 1e-12);
    EXPECT_NEAR(crop.transform.angle_rad, 0.0, 1e-12);
    EXPECT_LT(crop.transform.translation.norm(), 1e-10);
    for (int y = 0; y < 112; ++y) {
        for (int x = 0; x < 112; ++x) {
            EXPECT_LT((crop.image.at(x, y) - image.at(x, y)).cwiseAbs().maxCoeff(), 1e-9);
        }
    }
}

TEST(Align5pt, RecoversInverseOfKnownSimilarity)
{
    const AlignmentTemplate tmpl = AlignmentTemplate::standard();
    Similarity2D forward;
    forward.scale = 2.0;
    forward.angle_rad = deg_to_rad(30.0);
    forward.translation = Vec2(40, -12);
    std::array<Vec2, 5> pts;
    for (int i = 0; i < 5; ++i) {
        pts[i] = forward.apply(tmpl.points[i]);
    }
    const Similarity2D t = estimate_similarity_2d(pts, tmpl.points);
    EXPECT_NEAR(rad_to_deg(t.angle_rad), -30.0, 1e-6);
    EXPECT_NEAR(t.scale, 0.5, 1e-6);
}

TEST(Align5pt, NoisyPointsMatchUmeyama)
{
    const AlignmentTemplate tmpl = AlignmentTemplate::standard();
    std::mt19937_64 rng(21);
    std::normal_distribution<double> noise(0.0, 1.0);
    std::uniform_real_distribution<double> angle(-1.0, 1.0);
    for (int trial = 0; trial < 50; ++trial) {
        Similarity2D forward;
        forward.scale = 1.5 + angle(rng);
        forward.angle_rad = angle(rng);
        forward.translation = Vec2(30 * angle(rng), 30 * angle(rng));
        std::array<Vec2, 5> pts;
        Eigen::Matrix<double, 2, 5> src, dst;
        for (int i = 0; i < 5; ++i) {
            pts[i] = forward.apply(tmpl.points[i]) + Vec2(noise(rng), noise(rng));
            src.col(i) = pts[i];
            dst.col(i) = tmpl.points[i];
        }
        const Similarity2D t = estimate_similarity_2d(pts, tmpl.points);
        const Eigen::Matrix3d oracle = Eigen::umeyama(src, dst, true);
        double rms = 0.0, rms_oracle = 0.0;
        for (int i = 0; i < 5; ++i) {
            rms += (t.apply(pts[i]) - tmpl.points[i]).squaredNorm();
            const Vec2 o = oracle.topLeftCorner<2, 2>() * pts[i] + oracle.topRightCorner<2, 1>();
            rms_oracle += (o - tmpl.points[i]).squaredNorm();
        }
        EXPECT_NEAR(std::sqrt(rms / 5), std::sqrt(rms_oracle / 5), 1e-9);
        EXPECT_LT((t.linear() - oracle.topLeftCorner<2, 2>()).cwiseAbs().maxCoeff(), 1e-9);
    }
}

TEST(Align5pt, CollinearPointsRejected)
{
    const std::array<Vec2, 5> line{Vec2(0, 0), Vec2(1, 1), Vec2(2, 2), Vec2(3, 3), Vec2(4, 4)};
    EXPECT_THROW(align_5pt(make_test_image(32, 32), line), DegenerateInput);
}

TEST(Similarity2DAugment, IdentityParameters)
{
    const RgbImage image = make_test_image(64, 48);
    LandmarkSet lms;
    for (std::size_t i = 0; i < landmark_count; ++i) {
        lms.points[i] = Vec2(i % 60, i / 2.0);
    }
    const auto [out, moved] = similarity_2d_augment(image, lms, {});
    EXPECT_EQ(out, image);
    EXPECT_EQ(moved, lms);
}

TEST(Similarity2DAugment, QuarterTurnAboutCentre)
{
    const RgbImage image = make_test_image(64, 64);
    LandmarkSet lms;
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> coord(0, 63);
    for (auto& p : lms.points) {
        p = Vec2(coord(rng), coord(rng));
    }
    const auto [out, moved] = similarity_2d_augment(image, lms, {90.0, Vec2::Zero()});
    const Vec2 c(31.5, 31.5);
    for (std::size_t i = 0; i < landmark_count; ++i) {
        const Vec2 d = lms.points[i] - c;
        EXPECT_LT((moved.points[i] - (c + Vec2(-d.y(), d.x()))).norm(), 1e-9);
    }
    // On a square image a quarter turn permutes pixels.
    for (int y = 0; y < 64; ++y) {
        for (int x = 0; x < 64; ++x) {
            const int sx = y, sy = 63 - x; // source of output pixel (x, y)
            EXPECT_LT((out.at(x, y) - image.at(sx, sy)).cwiseAbs().maxCoeff(), 1e-9);
        }
    }
}

TEST(Similarity2DAugment, InverseRestoresLandmarks)
{
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const Similarity2DParams p = sample_similarity_params(seed, 30.0, 20.0);
        EXPECT_LE(std::abs(p.rotation_deg), 30.0);
        const Similarity2D t = similarity_about_centre(p, 120, 90);
        const Similarity2D inv = t.inverse();
        std::mt19937_64 rng(seed);
        for (int k = 0; k < 68; ++k) {
            const Vec2 q(uniform_unit(rng) * 120, uniform_unit(rng) * 90);
            EXPECT_LT((inv.apply(t.apply(q)) - q).norm(), 1e-9);
        }
    }
    EXPECT_THROW(similarity_about_centre({std::nan(""), Vec2::Zero()}, 10, 10), InvalidArgument);
}
