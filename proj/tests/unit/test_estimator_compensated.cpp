#include <gtest/gtest.h>

#include <Eigen/LU>

#include <cmath>

#include "test_support.hpp"
#include "vlp/error.hpp"
#include "vlp/estimator_basic.hpp"
#include "vlp/estimator_compensated.hpp"

using namespace vlp;
using vlp::testing::feasible_pose;
using vlp::testing::noiseless;

namespace {

struct Case {
    ReceiverPose pose;
    ObservationSet obs;
    SelectedLinks links;
};

Case make_case(std::mt19937_64& rng, const Scene& scene, const Receiver& rx, double max_tilt, bool planar) {
    Case c;
    c.pose = feasible_pose(rng, scene, rx, noiseless(), 3, max_tilt, planar);
    c.obs = observe(scene, c.pose, rx, noiseless(), 0);
    c.links = select_triangle(c.obs, scene);
    return c;
}

Receiver offset_receiver(const Vec3& d) {
    Receiver rx;
    rx.pd_offset = d;
    return rx;
}

CompensationConfig config_for(const Receiver& rx) {
    CompensationConfig cfg;
    cfg.pd_offset = rx.pd_offset;
    return cfg;
}

}  // namespace

TEST(LedCameraCoords, Examples) {
    const Scene scene = Scene::reference();
    const CameraIntrinsics intr;
    LinkObservation o;
    o.led_id = 5;
    o.mean_pixel = {320, 240};
    SelectedLinks links{o, o, o};
    const auto s = led_camera_coords(links, intr, scene, Vec3(2.5, 2.5, 1.0));
    EXPECT_NEAR((s[0] - Vec3(0, 0, 2)).norm(), 0.0, 1e-12);
    links[1].mean_pixel = {400, 300};
    const auto near = led_camera_coords(links, intr, scene, Vec3(2.5, 2.5, 2.0));
    const auto far = led_camera_coords(links, intr, scene, Vec3(2.5, 2.5, 1.0));
    EXPECT_LT((far[1] - 2.0 * near[1]).norm(), 1e-12);
}

TEST(LedCameraCoords, TruthRoundTrip) {
    const Scene scene = Scene::reference();
    const Receiver rx = offset_receiver(Vec3(0.2, 0, 0));
    std::mt19937_64 rng(3);
    for (int t = 0; t < 200; ++t) {
        const Case c = make_case(rng, scene, rx, 30.0, false);
        const auto s = led_camera_coords(c.links, rx.camera, scene, c.pose.position);
        for (std::size_t k = 0; k < 3; ++k) {
            const Vec3 truth = world_to_camera(c.pose, scene.led(c.links[k].led_id).position);
            EXPECT_LT((s[k] - truth).norm(), 1e-9);
        }
    }
}

TEST(PdIncidence, Examples) {
    CompensationConfig cfg;
    const Vec3 s(0.3, -0.4, 2.0);
    EXPECT_NEAR(pd_incidence(s, cfg, Vec3::UnitZ()), std::atan(0.5 / 2.0), 1e-14);
    cfg.pd_offset = Vec3(0.1, 0.2, 0.0);
    EXPECT_NEAR(pd_incidence(Vec3(0.1, 0.2, 1.5), cfg, Vec3::UnitZ()), 0.0, 1e-14);
    EXPECT_THROW(pd_incidence(cfg.pd_offset, cfg, Vec3::UnitZ()), Error);
}

TEST(PdIncidence, MatchesTrueIncidenceWithOffset) {
    const Scene scene = Scene::reference();
    const Receiver rx = offset_receiver(Vec3(0.2, 0, 0));
    const CompensationConfig cfg = config_for(rx);
    std::mt19937_64 rng(4);
    for (int t = 0; t < 200; ++t) {
        const Case c = make_case(rng, scene, rx, 30.0, false);
        for (const auto& o : c.links) {
            const Vec3 sw = scene.led(o.led_id).position;
            EXPECT_NEAR(pd_incidence(world_to_camera(c.pose, sw), cfg, Vec3::UnitZ()),
                        vlp::testing::true_pd_incidence(c.pose, rx, sw), 1e-9);
        }
    }
}

TEST(EstimateRotation, Examples) {
    const std::array<Vec3, 3> s{Vec3(1, 0, 2), Vec3(0, 1, 2), Vec3(-1, -1, 2)};
    const Vec3 r(1, 2, 0.5);
    std::array<Vec3, 3> w;
    for (std::size_t k = 0; k < 3; ++k) w[k] = s[k] + r;
    EXPECT_LT((estimate_rotation(s, w, r).rotation.matrix() - Mat3::Identity()).norm(), 1e-12);
    const std::array<Vec3, 3> flat{Vec3(1, 0, 0), Vec3(0, 1, 0), Vec3(1, 1, 0)};
    try {
        estimate_rotation(flat, w, r);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::SingularConfiguration);
    }
}

TEST(EstimateRotation, RoundTripAndOrthonormality) {
    const Scene scene = Scene::reference();
    const Receiver rx;
    std::mt19937_64 rng(5);
    for (int t = 0; t < 300; ++t) {
        const Case c = make_case(rng, scene, rx, 40.0, false);
        std::array<Vec3, 3> sc;
        std::array<Vec3, 3> sw;
        for (std::size_t k = 0; k < 3; ++k) {
            sw[k] = scene.led(c.links[k].led_id).position;
            sc[k] = world_to_camera(c.pose, sw[k]);
        }
        const RotationFit fit = estimate_rotation(sc, sw, c.pose.position);
        EXPECT_LT((fit.rotation.matrix() - c.pose.rotation.matrix()).norm(), 1e-6);
        const Mat3& m = fit.rotation.matrix();
        EXPECT_LT((m.transpose() * m - Mat3::Identity()).cwiseAbs().maxCoeff(), 1e-12);
        EXPECT_NEAR(m.determinant(), 1.0, 1e-12);
    }
}

TEST(PdWorldPosition, Examples) {
    CompensationConfig cfg;
    EXPECT_EQ(pd_world_position(Rotation(), cfg, Vec3(1, 1, 0)), Vec3(1, 1, 0));
    cfg.pd_offset = Vec3(0.1, 0, 0);
    EXPECT_LT((pd_world_position(Rotation(), cfg, Vec3(1, 1, 0)) - Vec3(1.1, 1, 0)).norm(), 1e-15);
}

TEST(RigidPose, TruthRoundTrip) {
    const Scene scene = Scene::reference();
    const Receiver rx = offset_receiver(Vec3(0.2, 0, 0));
    const CompensationConfig cfg = config_for(rx);
    std::mt19937_64 rng(6);
    for (int t = 0; t < 200; ++t) {
        const Case c = make_case(rng, scene, rx, 30.0, false);
        const RigidPoseEstimate p = rigid_pose_at(c.links, rx.camera, scene, cfg, c.pose.position);
        EXPECT_LT((p.pd_world - pd_world_position(c.pose, rx)).norm(), 1e-9);
    }
}

TEST(RssrResiduals, ZeroAtTruthForAnyOffset) {
    const Scene scene = Scene::reference();
    std::mt19937_64 rng(7);
    for (int t = 0; t < 200; ++t) {
        const Vec3 d = vlp::testing::random_unit(rng) * vlp::testing::uniform(rng, 0.0, 0.3);
        const Receiver rx = offset_receiver(Vec3(d.x(), d.y(), 0.0));
        const Case c = make_case(rng, scene, rx, 30.0, false);
        const auto f = rssr_residuals(c.links, rx.camera, scene, config_for(rx), c.pose.position);
        ASSERT_EQ(f.size(), 6);
        EXPECT_LT(f.norm(), 1e-9);
    }
}

TEST(RssrResiduals, SwappedPairsAreReciprocal) {
    const Scene scene = Scene::reference();
    const Receiver rx;
    ReceiverPose pose{Vec3(2.5, 2.5, 0.0), Rotation()};
    const auto obs = observe(scene, pose, rx, noiseless(), 0);
    const auto links = select_triangle(obs, scene);
    ASSERT_EQ(links[1].mean_power, links[2].mean_power);
    const auto f = rssr_residuals(links, rx.camera, scene, CompensationConfig{}, Vec3(2.3, 2.6, 0.1));
    // Ordering (0,1),(0,2),(1,0),(1,2),(2,0),(2,1); g_ij g_ji = 1.
    const auto ratio = [&](int i, int j) {
        return links[static_cast<std::size_t>(j)].mean_power / links[static_cast<std::size_t>(i)].mean_power;
    };
    EXPECT_NEAR((ratio(0, 1) - f(0)) * (ratio(1, 0) - f(2)), 1.0, 1e-12);
    EXPECT_NEAR((ratio(0, 2) - f(1)) * (ratio(2, 0) - f(4)), 1.0, 1e-12);
    EXPECT_NEAR((1.0 - f(3)) * (1.0 - f(5)), 1.0, 1e-12);
    EXPECT_NE(f(3), 0.0);
    EXPECT_EQ(std::signbit(f(3)), !std::signbit(f(5)));
}

TEST(EstimateCompensated, ZeroOffsetMatchesBasic) {
    const Scene scene = Scene::reference();
    const Receiver rx;
    std::mt19937_64 rng(8);
    for (int t = 0; t < 100; ++t) {
        const Case c = make_case(rng, scene, rx, 20.0, false);
        const auto basic = estimate_basic(c.obs, scene, rx.camera, Dimension::Three);
        const auto comp = estimate_compensated(c.obs, scene, rx.camera, CompensationConfig{}, Dimension::Three);
        EXPECT_LT((comp.position() - basic.position()).norm(), 1e-6);
        EXPECT_EQ(comp.mode, EstimatorMode::Compensated);
    }
}

TEST(EstimateCompensated, NoiselessExact2d) {
    const Scene scene = Scene::reference();
    const Receiver rx = offset_receiver(Vec3(0.2, 0, 0));
    std::mt19937_64 rng(9);
    for (int t = 0; t < 100; ++t) {
        const Case c = make_case(rng, scene, rx, 10.0, true);
        const auto est = estimate_compensated(c.obs, scene, rx.camera, config_for(rx), Dimension::Two);
        EXPECT_LT(positioning_error(est, c.pose.position), 1e-3) << "trial " << t;
        EXPECT_FALSE(est.z.has_value());
    }
}

TEST(EstimateCompensated, NeverWorseThanStart) {
    const Scene scene = Scene::reference();
    const Receiver rx = offset_receiver(Vec3(0.2, 0, 0));
    const CompensationConfig cfg = config_for(rx);
    SensingConfig sc;
    sc.rss_noise = calibrate_noise(scene, rx.pd, ReceiverPose{}, 13.6);
    std::mt19937_64 rng(10);
    for (int t = 0; t < 100; ++t) {
        const ReceiverPose pose = feasible_pose(rng, scene, rx, sc, 3, 10.0);
        const auto obs = observe(scene, pose, rx, sc, static_cast<std::uint64_t>(t));
        const auto links = select_triangle(obs, scene);
        const auto basic = estimate_basic(obs, scene, rx.camera, Dimension::Three);
        const auto comp = estimate_compensated(obs, scene, rx.camera, cfg, Dimension::Three);
        const double start = rssr_residuals(links, rx.camera, scene, cfg, basic.position()).squaredNorm();
        const double end = rssr_residuals(links, rx.camera, scene, cfg, comp.position()).squaredNorm();
        EXPECT_LE(end, start);
        EXPECT_NEAR(comp.diagnostics.final_cost, end, 1e-12 + 1e-9 * end);
    }
}

TEST(Estimate, DispatchBoundary) {
    const Scene scene = Scene::reference();
    for (const auto& [offset, mode] : {std::pair{0.01, EstimatorMode::Basic}, std::pair{0.06, EstimatorMode::Basic},
                                       std::pair{0.10, EstimatorMode::Compensated}}) {
        const Receiver rx = offset_receiver(Vec3(offset, 0, 0));
        ReceiverPose pose{Vec3(2.0, 2.2, 0.0), Rotation()};
        const auto obs = observe(scene, pose, rx, noiseless(), 0);
        EXPECT_EQ(estimate(obs, scene, rx.camera, config_for(rx), Dimension::Two).mode, mode) << offset;
    }
}
