#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "test_support.hpp"
#include "vlp/error.hpp"
#include "vlp/estimator_basic.hpp"

using namespace vlp;
using vlp::testing::feasible_pose;
using vlp::testing::noiseless;

namespace {

LinkObservation link(int id, double p, PixelPoint px = {}) {
    LinkObservation o;
    o.led_id = id;
    o.mean_power = p;
    o.mean_pixel = px;
    o.in_pd_fov = o.in_camera_frame = o.snr_ok = true;
    return o;
}

ErrorCode code_of(const auto& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    ADD_FAILURE() << "no error raised";
    return ErrorCode::InvalidArgument;
}

}  // namespace

TEST(IncidenceAngle, Examples) {
    const CameraIntrinsics intr;
    EXPECT_EQ(incidence_angle(intr, {320, 240}).psi, 0.0);
    EXPECT_NEAR(incidence_angle(intr, {400, 240}).psi, std::atan(0.1), 1e-15);
    EXPECT_NEAR(rad_to_deg(incidence_angle(intr, {400, 240}).psi), 5.711, 1e-3);
}

TEST(IncidenceAngle, MatchesTrueIncidenceWhenUntilted) {
    const Scene scene = Scene::reference();
    const Receiver rx;
    std::mt19937_64 rng(2);
    for (int t = 0; t < 200; ++t) {
        const ReceiverPose pose = feasible_pose(rng, scene, rx, noiseless(), 1, 0.0);
        const auto obs = observe(scene, pose, rx, noiseless(), 0);
        for (const auto& o : obs.observations) {
            if (!o.visible()) continue;
            const double truth = vlp::testing::true_pd_incidence(pose, rx, scene.led(o.led_id).position);
            EXPECT_NEAR(incidence_angle(rx.camera, o.mean_pixel).psi, truth, 1e-12);
        }
    }
}

TEST(DistanceRatio, Examples) {
    const IncidenceEstimate a{1, 0.3};
    const IncidenceEstimate b{2, 0.3};
    EXPECT_NEAR(distance_ratio(link(1, 1e-6), link(2, 1e-6), a, b, 1.0).rho, 1.0, 1e-15);
    EXPECT_NEAR(distance_ratio(link(1, 1e-6), link(2, 4e-6), a, b, 1.0).rho, 1.5874010519681994, 1e-12);
    EXPECT_EQ(code_of([&] { distance_ratio(link(1, 0.0), link(2, 1e-6), a, b, 1.0); }), ErrorCode::NonPositivePower);
    EXPECT_EQ(code_of([&] { distance_ratio(link(1, 1e-6), link(2, 1e-6), a, {2, std::numbers::pi / 2}, 1.0); }),
              ErrorCode::GrazingIncidence);
}

TEST(DistanceRatio, ReciprocalProperty) {
    std::mt19937_64 rng(8);
    for (int t = 0; t < 500; ++t) {
        const auto oi = link(1, vlp::testing::uniform(rng, 1e-7, 1e-4));
        const auto oj = link(2, vlp::testing::uniform(rng, 1e-7, 1e-4));
        const IncidenceEstimate pi{1, vlp::testing::uniform(rng, 0.0, 1.4)};
        const IncidenceEstimate pj{2, vlp::testing::uniform(rng, 0.0, 1.4)};
        const double m = vlp::testing::uniform(rng, 0.5, 5.0);
        EXPECT_NEAR(distance_ratio(oi, oj, pi, pj, m).rho * distance_ratio(oj, oi, pj, pi, m).rho, 1.0, 1e-12);
    }
}

TEST(AbsoluteDistances, Examples) {
    const double a60 = std::numbers::pi / 3;
    const auto d = absolute_distances({1, 2, 1.0}, {1, 3, 1.0}, a60, a60, 1.0, 1.0);
    EXPECT_NEAR(d[0].d, 1.0, 1e-15);
    EXPECT_NEAR(d[1].d, 1.0, 1e-15);
    EXPECT_EQ(d[1].led_id, 2);
    EXPECT_EQ(d[2].led_id, 3);
    EXPECT_EQ(code_of([] { absolute_distances({1, 2, 1.0}, {1, 3, 1.0}, 0.0, 0.5, 1.0, 1.0); }),
              ErrorCode::DegenerateTriangle);
    EXPECT_EQ(code_of([] { absolute_distances({1, 2, 1.0}, {1, 3, 1.0}, 0.3, 0.5, 0.0, 1.0); }),
              ErrorCode::InvalidArgument);
}

TEST(AbsoluteDistances, LawOfCosinesIdentity) {
    std::mt19937_64 rng(13);
    for (int t = 0; t < 1000; ++t) {
        const double rho = vlp::testing::uniform(rng, 0.2, 5.0);
        const double alpha = vlp::testing::uniform(rng, 0.05, 3.0);
        const double base = vlp::testing::uniform(rng, 0.5, 4.0);
        const auto d = absolute_distances({1, 2, rho}, {1, 3, 1.3}, alpha, 0.4, base, 1.0);
        const double lhs = d[0].d * d[0].d + d[1].d * d[1].d - 2.0 * d[0].d * d[1].d * std::cos(alpha);
        EXPECT_NEAR(lhs, base * base, 1e-9 * std::max(1.0, base * base));
        EXPECT_NEAR(d[0].d / d[1].d, rho, 1e-12 * rho);
        EXPECT_NEAR(d[0].d / d[2].d, 1.3, 1e-12);
    }
}

TEST(Solve2d, Examples) {
    const std::array<Vec3, 3> leds{Vec3(1, 1, 3), Vec3(1, 4, 3), Vec3(4, 4, 3)};
    const std::array<DistanceEstimate, 3> equal{DistanceEstimate{1, 2.0}, {2, 2.0}, {3, 2.0}};
    const Vec2 c = solve_2d(leds, equal);
    EXPECT_NEAR(c.x(), 2.5, 1e-12);
    EXPECT_NEAR(c.y(), 2.5, 1e-12);
    const std::array<Vec3, 3> line{Vec3(1, 1, 3), Vec3(2.5, 2.5, 3), Vec3(4, 4, 3)};
    EXPECT_EQ(code_of([&] { solve_2d(line, equal); }), ErrorCode::CollinearLeds);
}

TEST(Solve2d, RoundTrip) {
    const std::array<Vec3, 3> leds{Vec3(1, 1, 3), Vec3(4, 1, 3), Vec3(2.5, 2.5, 3)};
    std::mt19937_64 rng(4);
    for (int t = 0; t < 500; ++t) {
        const Vec3 r(vlp::testing::uniform(rng, 0, 5), vlp::testing::uniform(rng, 0, 5),
                     vlp::testing::uniform(rng, 0, 2.5));
        std::array<DistanceEstimate, 3> d;
        for (int k = 0; k < 3; ++k) d[static_cast<std::size_t>(k)] = {k + 1, (leds[static_cast<std::size_t>(k)] - r).norm()};
        const Vec2 xy = solve_2d(leds, d);
        EXPECT_NEAR(xy.x(), r.x(), 1e-9);
        EXPECT_NEAR(xy.y(), r.y(), 1e-9);
        EXPECT_NEAR(recover_z(leds[0], xy, d[0].d, 3.0), r.z(), 1e-6);
    }
}

TEST(RecoverZ, Examples) {
    const Vec3 led(1, 1, 3);
    EXPECT_EQ(recover_z(led, Vec2(1, 4), 3.0, 3.0), 3.0);
    EXPECT_NEAR(recover_z(led, Vec2(1, 1), 3.0, 3.0), 0.0, 1e-15);
    EXPECT_EQ(recover_z(led, Vec2(1, 4), 3.0 - 1e-6, 3.0), 3.0);  // small negative radicand clamps
    EXPECT_EQ(code_of([&] { recover_z(led, Vec2(1, 4), 2.0, 3.0); }), ErrorCode::InconsistentGeometry);
    EXPECT_EQ(code_of([&] { recover_z(led, Vec2(1, 4), 0.0, 3.0); }), ErrorCode::NonPositiveDistance);
}

TEST(SelectTriangle, SkipsPlanCollinearLed) {
    const Scene scene = Scene::reference();
    ObservationSet obs;
    obs.observations = {link(1, 5e-6), link(2, 1e-6), link(3, 4e-6), link(4, 2e-6), link(5, 6e-6)};
    const auto tri = select_triangle(obs, scene);
    EXPECT_EQ(tri[0].led_id, 5);
    EXPECT_EQ(tri[1].led_id, 1);
    EXPECT_EQ(tri[2].led_id, 4);  // LED 3 is on the 1-5 diagonal
}

TEST(EstimateBasic, InsufficientLeds) {
    const Scene scene = Scene::reference();
    ObservationSet obs;
    obs.observations = {link(1, 5e-6), link(2, 1e-6)};
    try {
        estimate_basic(obs, scene, CameraIntrinsics{}, Dimension::Three);
        FAIL();
    } catch (const InsufficientLedsError& e) {
        EXPECT_EQ(e.visible(), 2);
    }
}

TEST(EstimateBasic, NoiselessExactForAnyOrientation) {
    const Scene scene = Scene::reference();
    const Receiver rx;
    std::mt19937_64 rng(77);
    for (int t = 0; t < 500; ++t) {
        const ReceiverPose pose = feasible_pose(rng, scene, rx, noiseless(), 3, 40.0);
        const auto obs = observe(scene, pose, rx, noiseless(), 0);
        const PositionEstimate est = estimate_basic(obs, scene, rx.camera, Dimension::Three);
        EXPECT_LT(positioning_error(est, pose.position), 1e-6) << "trial " << t;
        EXPECT_EQ(est.mode, EstimatorMode::Basic);
        EXPECT_LE(*est.z, scene.led_height());
    }
}

TEST(EstimateBasic, NoiselessDistancesMatchTruth) {
    const Scene scene = Scene::reference();
    const Receiver rx;
    std::mt19937_64 rng(78);
    for (int t = 0; t < 200; ++t) {
        const ReceiverPose pose = feasible_pose(rng, scene, rx, noiseless(), 3, 30.0);
        const auto obs = observe(scene, pose, rx, noiseless(), 0);
        const auto o = select_triangle(obs, scene);
        std::array<IncidenceEstimate, 3> psi;
        std::array<Vec3, 3> rays;
        for (std::size_t k = 0; k < 3; ++k) {
            psi[k] = incidence_angle(rx.camera, o[k].mean_pixel, o[k].led_id);
            rays[k] = pixel_to_camera_ray(rx.camera, o[k].mean_pixel);
        }
        const auto& s = [&](std::size_t k) { return scene.led(o[k].led_id).position; };
        const auto r12 = distance_ratio(o[0], o[1], psi[0], psi[1], 1.0);
        const auto r13 = distance_ratio(o[0], o[2], psi[0], psi[2], 1.0);
        EXPECT_NEAR(r12.rho, (s(0) - pose.position).norm() / (s(1) - pose.position).norm(), 1e-9);
        const auto d = absolute_distances(r12, r13, inter_led_angle(rays[0], rays[1]),
                                          inter_led_angle(rays[0], rays[2]), (s(0) - s(1)).norm(),
                                          (s(0) - s(2)).norm());
        for (std::size_t k = 0; k < 3; ++k) EXPECT_NEAR(d[k].d, (s(k) - pose.position).norm(), 1e-9);
    }
}

TEST(EstimateBasic, TwoDimensionalOmitsZ) {
    const Scene scene = Scene::reference();
    const Receiver rx;
    ReceiverPose pose{Vec3(1.7, 3.1, 0.0), Rotation::about_axis(Vec3(0, 1, 0), 0.1)};
    const auto est = estimate_basic(observe(scene, pose, rx, noiseless(), 0), scene, rx.camera, Dimension::Two);
    EXPECT_FALSE(est.z.has_value());
    EXPECT_LT(positioning_error(est, pose.position), 1e-9);
}
