#include <gtest/gtest.h>

#include <algorithm>
#include <numbers>

#include "test_support.hpp"
#include "vlp/baselines.hpp"
#include "vlp/error.hpp"
#include "vlp/harness.hpp"

using namespace vlp;
using vlp::testing::feasible_pose;
using vlp::testing::noiseless;

namespace {

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    return v[v.size() / 2];
}

ObservationSet keep_visible(const ObservationSet& obs, int n) {
    ObservationSet out = obs;
    int kept = 0;
    for (auto& o : out.observations) {
        if (o.visible() && kept++ >= n) o.snr_ok = false;
    }
    return out;
}

}  // namespace

TEST(RequiredLeds, TableValues) {
    EXPECT_EQ(required_leds("eCA-RSSR").needed_2d, 3);
    EXPECT_EQ(required_leds("eca_rssr").needed_3d, 3);
    EXPECT_EQ(required_leds("RSSR").needed_2d, 4);
    EXPECT_EQ(required_leds("rssr").needed_3d, 5);
    EXPECT_EQ(required_leds("PnP").needed(Dimension::Two), 4);
    EXPECT_EQ(required_leds("pnp").needed(Dimension::Three), 4);
    EXPECT_EQ(required_leds("CA-RSSR").needed(Dimension::Two), 3);
    EXPECT_EQ(required_leds("ca-rssr").needed(Dimension::Three), 5);
    try {
        required_leds("fingerprint");
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::UnknownAlgorithm);
    }
}

TEST(Rssr, IdealExactWhenNoiseless) {
    const Scene scene = Scene::reference();
    const Receiver rx;
    std::mt19937_64 rng(40);
    for (const Dimension dim : {Dimension::Two, Dimension::Three}) {
        for (int t = 0; t < 50; ++t) {
            const ReceiverPose pose =
                feasible_pose(rng, scene, rx, noiseless(), required_leds("rssr").needed(dim), 0.0, dim == Dimension::Two);
            const auto obs = observe(scene, pose, rx, noiseless(), 0);
            const auto est = estimate_rssr(obs, scene, rx, RssrVariant::Ideal, dim);
            EXPECT_LT(positioning_error(est, pose.position), 1e-6) << to_string(dim) << " trial " << t;
        }
    }
}

TEST(Rssr, InsufficientLeds) {
    const Scene scene = Scene::reference();
    const Receiver rx;
    const auto obs = keep_visible(observe(scene, ReceiverPose{Vec3(2.5, 2.5, 0), {}}, rx, noiseless(), 0), 3);
    try {
        estimate_rssr(obs, scene, rx, RssrVariant::Ideal, Dimension::Two);
        FAIL();
    } catch (const InsufficientLedsError& e) {
        EXPECT_EQ(e.visible(), 3);
        EXPECT_EQ(e.required(), 4);
    }
}

TEST(Rssr, IdealEqualsPortableWithoutTilt) {
    const Scene scene = Scene::reference();
    const Receiver rx;
    SensingConfig sc;
    sc.rss_noise = calibrate_noise(scene, rx.pd, ReceiverPose{}, 13.6);
    std::mt19937_64 rng(41);
    for (int t = 0; t < 50; ++t) {
        const ReceiverPose pose = feasible_pose(rng, scene, rx, sc, 4, 0.0, true);
        const auto obs = observe(scene, pose, rx, sc, static_cast<std::uint64_t>(t));
        const auto a = estimate_rssr(obs, scene, rx, RssrVariant::Ideal, Dimension::Two);
        const auto b = estimate_rssr(obs, scene, rx, RssrVariant::Portable, Dimension::Two);
        EXPECT_EQ(a.xy, b.xy);
    }
}

TEST(Rssr, PortableDegradesUnderTilt) {
    const Scene scene = Scene::reference();
    const Receiver rx;
    SensingConfig sc;
    sc.rss_noise = calibrate_noise(scene, rx.pd, ReceiverPose{}, 13.6);
    std::mt19937_64 rng(42);
    std::vector<double> ideal;
    std::vector<double> portable;
    for (int t = 0; t < 200; ++t) {
        ReceiverPose pose;
        do {
            const double az = vlp::testing::uniform(rng, 0.0, 2.0 * std::numbers::pi);
            pose.position = Vec3(vlp::testing::uniform(rng, 0, 5), vlp::testing::uniform(rng, 0, 5), 0.0);
            pose.rotation = Rotation::about_axis(Vec3(std::cos(az), std::sin(az), 0.0), deg_to_rad(5.0));
        } while (count_visible(scene, pose, rx, sc) < 4);
        const auto obs = observe(scene, pose, rx, sc, static_cast<std::uint64_t>(t));
        const auto pe = [&](RssrVariant v) {
            try {
                return positioning_error(estimate_rssr(obs, scene, rx, v, Dimension::Two), pose.position);
            } catch (const Error&) {
                return std::numeric_limits<double>::infinity();
            }
        };
        ideal.push_back(pe(RssrVariant::Ideal));
        portable.push_back(pe(RssrVariant::Portable));
    }
    EXPECT_GT(median(portable), 2.0 * median(ideal));
}

TEST(CaRssr, ExactWhenNoiseless) {
    const Scene scene = Scene::reference();
    const Receiver rx;
    std::mt19937_64 rng(43);
    for (const Dimension dim : {Dimension::Two, Dimension::Three}) {
        for (int t = 0; t < 50; ++t) {
            const ReceiverPose pose = feasible_pose(rng, scene, rx, noiseless(), required_leds("ca-rssr").needed(dim),
                                                    15.0, dim == Dimension::Two);
            const auto obs = observe(scene, pose, rx, noiseless(), 0);
            const auto est = estimate_ca_rssr(obs, scene, rx.camera, dim);
            EXPECT_LT(positioning_error(est, pose.position), 1e-6) << to_string(dim) << " trial " << t;
            EXPECT_EQ(est.mode, EstimatorMode::CaRssr);
        }
    }
}

TEST(CaRssr, InsufficientLeds3d) {
    const Scene scene = Scene::reference();
    const Receiver rx;
    const auto obs = keep_visible(observe(scene, ReceiverPose{Vec3(2.5, 2.5, 0), {}}, rx, noiseless(), 0), 4);
    EXPECT_THROW(estimate_ca_rssr(obs, scene, rx.camera, Dimension::Three), InsufficientLedsError);
    EXPECT_NO_THROW(estimate_ca_rssr(obs, scene, rx.camera, Dimension::Two));
}
