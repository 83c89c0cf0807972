#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "test_support.hpp"
#include "vlp/error.hpp"
#include "vlp/optical_channel.hpp"
#include "vlp/scene.hpp"

using namespace vlp;
using vlp::testing::uniform;

TEST(LambertianOrder, SixtyDegreesIsExactlyOne) { EXPECT_EQ(lambertian_order(60.0), 1.0); }

TEST(LambertianOrder, MatchesDefinition) {
    for (double a : {10.0, 15.0, 30.0, 45.0, 70.0, 85.0}) {
        EXPECT_NEAR(lambertian_order(a), -std::log(2.0) / std::log(std::cos(a * std::numbers::pi / 180.0)), 1e-12);
    }
    EXPECT_THROW(lambertian_order(0.0), Error);
    EXPECT_THROW(lambertian_order(90.0), Error);
}

TEST(ConcentratorGain, TableValues) {
    const PdCharacteristics pd;
    EXPECT_NEAR(concentrator_gain(pd, deg_to_rad(30.0)), 3.0, 1e-12);
    EXPECT_EQ(concentrator_gain(pd, deg_to_rad(61.0)), 0.0);
    EXPECT_NEAR(concentrator_gain(pd, pd.fov_rad()), 2.25 / std::pow(std::sin(pd.fov_rad()), 2), 1e-12);
}

TEST(DcGain, OverheadLink) {
    const LedFixture led;
    const PdCharacteristics pd;
    const double oracle = 2.0 * 1e-4 / (2.0 * std::numbers::pi * 9.0) * 3.0;
    EXPECT_NEAR(dc_gain(led, pd, 3.0, 0.0, 0.0), oracle, 1e-18);
    EXPECT_NEAR(oracle, 1.0610e-5, 1e-9);
}

TEST(DcGain, CutoffAndInverseSquare) {
    const LedFixture led;
    const PdCharacteristics pd;
    EXPECT_EQ(dc_gain(led, pd, 3.0, 0.1, deg_to_rad(61.0)), 0.0);
    const double h1 = dc_gain(led, pd, 2.0, 0.3, 0.4);
    EXPECT_NEAR(dc_gain(led, pd, 4.0, 0.3, 0.4), h1 / 4.0, 1e-18);
    try {
        dc_gain(led, pd, 0.0, 0.0, 0.0);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::NonPositiveDistance);
    }
}

TEST(ReceivedPower, DirectlyBelowLed) {
    const LedFixture led{1, Vec3(1, 1, 3)};
    const PdCharacteristics pd;
    const double p = received_power(led, pd, link_geometry(led, Vec3(1, 1, 0), Vec3::UnitZ()));
    EXPECT_NEAR(p, 2.2 * 2.0 * 1e-4 / (2.0 * std::numbers::pi * 9.0) * 3.0, 1e-15);
    EXPECT_NEAR(p, 2.334e-5, 1e-8);
}

TEST(ReceivedPower, RatioMatchesClosedFormProperty) {
    // Oracle: cos phi = h/d with a shared LED height h, so P ~ cos psi / d^(m+2) with m = 1.
    const Scene scene = Scene::reference();
    const PdCharacteristics pd;
    std::mt19937_64 rng(21);
    int checked = 0;
    for (int t = 0; t < 300; ++t) {
        const Vec3 r(uniform(rng, 0, 5), uniform(rng, 0, 5), uniform(rng, 0, 2.5));
        const Vec3 n = vlp::testing::random_tilt(rng, 20.0) * Vec3::UnitZ();
        const auto& li = scene.leds()[static_cast<std::size_t>(t % 5)];
        const auto& lj = scene.leds()[static_cast<std::size_t>((t + 2) % 5)];
        const auto gi = link_geometry(li, r, n);
        const auto gj = link_geometry(lj, r, n);
        const double pi = received_power(li, pd, gi);
        const double pj = received_power(lj, pd, gj);
        if (pi <= 0.0 || pj <= 0.0) continue;
        const double di = (li.position - r).norm();
        const double dj = (lj.position - r).norm();
        const double ci = n.dot(li.position - r) / di;
        const double cj = n.dot(lj.position - r) / dj;
        EXPECT_NEAR(pj / pi, std::pow(di / dj, 3.0) * cj / ci, 1e-12 * pj / pi);
        ++checked;
    }
    EXPECT_GT(checked, 100);
}

TEST(SnrDb, Decades) {
    const PdCharacteristics pd;
    NoiseModel noise{1e-6, 1};
    EXPECT_NEAR(snr_db(pd, noise, 1e-6 / pd.responsivity), 0.0, 1e-12);
    EXPECT_NEAR(snr_db(pd, noise, 1e-5 / pd.responsivity), 20.0, 1e-12);
    EXPECT_THROW(snr_db(pd, NoiseModel{0.0, 1}, 1e-6), Error);
}

TEST(SnrDb, MonotoneInPower) {
    const PdCharacteristics pd;
    NoiseModel noise{1e-7, 1};
    double prev = -1e300;
    for (double p = 1e-9; p < 1e-3; p *= 1.7) {
        const double s = snr_db(pd, noise, p);
        EXPECT_GT(s, prev);
        prev = s;
    }
}

TEST(CalibrateNoise, HitsTargetAtWeakestLink) {
    const Scene scene = Scene::reference();
    const PdCharacteristics pd;
    ReceiverPose corner;
    const NoiseModel n136 = calibrate_noise(scene, pd, corner, 13.6);
    double weakest = 1e300;
    for (const auto& led : scene.leds()) {
        const double p = received_power(led, pd, link_geometry(led, corner.position, Vec3::UnitZ()));
        if (p > 0.0) weakest = std::min(weakest, p);
    }
    EXPECT_NEAR(snr_db(pd, n136, weakest), 13.6, 1e-9);
    const NoiseModel n20 = calibrate_noise(scene, pd, corner, 20.0);
    EXPECT_NEAR(n136.current_noise_std / n20.current_noise_std, std::pow(10.0, 0.32), 1e-12);
}

TEST(CalibrateNoise, NoVisibleLink) {
    const Scene scene = Scene::reference();
    ReceiverPose down{Vec3(2.5, 2.5, 1.0), Rotation::about_axis(Vec3::UnitX(), std::numbers::pi)};
    try {
        calibrate_noise(scene, PdCharacteristics{}, down, 13.6);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::NoVisibleLink);
    }
}

TEST(SampleMeasuredPower, NoiselessAndDeterministic) {
    const PdCharacteristics pd;
    EXPECT_EQ(sample_measured_power(1.234e-6, pd, NoiseModel{0.0, 1000}, 7), 1.234e-6);
    const NoiseModel noise{3e-7, 1000};
    EXPECT_EQ(sample_measured_power(1e-6, pd, noise, 42), sample_measured_power(1e-6, pd, noise, 42));
}

TEST(SampleMeasuredPower, AveragedStdMatchesCentralLimit) {
    const PdCharacteristics pd;
    const NoiseModel noise{3e-7, 1000};
    const int n = 10000;
    double sum = 0.0;
    double sq = 0.0;
    for (int s = 0; s < n; ++s) {
        const double x = sample_measured_power(1e-6, pd, noise, static_cast<std::uint64_t>(s));
        sum += x;
        sq += x * x;
    }
    const double mean = sum / n;
    const double sd = std::sqrt(sq / n - mean * mean);
    const double expected = noise.current_noise_std / (pd.responsivity * std::sqrt(1000.0));
    EXPECT_NEAR(sd / expected, 1.0, 0.1);
    EXPECT_NEAR(mean, 1e-6, 4.0 * expected / std::sqrt(static_cast<double>(n)));
}

TEST(Scene, ReferenceMatchesTable) {
    const Scene s = Scene::reference();
    ASSERT_EQ(s.leds().size(), 5u);
    EXPECT_TRUE(s.led(5).position.isApprox(Vec3(2.5, 2.5, 3)));
    EXPECT_EQ(s.led(1).transmit_power, 2.2);
    EXPECT_EQ(s.lambertian_order(), 1.0);
    EXPECT_EQ(s.led_height(), 3.0);
}

TEST(Scene, RejectsInvalidLayouts) {
    auto leds = Scene::reference().leds();
    leds[1].position.z() = 2.9;
    EXPECT_THROW(Scene(Room{}, leds), Error);
    leds = Scene::reference().leds();
    leds[2].id = 1;
    EXPECT_THROW(Scene(Room{}, leds), Error);
    leds = Scene::reference().leds();
    leds.resize(2);
    EXPECT_THROW(Scene(Room{}, leds), Error);
    leds = Scene::reference().leds();
    leds[0].position.x() = 6.0;
    EXPECT_THROW(Scene(Room{}, leds), Error);
}
