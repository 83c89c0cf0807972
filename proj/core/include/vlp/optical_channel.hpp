#pragma once

// Line-of-sight Lambertian channel between a ceiling LED and the photodiode.

#include <cstdint>

#include "vlp/geometry.hpp"
#include "vlp/random.hpp"

namespace vlp {

class Scene;

/// m = -ln 2 / ln(cos(semiangle)).
double lambertian_order(double semiangle_deg);

struct LedFixture {
    int id = 0;
    Vec3 position = Vec3::Zero();
    Vec3 normal{0.0, 0.0, -1.0};
    double semiangle_deg = 60.0;
    double transmit_power = 2.2;  // W

    double lambertian_order() const { return vlp::lambertian_order(semiangle_deg); }
};

struct PdCharacteristics {
    double area = 1e-4;             // m^2
    double filter_gain = 1.0;       // T_s
    double concentrator_index = 1.5;
    double fov_deg = 60.0;          // half-angle
    double responsivity = 0.5;      // A/W
    Vec3 normal_camera{0.0, 0.0, 1.0};

    double fov_rad() const { return deg_to_rad(fov_deg); }
    /// fov may be 0 for coverage sweeps; only exactly aligned links pass then.
    void validate() const;
};

struct NoiseModel {
    double current_noise_std = 0.0;  // A per sample
    int rss_samples_averaged = 1000;
};

/// Distances and angles of one LED -> PD link.
struct LinkGeometry {
    double distance = 0.0;       // m
    double irradiance = 0.0;     // phi, rad (at the LED)
    double incidence = 0.0;      // psi, rad (at the PD)
};

LinkGeometry link_geometry(const LedFixture& led, const Vec3& pd_position, const Vec3& pd_normal_world);

/// n^2 / sin^2(fov) inside the field of view (boundary included), 0 outside.
double concentrator_gain(const PdCharacteristics& pd, double psi);

/// Channel DC gain; throws NonPositiveDistance when d <= 0. Links with
/// phi >= 90 deg (PD above the LED plane) have zero gain.
double dc_gain(const LedFixture& led, const PdCharacteristics& pd, double d, double phi, double psi);

double received_power(const LedFixture& led, const PdCharacteristics& pd, const LinkGeometry& link);

/// 10 log10((P R_p)^2 / sigma_n^2). Throws ZeroNoise when sigma_n == 0.
double snr_db(const PdCharacteristics& pd, const NoiseModel& noise, double p_received);

/// Picks sigma_n so that the weakest link inside the PD field of view at
/// `reference_pose` (PD at the camera center) has exactly `target_snr_db`.
/// Throws NoVisibleLink when no LED is inside the field of view.
NoiseModel calibrate_noise(const Scene& scene, const PdCharacteristics& pd, const ReceiverPose& reference_pose,
                           double target_snr_db, int rss_samples_averaged = 1000);

/// Mean of `rss_samples_averaged` noisy photocurrent samples, converted back to watts.
double sample_measured_power(double p_true, const PdCharacteristics& pd, const NoiseModel& noise, Rng& rng);
double sample_measured_power(double p_true, const PdCharacteristics& pd, const NoiseModel& noise,
                             std::uint64_t seed);

}  // namespace vlp
