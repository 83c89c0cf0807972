#include "vlp/optical_channel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "vlp/error.hpp"
#include "vlp/scene.hpp"

namespace vlp {

double lambertian_order(double semiangle_deg) {
    const double c = cos_degrees(semiangle_deg);
    if (!(c > 0.0 && c < 1.0)) {
        throw Error(ErrorCode::InvalidArgument, "LED semi-angle must lie strictly between 0 and 90 degrees");
    }
    return -std::numbers::ln2 / std::log(c);
}

void PdCharacteristics::validate() const {
    if (!(area > 0.0)) throw Error(ErrorCode::InvalidArgument, "PD area must be positive");
    if (!(fov_deg >= 0.0 && fov_deg <= 90.0)) throw Error(ErrorCode::InvalidArgument, "PD FoV must lie in [0, 90] deg");
    if (!(responsivity > 0.0)) throw Error(ErrorCode::InvalidArgument, "PD responsivity must be positive");
    if (std::abs(normal_camera.norm() - 1.0) > 1e-12) {
        throw Error(ErrorCode::InvalidArgument, "PD normal must be a unit vector");
    }
}

LinkGeometry link_geometry(const LedFixture& led, const Vec3& pd_position, const Vec3& pd_normal_world) {
    const Vec3 led_to_pd = pd_position - led.position;
    const double d = led_to_pd.norm();
    if (!(d > 0.0)) throw Error(ErrorCode::NonPositiveDistance, "PD coincides with the LED");
    LinkGeometry g;
    g.distance = d;
    g.irradiance = std::acos(std::clamp(led.normal.dot(led_to_pd) / d, -1.0, 1.0));
    g.incidence = std::acos(std::clamp(-pd_normal_world.dot(led_to_pd) / d, -1.0, 1.0));
    return g;
}

double concentrator_gain(const PdCharacteristics& pd, double psi) {
    const double fov = pd.fov_rad();
    if (psi < 0.0 || psi > fov) return 0.0;
    const double s = std::sin(fov);
    if (s == 0.0) return std::numeric_limits<double>::infinity();
    return pd.concentrator_index * pd.concentrator_index / (s * s);
}

double dc_gain(const LedFixture& led, const PdCharacteristics& pd, double d, double phi, double psi) {
    if (!(d > 0.0)) throw Error(ErrorCode::NonPositiveDistance, "link distance must be positive");
    const double g = concentrator_gain(pd, psi);
    const double cos_phi = std::cos(phi);
    if (g == 0.0 || cos_phi <= 0.0) return 0.0;
    const double m = led.lambertian_order();
    return (m + 1.0) * pd.area / (2.0 * std::numbers::pi * d * d) * std::pow(cos_phi, m) * pd.filter_gain * g *
           std::cos(psi);
}

double received_power(const LedFixture& led, const PdCharacteristics& pd, const LinkGeometry& link) {
    return led.transmit_power * dc_gain(led, pd, link.distance, link.irradiance, link.incidence);
}

double snr_db(const PdCharacteristics& pd, const NoiseModel& noise, double p_received) {
    if (!(noise.current_noise_std > 0.0)) throw Error(ErrorCode::ZeroNoise, "SNR is undefined without noise");
    const double current = p_received * pd.responsivity;
    return 10.0 * std::log10(current * current / (noise.current_noise_std * noise.current_noise_std));
}

NoiseModel calibrate_noise(const Scene& scene, const PdCharacteristics& pd, const ReceiverPose& reference_pose,
                           double target_snr_db, int rss_samples_averaged) {
    const Vec3 normal = reference_pose.rotation * pd.normal_camera;
    double weakest = std::numeric_limits<double>::infinity();
    for (const auto& led : scene.leds()) {
        const double p = received_power(led, pd, link_geometry(led, reference_pose.position, normal));
        if (p > 0.0) weakest = std::min(weakest, p);
    }
    if (!std::isfinite(weakest)) throw Error(ErrorCode::NoVisibleLink, "no LED inside the PD field of view");
    NoiseModel noise;
    noise.rss_samples_averaged = rss_samples_averaged;
    noise.current_noise_std = weakest * pd.responsivity / std::pow(10.0, target_snr_db / 20.0);
    return noise;
}

double sample_measured_power(double p_true, const PdCharacteristics& pd, const NoiseModel& noise, Rng& rng) {
    if (noise.rss_samples_averaged < 1) {
        throw Error(ErrorCode::InvalidArgument, "at least one RSS sample must be averaged");
    }
    if (noise.current_noise_std == 0.0) return p_true;
    std::normal_distribution<double> current_noise(0.0, noise.current_noise_std);
    double sum = 0.0;
    for (int k = 0; k < noise.rss_samples_averaged; ++k) sum += current_noise(rng);
    return p_true + sum / noise.rss_samples_averaged / pd.responsivity;
}

double sample_measured_power(double p_true, const PdCharacteristics& pd, const NoiseModel& noise,
                             std::uint64_t seed) {
    Rng rng(seed);
    return sample_measured_power(p_true, pd, noise, rng);
}

}  // namespace vlp
