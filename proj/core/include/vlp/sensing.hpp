#pragma once

// Synthesizes what the receiver measures at a pose: averaged RSS per LED from
// the photodiode and averaged LED image positions from the camera.

#include <cstdint>
#include <vector>

#include "vlp/geometry.hpp"
#include "vlp/optical_channel.hpp"
#include "vlp/scene.hpp"

namespace vlp {

struct ImageNoiseModel {
    double pixel_noise_std = 2.5;  // pixels, per image and axis
    int images_averaged = 10;
};

/// Camera + photodiode rig. The PD sits at `pd_offset` in camera coordinates.
struct Receiver {
    CameraIntrinsics camera;
    PdCharacteristics pd;
    Vec3 pd_offset = Vec3::Zero();
};

struct SensingConfig {
    NoiseModel rss_noise;
    ImageNoiseModel image_noise;
    double snr_threshold_db = 13.6;
    /// When false the image plane is unbounded and any LED in front of the
    /// camera is imaged; when true the projection must land on the sensor.
    bool enforce_image_bounds = false;
};

struct LedVisibility {
    int led_id = 0;
    double true_power = 0.0;  // W, at the PD
    double snr_db = 0.0;      // noise-free
    bool in_pd_fov = false;
    bool in_camera_frame = false;
    bool snr_ok = false;

    bool visible() const noexcept { return in_pd_fov && in_camera_frame && snr_ok; }
};

struct LinkObservation {
    int led_id = 0;
    double mean_power = 0.0;  // W
    PixelPoint mean_pixel;
    double snr_db = 0.0;
    bool in_pd_fov = false;
    bool in_camera_frame = false;
    bool snr_ok = false;

    bool visible() const noexcept { return in_pd_fov && in_camera_frame && snr_ok; }
};

struct ObservationSet {
    /// Ground truth, kept for scoring only. Estimators must not read it.
    ReceiverPose receiver_truth;
    std::vector<LinkObservation> observations;

    int visible_count() const;
    std::vector<LinkObservation> visible() const;
};

/// World position of the PD for a given camera pose.
Vec3 pd_world_position(const ReceiverPose& pose, const Receiver& rx);

/// Noise-free per-LED visibility: PD incidence within FoV, LED imaged, SNR >= threshold.
std::vector<LedVisibility> visibility(const Scene& scene, const ReceiverPose& pose, const Receiver& rx,
                                      const SensingConfig& cfg);
int count_visible(const Scene& scene, const ReceiverPose& pose, const Receiver& rx, const SensingConfig& cfg);

/// One entry per scene LED. Visible LEDs get averaged noisy pixel and power;
/// the rest carry their noise-free values and are flagged invisible.
ObservationSet observe(const Scene& scene, const ReceiverPose& pose, const Receiver& rx, const SensingConfig& cfg,
                       std::uint64_t seed);

/// The k visible observations with the largest power, strongest first, ties
/// broken by lower LED id. Throws InsufficientLedsError.
ObservationSet select_strongest(const ObservationSet& obs, int k);

}  // namespace vlp
