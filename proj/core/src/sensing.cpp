#include "vlp/sensing.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "vlp/error.hpp"

namespace vlp {

int ObservationSet::visible_count() const {
    return static_cast<int>(
        std::count_if(observations.begin(), observations.end(), [](const auto& o) { return o.visible(); }));
}

std::vector<LinkObservation> ObservationSet::visible() const {
    std::vector<LinkObservation> out;
    for (const auto& o : observations) {
        if (o.visible()) out.push_back(o);
    }
    return out;
}

Vec3 pd_world_position(const ReceiverPose& pose, const Receiver& rx) {
    return camera_to_world(pose, rx.pd_offset);
}

namespace {

struct TrueLink {
    LedVisibility vis;
    PixelPoint pixel;  // valid when the LED is in front of the camera
};

TrueLink true_link(const LedFixture& led, const ReceiverPose& pose, const Receiver& rx, const SensingConfig& cfg) {
    TrueLink t;
    t.vis.led_id = led.id;
    const Vec3 pd_pos = pd_world_position(pose, rx);
    const Vec3 pd_normal = pose.rotation * rx.pd.normal_camera;
    const LinkGeometry link = link_geometry(led, pd_pos, pd_normal);
    t.vis.in_pd_fov = link.incidence <= rx.pd.fov_rad();
    if (t.vis.in_pd_fov) t.vis.true_power = received_power(led, rx.pd, link);

    const Vec3 p_cam = world_to_camera(pose, led.position);
    if (p_cam.z() > 0.0) {
        t.pixel = project_to_pixel(rx.camera, p_cam);
        t.vis.in_camera_frame = !cfg.enforce_image_bounds ||
                                (t.pixel.u >= 0.0 && t.pixel.u <= rx.camera.width && t.pixel.v >= 0.0 &&
                                 t.pixel.v <= rx.camera.height);
    }

    if (cfg.rss_noise.current_noise_std > 0.0) {
        t.vis.snr_db = t.vis.true_power > 0.0 ? snr_db(rx.pd, cfg.rss_noise, t.vis.true_power)
                                              : -std::numeric_limits<double>::infinity();
    } else {
        t.vis.snr_db = t.vis.true_power > 0.0 ? std::numeric_limits<double>::infinity()
                                              : -std::numeric_limits<double>::infinity();
    }
    t.vis.snr_ok = t.vis.true_power > 0.0 && t.vis.snr_db >= cfg.snr_threshold_db;
    return t;
}

}  // namespace

std::vector<LedVisibility> visibility(const Scene& scene, const ReceiverPose& pose, const Receiver& rx,
                                      const SensingConfig& cfg) {
    std::vector<LedVisibility> out;
    out.reserve(scene.leds().size());
    for (const auto& led : scene.leds()) out.push_back(true_link(led, pose, rx, cfg).vis);
    return out;
}

int count_visible(const Scene& scene, const ReceiverPose& pose, const Receiver& rx, const SensingConfig& cfg) {
    int n = 0;
    for (const auto& led : scene.leds()) n += true_link(led, pose, rx, cfg).vis.visible() ? 1 : 0;
    return n;
}

ObservationSet observe(const Scene& scene, const ReceiverPose& pose, const Receiver& rx, const SensingConfig& cfg,
                       std::uint64_t seed) {
    if (cfg.image_noise.images_averaged < 1 || cfg.image_noise.pixel_noise_std < 0.0) {
        throw Error(ErrorCode::InvalidArgument, "invalid image noise model");
    }
    Rng rng(seed);
    ObservationSet set;
    set.receiver_truth = pose;
    set.observations.reserve(scene.leds().size());
    for (const auto& led : scene.leds()) {
        const TrueLink t = true_link(led, pose, rx, cfg);
        LinkObservation o;
        o.led_id = led.id;
        o.snr_db = t.vis.snr_db;
        o.in_pd_fov = t.vis.in_pd_fov;
        o.in_camera_frame = t.vis.in_camera_frame;
        o.snr_ok = t.vis.snr_ok;
        o.mean_power = t.vis.true_power;
        o.mean_pixel = t.pixel;
        if (o.visible()) {
            const double sigma = cfg.image_noise.pixel_noise_std;
            if (sigma > 0.0) {
                std::normal_distribution<double> pixel_noise(0.0, sigma);
                double du = 0.0;
                double dv = 0.0;
                for (int k = 0; k < cfg.image_noise.images_averaged; ++k) {
                    du += pixel_noise(rng);
                    dv += pixel_noise(rng);
                }
                o.mean_pixel.u += du / cfg.image_noise.images_averaged;
                o.mean_pixel.v += dv / cfg.image_noise.images_averaged;
            }
            o.mean_power = sample_measured_power(t.vis.true_power, rx.pd, cfg.rss_noise, rng);
        }
        set.observations.push_back(o);
    }
    return set;
}

ObservationSet select_strongest(const ObservationSet& obs, int k) {
    std::vector<LinkObservation> vis = obs.visible();
    if (static_cast<int>(vis.size()) < k) throw InsufficientLedsError(static_cast<int>(vis.size()), k);
    std::sort(vis.begin(), vis.end(), [](const LinkObservation& a, const LinkObservation& b) {
        if (a.mean_power != b.mean_power) return a.mean_power > b.mean_power;
        return a.led_id < b.led_id;
    });
    vis.resize(static_cast<std::size_t>(k));
    ObservationSet out;
    out.receiver_truth = obs.receiver_truth;
    out.observations = std::move(vis);
    return out;
}

}  // namespace vlp
