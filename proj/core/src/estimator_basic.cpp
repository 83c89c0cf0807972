#include "vlp/estimator_basic.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>

#include "vlp/error.hpp"

namespace vlp {

IncidenceEstimate incidence_angle(const CameraIntrinsics& intr, const PixelPoint& px, int led_id) {
    const double n1 = (px.u - intr.u0) / intr.fu;
    const double n2 = (px.v - intr.v0) / intr.fv;
    // arccos((n1^2 + n2^2 + 1)^-1/2), written as atan for accuracy near the axis.
    return {led_id, std::atan(std::hypot(n1, n2))};
}

DistanceRatio distance_ratio(const LinkObservation& obs_i, const LinkObservation& obs_j,
                             const IncidenceEstimate& psi_i, const IncidenceEstimate& psi_j, double lambertian_order) {
    if (!(obs_i.mean_power > 0.0 && obs_j.mean_power > 0.0)) {
        throw Error(ErrorCode::NonPositivePower, "distance ratio needs positive received powers");
    }
    const double cos_i = std::cos(psi_i.psi);
    const double cos_j = std::cos(psi_j.psi);
    if (cos_i <= kGrazingEpsilon || cos_j <= kGrazingEpsilon) {
        throw Error(ErrorCode::GrazingIncidence, "incidence angle too close to 90 degrees");
    }
    const double rho =
        std::pow(obs_j.mean_power / obs_i.mean_power * cos_i / cos_j, 1.0 / (lambertian_order + 2.0));
    return {obs_i.led_id, obs_j.led_id, rho};
}

std::array<DistanceEstimate, 3> absolute_distances(const DistanceRatio& ratio_12, const DistanceRatio& ratio_13,
                                                   double alpha_12, double alpha_13, double baseline_12,
                                                   double baseline_13) {
    if (!(ratio_12.rho > 0.0 && ratio_13.rho > 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "distance ratios must be positive");
    }
    const auto angle_ok = [](double a) { return a >= 0.0 && a <= std::numbers::pi; };
    if (!angle_ok(alpha_12) || !angle_ok(alpha_13) || !(baseline_12 > 0.0) || !(baseline_13 > 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "invalid inter-LED angle or baseline");
    }
    const double rho = ratio_12.rho;
    const double denom = 1.0 + rho * rho - 2.0 * rho * std::cos(alpha_12);
    if (!(denom > kDegenerateTriangleEpsilon)) {
        throw Error(ErrorCode::DegenerateTriangle, "LED rays are indistinguishable");
    }
    const double d1 = rho * baseline_12 / std::sqrt(denom);
    return {DistanceEstimate{ratio_12.i, d1}, DistanceEstimate{ratio_12.j, d1 / rho},
            DistanceEstimate{ratio_13.j, d1 / ratio_13.rho}};
}

namespace {

bool plan_collinear(const Vec3& a, const Vec3& b, const Vec3& c) {
    const double m00 = b.x() - a.x();
    const double m01 = b.y() - a.y();
    const double m10 = c.x() - a.x();
    const double m11 = c.y() - a.y();
    const double scale = std::max({std::abs(m00), std::abs(m01), std::abs(m10), std::abs(m11)});
    return scale == 0.0 || !(std::abs(m00 * m11 - m01 * m10) >= 1e-9 * scale * scale);
}

}  // namespace

std::array<LinkObservation, 3> select_triangle(const ObservationSet& obs, const Scene& scene) {
    const int n = obs.visible_count();
    const ObservationSet sorted = select_strongest(obs, std::max(n, 3));
    const auto& o = sorted.observations;
    const Vec3& s1 = scene.led(o[0].led_id).position;
    const Vec3& s2 = scene.led(o[1].led_id).position;
    for (std::size_t k = 2; k < o.size(); ++k) {
        if (!plan_collinear(s1, s2, scene.led(o[k].led_id).position)) return {o[0], o[1], o[k]};
    }
    throw Error(ErrorCode::CollinearLeds, "visible LEDs are collinear in plan view");
}

Vec2 solve_2d(const std::array<Vec3, 3>& led_positions, const std::array<DistanceEstimate, 3>& distances) {
    const Vec3& s1 = led_positions[0];
    Eigen::Matrix2d a;
    Vec2 b;
    for (int k = 0; k < 2; ++k) {
        const Vec3& s = led_positions[static_cast<std::size_t>(k + 1)];
        const double c1 = distances[0].d;
        const double ck = distances[static_cast<std::size_t>(k + 1)].d;
        a(k, 0) = s.x() - s1.x();
        a(k, 1) = s.y() - s1.y();
        b(k) = 0.5 * (c1 * c1 - ck * ck + s.x() * s.x() + s.y() * s.y() - s1.x() * s1.x() - s1.y() * s1.y());
    }
    const double scale = a.cwiseAbs().maxCoeff();
    if (!(std::abs(a.determinant()) >= 1e-9 * scale * scale) || scale == 0.0) {
        throw Error(ErrorCode::CollinearLeds, "LEDs are collinear in plan view");
    }
    // (A^T A)^-1 A^T b; A is square here so this is the plain solve.
    return (a.transpose() * a).ldlt().solve(a.transpose() * b);
}

double recover_z(const Vec3& led1, const Vec2& xy, double d1, double ceiling_h) {
    if (!(d1 > 0.0)) throw Error(ErrorCode::NonPositiveDistance, "LED distance must be positive");
    const double dx = led1.x() - xy.x();
    const double dy = led1.y() - xy.y();
    double radicand = d1 * d1 - dx * dx - dy * dy;
    if (radicand < -kZClampEpsilon) {
        throw Error(ErrorCode::InconsistentGeometry, "distance is shorter than the horizontal offset");
    }
    radicand = std::max(radicand, 0.0);
    return ceiling_h - std::sqrt(radicand);
}

PositionEstimate estimate_basic(const ObservationSet& obs, const Scene& scene, const CameraIntrinsics& intr,
                                Dimension dim) {
    const auto t0 = std::chrono::steady_clock::now();
    const auto o = select_triangle(obs, scene);
    const double m = scene.lambertian_order();

    std::array<IncidenceEstimate, 3> psi;
    std::array<Vec3, 3> rays;
    std::array<Vec3, 3> leds;
    for (std::size_t k = 0; k < 3; ++k) {
        psi[k] = incidence_angle(intr, o[k].mean_pixel, o[k].led_id);
        rays[k] = pixel_to_camera_ray(intr, o[k].mean_pixel);
        leds[k] = scene.led(o[k].led_id).position;
    }
    const DistanceRatio r12 = distance_ratio(o[0], o[1], psi[0], psi[1], m);
    const DistanceRatio r13 = distance_ratio(o[0], o[2], psi[0], psi[2], m);
    const auto dist = absolute_distances(r12, r13, inter_led_angle(rays[0], rays[1]),
                                         inter_led_angle(rays[0], rays[2]), (leds[0] - leds[1]).norm(),
                                         (leds[0] - leds[2]).norm());

    PositionEstimate est;
    est.mode = EstimatorMode::Basic;
    est.xy = solve_2d(leds, dist);
    if (dim == Dimension::Three) est.z = recover_z(leds[0], est.xy, dist[0].d, scene.led_height());
    est.diagnostics.elapsed_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return est;
}

}  // namespace vlp
