#include "vlp/estimator_compensated.hpp"

#include <Eigen/Geometry>
#include <Eigen/LU>

#include <chrono>
#include <cmath>
#include <limits>

#include "vlp/error.hpp"
#include "vlp/estimator_basic.hpp"

namespace vlp {

void CompensationConfig::validate() const {
    if (!(threshold >= 0.0) || !pd_offset.allFinite() || !(pd_normal_camera.norm() > 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "invalid compensation config");
    }
    lm.validate();
}

std::array<Vec3, 3> led_camera_coords(const SelectedLinks& obs, const CameraIntrinsics& intr, const Scene& scene,
                                      const Vec3& r_candidate) {
    std::array<Vec3, 3> out;
    for (std::size_t k = 0; k < 3; ++k) {
        const Vec3 ray = pixel_to_camera_ray(intr, obs[k].mean_pixel);
        const double n = ray.norm();
        if (!(n > 1e-12) || !std::isfinite(n)) throw Error(ErrorCode::GrazingRay, "degenerate camera ray");
        out[k] = ray / n * (scene.led(obs[k].led_id).position - r_candidate).norm();
    }
    return out;
}

double pd_incidence(const Vec3& s_camera, const CompensationConfig& cfg, const Vec3& pd_normal_camera) {
    const Vec3 v = s_camera - cfg.pd_offset;
    if (!(v.norm() > 1e-12)) throw Error(ErrorCode::CoincidentPoints, "LED coincides with the PD");
    return std::atan2(pd_normal_camera.cross(v).norm(), pd_normal_camera.dot(v));
}

RotationFit estimate_rotation(const std::array<Vec3, 3>& s_camera, const std::array<Vec3, 3>& s_world,
                              const Vec3& r_candidate) {
    Mat3 a;
    Mat3 b;
    double scale = 1.0;
    for (int k = 0; k < 3; ++k) {
        a.row(k) = s_camera[static_cast<std::size_t>(k)].transpose();
        b.row(k) = (s_world[static_cast<std::size_t>(k)] - r_candidate).transpose();
        scale *= a.row(k).norm();
    }
    if (!(std::abs(a.determinant()) > 1e-12 * scale)) {
        throw Error(ErrorCode::SingularConfiguration, "LED rays are coplanar with the camera center");
    }
    RotationFit fit;
    fit.raw = a.partialPivLu().solve(b).transpose();
    fit.rotation = Rotation::nearest(fit.raw);
    return fit;
}

Vec3 pd_world_position(const Rotation& rot, const CompensationConfig& cfg, const Vec3& r_candidate) {
    return rot * cfg.pd_offset + r_candidate;
}

RigidPoseEstimate rigid_pose_at(const SelectedLinks& obs, const CameraIntrinsics& intr, const Scene& scene,
                                const CompensationConfig& cfg, const Vec3& r_candidate) {
    const auto s_c = led_camera_coords(obs, intr, scene, r_candidate);
    std::array<Vec3, 3> s_w;
    for (std::size_t k = 0; k < 3; ++k) s_w[k] = scene.led(obs[k].led_id).position;
    const RotationFit fit = estimate_rotation(s_c, s_w, r_candidate);
    return {fit.rotation, fit.raw, pd_world_position(fit.rotation, cfg, r_candidate)};
}

Eigen::VectorXd rssr_residuals(const SelectedLinks& obs, const CameraIntrinsics& intr, const Scene& scene,
                               const CompensationConfig& cfg, const Vec3& r_candidate) {
    for (const auto& o : obs) {
        if (!(o.mean_power > 0.0)) throw Error(ErrorCode::NonPositivePower, "residuals need positive powers");
    }
    const auto s_c = led_camera_coords(obs, intr, scene, r_candidate);
    std::array<Vec3, 3> s_w;
    for (std::size_t k = 0; k < 3; ++k) s_w[k] = scene.led(obs[k].led_id).position;
    const RotationFit fit = estimate_rotation(s_c, s_w, r_candidate);
    const Vec3 r_pd = pd_world_position(fit.rotation, cfg, r_candidate);

    const double m = scene.lambertian_order();
    std::array<double, 3> dist;
    std::array<double, 3> cos_psi;
    for (std::size_t k = 0; k < 3; ++k) {
        dist[k] = (s_w[k] - r_pd).norm();
        cos_psi[k] = std::cos(pd_incidence(s_c[k], cfg, cfg.pd_normal_camera));
    }
    Eigen::VectorXd f(6);
    int row = 0;
    for (std::size_t i = 0; i < 3; ++i) {
        for (std::size_t j = 0; j < 3; ++j) {
            if (i == j) continue;
            const double g = std::pow(dist[i] / dist[j], m + 2.0) * cos_psi[j] / cos_psi[i];
            f(row++) = obs[j].mean_power / obs[i].mean_power - g;
        }
    }
    return f;
}

PositionEstimate estimate_compensated(const ObservationSet& obs, const Scene& scene, const CameraIntrinsics& intr,
                                      const CompensationConfig& cfg, Dimension dim) {
    const auto t0 = std::chrono::steady_clock::now();
    cfg.validate();
    const SelectedLinks links = select_triangle(obs, scene);
    const PositionEstimate start = estimate_basic(obs, scene, intr, dim);

    const bool planar = dim == Dimension::Two;
    const auto to_point = [&](const Eigen::VectorXd& x) {
        return Vec3(x(0), x(1), planar ? cfg.receiver_plane_z : x(2));
    };
    const ResidualFn fn = [&](const Eigen::VectorXd& x) -> Eigen::VectorXd {
        try {
            return rssr_residuals(links, intr, scene, cfg, to_point(x));
        } catch (const Error&) {
            return Eigen::VectorXd::Constant(6, std::numeric_limits<double>::quiet_NaN());
        }
    };
    Eigen::VectorXd x0(planar ? 2 : 3);
    x0(0) = start.xy.x();
    x0(1) = start.xy.y();
    if (!planar) x0(2) = *start.z;

    const LmResult lm = solve(fn, x0, cfg.lm);
    PositionEstimate est;
    est.mode = EstimatorMode::Compensated;
    est.xy = lm.solution.head<2>();
    if (!planar) est.z = lm.solution(2);
    est.diagnostics.iterations = lm.iterations;
    est.diagnostics.final_cost = lm.final_cost;
    est.diagnostics.converged = lm.converged;
    est.diagnostics.elapsed_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return est;
}

PositionEstimate estimate(const ObservationSet& obs, const Scene& scene, const CameraIntrinsics& intr,
                          const CompensationConfig& cfg, Dimension dim) {
    if (cfg.pd_offset.norm() <= cfg.threshold) return estimate_basic(obs, scene, intr, dim);
    return estimate_compensated(obs, scene, intr, cfg, dim);
}

}  // namespace vlp
