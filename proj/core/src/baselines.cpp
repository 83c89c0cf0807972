#include "vlp/baselines.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <chrono>
#include <cmath>
#include <limits>

#include "vlp/error.hpp"
#include "vlp/estimator_basic.hpp"

namespace vlp {

namespace {

std::string normalize(std::string_view name) {
    std::string out;
    for (char c : name) {
        if (c == '-' || c == '_') continue;
        out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    }
    return out;
}

std::vector<LinkObservation> visible_or_throw(const ObservationSet& obs, int required) {
    std::vector<LinkObservation> vis = obs.visible();
    if (static_cast<int>(vis.size()) < required) throw InsufficientLedsError(static_cast<int>(vis.size()), required);
    for (const auto& o : vis) {
        if (!(o.mean_power > 0.0)) throw Error(ErrorCode::NonPositivePower, "visible LED with non-positive power");
    }
    return vis;
}

Eigen::VectorXd room_center_start(const Scene& scene, Dimension dim) {
    Eigen::VectorXd x0(dim == Dimension::Two ? 2 : 3);
    x0(0) = scene.room().length / 2.0;
    x0(1) = scene.room().width / 2.0;
    if (dim == Dimension::Three) x0(2) = scene.room().height / 2.0;
    return x0;
}

PositionEstimate finish(const LmResult& lm, EstimatorMode mode, Dimension dim,
                        std::chrono::steady_clock::time_point t0) {
    PositionEstimate est;
    est.mode = mode;
    est.xy = lm.solution.head<2>();
    if (dim == Dimension::Three) est.z = lm.solution(2);
    est.diagnostics.iterations = lm.iterations;
    est.diagnostics.final_cost = lm.final_cost;
    est.diagnostics.converged = lm.converged;
    est.diagnostics.elapsed_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return est;
}

}  // namespace

LedRequirement required_leds(std::string_view algorithm) {
    const std::string key = normalize(algorithm);
    if (key == "rssr") return {"rssr", 4, 5};
    if (key == "pnp") return {"pnp", 4, 4};
    if (key == "carssr") return {"ca-rssr", 3, 5};
    if (key == "ecarssr") return {"eca-rssr", 3, 3};
    throw Error(ErrorCode::UnknownAlgorithm, "unknown algorithm: " + std::string(algorithm));
}

PositionEstimate estimate_rssr(const ObservationSet& obs, const Scene& scene, const Receiver& rx, RssrVariant variant,
                               Dimension dim, const BaselineConfig& cfg) {
    const auto t0 = std::chrono::steady_clock::now();
    const auto vis = visible_or_throw(obs, required_leds("rssr").needed(dim));
    const Rotation& assumed =
        variant == RssrVariant::Ideal ? obs.receiver_truth.rotation : cfg.portable_rotation;
    const Vec3 normal = assumed * rx.pd.normal_camera.normalized();
    const double m = scene.lambertian_order();
    std::vector<Vec3> leds;
    for (const auto& o : vis) leds.push_back(scene.led(o.led_id).position);
    const bool planar = dim == Dimension::Two;
    const auto n = vis.size();

    const ResidualFn fn = [&](const Eigen::VectorXd& x) -> Eigen::VectorXd {
        const Vec3 r(x(0), x(1), planar ? cfg.receiver_plane_z : x(2));
        std::vector<double> d(n);
        std::vector<double> c(n);
        for (std::size_t k = 0; k < n; ++k) {
            const Vec3 v = leds[k] - r;
            d[k] = v.norm();
            c[k] = normal.dot(v) / d[k];
        }
        Eigen::VectorXd f(static_cast<Eigen::Index>(n * (n - 1)));
        Eigen::Index row = 0;
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                if (i == j) continue;
                f(row++) = vis[j].mean_power / vis[i].mean_power - std::pow(d[i] / d[j], m + 2.0) * c[j] / c[i];
            }
        }
        return f;
    };
    const LmResult lm = solve(fn, room_center_start(scene, dim), cfg.lm);
    return finish(lm, variant == RssrVariant::Ideal ? EstimatorMode::RssrIdeal : EstimatorMode::RssrPortable, dim, t0);
}

PositionEstimate estimate_ca_rssr(const ObservationSet& obs, const Scene& scene, const CameraIntrinsics& intr,
                                  Dimension dim, const BaselineConfig& cfg) {
    const auto t0 = std::chrono::steady_clock::now();
    const auto vis = visible_or_throw(obs, required_leds("ca-rssr").needed(dim));
    const double m = scene.lambertian_order();
    const auto n = vis.size();
    std::vector<Vec3> leds;
    std::vector<IncidenceEstimate> psi;
    for (const auto& o : vis) {
        leds.push_back(scene.led(o.led_id).position);
        psi.push_back(incidence_angle(intr, o.mean_pixel, o.led_id));
    }
    std::vector<double> rho;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (i != j) rho.push_back(distance_ratio(vis[i], vis[j], psi[i], psi[j], m).rho);
        }
    }
    const bool planar = dim == Dimension::Two;

    const ResidualFn fn = [&](const Eigen::VectorXd& x) -> Eigen::VectorXd {
        const Vec3 r(x(0), x(1), planar ? cfg.receiver_plane_z : x(2));
        std::vector<double> d(n);
        for (std::size_t k = 0; k < n; ++k) d[k] = (leds[k] - r).norm();
        Eigen::VectorXd f(static_cast<Eigen::Index>(rho.size()));
        Eigen::Index row = 0;
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                if (i == j) continue;
                f(row) = rho[static_cast<std::size_t>(row)] - d[i] / d[j];
                ++row;
            }
        }
        return f;
    };
    const LmResult lm = solve(fn, room_center_start(scene, dim), cfg.lm);
    return finish(lm, EstimatorMode::CaRssr, dim, t0);
}

}  // namespace vlp
