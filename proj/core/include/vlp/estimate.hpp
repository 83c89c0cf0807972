#pragma once

#include <optional>
#include <string_view>

#include "vlp/geometry.hpp"

namespace vlp {

/// 2D: z is known (the receiver plane) and only x, y are estimated.
enum class Dimension { Two, Three };

enum class EstimatorMode { Basic, Compensated, CaRssr, RssrIdeal, RssrPortable };

std::string_view to_string(Dimension dim) noexcept;
std::string_view to_string(EstimatorMode mode) noexcept;

struct Diagnostics {
    int iterations = 0;
    double final_cost = 0.0;
    double elapsed_s = 0.0;
    bool converged = true;
};

struct PositionEstimate {
    Vec2 xy = Vec2::Zero();
    std::optional<double> z;  // absent in 2D mode
    EstimatorMode mode = EstimatorMode::Basic;
    Diagnostics diagnostics;

    /// Full 3D point; 2D estimates are placed on `receiver_plane_z`.
    Vec3 position(double receiver_plane_z = 0.0) const {
        return {xy.x(), xy.y(), z.value_or(receiver_plane_z)};
    }
};

/// Euclidean positioning error against the true camera center.
double positioning_error(const PositionEstimate& est, const Vec3& truth, double receiver_plane_z = 0.0);

}  // namespace vlp
