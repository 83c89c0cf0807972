#pragma once

// Closed-form camera-assisted RSS-ratio positioning from three LEDs:
//   1. incidence angles from the LED image positions,
//   2. distance ratios from RSS ratios corrected by those angles,
//   3. absolute distances from the law of cosines on the LED pair (1,2),
//   4. x, y by linear least squares, z from the strongest LED's sphere.
// Exact for noise-free input when the PD and camera coincide, for any
// receiver orientation.

#include <array>

#include "vlp/estimate.hpp"
#include "vlp/scene.hpp"
#include "vlp/sensing.hpp"

namespace vlp {

struct IncidenceEstimate {
    int led_id = 0;
    double psi = 0.0;  // rad
};

/// rho = d_i / d_j.
struct DistanceRatio {
    int i = 0;
    int j = 0;
    double rho = 1.0;
};

struct DistanceEstimate {
    int led_id = 0;
    double d = 0.0;  // m
};

inline constexpr double kGrazingEpsilon = 1e-9;
inline constexpr double kDegenerateTriangleEpsilon = 1e-12;
inline constexpr double kZClampEpsilon = 1e-4;  // m^2

IncidenceEstimate incidence_angle(const CameraIntrinsics& intr, const PixelPoint& px, int led_id = 0);

/// rho_ij = (P_j/P_i * cos psi_i / cos psi_j)^(1/(m+2)).
/// Throws NonPositivePower or GrazingIncidence.
DistanceRatio distance_ratio(const LinkObservation& obs_i, const LinkObservation& obs_j,
                             const IncidenceEstimate& psi_i, const IncidenceEstimate& psi_j, double lambertian_order);

/// d1 from the law of cosines on LEDs 1 and 2 (angle alpha_12 at the camera,
/// baseline |s1 - s2|), then d2 = d1/rho_12 and d3 = d1/rho_13. The (1,3)
/// angle and baseline are only range-checked.
/// Throws DegenerateTriangle or InvalidArgument.
std::array<DistanceEstimate, 3> absolute_distances(const DistanceRatio& ratio_12, const DistanceRatio& ratio_13,
                                                   double alpha_12, double alpha_13, double baseline_12,
                                                   double baseline_13);

/// Planar position from three same-height LEDs and their distances. Throws CollinearLeds.
Vec2 solve_2d(const std::array<Vec3, 3>& led_positions, const std::array<DistanceEstimate, 3>& distances);

/// z = h - sqrt(d1^2 - horizontal^2), rejecting the above-ceiling root.
/// `ceiling_h` is the LED mounting height h.
/// Radicands in [-kZClampEpsilon, 0) clamp to 0; below that InconsistentGeometry.
double recover_z(const Vec3& led1, const Vec2& xy, double d1, double ceiling_h);

/// Strongest visible LED, then the next strongest, then the strongest remaining
/// LED that does not make the three collinear in plan view. Throws
/// InsufficientLedsError or CollinearLeds.
std::array<LinkObservation, 3> select_triangle(const ObservationSet& obs, const Scene& scene);

/// Full basic pipeline on the LEDs from select_triangle. In 2D mode the
/// estimate carries no z. Throws InsufficientLedsError and component errors.
PositionEstimate estimate_basic(const ObservationSet& obs, const Scene& scene, const CameraIntrinsics& intr,
                                Dimension dim);

}  // namespace vlp
