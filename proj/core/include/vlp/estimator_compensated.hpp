#pragma once

// Position refinement for receivers whose PD is displaced from the camera
// center. Each residual evaluation at a candidate camera position r:
//   1. scales the LED camera rays to the distances implied by r,
//   2. takes PD incidence angles from those camera-frame LED points,
//   3. fits the receiver rotation to the LED points by least squares,
//   4. places the PD in the world,
//   5. compares measured RSS ratios with the ratios predicted at the PD.
// One LM solve over r, started from the basic estimate.

#include <array>

#include "vlp/estimate.hpp"
#include "vlp/lm_solver.hpp"
#include "vlp/scene.hpp"
#include "vlp/sensing.hpp"

namespace vlp {

struct CompensationConfig {
    Vec3 pd_offset = Vec3::Zero();  // d_pc in camera coordinates, m
    Vec3 pd_normal_camera = Vec3::UnitZ();
    double threshold = 0.06;  // m; basic path when |d_pc| <= threshold
    double receiver_plane_z = 0.0;  // z held fixed in 2D mode
    LmOptions lm;

    void validate() const;
};

struct RotationFit {
    Rotation rotation;  // nearest rotation to `raw`
    Mat3 raw = Mat3::Identity();  // unconstrained least-squares solution
};

struct RigidPoseEstimate {
    Rotation rotation;
    Mat3 raw_rotation = Mat3::Identity();
    Vec3 pd_world = Vec3::Zero();
};

using SelectedLinks = std::array<LinkObservation, 3>;

/// Camera-frame LED positions: unit pixel ray times |s_i - r|.
std::array<Vec3, 3> led_camera_coords(const SelectedLinks& obs, const CameraIntrinsics& intr, const Scene& scene,
                                      const Vec3& r_candidate);

/// Angle between the PD normal and the PD-to-LED vector, in camera coordinates.
/// Throws CoincidentPoints.
double pd_incidence(const Vec3& s_camera, const CompensationConfig& cfg, const Vec3& pd_normal_camera);

/// Solves A R^T = B with A rows s_i^c and B rows s_i^w - r. Throws SingularConfiguration.
RotationFit estimate_rotation(const std::array<Vec3, 3>& s_camera, const std::array<Vec3, 3>& s_world,
                              const Vec3& r_candidate);

/// R d_pc + r.
Vec3 pd_world_position(const Rotation& rot, const CompensationConfig& cfg, const Vec3& r_candidate);

/// Steps 1-4 at a candidate position.
RigidPoseEstimate rigid_pose_at(const SelectedLinks& obs, const CameraIntrinsics& intr, const Scene& scene,
                                const CompensationConfig& cfg, const Vec3& r_candidate);

/// f_ij = P_j/P_i - g_ij(r) over the ordered pairs (0,1),(0,2),(1,0),(1,2),(2,0),(2,1).
Eigen::VectorXd rssr_residuals(const SelectedLinks& obs, const CameraIntrinsics& intr, const Scene& scene,
                               const CompensationConfig& cfg, const Vec3& r_candidate);

PositionEstimate estimate_compensated(const ObservationSet& obs, const Scene& scene, const CameraIntrinsics& intr,
                                      const CompensationConfig& cfg, Dimension dim);

/// Basic path when |d_pc| <= threshold, compensated otherwise.
PositionEstimate estimate(const ObservationSet& obs, const Scene& scene, const CameraIntrinsics& intr,
                          const CompensationConfig& cfg, Dimension dim);

}  // namespace vlp
