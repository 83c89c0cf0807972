#pragma once

// Coordinate frames used throughout the library:
//   world  (WCS) - origin at a room corner, z up, meters
//   camera (CCS) - origin at the optical center, z along the optical axis
//   pixel  (PCS) - origin at the upper-left image corner, u along camera x, v along camera y
//
// A ReceiverPose stores the camera-to-world rotation R and the camera center
// r in world coordinates, so p_world = R * p_camera + r.

#include <Eigen/Core>

namespace vlp {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

/// Cosine of an angle in degrees; exact where the result is 0, +-1/2 or +-1
/// (so cos(60) is exactly 0.5).
double cos_degrees(double degrees);
double deg_to_rad(double degrees);
double rad_to_deg(double radians);

/// Proper rotation (orthonormal, det = +1), camera-to-world.
class Rotation {
public:
    Rotation() : m_(Mat3::Identity()) {}

    /// Throws InvalidArgument unless `m` is orthonormal with det +1 within 1e-9.
    static Rotation from_matrix(const Mat3& m);
    /// Nearest proper rotation in the Frobenius sense (orthogonal polar factor).
    /// Throws SingularConfiguration when `m` is rank deficient.
    static Rotation nearest(const Mat3& m);
    static Rotation about_axis(const Vec3& axis, double angle_rad);

    const Mat3& matrix() const noexcept { return m_; }
    Vec3 operator*(const Vec3& v) const { return m_ * v; }
    Rotation operator*(const Rotation& other) const { return Rotation(m_ * other.m_); }
    Rotation inverse() const { return Rotation(m_.transpose()); }

    /// Angle between the camera optical axis and world +z.
    double tilt() const;

private:
    explicit Rotation(const Mat3& m) : m_(m) {}
    Mat3 m_;
};

struct CameraIntrinsics {
    double fu = 800.0;  // pixels
    double fv = 800.0;
    double u0 = 320.0;
    double v0 = 240.0;
    double width = 640.0;
    double height = 480.0;
    double pixel_pitch_x = 5.6e-6;  // meters / pixel
    double pixel_pitch_y = 5.6e-6;
    double focal_length = 800.0 * 5.6e-6;  // meters

    /// Builds a consistent set from physical focal length and pixel pitch.
    static CameraIntrinsics from_physical(double focal_length, double pitch_x, double pitch_y,
                                          double width, double height, double u0, double v0);
    void validate() const;
};

struct PixelPoint {
    double u = 0.0;
    double v = 0.0;
};

struct ReceiverPose {
    Vec3 position = Vec3::Zero();
    Rotation rotation;
};

Vec3 world_to_camera(const ReceiverPose& pose, const Vec3& p_world);
Vec3 camera_to_world(const ReceiverPose& pose, const Vec3& p_camera);

/// Pinhole projection; throws BehindCamera when p_camera.z <= 0.
PixelPoint project_to_pixel(const CameraIntrinsics& intr, const Vec3& p_camera);

/// Un-normalized ray ((u-u0)/fu, (v-v0)/fv, 1) through a pixel.
Vec3 pixel_to_camera_ray(const CameraIntrinsics& intr, const PixelPoint& px);

/// Image-plane coordinates (meters) of a pixel: ((u-u0)dx, (v-v0)dy).
Vec2 pixel_to_image(const CameraIntrinsics& intr, const PixelPoint& px);

/// Angle in [0, pi] between two rays; throws DegenerateRay for near-zero rays.
double inter_led_angle(const Vec3& ray_i, const Vec3& ray_j);

}  // namespace vlp
