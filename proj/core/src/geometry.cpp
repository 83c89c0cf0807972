#include "vlp/geometry.hpp"

#include <Eigen/Geometry>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "vlp/error.hpp"

namespace vlp {

double deg_to_rad(double degrees) { return degrees * std::numbers::pi / 180.0; }
double rad_to_deg(double radians) { return radians * 180.0 / std::numbers::pi; }

double cos_degrees(double degrees) {
    double reduced = std::fmod(degrees, 360.0);
    if (reduced < 0.0) reduced += 360.0;
    // Angles whose cosine is 0, +-1/2 or +-1 are returned exactly.
    if (reduced == 0.0) return 1.0;
    if (reduced == 60.0 || reduced == 300.0) return 0.5;
    if (reduced == 90.0 || reduced == 270.0) return 0.0;
    if (reduced == 120.0 || reduced == 240.0) return -0.5;
    if (reduced == 180.0) return -1.0;
    return std::cos(deg_to_rad(reduced));
}

Rotation Rotation::from_matrix(const Mat3& m) {
    const double ortho_err = (m.transpose() * m - Mat3::Identity()).cwiseAbs().maxCoeff();
    const double det = m.determinant();
    if (!std::isfinite(ortho_err) || ortho_err > 1e-9 || std::abs(det - 1.0) > 1e-9) {
        throw Error(ErrorCode::InvalidArgument, "matrix is not a proper rotation");
    }
    return Rotation(m);
}

Rotation Rotation::nearest(const Mat3& m) {
    const Eigen::JacobiSVD<Mat3> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const auto& s = svd.singularValues();
    if (!m.allFinite() || s(0) <= 0.0 || s(2) <= 1e-12 * s(0)) {
        throw Error(ErrorCode::SingularConfiguration, "cannot orthonormalize a rank-deficient matrix");
    }
    Mat3 u = svd.matrixU();
    const Mat3& v = svd.matrixV();
    if ((u * v.transpose()).determinant() < 0.0) u.col(2) *= -1.0;
    return Rotation(u * v.transpose());
}

Rotation Rotation::about_axis(const Vec3& axis, double angle_rad) {
    const double n = axis.norm();
    if (!(n > 0.0)) throw Error(ErrorCode::InvalidArgument, "rotation axis must be nonzero");
    return Rotation(Eigen::AngleAxisd(angle_rad, axis / n).toRotationMatrix());
}

double Rotation::tilt() const {
    const double c = std::clamp(m_(2, 2), -1.0, 1.0);
    return std::acos(c);
}

CameraIntrinsics CameraIntrinsics::from_physical(double focal_length, double pitch_x, double pitch_y,
                                                 double width, double height, double u0, double v0) {
    CameraIntrinsics c;
    c.focal_length = focal_length;
    c.pixel_pitch_x = pitch_x;
    c.pixel_pitch_y = pitch_y;
    c.fu = focal_length / pitch_x;
    c.fv = focal_length / pitch_y;
    c.width = width;
    c.height = height;
    c.u0 = u0;
    c.v0 = v0;
    c.validate();
    return c;
}

void CameraIntrinsics::validate() const {
    if (!(fu > 0.0 && fv > 0.0)) throw Error(ErrorCode::InvalidArgument, "focal lengths must be positive");
    if (!(u0 > 0.0 && u0 < width && v0 > 0.0 && v0 < height)) {
        throw Error(ErrorCode::InvalidArgument, "principal point must lie inside the sensor");
    }
    if (!(pixel_pitch_x > 0.0 && pixel_pitch_y > 0.0 && focal_length > 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "pixel pitch and focal length must be positive");
    }
    if (std::abs(fu - focal_length / pixel_pitch_x) > 1e-9 * fu ||
        std::abs(fv - focal_length / pixel_pitch_y) > 1e-9 * fv) {
        throw Error(ErrorCode::InvalidArgument, "normalized focal length disagrees with f / pixel pitch");
    }
}

Vec3 world_to_camera(const ReceiverPose& pose, const Vec3& p_world) {
    return pose.rotation.matrix().transpose() * (p_world - pose.position);
}

Vec3 camera_to_world(const ReceiverPose& pose, const Vec3& p_camera) {
    return pose.rotation.matrix() * p_camera + pose.position;
}

PixelPoint project_to_pixel(const CameraIntrinsics& intr, const Vec3& p_camera) {
    if (!(p_camera.z() > 0.0)) throw Error(ErrorCode::BehindCamera, "point is not in front of the camera");
    return {intr.fu * p_camera.x() / p_camera.z() + intr.u0,
            intr.fv * p_camera.y() / p_camera.z() + intr.v0};
}

Vec3 pixel_to_camera_ray(const CameraIntrinsics& intr, const PixelPoint& px) {
    return {(px.u - intr.u0) / intr.fu, (px.v - intr.v0) / intr.fv, 1.0};
}

Vec2 pixel_to_image(const CameraIntrinsics& intr, const PixelPoint& px) {
    return {(px.u - intr.u0) * intr.pixel_pitch_x, (px.v - intr.v0) * intr.pixel_pitch_y};
}

double inter_led_angle(const Vec3& ray_i, const Vec3& ray_j) {
    const double ni = ray_i.norm();
    const double nj = ray_j.norm();
    if (!(ni >= 1e-12 && nj >= 1e-12)) throw Error(ErrorCode::DegenerateRay, "ray has zero length");
    // atan2 form keeps precision for nearly parallel rays.
    return std::atan2(ray_i.cross(ray_j).norm(), ray_i.dot(ray_j));
}

}  // namespace vlp
