#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace ppcshape {

/// Hamilton quaternion [w, x, y, z]. Unit quaternions represent rotations,
/// mapping the local frame into the parent frame.
struct Quaternion {
    double w = 1.0;
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    static Quaternion identity() { return {}; }
    /// Rotation by `angle` radians about unit `axis`.
    static Quaternion from_axis_angle(const Eigen::Vector3d& axis, double angle);
    /// Exponential map of a rotation vector (axis · angle).
    static Quaternion from_rotation_vector(const Eigen::Vector3d& r);

    [[nodiscard]] double norm() const noexcept;
    [[nodiscard]] Quaternion normalized() const;
    [[nodiscard]] Quaternion conjugate() const noexcept { return {w, -x, -y, -z}; }
    /// Same rotation with w ≥ 0; at w = 0 the first nonzero vector component is positive.
    [[nodiscard]] Quaternion canonical() const noexcept;
    [[nodiscard]] bool is_unit(double tol = 1e-9) const noexcept;

    [[nodiscard]] Eigen::Vector3d vec() const noexcept { return {x, y, z}; }
    [[nodiscard]] Eigen::Vector3d rotate(const Eigen::Vector3d& v) const noexcept;
    [[nodiscard]] Eigen::Matrix3d matrix() const noexcept;
    /// Logarithm map: rotation vector of the shortest equivalent rotation.
    [[nodiscard]] Eigen::Vector3d rotation_vector() const noexcept;

    friend Quaternion operator*(const Quaternion& a, const Quaternion& b) noexcept;
    friend Quaternion operator-(const Quaternion& q) noexcept { return {-q.w, -q.x, -q.y, -q.z}; }
    friend bool operator==(const Quaternion&, const Quaternion&) = default;
};

/// Angle of the relative rotation between two unit quaternions, in [0, π].
[[nodiscard]] double angular_distance(const Quaternion& a, const Quaternion& b) noexcept;

/// Spherical linear interpolation along the shorter arc, u ∈ [0, 1].
[[nodiscard]] Quaternion slerp(const Quaternion& a, const Quaternion& b, double u);

}  // namespace ppcshape
