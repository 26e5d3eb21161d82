#include "ppcshape/quaternion.hpp"

#include "ppcshape/error.hpp"

#include <algorithm>
#include <cmath>

namespace ppcshape {

Quaternion Quaternion::from_axis_angle(const Eigen::Vector3d& axis, double angle) {
    const double n = axis.norm();
    if (n == 0.0) {
        return identity();
    }
    const Eigen::Vector3d u = axis / n;
    const double s = std::sin(0.5 * angle);
    return {std::cos(0.5 * angle), s * u.x(), s * u.y(), s * u.z()};
}

Quaternion Quaternion::from_rotation_vector(const Eigen::Vector3d& r) {
    const double angle = r.norm();
    if (angle < 1e-8) {
        // Second-order series of exp; exact to double precision here.
        const Eigen::Vector3d h = 0.5 * r;
        return Quaternion{1.0 - 0.5 * h.squaredNorm(), h.x(), h.y(), h.z()}.normalized();
    }
    return from_axis_angle(r / angle, angle);
}

double Quaternion::norm() const noexcept { return std::sqrt(w * w + x * x + y * y + z * z); }

Quaternion Quaternion::normalized() const {
    const double n = norm();
    if (!(n > 0.0) || !std::isfinite(n)) {
        throw Error(ErrorCode::not_normalized, "cannot normalize a zero or non-finite quaternion");
    }
    return {w / n, x / n, y / n, z / n};
}

Quaternion Quaternion::canonical() const noexcept {
    if (w != 0.0) {
        return w < 0.0 ? -*this : *this;
    }
    // Half-turn: q and −q both have w = 0, break the tie on the vector part.
    const double lead = x != 0.0 ? x : (y != 0.0 ? y : z);
    return lead < 0.0 ? Quaternion{0.0, -x, -y, -z} : Quaternion{0.0, x, y, z};
}

bool Quaternion::is_unit(double tol) const noexcept {
    return std::abs(w * w + x * x + y * y + z * z - 1.0) <= tol;
}

Eigen::Vector3d Quaternion::rotate(const Eigen::Vector3d& v) const noexcept {
    // v' = v + 2w (u × v) + 2 u × (u × v)
    const Eigen::Vector3d u = vec();
    const Eigen::Vector3d t = 2.0 * u.cross(v);
    return v + w * t + u.cross(t);
}

Eigen::Matrix3d Quaternion::matrix() const noexcept {
    Eigen::Matrix3d r;
    r << 1 - 2 * (y * y + z * z), 2 * (x * y - w * z), 2 * (x * z + w * y),
         2 * (x * y + w * z), 1 - 2 * (x * x + z * z), 2 * (y * z - w * x),
         2 * (x * z - w * y), 2 * (y * z + w * x), 1 - 2 * (x * x + y * y);
    return r;
}

Eigen::Vector3d Quaternion::rotation_vector() const noexcept {
    const Quaternion q = canonical();
    const Eigen::Vector3d u = q.vec();
    const double s = u.norm();
    if (s < 1e-12) {
        return 2.0 * u;
    }
    const double angle = 2.0 * std::atan2(s, q.w);
    return u * (angle / s);
}

Quaternion operator*(const Quaternion& a, const Quaternion& b) noexcept {
    return {a.w * b.w - a.x * b.x - a.y * b.y - a.z * b.z,
            a.w * b.x + a.x * b.w + a.y * b.z - a.z * b.y,
            a.w * b.y - a.x * b.z + a.y * b.w + a.z * b.x,
            a.w * b.z + a.x * b.y - a.y * b.x + a.z * b.w};
}

double angular_distance(const Quaternion& a, const Quaternion& b) noexcept {
    const Quaternion d = a.conjugate() * b;
    return 2.0 * std::atan2(d.vec().norm(), std::abs(d.w));
}

Quaternion slerp(const Quaternion& a, const Quaternion& b, double u) {
    if (!(u >= 0.0 && u <= 1.0)) {
        throw Error(ErrorCode::invalid_argument, "slerp parameter must lie in [0, 1]");
    }
    Quaternion end = b;
    double dot = a.w * b.w + a.x * b.x + a.y * b.y + a.z * b.z;
    if (dot < 0.0) {
        end = -b;
        dot = -dot;
    }
    dot = std::min(dot, 1.0);
    if (dot > 1.0 - 1e-12) {
        return Quaternion{a.w + u * (end.w - a.w), a.x + u * (end.x - a.x), a.y + u * (end.y - a.y),
                          a.z + u * (end.z - a.z)}
            .normalized();
    }
    const double theta = std::acos(dot);
    const double sin_theta = std::sin(theta);
    const double ka = std::sin((1.0 - u) * theta) / sin_theta;
    const double kb = std::sin(u * theta) / sin_theta;
    return Quaternion{ka * a.w + kb * end.w, ka * a.x + kb * end.x, ka * a.y + kb * end.y,
                      ka * a.z + kb * end.z}
        .normalized();
}

}  // namespace ppcshape
