#include "ppcshape/attitude_filter.hpp"

#include "ppcshape/error.hpp"

#include <Eigen/Geometry>

#include <algorithm>
#include <cmath>
#include <numbers>

namespace ppcshape {

namespace {

// Rotation vector that turns `estimated` onto `measured` in the body frame,
// scaled by the angle between them.
Eigen::Vector3d direction_error(const Eigen::Vector3d& measured, const Eigen::Vector3d& estimated) {
    const Eigen::Vector3d axis = measured.cross(estimated);
    const double s = axis.norm();
    const double c = measured.dot(estimated);
    if (s < 1e-12) {
        if (c > 0.0) {
            return Eigen::Vector3d::Zero();
        }
        // Antiparallel: any perpendicular axis works.
        Eigen::Vector3d perp = measured.unitOrthogonal();
        return perp * std::numbers::pi;
    }
    return axis * (std::atan2(s, c) / s);
}

Quaternion from_matrix(const Eigen::Matrix3d& r) {
    const Eigen::Quaterniond q(r);
    return Quaternion{q.w(), q.x(), q.y(), q.z()}.normalized().canonical();
}

}  // namespace

AttitudeState attitude_initialize(const ImuSample& sample, const AttitudeFilterConfig& config) {
    AttitudeState state;
    const double an = sample.accel.norm();
    if (!(an > 0.0)) {
        return state;
    }
    const Eigen::Vector3d up_body = sample.accel / an;
    const Eigen::Vector3d up_world = Eigen::Vector3d::UnitZ();

    if (sample.mag && sample.mag->norm() > 0.0 && config.mag_reference.norm() > 0.0) {
        const Eigen::Vector3d m_body = sample.mag->normalized();
        const Eigen::Vector3d h_world = config.mag_reference.normalized();
        const Eigen::Vector3d e_body = up_body.cross(m_body);
        const Eigen::Vector3d e_world = up_world.cross(h_world);
        if (e_body.norm() > 1e-6 && e_world.norm() > 1e-6) {
            Eigen::Matrix3d body;
            Eigen::Matrix3d world;
            body.col(0) = up_body;
            body.col(1) = e_body.normalized();
            body.col(2) = up_body.cross(body.col(1));
            world.col(0) = up_world;
            world.col(1) = e_world.normalized();
            world.col(2) = up_world.cross(world.col(1));
            state.q = from_matrix(world * body.transpose());
            return state;
        }
    }
    const Eigen::Quaterniond tilt = Eigen::Quaterniond::FromTwoVectors(up_body, up_world);
    state.q = Quaternion{tilt.w(), tilt.x(), tilt.y(), tilt.z()}.normalized().canonical();
    return state;
}

AttitudeState attitude_update(const AttitudeState& state, const ImuSample& sample, double dt,
                              const AttitudeFilterConfig& config) {
    if (!(dt > 0.0)) {
        throw Error(ErrorCode::invalid_argument, "attitude update needs a positive time step");
    }
    // Propagate first so the references are compared at the sample time.
    const Quaternion predicted_q = (state.q * Quaternion::from_rotation_vector(sample.gyro * dt)).normalized();
    const Quaternion inverse = predicted_q.conjugate();
    Eigen::Vector3d error = Eigen::Vector3d::Zero();

    const double an = sample.accel.norm();
    if (an > 0.0 && std::abs(an - config.gravity) <= config.accel_gate * config.gravity) {
        const Eigen::Vector3d predicted_up = inverse.rotate(Eigen::Vector3d::UnitZ());
        error += direction_error(sample.accel / an, predicted_up);
    }
    if (sample.mag && sample.mag->norm() > 0.0 && config.mag_reference.norm() > 0.0) {
        const Eigen::Vector3d predicted = inverse.rotate(config.mag_reference.normalized());
        error += direction_error(sample.mag->normalized(), predicted);
    }

    AttitudeState next = state;
    const double ramp = std::max(0.0, 1.0 - state.elapsed / config.startup_time);
    const double kp = config.kp + (config.startup_kp - config.kp) * (config.startup_time > 0.0 ? ramp : 0.0);
    if (ramp <= 0.0) {
        next.gyro_bias_integral += error * dt;
    }
    const Eigen::Vector3d correction = kp * error + config.ki * next.gyro_bias_integral;
    next.q = (predicted_q * Quaternion::from_rotation_vector(correction * dt)).normalized().canonical();
    next.elapsed = state.elapsed + dt;
    return next;
}

}  // namespace ppcshape
