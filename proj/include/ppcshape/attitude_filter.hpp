#pragma once

#include "ppcshape/quaternion.hpp"

#include <Eigen/Core>

#include <optional>

namespace ppcshape {

/// One inertial sample. Gyro in rad/s (body frame), accel in m/s² as specific
/// force (reads +g along world up when static), optional unit magnetometer.
struct ImuSample {
    double t = 0.0;
    Eigen::Vector3d gyro = Eigen::Vector3d::Zero();
    Eigen::Vector3d accel = Eigen::Vector3d::Zero();
    std::optional<Eigen::Vector3d> mag;
};

struct AttitudeFilterConfig {
    double kp = 1.0;
    double ki = 0.01;
    double gravity = 9.81;
    /// Accelerometer correction is skipped when |‖a‖ − g| exceeds this fraction of g.
    double accel_gate = 0.15;
    /// World-frame direction of the magnetic field.
    Eigen::Vector3d mag_reference = Eigen::Vector3d::UnitX();
    /// Proportional gain right after start, ramping linearly down to kp.
    double startup_kp = 10.0;
    double startup_time = 2.0;
};

/// Complementary filter state; q maps the sensor frame into the world frame.
struct AttitudeState {
    Quaternion q = Quaternion::identity();
    Eigen::Vector3d gyro_bias_integral = Eigen::Vector3d::Zero();
    /// Time since the filter started, drives the startup gain ramp.
    double elapsed = 0.0;
};

/// Aligns the initial attitude with the gravity (and magnetic) reference of
/// one sample. Without a magnetometer the yaw is left at zero.
[[nodiscard]] AttitudeState attitude_initialize(const ImuSample& sample, const AttitudeFilterConfig& config = {});

/// One step: gyro integration through the exponential map, plus proportional
/// and integral corrections toward the gravity and magnetic references.
/// Corrections use the angle between measured and predicted directions, so
/// large initial errors decay exponentially rather than with sin(angle).
[[nodiscard]] AttitudeState attitude_update(const AttitudeState& state, const ImuSample& sample, double dt,
                                            const AttitudeFilterConfig& config = {});

}  // namespace ppcshape
