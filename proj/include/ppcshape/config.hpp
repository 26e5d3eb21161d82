#pragma once

#include "ppcshape/attitude_filter.hpp"
#include "ppcshape/pipeline.hpp"
#include "ppcshape/robot.hpp"
#include "ppcshape/sim.hpp"

#include <filesystem>
#include <string>

namespace ppcshape {

struct NoiseConfig {
    double orientation_deg = 0.5;
    double gyro_dps = 0.5;
    double accel = 0.05;
    double mag = 0.01;
};

/// Everything read from a robot configuration file.
struct AppConfig {
    RobotModel robot;
    EstimatorConfig estimator;
    AttitudeFilterConfig filter;
    NoiseConfig noise;
    TrajectorySpec scenario;
};

/// Parses a JSON document. Missing optional sections take their defaults;
/// invalid values throw configuration.
[[nodiscard]] AppConfig parse_config(const std::string& text);
[[nodiscard]] AppConfig load_config(const std::filesystem::path& path);

}  // namespace ppcshape
