#pragma once

#include "ppcshape/attitude_filter.hpp"
#include "ppcshape/chain.hpp"
#include "ppcshape/modal_solver.hpp"
#include "ppcshape/orientation.hpp"
#include "ppcshape/robot.hpp"
#include "ppcshape/sim.hpp"

#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <vector>

/// Orientation measurements to whole-robot shape, one timestamp at a time.
namespace ppcshape {

struct EstimatorConfig {
    double conditioning_threshold = 1e8;
    double alpha_min = default_alpha_min;
    double twist_tol = default_twist_tol;
    bool least_squares = false;
    int points_per_segment = 50;
    /// Interpolate other sensors to the reference timestamps instead of
    /// taking the nearest sample.
    bool slerp = false;
    /// Axial spread of per-sensor bending directions that triggers a warning.
    double phi_spread_tol = 10.0 * std::numbers::pi / 180.0;
};

struct FrameWarning {
    std::string kind;  // ill_conditioned, twist, phi_undefined, phi_spread, missing_sample
    std::size_t segment = 0;
    std::string sensor_id;
    double value = 0.0;
};

struct SegmentEstimate {
    ModalConfig theta{0.0};
    double phi = 0.0;
    bool phi_defined = false;
    /// Largest pairwise axial difference between sensor bending directions.
    double phi_spread = 0.0;
    double max_twist = 0.0;
};

struct EstimatedFrame {
    double t = 0.0;
    std::vector<SegmentEstimate> segments;
    std::vector<ShapeSample> shape;
    std::vector<FrameWarning> warnings;
};

/// Per-timestamp estimator. Work per frame is fixed by the robot layout; the
/// only state carried between frames is the last well-defined bending
/// direction of each segment. It is reported while the direction is
/// undefined (all sensor bends below alpha_min) and used for the shape when
/// the segment is exactly straight.
class ShapeEstimator {
public:
    ShapeEstimator(RobotModel robot, EstimatorConfig config = {});

    /// `measured` holds one quaternion per sensor in robot order (segment by
    /// segment, placement order), in the sensor's own mounting frame.
    [[nodiscard]] EstimatedFrame estimate(double t, std::span<const Quaternion> measured);

    [[nodiscard]] const RobotModel& robot() const noexcept { return robot_; }
    [[nodiscard]] const EstimatorConfig& config() const noexcept { return config_; }

private:
    RobotModel robot_;
    EstimatorConfig config_;
    std::vector<ModalSolver> solvers_;
    std::vector<double> held_phi_;
};

/// Groups samples by sensor, aligns them on the timestamps of the first
/// sensor inside the common time window and runs the estimator on each.
/// Throws configuration when a sensor has no samples and no_overlap when the
/// streams share no time window.
[[nodiscard]] std::vector<EstimatedFrame> estimate_stream(const RobotModel& robot, const EstimatorConfig& config,
                                                          std::span<const OrientationSample> samples);

/// Runs one attitude filter per sensor, then estimate_stream.
[[nodiscard]] std::vector<EstimatedFrame> estimate_imu_stream(const RobotModel& robot,
                                                              const EstimatorConfig& config,
                                                              const AttitudeFilterConfig& filter,
                                                              std::span<const ImuRecord> records);

/// Orientation samples produced by per-sensor attitude filters.
[[nodiscard]] std::vector<OrientationSample> filter_imu_stream(const AttitudeFilterConfig& filter,
                                                               std::span<const ImuRecord> records);

}  // namespace ppcshape
