#pragma once

#include "ppcshape/chain.hpp"
#include "ppcshape/quaternion.hpp"

#include <string>
#include <vector>

namespace ppcshape {

struct SensorInfo {
    std::string id;
    /// Mounting rotation: backbone frame = measured frame ⊗ extrinsic.
    Quaternion extrinsic = Quaternion::identity();
};

/// Static robot description shared by the simulator and the estimator.
struct RobotModel {
    std::vector<SegmentSpec> segments;
    /// One entry per sensor location of each segment, in placement order.
    std::vector<std::vector<SensorInfo>> sensors;
    /// Robot base frame in the world (world z is up).
    Pose base;

    [[nodiscard]] double total_length() const noexcept;
    [[nodiscard]] std::size_t sensor_count() const noexcept;
};

/// Location-based id, e.g. "seg0@0.357143", so that a sensor keeps its name
/// across configurations that share its location.
[[nodiscard]] std::string default_sensor_id(std::size_t segment, double s);

/// Model with default ids and identity extrinsics. Throws configuration on
/// duplicate ids.
[[nodiscard]] RobotModel make_robot(std::vector<SegmentSpec> segments, Pose base = {});

/// Checks that `sensors` matches the placements and that ids are unique.
void validate_robot(const RobotModel& robot);

}  // namespace ppcshape
