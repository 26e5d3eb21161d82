#include "ppcshape/robot.hpp"

#include "ppcshape/error.hpp"

#include <cstdio>
#include <set>

namespace ppcshape {

double RobotModel::total_length() const noexcept {
    double total = 0.0;
    for (const SegmentSpec& s : segments) {
        total += s.length;
    }
    return total;
}

std::size_t RobotModel::sensor_count() const noexcept {
    std::size_t n = 0;
    for (const auto& s : sensors) {
        n += s.size();
    }
    return n;
}

std::string default_sensor_id(std::size_t segment, double s) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "seg%zu@%g", segment, s);
    return buf;
}

RobotModel make_robot(std::vector<SegmentSpec> segments, Pose base) {
    RobotModel robot{std::move(segments), {}, base};
    for (std::size_t i = 0; i < robot.segments.size(); ++i) {
        std::vector<SensorInfo> infos;
        for (double s : robot.segments[i].placement.locations()) {
            infos.push_back({default_sensor_id(i, s), Quaternion::identity()});
        }
        robot.sensors.push_back(std::move(infos));
    }
    validate_robot(robot);
    return robot;
}

void validate_robot(const RobotModel& robot) {
    if (robot.segments.empty()) {
        throw Error(ErrorCode::configuration, "robot needs at least one segment");
    }
    if (robot.sensors.size() != robot.segments.size()) {
        throw Error(ErrorCode::configuration, "sensor list does not match the segment list");
    }
    std::set<std::string> seen;
    for (std::size_t i = 0; i < robot.segments.size(); ++i) {
        if (robot.sensors[i].size() != robot.segments[i].placement.size()) {
            throw Error(ErrorCode::configuration, "segment " + std::to_string(i) + ": sensor ids do not match locations");
        }
        for (const SensorInfo& info : robot.sensors[i]) {
            if (!seen.insert(info.id).second) {
                throw Error(ErrorCode::configuration, "duplicate sensor id '" + info.id + "'");
            }
            if (!info.extrinsic.is_unit(1e-6)) {
                throw Error(ErrorCode::configuration, "extrinsic of sensor '" + info.id + "' is not unit-norm");
            }
        }
    }
}

}  // namespace ppcshape
