#include "ppcshape/config.hpp"

#include "ppcshape/error.hpp"
#include "ppcshape/io.hpp"

#include <json.hpp>

#include <numbers>
#include <sstream>

namespace ppcshape {

namespace {

using nlohmann::json;

constexpr double deg = std::numbers::pi / 180.0;

Quaternion read_quaternion(const json& j, const std::string& what) {
    if (!j.is_array() || j.size() != 4) {
        throw Error(ErrorCode::configuration, what + " must be [w, x, y, z]");
    }
    const Quaternion q{j[0].get<double>(), j[1].get<double>(), j[2].get<double>(), j[3].get<double>()};
    if (!q.is_unit(1e-6)) {
        throw Error(ErrorCode::configuration, what + " is not unit-norm");
    }
    return q.normalized();
}

Eigen::Vector3d read_vector(const json& j, const std::string& what) {
    if (!j.is_array() || j.size() != 3) {
        throw Error(ErrorCode::configuration, what + " must have three entries");
    }
    return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

void read_estimator(const json& j, EstimatorConfig& e) {
    e.conditioning_threshold = j.value("conditioning_threshold", e.conditioning_threshold);
    e.alpha_min = j.value("alpha_min_deg", e.alpha_min / deg) * deg;
    e.twist_tol = j.value("twist_tol", e.twist_tol);
    e.least_squares = j.value("least_squares", e.least_squares);
    e.points_per_segment = j.value("points_per_segment", e.points_per_segment);
    e.slerp = j.value("slerp", e.slerp);
    e.phi_spread_tol = j.value("phi_spread_tol_deg", e.phi_spread_tol / deg) * deg;
    if (!(e.conditioning_threshold > 0.0) || !(e.alpha_min >= 0.0) || !(e.twist_tol >= 0.0) ||
        e.points_per_segment < 2) {
        throw Error(ErrorCode::configuration, "invalid estimator settings");
    }
}

void read_filter(const json& j, AttitudeFilterConfig& f) {
    f.kp = j.value("kp", f.kp);
    f.ki = j.value("ki", f.ki);
    f.gravity = j.value("gravity", f.gravity);
    f.accel_gate = j.value("accel_gate", f.accel_gate);
    f.startup_kp = j.value("startup_kp", f.startup_kp);
    f.startup_time = j.value("startup_time", f.startup_time);
    if (j.contains("mag_reference")) {
        f.mag_reference = read_vector(j.at("mag_reference"), "filter.mag_reference");
    }
    if (!(f.kp >= 0.0) || !(f.ki >= 0.0) || !(f.gravity > 0.0) || !(f.startup_time >= 0.0)) {
        throw Error(ErrorCode::configuration, "invalid filter settings");
    }
}

void read_noise(const json& j, NoiseConfig& n) {
    n.orientation_deg = j.value("orientation_deg", n.orientation_deg);
    n.gyro_dps = j.value("gyro_dps", n.gyro_dps);
    n.accel = j.value("accel", n.accel);
    n.mag = j.value("mag", n.mag);
    if (!(n.orientation_deg >= 0.0 && n.gyro_dps >= 0.0 && n.accel >= 0.0 && n.mag >= 0.0)) {
        throw Error(ErrorCode::configuration, "noise levels must be non-negative");
    }
}

void read_scenario(const json& j, TrajectorySpec& s) {
    if (j.contains("kind")) {
        s.kind = parse_scenario(j.at("kind").get<std::string>());
    }
    s.duration = j.value("duration", s.duration);
    s.rate = j.value("rate", s.rate);
    s.amplitude = j.value("amplitude", s.amplitude);
    if (j.contains("frequency")) {
        s.frequency = j.at("frequency").get<double>();
    }
    s.damping = j.value("damping", s.damping);
    s.phi = j.value("phi_deg", s.phi / deg) * deg;
    s.tip_load = j.value("tip_load", s.tip_load);
    s.bump_gain = j.value("bump_gain", s.bump_gain);
    s.bump_width = j.value("bump_width", s.bump_width);
    s.bump_center = j.value("bump_center", s.bump_center);
    if (!(s.duration > 0.0) || !(s.rate > 0.0) || !(s.bump_width > 0.0) || (s.frequency && !(*s.frequency > 0.0))) {
        throw Error(ErrorCode::configuration, "invalid scenario settings");
    }
}

}  // namespace

AppConfig parse_config(const std::string& text) {
    AppConfig cfg;
    try {
        const json j = json::parse(text);
        if (j.contains("estimator")) {
            read_estimator(j.at("estimator"), cfg.estimator);
        }
        if (j.contains("filter")) {
            read_filter(j.at("filter"), cfg.filter);
        }
        if (j.contains("noise")) {
            read_noise(j.at("noise"), cfg.noise);
        }
        if (j.contains("scenario")) {
            read_scenario(j.at("scenario"), cfg.scenario);
        }

        const json& segments = j.at("segments");
        if (!segments.is_array() || segments.empty()) {
            throw Error(ErrorCode::configuration, "'segments' must be a non-empty array");
        }
        std::vector<SegmentSpec> specs;
        for (const json& s : segments) {
            specs.emplace_back(s.at("length_m").get<double>(), s.at("order").get<int>(),
                               SensorPlacement(s.at("sensor_locations").get<std::vector<double>>()),
                               cfg.estimator.least_squares);
        }
        Pose base;
        if (j.contains("base_orientation")) {
            base.orientation = read_quaternion(j.at("base_orientation"), "base_orientation");
        }
        if (j.contains("base_position")) {
            base.position = read_vector(j.at("base_position"), "base_position");
        }
        cfg.robot = make_robot(std::move(specs), base);

        for (std::size_t i = 0; i < segments.size(); ++i) {
            const json& s = segments[i];
            auto& sensors = cfg.robot.sensors[i];
            if (s.contains("sensor_ids")) {
                const auto ids = s.at("sensor_ids").get<std::vector<std::string>>();
                if (ids.size() != sensors.size()) {
                    throw Error(ErrorCode::configuration, "segment " + std::to_string(i) + ": one id per sensor location");
                }
                for (std::size_t k = 0; k < ids.size(); ++k) {
                    sensors[k].id = ids[k];
                }
            }
            if (s.contains("sensor_extrinsics")) {
                const json& ext = s.at("sensor_extrinsics");
                if (!ext.is_array() || ext.size() != sensors.size()) {
                    throw Error(ErrorCode::configuration,
                                "segment " + std::to_string(i) + ": one extrinsic quaternion per sensor location");
                }
                for (std::size_t k = 0; k < sensors.size(); ++k) {
                    sensors[k].extrinsic = read_quaternion(ext[k], "sensor extrinsic");
                }
            }
        }
        validate_robot(cfg.robot);
    } catch (const json::exception& e) {
        throw Error(ErrorCode::configuration, std::string("config: ") + e.what());
    } catch (const Error& e) {
        if (e.code() == ErrorCode::configuration) {
            throw;
        }
        throw Error(ErrorCode::configuration, std::string("config: ") + e.what());
    }
    return cfg;
}

AppConfig load_config(const std::filesystem::path& path) {
    std::ifstream in = open_input(path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

}  // namespace ppcshape
