#include "ppcshape/sim.hpp"

#include "ppcshape/error.hpp"
#include "ppcshape/orientation.hpp"
#include "ppcshape/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <random>

namespace ppcshape {

namespace {

using std::numbers::pi;

constexpr std::array<std::pair<ScenarioKind, std::string_view>, 5> scenario_names{{
    {ScenarioKind::swing, "swing"},
    {ScenarioKind::free_oscillation, "free_oscillation"},
    {ScenarioKind::tip_interaction, "tip_interaction"},
    {ScenarioKind::body_interaction, "body_interaction"},
    {ScenarioKind::circular_3d, "circular_3d"},
}};

// Base mode with α(1) = 1: θ = [0.6, 0.8].
ModalConfig base_mode(double scale) { return ModalConfig{0.6 * scale, 0.8 * scale}; }

// A spec whose order matches a truth polynomial, for reuse of the chain code.
SegmentSpec spec_for_truth(double length, int order) {
    std::vector<double> s;
    for (int k = 0; k <= order; ++k) {
        s.push_back((k + 1.0) / (order + 1.0));
    }
    return {length, order, SensorPlacement(std::move(s))};
}

Pose embed(double x, double y, double alpha, double phi) {
    return Pose{Eigen::Vector3d(y * std::cos(phi), y * std::sin(phi), x), config_to_quaternion(alpha, phi)};
}

PlanarPoint bump_increment(const TrueCurvature& c, double from, double to, double length) {
    auto f = [&](double v) {
        const double a = c.alpha(v);
        return Eigen::Vector2d(std::cos(a), std::sin(a));
    };
    const Eigen::Vector2d r = integrate_adaptive(f, from, to, QuadratureOptions{.tol = default_position_tol});
    return {length * r.x(), length * r.y()};
}

Pose truth_local_pose(const SegmentTruth& truth, double length, double s) {
    if (truth.curvature.is_polynomial()) {
        const ModalConfig& theta = truth.curvature.poly;
        return segment_pose(spec_for_truth(length, theta.order()), SegmentState{theta, truth.phi, 0.0},
                            ArcCoordinate(s));
    }
    const PlanarPoint p = bump_increment(truth.curvature, 0.0, s, length);
    return embed(p.x, p.y, truth.curvature.alpha(s), truth.phi);
}

void check_frame(const RobotModel& robot, const GroundTruthFrame& frame) {
    if (frame.segments.size() != robot.segments.size()) {
        throw Error(ErrorCode::invalid_argument, "truth frame and robot differ in segment count");
    }
}

Eigen::Vector3d gaussian3(std::mt19937_64& rng, std::normal_distribution<double>& n, double sigma) {
    const double a = n(rng);
    const double b = n(rng);
    const double c = n(rng);
    return sigma * Eigen::Vector3d(a, b, c);
}

}  // namespace

std::string_view scenario_name(ScenarioKind kind) noexcept {
    for (const auto& [k, name] : scenario_names) {
        if (k == kind) {
            return name;
        }
    }
    return "unknown";
}

ScenarioKind parse_scenario(std::string_view name) {
    for (const auto& [k, n] : scenario_names) {
        if (n == name) {
            return k;
        }
    }
    throw Error(ErrorCode::invalid_argument, "unknown scenario '" + std::string(name) + "'");
}

double TrajectorySpec::effective_frequency() const noexcept {
    if (frequency) {
        return *frequency;
    }
    switch (kind) {
        case ScenarioKind::free_oscillation:
            return 1.0;
        case ScenarioKind::circular_3d:
            return 0.1;
        default:
            return 0.2;
    }
}

double TrueCurvature::curvature(double s) const noexcept {
    double q = 0.0;
    const auto c = poly.coeffs();
    for (std::size_t k = c.size(); k-- > 0;) {
        q = q * s + c[k];
    }
    if (bump_gain != 0.0) {
        const double d = (s - bump_center) / bump_width;
        q += bump_gain * std::exp(-0.5 * d * d);
    }
    return q;
}

double TrueCurvature::alpha(double s) const noexcept {
    double a = eval_orientation(poly, s);
    if (bump_gain != 0.0) {
        const double k = std::sqrt(2.0) * bump_width;
        a += bump_gain * bump_width * std::sqrt(0.5 * pi) *
             (std::erf((s - bump_center) / k) + std::erf(bump_center / k));
    }
    return a;
}

std::vector<GroundTruthFrame> gen_trajectory(const TrajectorySpec& spec, std::size_t segments) {
    if (!(spec.rate > 0.0) || !(spec.duration > 0.0)) {
        throw Error(ErrorCode::invalid_argument, "trajectory rate and duration must be positive");
    }
    if (segments == 0) {
        throw Error(ErrorCode::invalid_argument, "trajectory needs at least one segment");
    }
    if (spec.kind == ScenarioKind::body_interaction && !(spec.bump_width > 0.0)) {
        throw Error(ErrorCode::invalid_argument, "bump width must be positive");
    }
    const double f = spec.effective_frequency();
    const double omega = 2.0 * pi * f;
    const auto count = static_cast<std::size_t>(std::floor(spec.duration * spec.rate + 1e-9)) + 1;

    std::vector<GroundTruthFrame> frames;
    frames.reserve(count);
    for (std::size_t k = 0; k < count; ++k) {
        const double t = static_cast<double>(k) / spec.rate;
        SegmentTruth truth;
        truth.phi = wrap_two_pi(spec.phi);
        const double swing = spec.amplitude * std::sin(omega * t);
        // Loads ramp on and off smoothly over each period.
        const double load = std::sin(0.5 * omega * t) * std::sin(0.5 * omega * t);
        switch (spec.kind) {
            case ScenarioKind::swing:
                truth.curvature.poly = base_mode(swing);
                break;
            case ScenarioKind::free_oscillation: {
                const double zeta = spec.damping;
                const double wd = omega * std::sqrt(std::max(0.0, 1.0 - zeta * zeta));
                truth.curvature.poly = base_mode(spec.amplitude * std::exp(-zeta * omega * t) * std::cos(wd * t));
                break;
            }
            case ScenarioKind::tip_interaction: {
                const double force = spec.tip_load * load;
                const ModalConfig mode = base_mode(swing);
                truth.curvature.poly = ModalConfig{mode[0] + force, mode[1] - force};
                break;
            }
            case ScenarioKind::body_interaction:
                truth.curvature.poly = base_mode(swing);
                truth.curvature.bump_gain = spec.bump_gain * load;
                truth.curvature.bump_center = spec.bump_center;
                truth.curvature.bump_width = spec.bump_width;
                break;
            case ScenarioKind::circular_3d:
                truth.curvature.poly = base_mode(spec.amplitude);
                truth.phi = wrap_two_pi(spec.phi + omega * t);
                break;
        }
        frames.push_back({t, std::vector<SegmentTruth>(segments, truth)});
    }
    return frames;
}

Quaternion true_orientation_at(const SegmentTruth& truth, ArcCoordinate s) {
    const TrueCurvature& c = truth.curvature;
    if (c.is_polynomial()) {
        return config_to_quaternion(eval_orientation(c.poly, s), truth.phi);
    }
    auto q = [&](double v) { return Eigen::Matrix<double, 1, 1>(c.curvature(v)); };
    const double alpha = integrate_adaptive(q, 0.0, s.value(), QuadratureOptions{.tol = 1e-13})(0);
    return config_to_quaternion(alpha, truth.phi);
}

Pose truth_pose(const RobotModel& robot, const GroundTruthFrame& frame, std::size_t segment, ArcCoordinate s) {
    check_frame(robot, frame);
    if (segment >= robot.segments.size()) {
        throw Error(ErrorCode::invalid_argument, "segment index out of range");
    }
    Pose pose = robot.base;
    for (std::size_t i = 0; i < segment; ++i) {
        pose = pose * truth_local_pose(frame.segments[i], robot.segments[i].length, 1.0);
    }
    return pose * truth_local_pose(frame.segments[segment], robot.segments[segment].length, s);
}

std::vector<ShapeSample> sample_truth(const RobotModel& robot, const GroundTruthFrame& frame,
                                      int points_per_segment) {
    check_frame(robot, frame);
    const bool polynomial = std::all_of(frame.segments.begin(), frame.segments.end(),
                                        [](const SegmentTruth& t) { return t.curvature.is_polynomial(); });
    if (polynomial) {
        std::vector<SegmentSpec> specs;
        std::vector<SegmentState> states;
        for (std::size_t i = 0; i < frame.segments.size(); ++i) {
            const ModalConfig& theta = frame.segments[i].curvature.poly;
            specs.push_back(spec_for_truth(robot.segments[i].length, theta.order()));
            states.push_back({theta, frame.segments[i].phi, frame.t});
        }
        return sample_shape(specs, states, points_per_segment, robot.base);
    }
    if (points_per_segment < 2) {
        throw Error(ErrorCode::invalid_argument, "points_per_segment must be at least 2");
    }
    std::vector<ShapeSample> out;
    const double step = 1.0 / (points_per_segment - 1);
    Pose segment_base = robot.base;
    for (std::size_t i = 0; i < frame.segments.size(); ++i) {
        const SegmentTruth& truth = frame.segments[i];
        const double length = robot.segments[i].length;
        PlanarPoint planar;
        double previous = 0.0;
        for (int k = 0; k < points_per_segment; ++k) {
            const double s = k == points_per_segment - 1 ? 1.0 : k * step;
            if (s > previous) {
                const PlanarPoint d = bump_increment(truth.curvature, previous, s, length);
                planar.x += d.x;
                planar.y += d.y;
            }
            previous = s;
            out.push_back({i, s, segment_base * embed(planar.x, planar.y, truth.curvature.alpha(s), truth.phi)});
        }
        segment_base = out.back().pose;
    }
    return out;
}

std::vector<OrientationSample> synth_sensor_stream(const RobotModel& robot,
                                                   const std::vector<GroundTruthFrame>& frames, double noise_deg,
                                                   std::uint64_t seed) {
    if (!(noise_deg >= 0.0)) {
        throw Error(ErrorCode::invalid_argument, "noise level must be non-negative");
    }
    validate_robot(robot);
    const double sigma = noise_deg * pi / 180.0 / std::sqrt(3.0);
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::vector<OrientationSample> out;
    out.reserve(frames.size() * robot.sensor_count());
    for (const GroundTruthFrame& frame : frames) {
        for (std::size_t i = 0; i < robot.segments.size(); ++i) {
            const auto locations = robot.segments[i].placement.locations();
            for (std::size_t k = 0; k < locations.size(); ++k) {
                Quaternion q = truth_pose(robot, frame, i, ArcCoordinate(locations[k])).orientation;
                if (sigma > 0.0) {
                    q = (q * Quaternion::from_rotation_vector(gaussian3(rng, normal, sigma))).normalized();
                }
                const SensorInfo& info = robot.sensors[i][k];
                if (info.extrinsic != Quaternion::identity()) {
                    q = (q * info.extrinsic.conjugate()).normalized();
                }
                out.push_back({frame.t, info.id, q.canonical()});
            }
        }
    }
    return out;
}

std::vector<ImuRecord> synth_imu_raw(const RobotModel& robot, const std::vector<GroundTruthFrame>& frames,
                                     double rate, const ImuNoise& noise, std::uint64_t seed,
                                     const AttitudeFilterConfig& filter) {
    if (!(rate > 0.0)) {
        throw Error(ErrorCode::invalid_argument, "IMU rate must be positive");
    }
    if (frames.size() < 2) {
        throw Error(ErrorCode::invalid_argument, "raw IMU synthesis needs at least two frames");
    }
    if (!(noise.gyro >= 0.0 && noise.accel >= 0.0 && noise.mag >= 0.0)) {
        throw Error(ErrorCode::invalid_argument, "noise levels must be non-negative");
    }
    // Noiseless measured-frame orientations at the frame times.
    const auto truth = synth_sensor_stream(robot, frames, 0.0, 0);
    const std::size_t n_sensors = robot.sensor_count();
    std::vector<std::string> ids;
    for (std::size_t j = 0; j < n_sensors; ++j) {
        ids.push_back(truth[j].sensor_id);
    }

    const double t0 = frames.front().t;
    const double t1 = frames.back().t;
    const double dt = 1.0 / rate;
    const auto count = static_cast<std::size_t>(std::floor((t1 - t0) * rate + 1e-9)) + 1;

    auto orientation_at = [&](std::size_t sensor, double t) {
        auto it = std::upper_bound(frames.begin(), frames.end(), t,
                                   [](double v, const GroundTruthFrame& f) { return v < f.t; });
        std::size_t hi = std::min<std::size_t>(static_cast<std::size_t>(it - frames.begin()), frames.size() - 1);
        const std::size_t lo = hi == 0 ? 0 : hi - 1;
        hi = std::max(hi, lo + 1);
        const double span = frames[hi].t - frames[lo].t;
        const double u = std::clamp((t - frames[lo].t) / span, 0.0, 1.0);
        return slerp(truth[lo * n_sensors + sensor].q, truth[hi * n_sensors + sensor].q, u);
    };

    const Eigen::Vector3d up(0.0, 0.0, filter.gravity);
    const Eigen::Vector3d field = filter.mag_reference.normalized();
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);

    std::vector<Quaternion> previous(n_sensors);
    std::vector<Quaternion> current(n_sensors);
    std::vector<Quaternion> next(n_sensors);
    for (std::size_t j = 0; j < n_sensors; ++j) {
        current[j] = orientation_at(j, t0);
        next[j] = orientation_at(j, std::min(t1, t0 + dt));
    }

    std::vector<ImuRecord> out;
    out.reserve(count * n_sensors);
    for (std::size_t step = 0; step < count; ++step) {
        const double t = t0 + static_cast<double>(step) * dt;
        for (std::size_t j = 0; j < n_sensors; ++j) {
            if (step > 0) {
                previous[j] = current[j];
                current[j] = orientation_at(j, t);
            }
            // Body rate over the interval ending here; the first sample uses the next interval.
            const Eigen::Vector3d rate_vec =
                step > 0 ? (previous[j].conjugate() * current[j]).rotation_vector() / dt
                         : (current[j].conjugate() * next[j]).rotation_vector() / dt;
            ImuSample s;
            s.t = t;
            s.gyro = rate_vec + gaussian3(rng, normal, noise.gyro);
            const Quaternion inverse = current[j].conjugate();
            s.accel = inverse.rotate(up) + gaussian3(rng, normal, noise.accel);
            s.mag = inverse.rotate(field) + gaussian3(rng, normal, noise.mag);
            out.push_back({ids[j], s});
        }
    }
    return out;
}

}  // namespace ppcshape
