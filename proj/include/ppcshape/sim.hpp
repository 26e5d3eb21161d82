#pragma once

#include "ppcshape/attitude_filter.hpp"
#include "ppcshape/chain.hpp"
#include "ppcshape/ppc_core.hpp"
#include "ppcshape/robot.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

/// Ground-truth motions and synthetic sensor data.
namespace ppcshape {

enum class ScenarioKind { swing, free_oscillation, tip_interaction, body_interaction, circular_3d };

[[nodiscard]] std::string_view scenario_name(ScenarioKind kind) noexcept;
/// Throws invalid_argument for unknown names.
[[nodiscard]] ScenarioKind parse_scenario(std::string_view name);

struct TrajectorySpec {
    ScenarioKind kind = ScenarioKind::swing;
    double duration = 10.0;
    double rate = 60.0;
    /// Tip bend angle α(1) of the base mode, radians.
    double amplitude = 1.0;
    /// Hz. Swing moves slowly; free oscillation defaults to 1 Hz.
    std::optional<double> frequency;
    /// Damping ratio of the free oscillation.
    double damping = 0.05;
    /// Fixed bending direction (the start direction for circular_3d).
    double phi = 0.0;
    /// Peak curvature added by a tip load, as θ = F·[1, −1].
    double tip_load = 0.8;
    /// Peak and width of the localized curvature bump of body_interaction.
    double bump_gain = 4.0;
    double bump_width = 0.2;
    double bump_center = 0.5;

    [[nodiscard]] double effective_frequency() const noexcept;
};

/// True curvature of one segment: a polynomial plus an optional Gaussian bump
/// g·exp(−(s−c)²/2w²).
struct TrueCurvature {
    ModalConfig poly{0.0};
    double bump_gain = 0.0;
    double bump_center = 0.5;
    double bump_width = 0.1;

    [[nodiscard]] bool is_polynomial() const noexcept { return bump_gain == 0.0; }
    [[nodiscard]] double curvature(double s) const noexcept;
    /// α(s) in closed form (polynomial part plus the erf integral of the bump).
    [[nodiscard]] double alpha(double s) const noexcept;
};

struct SegmentTruth {
    TrueCurvature curvature;
    double phi = 0.0;
};

struct GroundTruthFrame {
    double t = 0.0;
    std::vector<SegmentTruth> segments;
};

/// Frames at t = k/rate for k = 0 … ⌊duration·rate⌋, the same pattern on
/// every one of `segments` segments.
[[nodiscard]] std::vector<GroundTruthFrame> gen_trajectory(const TrajectorySpec& spec, std::size_t segments = 1);

/// Local orientation of a segment at s, with α from adaptive quadrature of
/// the true curvature (direct evaluation for polynomial truth).
[[nodiscard]] Quaternion true_orientation_at(const SegmentTruth& truth, ArcCoordinate s);

/// Pose of (segment, s) in the world frame.
[[nodiscard]] Pose truth_pose(const RobotModel& robot, const GroundTruthFrame& frame, std::size_t segment,
                              ArcCoordinate s);

/// Shape sampled like sample_shape. Polynomial frames go through sample_shape
/// itself; frames with a bump are integrated numerically.
[[nodiscard]] std::vector<ShapeSample> sample_truth(const RobotModel& robot, const GroundTruthFrame& frame,
                                                    int points_per_segment = 50);

struct OrientationSample {
    double t = 0.0;
    std::string sensor_id;
    Quaternion q;
};

/// Sensor quaternions at every frame, perturbed by q ⊗ exp(r) with
/// r ~ N(0, σ²/3 · I), so the rotation angle has RMS σ. Mounting extrinsics
/// are applied inversely. Samples are ordered by time, then sensor.
[[nodiscard]] std::vector<OrientationSample> synth_sensor_stream(const RobotModel& robot,
                                                                 const std::vector<GroundTruthFrame>& frames,
                                                                 double noise_deg, std::uint64_t seed);

struct ImuNoise {
    double gyro = 0.0;   // rad/s
    double accel = 0.0;  // m/s²
    double mag = 0.0;    // unit field
};

struct ImuRecord {
    std::string sensor_id;
    ImuSample sample;
};

/// Raw inertial streams at `rate` Hz. Truth orientation between frames comes
/// from slerp; gyro is the body rate over the interval ending at the sample,
/// accel is gravity as specific force in the body frame (motion accelerations
/// are neglected), mag is the reference field in the body frame.
[[nodiscard]] std::vector<ImuRecord> synth_imu_raw(const RobotModel& robot,
                                                   const std::vector<GroundTruthFrame>& frames, double rate,
                                                   const ImuNoise& noise, std::uint64_t seed,
                                                   const AttitudeFilterConfig& filter = {});

}  // namespace ppcshape
