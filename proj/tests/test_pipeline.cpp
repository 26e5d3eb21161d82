#include "doctest.h"

#include "ppcshape/error.hpp"
#include "ppcshape/evaluate.hpp"
#include "ppcshape/pipeline.hpp"
#include "ppcshape/sim.hpp"

#include <chrono>
#include <cmath>
#include <numbers>
#include <random>

using namespace ppcshape;
using std::numbers::pi;

namespace {

double shape_rmse(const std::vector<ShapeSample>& a, const std::vector<ShapeSample>& b) {
    REQUIRE(a.size() == b.size());
    double sum = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        sum += (a[k].pose.position - b[k].pose.position).squaredNorm();
    }
    return std::sqrt(sum / static_cast<double>(a.size()));
}

std::vector<Quaternion> quaternions_of(const std::vector<OrientationSample>& s, std::size_t frame, std::size_t n) {
    std::vector<Quaternion> out;
    for (std::size_t k = 0; k < n; ++k) {
        out.push_back(s[frame * n + k].q);
    }
    return out;
}

bool has_warning(const EstimatedFrame& f, const std::string& kind) {
    return std::any_of(f.warnings.begin(), f.warnings.end(), [&](const FrameWarning& w) { return w.kind == kind; });
}

TraceFrame offset_frame(const TraceFrame& f, const Eigen::Vector3d& d) {
    TraceFrame out = f;
    for (auto& s : out.samples) {
        s.pose.position += d;
    }
    return out;
}

}  // namespace

TEST_CASE("noiseless planar swing is reproduced") {
    const RobotModel robot = make_robot({SegmentSpec(0.48, 1, SensorPlacement{5.0 / 14, 10.0 / 14})});
    TrajectorySpec spec;
    spec.duration = 5.0;
    const auto frames = gen_trajectory(spec);
    const auto samples = synth_sensor_stream(robot, frames, 0.0, 1);
    const auto estimated = estimate_stream(robot, {}, samples);
    REQUIRE(estimated.size() == frames.size());
    double worst = 0.0;
    for (std::size_t i = 0; i < frames.size(); ++i) {
        worst = std::max(worst, shape_rmse(estimated[i].shape, sample_truth(robot, frames[i])));
    }
    CHECK(worst <= 1e-9 * 0.48);
}

TEST_CASE("noiseless multi-segment robot with mounting rotations and a tilted base") {
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> u(-1.5, 1.5);
    std::uniform_real_distribution<double> phi(0.0, 2 * pi);
    std::vector<SegmentSpec> specs{SegmentSpec(0.12, 0, SensorPlacement{1.0}),
                                   SegmentSpec(0.16, 2, SensorPlacement{0.3, 0.65, 1.0}),
                                   SegmentSpec(0.2, 3, SensorPlacement{0.2, 0.45, 0.75, 1.0})};
    Pose base;
    base.orientation = Quaternion::from_axis_angle(Eigen::Vector3d(1, 0.3, 0), 2.5);
    base.position = Eigen::Vector3d(0.05, -0.1, 0.3);
    RobotModel robot = make_robot(specs, base);
    robot.sensors[1][2].extrinsic = Quaternion::from_axis_angle(Eigen::Vector3d(0, 0, 1), 1.2);
    robot.sensors[2][0].extrinsic = Quaternion::from_axis_angle(Eigen::Vector3d(1, -1, 2), 0.4);

    ShapeEstimator estimator(robot);
    for (int trial = 0; trial < 50; ++trial) {
        GroundTruthFrame frame;
        frame.t = trial;
        for (const auto& s : specs) {
            std::vector<double> c;
            for (int k = 0; k <= s.order; ++k) {
                c.push_back(u(rng));
            }
            frame.segments.push_back({TrueCurvature{ModalConfig(c)}, phi(rng)});
        }
        const auto samples = synth_sensor_stream(robot, {frame}, 0.0, 1);
        const auto est = estimator.estimate(frame.t, quaternions_of(samples, 0, robot.sensor_count()));
        CHECK(shape_rmse(est.shape, sample_truth(robot, frame)) <= 1e-9 * robot.total_length());
        for (std::size_t i = 0; i < specs.size(); ++i) {
            CHECK(est.segments[i].max_twist < 1e-9);
        }
    }
}

TEST_CASE("straight robot flags the bending direction and holds it") {
    const RobotModel robot = make_robot({SegmentSpec(0.48, 1, SensorPlacement{0.5, 1.0})});
    ShapeEstimator estimator(robot);
    const std::vector<Quaternion> identity(2, Quaternion::identity());
    const EstimatedFrame straight = estimator.estimate(0.0, identity);
    CHECK_FALSE(straight.segments[0].phi_defined);
    CHECK(has_warning(straight, "phi_undefined"));
    CHECK(straight.segments[0].theta.is_zero());
    CHECK((straight.shape.back().pose.position - Eigen::Vector3d(0, 0, 0.48)).norm() < 1e-15);

    // A bent frame sets the direction, a later straight frame keeps it.
    const std::vector<Quaternion> bent{config_to_quaternion(0.3, 1.0), config_to_quaternion(0.8, 1.0)};
    const EstimatedFrame b = estimator.estimate(1.0, bent);
    CHECK(b.segments[0].phi_defined);
    CHECK(b.segments[0].phi == doctest::Approx(1.0).epsilon(1e-12));
    const EstimatedFrame again = estimator.estimate(2.0, identity);
    CHECK_FALSE(again.segments[0].phi_defined);
    CHECK(again.segments[0].phi == b.segments[0].phi);
}

TEST_CASE("reversed bends keep a single bending plane") {
    const RobotModel robot = make_robot({SegmentSpec(0.48, 1, SensorPlacement{0.5, 1.0})});
    ShapeEstimator estimator(robot);
    // S-shaped: positive bend at the first sensor, negative at the tip.
    const ModalConfig theta{2.0, -6.0};
    const double phi = 0.7;
    const std::vector<Quaternion> q{config_to_quaternion(eval_orientation(theta, 0.5), phi),
                                    config_to_quaternion(eval_orientation(theta, 1.0), phi)};
    const EstimatedFrame f = estimator.estimate(0.0, q);
    CHECK(f.segments[0].phi_spread < 1e-12);
    const SegmentSpec spec(0.48, 1, SensorPlacement{0.5, 1.0});
    const Pose tip = segment_pose(spec, {theta, phi, 0.0}, ArcCoordinate(1.0));
    CHECK((f.shape.back().pose.position - tip.position).norm() < 1e-12);
}

TEST_CASE("twisted sensor is reported") {
    const RobotModel robot = make_robot({SegmentSpec(0.48, 1, SensorPlacement{0.5, 1.0})});
    ShapeEstimator estimator(robot);
    const Quaternion twist = Quaternion::from_axis_angle(Eigen::Vector3d::UnitZ(), 5 * pi / 180);
    const std::vector<Quaternion> q{config_to_quaternion(0.4, 2.0), config_to_quaternion(0.9, 2.0) * twist};
    const EstimatedFrame f = estimator.estimate(0.0, q);
    REQUIRE(has_warning(f, "twist"));
    const auto it = std::find_if(f.warnings.begin(), f.warnings.end(), [](const auto& w) { return w.kind == "twist"; });
    CHECK(it->sensor_id == robot.sensors[0][1].id);
    CHECK(it->value > default_twist_tol);
    CHECK_FALSE(has_warning(estimator.estimate(1.0, std::vector<Quaternion>{q[0], config_to_quaternion(0.9, 2.0)}),
                            "twist"));
}

TEST_CASE("ill-conditioned placements warn on every frame") {
    const RobotModel robot = make_robot({SegmentSpec(0.48, 1, SensorPlacement{0.5, 1.0})});
    EstimatorConfig config;
    config.conditioning_threshold = 2.0;
    ShapeEstimator estimator(robot, config);
    const std::vector<Quaternion> q{config_to_quaternion(0.4, 2.0), config_to_quaternion(0.9, 2.0)};
    CHECK(has_warning(estimator.estimate(0.0, q), "ill_conditioned"));
    CHECK(has_warning(estimator.estimate(1.0, q), "ill_conditioned"));
}

TEST_CASE("stream alignment") {
    const RobotModel robot = make_robot({SegmentSpec(0.48, 1, SensorPlacement{0.5, 1.0})});
    const std::string a = robot.sensors[0][0].id;
    const std::string b = robot.sensors[0][1].id;
    const Quaternion qa = config_to_quaternion(0.2, 1.0);
    const Quaternion qb = config_to_quaternion(0.5, 1.0);

    std::vector<OrientationSample> disjoint{{0.0, a, qa}, {0.1, a, qa}, {1.0, b, qb}, {1.1, b, qb}};
    try {
        (void)estimate_stream(robot, {}, disjoint);
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::no_overlap);
    }

    std::vector<OrientationSample> only_one{{0.0, a, qa}};
    try {
        (void)estimate_stream(robot, {}, only_one);
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::configuration);
    }

    // Second sensor lags by 4 ms at 60 Hz: nearest-neighbour pairing.
    std::vector<OrientationSample> skewed;
    for (int k = 0; k < 60; ++k) {
        skewed.push_back({k / 60.0, a, qa});
        skewed.push_back({k / 60.0 + 0.004, b, qb});
    }
    const auto frames = estimate_stream(robot, {}, skewed);
    CHECK(frames.size() == 59);  // the first reference sample precedes the second stream
    for (const auto& f : frames) {
        CHECK_FALSE(f.shape.empty());
    }

    // A gap in one stream skips the frame with a warning.
    std::vector<OrientationSample> gap;
    for (int k = 0; k < 10; ++k) {
        gap.push_back({k / 60.0, a, qa});
        if (k != 4) {
            gap.push_back({k / 60.0, b, qb});
        }
    }
    const auto with_gap = estimate_stream(robot, {}, gap);
    REQUIRE(with_gap.size() == 10);
    CHECK(with_gap[4].shape.empty());
    CHECK(has_warning(with_gap[4], "missing_sample"));

    // Slerp interpolates between bracketing samples.
    EstimatorConfig config;
    config.slerp = true;
    std::vector<OrientationSample> interp{{0.0, a, qa}, {0.5, a, qa}, {1.0, a, qa},
                                          {-0.5, b, config_to_quaternion(0.2, 1.0)},
                                          {0.5, b, config_to_quaternion(0.6, 1.0)},
                                          {1.5, b, config_to_quaternion(1.0, 1.0)}};
    const auto sl = estimate_stream(robot, config, interp);
    REQUIRE(sl.size() == 3);
    const double alpha_tip = eval_orientation(sl[0].segments[0].theta, 1.0);
    CHECK(alpha_tip == doctest::Approx(0.4).epsilon(1e-12));
}

TEST_CASE("identical inputs give bit-identical output") {
    const RobotModel robot = make_robot({SegmentSpec(0.24, 2, SensorPlacement{0.3, 0.6, 1.0}),
                                         SegmentSpec(0.24, 1, SensorPlacement{0.5, 1.0})});
    TrajectorySpec spec;
    spec.kind = ScenarioKind::circular_3d;
    spec.duration = 2.0;
    const auto frames = gen_trajectory(spec, 2);
    const auto samples = synth_sensor_stream(robot, frames, 0.5, 5);
    const auto a = estimate_stream(robot, {}, samples);
    const auto b = estimate_stream(robot, {}, samples);
    REQUIRE(a.size() == b.size());
    bool same = true;
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (std::size_t k = 0; k < a[i].shape.size(); ++k) {
            same = same && a[i].shape[k].pose.position == b[i].shape[k].pose.position &&
                   a[i].shape[k].pose.orientation == b[i].shape[k].pose.orientation;
        }
    }
    CHECK(same);
}

TEST_CASE("raw inertial front end") {
    const RobotModel robot = make_robot({SegmentSpec(0.48, 1, SensorPlacement{5.0 / 14, 10.0 / 14})});
    TrajectorySpec spec;
    spec.duration = 20.0;
    const auto frames = gen_trajectory(spec);
    const auto imu = synth_imu_raw(robot, frames, 60.0, {0.5 * pi / 180, 0.05, 0.01}, 3);
    const auto estimated = estimate_imu_stream(robot, {}, {}, imu);
    REQUIRE(estimated.size() == frames.size());
    double sum = 0.0;
    for (std::size_t i = 0; i < frames.size(); ++i) {
        sum += shape_rmse(estimated[i].shape, sample_truth(robot, frames[i]));
    }
    const double mean = sum / static_cast<double>(frames.size());
    MESSAGE("raw IMU mean shape RMSE: " << mean * 1000 << " mm");
    CHECK(mean < 0.015 * 0.48);

    std::vector<ImuRecord> duplicated{imu[0], imu[0]};
    CHECK_THROWS_AS((void)filter_imu_stream({}, duplicated), Error);
}

TEST_CASE("evaluation statistics") {
    const double values[] = {1.0, 2.0, 3.0, 4.0};
    const ErrorStats st = summarize(values);
    CHECK(st.mean == 2.5);
    CHECK(st.max == 4.0);
    CHECK(st.sd == doctest::Approx(std::sqrt(5.0 / 3.0)).epsilon(1e-15));
    CHECK(summarize({}).count == 0);

    const RobotModel robot = make_robot({SegmentSpec(0.24, 1, SensorPlacement{0.5, 1.0}),
                                         SegmentSpec(0.24, 1, SensorPlacement{0.5, 1.0})});
    TrajectorySpec spec;
    spec.kind = ScenarioKind::circular_3d;
    spec.duration = 1.0;
    std::vector<TraceFrame> truth;
    for (const auto& f : gen_trajectory(spec, 2)) {
        truth.push_back({f.t, sample_truth(robot, f)});
    }

    const ErrorReport same = evaluate(truth, truth, {0.48});
    CHECK(same.shape.max == 0.0);
    CHECK(same.tip.max == 0.0);
    CHECK(same.bending_direction.max == 0.0);
    CHECK(same.bending_direction.count == truth.size());
    CHECK(same.frames.size() == truth.size());

    std::vector<TraceFrame> shifted;
    for (const auto& f : truth) {
        shifted.push_back(offset_frame(f, Eigen::Vector3d(0.003, 0.0, 0.0)));
    }
    const ErrorReport off = evaluate(shifted, truth, {0.48});
    CHECK(off.shape.mean == doctest::Approx(0.003).epsilon(1e-12));
    CHECK(off.shape.sd < 1e-15);
    CHECK(off.shape_bre_percent() == doctest::Approx(0.625).epsilon(1e-12));
    CHECK(off.tip.mean == doctest::Approx(0.003).epsilon(1e-12));

    // Without a configured length the truth polyline is used.
    const ErrorReport measured = evaluate(shifted, truth);
    CHECK(measured.total_length == doctest::Approx(0.48).epsilon(1e-3));

    // Estimated timestamps jittered by less than half a period still pair up.
    std::vector<TraceFrame> jittered = truth;
    for (auto& f : jittered) {
        f.t += 0.004;
    }
    CHECK(evaluate(jittered, truth, {0.48}).frames.size() == truth.size());

    std::vector<TraceFrame> late = truth;
    for (auto& f : late) {
        f.t += 100.0;
    }
    try {
        (void)evaluate(late, truth, {0.48});
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::misaligned_traces);
    }

    std::vector<TraceFrame> coarse = truth;
    coarse.front().samples.pop_back();
    CHECK_THROWS_AS((void)evaluate(coarse, truth, {0.48}), Error);
}

TEST_CASE("per-frame latency") {
    std::vector<SegmentSpec> specs;
    for (int i = 0; i < 3; ++i) {
        specs.emplace_back(0.16, 2, SensorPlacement{5.0 / 14, 10.0 / 14, 1.0});
    }
    const RobotModel robot = make_robot(specs);
    TrajectorySpec spec;
    spec.kind = ScenarioKind::circular_3d;
    spec.duration = 10.0;
    const auto frames = gen_trajectory(spec, 3);
    const auto samples = synth_sensor_stream(robot, frames, 0.5, 1);
    ShapeEstimator estimator(robot);
    const std::size_t n = robot.sensor_count();
    const auto start = std::chrono::steady_clock::now();
    for (std::size_t i = 0; i < frames.size(); ++i) {
        (void)estimator.estimate(frames[i].t, quaternions_of(samples, i, n));
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const double per_frame_ms = 1000.0 * seconds / static_cast<double>(frames.size());
    MESSAGE("per-frame estimate: " << per_frame_ms << " ms");
    CHECK(per_frame_ms < 1.0);
}
