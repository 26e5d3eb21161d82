// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include "monte_carlo.hpp"

#include "ppcshape/evaluate.hpp"
#include "ppcshape/modal_solver.hpp"
#include "ppcshape/orientation.hpp"
#include "ppcshape/pipeline.hpp"
#include "ppcshape/ppc_core.hpp"
#include "ppcshape/sim.hpp"
#include "ppcshape/uncertainty.hpp"

#include <Eigen/LU>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <set>
#include <string>
#include <vector>

using namespace ppcshape;
using std::numbers::pi;

namespace {

constexpr double deg = pi / 180.0;

int failures = 0;

void report(int id, const std::string& title, bool ok, const std::string& detail) {
    std::printf("%s criterion %d: %s (%s)\n", ok ? "PASS" : "FAIL", id, title.c_str(), detail.c_str());
    std::fflush(stdout);
    failures += ok ? 0 : 1;
}

template <typename... Args>
std::string format(const char* fmt, Args... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, fmt, args...);
    return buf;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

// Sensors at (j + u)/n with u ∈ [0.15, 1), so neighbours never coincide.
SensorPlacement random_placement(std::mt19937_64& rng, int n) {
    std::uniform_real_distribution<double> u(0.15, 1.0);
    std::vector<double> s(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) {
        s[static_cast<std::size_t>(j)] = (j + u(rng)) / n;
    }
    return SensorPlacement(s);
}

double shape_rmse(const std::vector<ShapeSample>& a, const std::vector<ShapeSample>& b) {
    double sum = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        sum += (a[k].pose.position - b[k].pose.position).squaredNorm();
    }
    return std::sqrt(sum / static_cast<double>(a.size()));
}

std::vector<TraceFrame> truth_trace(const RobotModel& robot, const std::vector<GroundTruthFrame>& frames) {
    std::vector<TraceFrame> out;
    out.reserve(frames.size());
    for (const auto& f : frames) {
        out.push_back({f.t, sample_truth(robot, f)});
    }
    return out;
}

std::vector<TraceFrame> estimated_trace(const std::vector<EstimatedFrame>& frames) {
    std::vector<TraceFrame> out;
    out.reserve(frames.size());
    for (const auto& f : frames) {
        out.push_back({f.t, f.shape});
    }
    return out;
}

bool has_warning(const EstimatedFrame& f, const std::string& kind) {
    return std::any_of(f.warnings.begin(), f.warnings.end(), [&](const FrameWarning& w) { return w.kind == kind; });
}

void round_trip() {
    const auto start = std::chrono::steady_clock::now();
    std::mt19937_64 rng(101);
    std::uniform_real_distribution<double> bend(-(pi - 0.1), pi - 0.1);
    std::uniform_real_distribution<double> direction(0.0, 2.0 * pi);
    std::uniform_real_distribution<double> length(0.05, 2.0);
    double worst = 0.0;
    int cases = 0;
    for (int order = 0; order <= 3; ++order) {
        for (int i = 0; i < 1000; ++i) {
            const SensorPlacement placement = random_placement(rng, order + 1);
            // Θ from bends drawn at the sensors keeps every measured |α| below π.
            std::vector<double> alphas;
            for (std::size_t j = 0; j < placement.size(); ++j) {
                alphas.push_back(bend(rng));
            }
            const ModalConfig theta = solve_modal(placement, alphas);
            const double L = length(rng);
            const RobotModel robot = make_robot({SegmentSpec(L, order, placement)});

            GroundTruthFrame frame;
            frame.segments.push_back({TrueCurvature{theta}, direction(rng)});
            const std::vector<GroundTruthFrame> frames{frame};
            const auto samples = synth_sensor_stream(robot, frames, 0.0, 1);
            std::vector<Quaternion> q;
            for (const auto& s : samples) {
                q.push_back(s.q);
            }
            ShapeEstimator estimator(robot);
            const EstimatedFrame est = estimator.estimate(0.0, q);
            worst = std::max(worst, shape_rmse(est.shape, sample_truth(robot, frame)) / L);
            ++cases;
        }
    }
    const double elapsed = seconds_since(start);
    report(1, "noiseless round trip, orders 0-3", worst <= 1e-9 && elapsed < 10.0,
           format("%d cases, worst RMSE/L %.2e, %.2f s", cases, worst, elapsed));
}

void closed_forms() {
    const auto start = std::chrono::steady_clock::now();
    std::vector<double> theta1;
    for (int k = -16; k <= 16; ++k) {
        theta1.push_back(k * pi / 4);
    }
    for (double v : {1e-12, 1e-9, 1e-7, 5e-7, 9.99e-7, 1.001e-6, 2e-6, 1e-5, 1e-4}) {
        theta1.push_back(v);
        theta1.push_back(-v);
    }
    double worst0 = 0.0;
    double worst1 = 0.0;
    int evaluations = 0;
    for (int i = -16; i <= 16; ++i) {
        const double t0 = i * pi / 8;
        // Around the switch |θ₁| = 1e-6·max(1, |θ₀|) of the clothoid.
        std::vector<double> t1 = theta1;
        const double edge = 1e-6 * std::max(1.0, std::abs(t0));
        for (double f : {0.999, 1.001}) {
            t1.push_back(f * edge);
            t1.push_back(-f * edge);
        }
        for (double L : {0.48, 1.0}) {
            for (int k = 1; k <= 10; ++k) {
                const ArcCoordinate s(k / 10.0);
                const PlanarPoint q0 = position_quadrature(ModalConfig{t0}, s, L, 1e-12);
                const PlanarPoint c0 = position_order0(t0, s, L);
                worst0 = std::max(worst0, std::hypot(c0.x - q0.x, c0.y - q0.y) / L);
                for (double v : t1) {
                    const ModalConfig theta{t0, v};
                    const PlanarPoint q = position_quadrature(theta, s, L, 1e-12);
                    const PlanarPoint c = position_order1(theta, s, L);
                    worst1 = std::max(worst1, std::hypot(c.x - q.x, c.y - q.y) / L);
                    ++evaluations;
                }
            }
        }
    }
    const double elapsed = seconds_since(start);
    report(2, "arc and clothoid closed forms against quadrature", worst0 <= 1e-9 && worst1 <= 1e-9 && elapsed < 5.0,
           format("%d clothoid points, worst order-0 %.2e L, order-1 %.2e L, %.2f s", evaluations, worst0, worst1,
                  elapsed));
}

void determinant() {
    std::mt19937_64 rng(303);
    double worst = 0.0;
    bool positive = true;
    for (int i = 0; i < 10000; ++i) {
        const int n = 1 + i % 7;
        const SensorPlacement p = random_placement(rng, n);
        const double closed = system_determinant(p);
        const double numeric = build_system(p).fullPivLu().determinant();
        positive = positive && closed > 0.0;
        worst = std::max(worst, std::abs(closed - numeric) / std::abs(closed));
    }
    report(3, "closed-form system determinant", positive && worst <= 1e-10,
           format("10000 placements m <= 6, worst relative %.2e, all positive %s", worst, positive ? "yes" : "no"));
}

void extraction() {
    double worst = 0.0;
    int cases = 0;
    for (int i = 1; i <= 720; ++i) {
        const double alpha = 0.5 * deg + (180.0 - 0.5) * deg * i / 720.0;
        for (int j = 0; j < 720; ++j) {
            const double phi = 2.0 * pi * j / 720.0;
            const ExtractedConfig e = extract_config(config_to_quaternion(alpha, phi));
            worst = std::max({worst, std::abs(e.config.alpha - alpha), circular_distance(e.config.phi, phi)});
            ++cases;
        }
    }
    const double h = std::sqrt(2.0) / 2.0;
    const ExtractedConfig example = extract_config(Quaternion{h, 0.0, h, 0.0});
    const double example_error = std::max(std::abs(example.config.alpha - pi / 2), circular_distance(example.config.phi, 0.0));
    report(4, "quaternion to (alpha, phi) identity", worst <= 1e-10 && example_error <= 1e-15,
           format("%d grid points, worst %.2e rad, worked example error %.2e", cases, worst, example_error));
}

void linearization() {
    const auto start = std::chrono::steady_clock::now();
    std::mt19937_64 rng(505);
    std::uniform_real_distribution<double> magnitude(10.0 * deg, 170.0 * deg);
    const double L = 0.48;
    const double sigma = 1e-3;
    double worst_diag = 0.0;
    double worst_off = 0.0;
    for (int i = 0; i < 20; ++i) {
        const SensorPlacement placement = random_placement(rng, 2);
        std::vector<double> alphas;
        std::vector<double> w;
        // w = cos(α/2) carries no sign, so bends are drawn as magnitudes.
        for (int j = 0; j < 2; ++j) {
            alphas.push_back(magnitude(rng));
            w.push_back(std::cos(alphas.back() / 2.0));
        }
        const ModalConfig theta = solve_modal(placement, alphas);
        const std::vector<double> sig{sigma, sigma};
        const PlanarCovariance linear =
            position_covariance(placement, w, theta, ArcCoordinate(1.0), L, QuatNoise{sig});
        const Eigen::Matrix2d sampled =
            oracle::monte_carlo_covariance(placement, w, sig, 1.0, L, 100000, 1000 + static_cast<unsigned>(i));
        for (int k = 0; k < 2; ++k) {
            worst_diag = std::max(worst_diag, std::abs(linear(k, k) - sampled(k, k)) / sampled(k, k));
        }
        worst_off = std::max(worst_off,
                             std::abs(linear(0, 1) - sampled(0, 1)) / std::sqrt(sampled(0, 0) * sampled(1, 1)));
    }
    const double elapsed = seconds_since(start);
    report(5, "linearized covariance against 1e5-trial sampling",
           worst_diag <= 0.1 && worst_off <= 0.1 && elapsed < 60.0,
           format("20 operating points, worst variance error %.1f%%, worst correlation-scaled covariance error %.1f%%, "
                  "%.1f s",
                  100 * worst_diag, 100 * worst_off, elapsed));
}

void noise_robustness() {
    const RobotModel robot = make_robot({SegmentSpec(0.48, 1, SensorPlacement{5.0 / 14, 10.0 / 14})});
    TrajectorySpec spec;
    spec.kind = ScenarioKind::swing;
    const auto frames = gen_trajectory(spec);
    const auto truth = truth_trace(robot, frames);
    double worst_mean = 0.0;
    double worst_bre = 0.0;
    double sum_mean = 0.0;
    for (unsigned seed = 1; seed <= 100; ++seed) {
        const auto samples = synth_sensor_stream(robot, frames, 0.5, seed);
        const auto est = estimated_trace(estimate_stream(robot, {}, samples));
        const ErrorReport r = evaluate(est, truth, {0.48});
        worst_mean = std::max(worst_mean, r.shape.mean);
        worst_bre = std::max(worst_bre, r.shape_bre_percent());
        sum_mean += r.shape.mean;
    }
    report(6, "planar swing under 0.5 deg noise", worst_mean < 0.015 * 0.48 && worst_bre < 3.0,
           format("100 runs, mean RMSE %.2f mm (worst %.2f mm = %.2f%% L), worst BRE %.2f%%", 1e3 * sum_mean / 100,
                  1e3 * worst_mean, 100 * worst_mean / 0.48, worst_bre));
}

void order_separation() {
    const double a = 5.0 / 14;
    const double b = 10.0 / 14;
    const RobotModel first = make_robot({SegmentSpec(0.48, 1, SensorPlacement{a, b})});
    const RobotModel second = make_robot({SegmentSpec(0.48, 2, SensorPlacement{a, b, 1.0})});

    auto mean_errors = [&](unsigned seed, const std::vector<GroundTruthFrame>& frames,
                           const std::vector<TraceFrame>& truth) {
        const auto e1 = estimated_trace(estimate_stream(first, {}, synth_sensor_stream(first, frames, 0.5, seed)));
        const auto e2 = estimated_trace(estimate_stream(second, {}, synth_sensor_stream(second, frames, 0.5, seed)));
        return std::pair{evaluate(e1, truth, {0.48}).shape.mean, evaluate(e2, truth, {0.48}).shape.mean};
    };

    TrajectorySpec body;
    body.kind = ScenarioKind::body_interaction;
    const auto body_frames = gen_trajectory(body);
    const auto body_truth = truth_trace(first, body_frames);
    int body_wins = 0;
    double body1 = 0.0;
    double body2 = 0.0;

    TrajectorySpec tip;
    tip.kind = ScenarioKind::tip_interaction;
    const auto tip_frames = gen_trajectory(tip);
    const auto tip_truth = truth_trace(first, tip_frames);
    double worst_gap = 0.0;
    double tip1 = 0.0;
    double tip2 = 0.0;

    for (unsigned seed = 1; seed <= 50; ++seed) {
        const auto [o1, o2] = mean_errors(seed, body_frames, body_truth);
        body_wins += o2 < o1 ? 1 : 0;
        body1 += o1 / 50;
        body2 += o2 / 50;
        const auto [t1, t2] = mean_errors(seed, tip_frames, tip_truth);
        worst_gap = std::max(worst_gap, std::abs(t1 - t2) / std::min(t1, t2));
        tip1 += t1 / 50;
        tip2 += t2 / 50;
    }
    report(7, "order 2 beats order 1 under mid-body load only", body_wins == 50 && worst_gap < 0.25,
           format("body: order 2 lower in %d/50 runs (%.2f vs %.2f mm); tip: %.2f vs %.2f mm, worst gap %.1f%%",
                  body_wins, 1e3 * body2, 1e3 * body1, 1e3 * tip2, 1e3 * tip1, 100 * worst_gap));
}

void attitude_loop() {
    const RobotModel robot = make_robot({SegmentSpec(0.48, 1, SensorPlacement{5.0 / 14, 10.0 / 14})});
    std::string detail;
    bool ok = true;
    for (ScenarioKind kind : {ScenarioKind::swing, ScenarioKind::free_oscillation}) {
        TrajectorySpec spec;
        spec.kind = kind;
        spec.duration = 20.0;
        const auto frames = gen_trajectory(spec);
        const auto truth = truth_trace(robot, frames);

        const AttitudeFilterConfig filter;
        const auto imu = synth_imu_raw(robot, frames, 60.0, {0.5 * deg, 0.05, 0.01}, 11, filter);
        const auto filtered = filter_imu_stream(filter, imu);

        // Filtered attitude against the true sensor orientation at each frame.
        double sq = 0.0;
        std::size_t n = 0;
        std::size_t frame = 0;
        for (const auto& sample : filtered) {
            while (frame + 1 < frames.size() && frames[frame + 1].t <= sample.t + 1e-9) {
                ++frame;
            }
            if (std::abs(frames[frame].t - sample.t) > 1e-9) {
                continue;
            }
            for (std::size_t j = 0; j < robot.sensors[0].size(); ++j) {
                if (robot.sensors[0][j].id != sample.sensor_id) {
                    continue;
                }
                const Quaternion q =
                    truth_pose(robot, frames[frame], 0, ArcCoordinate(robot.segments[0].placement[j])).orientation;
                const double e = angular_distance(sample.q, q);
                sq += e * e;
                ++n;
            }
        }
        const double attitude_rms = std::sqrt(sq / static_cast<double>(n));

        const auto via_imu = estimated_trace(estimate_stream(robot, {}, filtered));
        const auto direct = estimated_trace(estimate_stream(robot, {}, synth_sensor_stream(robot, frames, 0.5, 11)));
        const double imu_error = evaluate(via_imu, truth, {0.48}).shape.mean;
        const double direct_error = evaluate(direct, truth, {0.48}).shape.mean;
        const double ratio = imu_error / direct_error;
        ok = ok && attitude_rms < 1.0 * deg && ratio < 2.0;
        detail += format("%s%s: attitude RMS %.3f deg, shape RMSE %.2f mm vs direct %.2f mm (ratio %.2f)",
                         detail.empty() ? "" : "; ", std::string(scenario_name(kind)).c_str(), attitude_rms / deg,
                         1e3 * imu_error, 1e3 * direct_error, ratio);
    }
    report(8, "raw IMU closed loop", ok, detail);
}

void diagnostics() {
    const RobotModel robot = make_robot({SegmentSpec(0.48, 1, SensorPlacement{5.0 / 14, 10.0 / 14})});
    TrajectorySpec spec;
    spec.duration = 2.0;
    const auto frames = gen_trajectory(spec);

    // 5° about the tangent on the second sensor of frames with a clear bend.
    auto samples = synth_sensor_stream(robot, frames, 0.0, 1);
    const Quaternion twist = Quaternion::from_axis_angle(Eigen::Vector3d::UnitZ(), 5.0 * deg);
    const std::string target = robot.sensors[0][1].id;
    std::set<double> injected;
    for (auto& s : samples) {
        if (s.sensor_id == target && extract_config(s.q).config.alpha > 5.0 * deg) {
            s.q = s.q * twist;
            injected.insert(s.t);
        }
    }
    std::size_t reported = 0;
    std::size_t false_alarms = 0;
    double smallest = 1.0;
    for (const auto& f : estimate_stream(robot, {}, samples)) {
        const auto it = std::find_if(f.warnings.begin(), f.warnings.end(),
                                     [&](const FrameWarning& w) { return w.kind == "twist"; });
        if (it == f.warnings.end()) {
            continue;
        }
        if (injected.contains(f.t) && it->sensor_id == target && it->value > default_twist_tol) {
            ++reported;
            smallest = std::min(smallest, it->value);
        } else {
            ++false_alarms;
        }
    }

    // A straight robot never invents a direction.
    TrajectorySpec still = spec;
    still.amplitude = 0.0;
    const auto straight = estimate_stream(robot, {}, synth_sensor_stream(robot, gen_trajectory(still), 0.0, 1));
    const bool flagged = std::all_of(straight.begin(), straight.end(), [](const EstimatedFrame& f) {
        return !f.segments[0].phi_defined && has_warning(f, "phi_undefined");
    });

    report(9, "twist and undefined direction are reported",
           !injected.empty() && reported == injected.size() && false_alarms == 0 && flagged,
           format("twist reported on %zu/%zu injected frames (smallest residual %.4f > %.2f); %zu straight frames "
                  "flag phi undefined: %s",
                  reported, injected.size(), smallest, default_twist_tol, straight.size(), flagged ? "yes" : "no"));
}

void real_time() {
    const SensorPlacement placement{5.0 / 14, 10.0 / 14, 1.0};
    const RobotModel robot = make_robot({SegmentSpec(0.16, 2, placement), SegmentSpec(0.16, 2, placement),
                                         SegmentSpec(0.16, 2, placement)});
    TrajectorySpec spec;
    spec.kind = ScenarioKind::circular_3d;
    spec.duration = 60.0;
    const auto frames = gen_trajectory(spec, 3);
    const auto samples = synth_sensor_stream(robot, frames, 0.5, 1);
    const auto start = std::chrono::steady_clock::now();
    const auto est = estimate_stream(robot, {}, samples);
    const double elapsed = seconds_since(start);
    report(10, "real-time budget", est.size() == frames.size() && elapsed < 6.0,
           format("%zu frames of 3 order-2 segments in %.3f s, budget 6 s", est.size(), elapsed));
}

}  // namespace

int main() {
    const std::vector<std::function<void()>> checks{round_trip,       closed_forms,     determinant,  extraction,
                                                    linearization,    noise_robustness, order_separation,
                                                    attitude_loop,    diagnostics,      real_time};
    for (const auto& check : checks) {
        try {
            check();
        } catch (const std::exception& e) {
            ++failures;
            std::printf("FAIL criterion: uncaught exception: %s\n", e.what());
        }
    }
    std::printf("%d of %zu criteria failed\n", failures, checks.size());
    return failures == 0 ? 0 : 1;
}
