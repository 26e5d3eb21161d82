#include "ppcshape/pipeline.hpp"

#include "ppcshape/error.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>

namespace ppcshape {

namespace {

struct Stamped {
    double t;
    Quaternion q;
};

double median_step(const std::vector<Stamped>& s) {
    if (s.size() < 2) {
        return 0.0;
    }
    std::vector<double> d;
    d.reserve(s.size() - 1);
    for (std::size_t i = 1; i < s.size(); ++i) {
        d.push_back(s[i].t - s[i - 1].t);
    }
    std::nth_element(d.begin(), d.begin() + static_cast<std::ptrdiff_t>(d.size() / 2), d.end());
    return d[d.size() / 2];
}

double axial_distance(double a, double b) noexcept {
    const double d = circular_distance(a, b);
    return std::min(d, std::numbers::pi - d);
}

}  // namespace

ShapeEstimator::ShapeEstimator(RobotModel robot, EstimatorConfig config)
    : robot_(std::move(robot)), config_(config), held_phi_(robot_.segments.size(), 0.0) {
    validate_robot(robot_);
    if (config_.points_per_segment < 2) {
        throw Error(ErrorCode::configuration, "points_per_segment must be at least 2");
    }
    const SolveOptions options{config_.conditioning_threshold, true, config_.least_squares};
    for (const SegmentSpec& spec : robot_.segments) {
        solvers_.emplace_back(spec.placement, spec.order, options);
    }
}

EstimatedFrame ShapeEstimator::estimate(double t, std::span<const Quaternion> measured) {
    if (measured.size() != robot_.sensor_count()) {
        throw Error(ErrorCode::invalid_argument, "one quaternion is needed per sensor");
    }
    EstimatedFrame out;
    out.t = t;
    std::vector<SegmentState> states;
    states.reserve(robot_.segments.size());
    Quaternion base = robot_.base.orientation;
    std::size_t offset = 0;

    for (std::size_t i = 0; i < robot_.segments.size(); ++i) {
        const SegmentSpec& spec = robot_.segments[i];
        const auto& sensors = robot_.sensors[i];
        const std::size_t n = spec.placement.size();
        std::vector<Eigen::Vector2d> r(n);
        std::vector<double> phis;
        Eigen::Matrix2d scatter = Eigen::Matrix2d::Zero();
        SegmentEstimate seg;

        for (std::size_t k = 0; k < n; ++k) {
            const Quaternion& q = measured[offset + k];
            if (!q.is_unit()) {
                throw Error(ErrorCode::not_normalized, "quaternion of sensor '" + sensors[k].id + "' is not unit-norm");
            }
            const Quaternion local = (base.conjugate() * q * sensors[k].extrinsic).normalized();
            const ExtractedConfig e = extract_config(local, config_.alpha_min);
            if (e.twist_residual > config_.twist_tol) {
                out.warnings.push_back({"twist", i, sensors[k].id, e.twist_residual});
            }
            seg.max_twist = std::max(seg.max_twist, e.twist_residual);
            r[k] = e.config.alpha * Eigen::Vector2d(std::cos(e.config.phi), std::sin(e.config.phi));
            scatter += r[k] * r[k].transpose();
            if (e.config.phi_defined) {
                phis.push_back(e.config.phi);
            }
        }
        offset += n;

        Eigen::Vector2d axis(std::cos(held_phi_[i]), std::sin(held_phi_[i]));
        if (scatter.trace() > 0.0) {
            // Principal direction of the rotation vectors; sensors bent further weigh more.
            // Bends below alpha_min still carry their own direction into the shape.
            const Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> eig(scatter);
            axis = eig.eigenvectors().col(1);
            double projected = 0.0;
            for (const auto& v : r) {
                projected += v.dot(axis);
            }
            if (projected < 0.0) {
                axis = -axis;
            }
        }
        if (!phis.empty()) {
            seg.phi = wrap_two_pi(std::atan2(axis.y(), axis.x()));
            seg.phi_defined = true;
            held_phi_[i] = seg.phi;
        } else {
            seg.phi = held_phi_[i];
            out.warnings.push_back({"phi_undefined", i, {}, seg.phi});
        }
        for (std::size_t a = 0; a < phis.size(); ++a) {
            for (std::size_t b = a + 1; b < phis.size(); ++b) {
                seg.phi_spread = std::max(seg.phi_spread, axial_distance(phis[a], phis[b]));
            }
        }
        if (seg.phi_spread > config_.phi_spread_tol) {
            out.warnings.push_back({"phi_spread", i, {}, seg.phi_spread});
        }

        std::vector<double> alphas(n);
        for (std::size_t k = 0; k < n; ++k) {
            alphas[k] = r[k].dot(axis);
        }
        if (solvers_[i].ill_conditioned()) {
            out.warnings.push_back({"ill_conditioned", i, {}, solvers_[i].condition_number()});
        }
        seg.theta = solvers_[i].solve(alphas);
        states.push_back({seg.theta, wrap_two_pi(std::atan2(axis.y(), axis.x())), t});
        base = (base * segment_pose(spec, states.back(), ArcCoordinate(1.0)).orientation).normalized();
        out.segments.push_back(std::move(seg));
    }
    out.shape = sample_shape(robot_.segments, states, config_.points_per_segment, robot_.base);
    return out;
}

std::vector<EstimatedFrame> estimate_stream(const RobotModel& robot, const EstimatorConfig& config,
                                            std::span<const OrientationSample> samples) {
    ShapeEstimator estimator(robot, config);
    std::map<std::string, std::vector<Stamped>> by_id;
    for (const OrientationSample& s : samples) {
        by_id[s.sensor_id].push_back({s.t, s.q});
    }
    std::vector<const std::vector<Stamped>*> streams;
    std::vector<std::string> ids;
    for (const auto& segment : robot.sensors) {
        for (const SensorInfo& info : segment) {
            auto it = by_id.find(info.id);
            if (it == by_id.end() || it->second.empty()) {
                throw Error(ErrorCode::configuration, "no samples for sensor '" + info.id + "'");
            }
            std::stable_sort(it->second.begin(), it->second.end(),
                             [](const Stamped& a, const Stamped& b) { return a.t < b.t; });
            streams.push_back(&it->second);
            ids.push_back(info.id);
        }
    }

    double start = -std::numeric_limits<double>::infinity();
    double end = std::numeric_limits<double>::infinity();
    std::vector<double> half_period(streams.size());
    for (std::size_t j = 0; j < streams.size(); ++j) {
        start = std::max(start, streams[j]->front().t);
        end = std::min(end, streams[j]->back().t);
        half_period[j] = 0.5 * median_step(*streams[j]);
    }
    const double reference_half = half_period.front();
    for (double& h : half_period) {
        if (h == 0.0) {
            h = reference_half;
        }
    }
    const double eps = 1e-9;
    if (start > end + eps) {
        throw Error(ErrorCode::no_overlap, "sensor streams share no common time window");
    }

    std::vector<EstimatedFrame> frames;
    std::vector<Quaternion> measured(streams.size());
    for (const Stamped& ref : *streams.front()) {
        if (ref.t < start - eps || ref.t > end + eps) {
            continue;
        }
        measured[0] = ref.q;
        std::vector<FrameWarning> missing;
        for (std::size_t j = 1; j < streams.size(); ++j) {
            const auto& s = *streams[j];
            auto hi = std::lower_bound(s.begin(), s.end(), ref.t, [](const Stamped& a, double t) { return a.t < t; });
            const Stamped* before = hi == s.begin() ? nullptr : &*(hi - 1);
            const Stamped* after = hi == s.end() ? nullptr : &*hi;
            if (config.slerp && before && after && after->t > before->t) {
                measured[j] = slerp(before->q, after->q, (ref.t - before->t) / (after->t - before->t));
                continue;
            }
            const Stamped* nearest = before;
            if (after && (!before || after->t - ref.t <= ref.t - before->t)) {
                nearest = after;
            }
            if (!nearest || std::abs(nearest->t - ref.t) > half_period[j] + eps) {
                missing.push_back({"missing_sample", 0, ids[j], ref.t});
                continue;
            }
            measured[j] = nearest->q;
        }
        if (!missing.empty()) {
            EstimatedFrame skipped;
            skipped.t = ref.t;
            skipped.warnings = std::move(missing);
            frames.push_back(std::move(skipped));
            continue;
        }
        frames.push_back(estimator.estimate(ref.t, measured));
    }
    return frames;
}

std::vector<OrientationSample> filter_imu_stream(const AttitudeFilterConfig& filter,
                                                 std::span<const ImuRecord> records) {
    std::map<std::string, std::vector<const ImuRecord*>> by_id;
    for (const ImuRecord& r : records) {
        by_id[r.sensor_id].push_back(&r);
    }
    std::vector<OrientationSample> out;
    out.reserve(records.size());
    for (auto& [id, list] : by_id) {
        std::stable_sort(list.begin(), list.end(),
                         [](const ImuRecord* a, const ImuRecord* b) { return a->sample.t < b->sample.t; });
        AttitudeState state = attitude_initialize(list.front()->sample, filter);
        out.push_back({list.front()->sample.t, id, state.q});
        for (std::size_t k = 1; k < list.size(); ++k) {
            const double dt = list[k]->sample.t - list[k - 1]->sample.t;
            if (!(dt > 0.0)) {
                throw Error(ErrorCode::invalid_argument, "duplicate or unordered timestamps for sensor '" + id + "'");
            }
            state = attitude_update(state, list[k]->sample, dt, filter);
            out.push_back({list[k]->sample.t, id, state.q});
        }
    }
    return out;
}

std::vector<EstimatedFrame> estimate_imu_stream(const RobotModel& robot, const EstimatorConfig& config,
                                                const AttitudeFilterConfig& filter,
                                                std::span<const ImuRecord> records) {
    const auto samples = filter_imu_stream(filter, records);
    return estimate_stream(robot, config, samples);
}

}  // namespace ppcshape
