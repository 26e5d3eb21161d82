#include "ppcshape/chain.hpp"

#include "ppcshape/error.hpp"
#include "ppcshape/orientation.hpp"

#include <cmath>
#include <string>

namespace ppcshape {

namespace {

Pose embed(const PlanarPoint& p, double alpha, double phi) {
    Pose pose;
    pose.position = Eigen::Vector3d(p.y * std::cos(phi), p.y * std::sin(phi), p.x);
    pose.orientation = config_to_quaternion(alpha, phi);
    return pose;
}

void check_lists(std::span<const SegmentSpec> specs, std::span<const SegmentState> states) {
    if (specs.size() != states.size()) {
        throw Error(ErrorCode::invalid_argument, "segment specs and states differ in count");
    }
    for (std::size_t i = 0; i < specs.size(); ++i) {
        if (states[i].theta.order() != specs[i].order) {
            throw Error(ErrorCode::invalid_argument,
                        "segment " + std::to_string(i) + ": state order does not match the segment order");
        }
    }
}

}  // namespace

SegmentSpec::SegmentSpec(double length_, int order_, SensorPlacement placement_, bool least_squares)
    : length(length_), order(order_), placement(std::move(placement_)) {
    if (!(length > 0.0) || !std::isfinite(length)) {
        throw Error(ErrorCode::configuration, "segment length must be positive");
    }
    if (order < 0) {
        throw Error(ErrorCode::configuration, "segment order must be non-negative");
    }
    const auto needed = static_cast<std::size_t>(order) + 1;
    if (placement.size() < needed || (!least_squares && placement.size() != needed)) {
        throw Error(ErrorCode::configuration,
                    "order " + std::to_string(order) + " needs " + (least_squares ? "at least " : "exactly ") +
                        std::to_string(needed) + " sensors, got " + std::to_string(placement.size()));
    }
}

Pose Pose::operator*(const Pose& local) const {
    return Pose{position + orientation.rotate(local.position), (orientation * local.orientation).canonical()};
}

Pose segment_pose(const SegmentSpec& spec, const SegmentState& state, ArcCoordinate s) {
    if (state.theta.order() != spec.order) {
        throw Error(ErrorCode::invalid_argument, "state order does not match the segment order");
    }
    return embed(position(state.theta, s, spec.length), eval_orientation(state.theta, s), state.phi);
}

Pose chain_pose(std::span<const SegmentSpec> specs, std::span<const SegmentState> states, std::size_t segment,
                ArcCoordinate s, const Pose& base) {
    check_lists(specs, states);
    if (segment >= specs.size()) {
        throw Error(ErrorCode::invalid_argument, "segment index out of range");
    }
    Pose pose = base;
    for (std::size_t i = 0; i < segment; ++i) {
        pose = pose * segment_pose(specs[i], states[i], ArcCoordinate(1.0));
    }
    return pose * segment_pose(specs[segment], states[segment], s);
}

std::vector<ShapeSample> sample_shape(std::span<const SegmentSpec> specs, std::span<const SegmentState> states,
                                      int points_per_segment, const Pose& base) {
    check_lists(specs, states);
    if (points_per_segment < 2) {
        throw Error(ErrorCode::invalid_argument, "points_per_segment must be at least 2");
    }
    std::vector<ShapeSample> out;
    out.reserve(specs.size() * static_cast<std::size_t>(points_per_segment));
    const double step = 1.0 / (points_per_segment - 1);

    Pose segment_base = base;
    for (std::size_t i = 0; i < specs.size(); ++i) {
        const SegmentSpec& spec = specs[i];
        const SegmentState& state = states[i];
        PlanarPoint planar;
        double previous = 0.0;
        for (int k = 0; k < points_per_segment; ++k) {
            const double s = k == points_per_segment - 1 ? 1.0 : k * step;
            if (state.theta.order() <= 1) {
                planar = position(state.theta, ArcCoordinate(s), spec.length);
            } else if (s > previous) {
                // Accumulate panel by panel instead of integrating from the base each time.
                const PlanarPoint d = position_increment(state.theta, previous, s, spec.length);
                planar.x += d.x;
                planar.y += d.y;
            }
            previous = s;
            out.push_back({i, s, segment_base * embed(planar, eval_orientation(state.theta, s), state.phi)});
        }
        segment_base = out.back().pose;
    }
    return out;
}

}  // namespace ppcshape
