#pragma once

#include "ppcshape/modal_solver.hpp"
#include "ppcshape/ppc_core.hpp"
#include "ppcshape/quaternion.hpp"

#include <Eigen/Core>

#include <span>
#include <vector>

/// Embedding of planar segments into 3D and composition along the chain.
///
/// Each segment frame has its base tangent along +z. A segment bent in
/// direction φ lies in the plane spanned by z and u(φ) = [cos φ, sin φ, 0],
/// so the planar point (x, y) maps to [y cos φ, y sin φ, x].
namespace ppcshape {

struct SegmentSpec {
    /// Validates L > 0, order ≥ 0 and the sensor count (exactly order + 1,
    /// or more when `least_squares` is set). Throws configuration.
    SegmentSpec(double length, int order, SensorPlacement placement, bool least_squares = false);

    double length;
    int order;
    SensorPlacement placement;
};

struct SegmentState {
    ModalConfig theta{0.0};
    double phi = 0.0;
    double t = 0.0;
};

struct Pose {
    Eigen::Vector3d position = Eigen::Vector3d::Zero();
    Quaternion orientation = Quaternion::identity();

    /// This pose followed by `local`, expressed in this pose's parent frame.
    [[nodiscard]] Pose operator*(const Pose& local) const;
};

/// Pose at arc coordinate s in the segment's own base frame.
[[nodiscard]] Pose segment_pose(const SegmentSpec& spec, const SegmentState& state, ArcCoordinate s);

/// Pose at (segment i, s) in the robot base frame, with `base` mapping the
/// robot base frame into the world.
[[nodiscard]] Pose chain_pose(std::span<const SegmentSpec> specs, std::span<const SegmentState> states,
                              std::size_t segment, ArcCoordinate s, const Pose& base = {});

struct ShapeSample {
    std::size_t segment = 0;
    double s = 0.0;
    Pose pose;
};

/// Poses at s_k = k/(n−1), k = 0…n−1, on every segment, ordered base to tip.
/// Junction points appear twice (s = 1 of one segment, s = 0 of the next).
[[nodiscard]] std::vector<ShapeSample> sample_shape(std::span<const SegmentSpec> specs,
                                                    std::span<const SegmentState> states,
                                                    int points_per_segment = 50, const Pose& base = {});

}  // namespace ppcshape
