#pragma once

#include "ppcshape/chain.hpp"
#include "ppcshape/orientation.hpp"

#include <optional>
#include <span>
#include <vector>

namespace ppcshape {

/// Sampled robot shape at one timestamp, as stored in trace files.
struct TraceFrame {
    double t = 0.0;
    std::vector<ShapeSample> samples;
};

struct ErrorStats {
    double mean = 0.0;
    /// Sample standard deviation (n − 1); zero for fewer than two values.
    double sd = 0.0;
    double max = 0.0;
    std::size_t count = 0;
};

[[nodiscard]] ErrorStats summarize(std::span<const double> values) noexcept;

struct FrameError {
    double t = 0.0;
    /// RMS of the point-wise position error, meters.
    double shape_rmse = 0.0;
    double tip_error = 0.0;
    /// Worst segment bending-direction error in radians, when every segment
    /// has a defined direction in both traces.
    std::optional<double> bending_direction_error;
};

struct ErrorReport {
    double total_length = 0.0;
    ErrorStats shape;
    ErrorStats tip;
    /// Radians; count is the number of frames with a defined direction.
    ErrorStats bending_direction;
    std::vector<FrameError> frames;

    /// 100 · max / total length.
    [[nodiscard]] double shape_bre_percent() const noexcept { return 100.0 * shape.max / total_length; }
    [[nodiscard]] double tip_bre_percent() const noexcept { return 100.0 * tip.max / total_length; }
};

struct EvaluateOptions {
    /// Robot length for the relative error; the truth polyline length when unset.
    std::optional<double> total_length;
    double alpha_min = default_alpha_min;
};

/// Pairs each estimated frame with the nearest truth frame within half the
/// truth sampling period and compares the shapes point by point. Both traces
/// must sample the same (segment, s) grid. Throws misaligned_traces when no
/// frame pairs up or the grids differ.
[[nodiscard]] ErrorReport evaluate(std::span<const TraceFrame> estimated, std::span<const TraceFrame> truth,
                                   const EvaluateOptions& options = {});

}  // namespace ppcshape
