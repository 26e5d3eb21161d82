#include "ppcshape/evaluate.hpp"

#include "ppcshape/error.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace ppcshape {

namespace {

// Net bend of a segment, from the orientations at its two ends.
std::optional<double> segment_direction(const TraceFrame& f, std::size_t segment, double alpha_min) {
    const ShapeSample* first = nullptr;
    const ShapeSample* last = nullptr;
    for (const ShapeSample& s : f.samples) {
        if (s.segment == segment) {
            if (!first) {
                first = &s;
            }
            last = &s;
        }
    }
    if (!first || first == last) {
        return std::nullopt;
    }
    const Quaternion local = (first->pose.orientation.conjugate() * last->pose.orientation).normalized();
    const ExtractedConfig e = extract_config(local, alpha_min);
    if (!e.config.phi_defined) {
        return std::nullopt;
    }
    return e.config.phi;
}

double polyline_length(const TraceFrame& f) {
    double length = 0.0;
    for (std::size_t k = 1; k < f.samples.size(); ++k) {
        if (f.samples[k].segment != f.samples[k - 1].segment && f.samples[k].s == 0.0) {
            continue;
        }
        length += (f.samples[k].pose.position - f.samples[k - 1].pose.position).norm();
    }
    return length;
}

}  // namespace

ErrorStats summarize(std::span<const double> values) noexcept {
    ErrorStats out;
    out.count = values.size();
    if (values.empty()) {
        return out;
    }
    double sum = 0.0;
    for (double v : values) {
        sum += v;
        out.max = std::max(out.max, v);
    }
    out.mean = sum / static_cast<double>(values.size());
    if (values.size() > 1) {
        double ss = 0.0;
        for (double v : values) {
            ss += (v - out.mean) * (v - out.mean);
        }
        out.sd = std::sqrt(ss / static_cast<double>(values.size() - 1));
    }
    return out;
}

ErrorReport evaluate(std::span<const TraceFrame> estimated, std::span<const TraceFrame> truth,
                     const EvaluateOptions& options) {
    if (estimated.empty() || truth.empty()) {
        throw Error(ErrorCode::misaligned_traces, "cannot evaluate an empty trace");
    }
    std::vector<double> truth_times;
    truth_times.reserve(truth.size());
    for (const TraceFrame& f : truth) {
        truth_times.push_back(f.t);
    }
    if (!std::is_sorted(truth_times.begin(), truth_times.end())) {
        throw Error(ErrorCode::misaligned_traces, "truth trace is not ordered in time");
    }
    double half_period = 0.0;
    if (truth.size() > 1) {
        std::vector<double> steps;
        for (std::size_t i = 1; i < truth_times.size(); ++i) {
            steps.push_back(truth_times[i] - truth_times[i - 1]);
        }
        std::nth_element(steps.begin(), steps.begin() + static_cast<std::ptrdiff_t>(steps.size() / 2), steps.end());
        half_period = 0.5 * steps[steps.size() / 2];
    }
    const double eps = 1e-9;

    ErrorReport report;
    if (options.total_length) {
        report.total_length = *options.total_length;
    } else {
        report.total_length = polyline_length(truth.front());
    }
    if (!(report.total_length > 0.0)) {
        throw Error(ErrorCode::invalid_argument, "total robot length must be positive");
    }

    std::vector<double> shape_errors;
    std::vector<double> tip_errors;
    std::vector<double> direction_errors;
    for (const TraceFrame& est : estimated) {
        if (est.samples.empty()) {
            continue;
        }
        auto it = std::lower_bound(truth_times.begin(), truth_times.end(), est.t);
        std::size_t idx = static_cast<std::size_t>(it - truth_times.begin());
        if (idx == truth.size() || (idx > 0 && est.t - truth_times[idx - 1] <= truth_times[idx] - est.t)) {
            idx = idx == 0 ? 0 : idx - 1;
        }
        if (std::abs(truth_times[idx] - est.t) > half_period + eps) {
            continue;
        }
        const TraceFrame& ref = truth[idx];
        if (ref.samples.size() != est.samples.size()) {
            throw Error(ErrorCode::misaligned_traces, "traces sample different numbers of points");
        }
        double sum = 0.0;
        std::size_t n = 0;
        std::size_t segments = 0;
        for (std::size_t k = 0; k < est.samples.size(); ++k) {
            const ShapeSample& a = est.samples[k];
            const ShapeSample& b = ref.samples[k];
            if (a.segment != b.segment || std::abs(a.s - b.s) > 1e-12) {
                throw Error(ErrorCode::misaligned_traces, "traces sample different arc locations");
            }
            segments = std::max(segments, a.segment + 1);
            // Junction points are shared by two segments; count them once.
            if (a.segment > 0 && a.s == 0.0) {
                continue;
            }
            sum += (a.pose.position - b.pose.position).squaredNorm();
            ++n;
        }
        FrameError fe;
        fe.t = est.t;
        fe.shape_rmse = std::sqrt(sum / static_cast<double>(n));
        fe.tip_error = (est.samples.back().pose.position - ref.samples.back().pose.position).norm();

        double worst = 0.0;
        bool defined = true;
        for (std::size_t seg = 0; seg < segments && defined; ++seg) {
            const auto pe = segment_direction(est, seg, options.alpha_min);
            const auto pt = segment_direction(ref, seg, options.alpha_min);
            if (!pe || !pt) {
                defined = false;
            } else {
                worst = std::max(worst, circular_distance(*pe, *pt));
            }
        }
        if (defined) {
            fe.bending_direction_error = worst;
            direction_errors.push_back(worst);
        }
        shape_errors.push_back(fe.shape_rmse);
        tip_errors.push_back(fe.tip_error);
        report.frames.push_back(fe);
    }
    if (report.frames.empty()) {
        throw Error(ErrorCode::misaligned_traces, "no estimated frame lies within half a period of a truth frame");
    }
    report.shape = summarize(shape_errors);
    report.tip = summarize(tip_errors);
    report.bending_direction = summarize(direction_errors);
    return report;
}

}  // namespace ppcshape
