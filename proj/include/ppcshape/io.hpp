#pragma once

#include "ppcshape/evaluate.hpp"
#include "ppcshape/pipeline.hpp"
#include "ppcshape/sim.hpp"

#include <filesystem>
#include <fstream>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

/// Text formats: shape traces as CSV, sensor streams and diagnostics as JSON
/// Lines, error reports as JSON. Numbers are written with 17 significant
/// digits so that a write-read cycle is lossless.
namespace ppcshape {

inline constexpr const char* trace_header = "t,segment,s,px,py,pz,qw,qx,qy,qz";

[[nodiscard]] TraceFrame to_trace_frame(const EstimatedFrame& frame);

void write_trace(std::ostream& out, std::span<const TraceFrame> frames);
/// Consecutive rows with the same t form one frame. Throws io on bad input.
[[nodiscard]] std::vector<TraceFrame> read_trace(std::istream& in);

/// One record per line: {"t", "sensor_id", "q": [w, x, y, z]}.
void write_orientation_samples(std::ostream& out, std::span<const OrientationSample> samples);
/// One record per line: {"t", "sensor_id", "gyro", "accel", "mag"}.
void write_imu_records(std::ostream& out, std::span<const ImuRecord> records);

struct SensorStreams {
    std::vector<OrientationSample> orientation;
    std::vector<ImuRecord> imu;
};

/// Reads either record kind (a file may mix them). Blank lines are skipped.
[[nodiscard]] SensorStreams read_sensor_streams(std::istream& in);

/// One line per estimated frame with its per-segment results and warnings.
void write_diagnostics(std::ostream& out, std::span<const EstimatedFrame> frames);

/// Summary in SI units; angular fields are in degrees and say so.
[[nodiscard]] std::string report_json(const ErrorReport& report, const std::string& label = {});
/// Columns t,shape_rmse_m,tip_error_m,bending_direction_error_deg.
void write_frame_errors(std::ostream& out, const ErrorReport& report);

/// Open a file or throw io.
[[nodiscard]] std::ifstream open_input(const std::filesystem::path& path);
[[nodiscard]] std::ofstream open_output(const std::filesystem::path& path);

}  // namespace ppcshape
