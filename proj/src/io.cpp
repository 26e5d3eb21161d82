#include "ppcshape/io.hpp"

#include "ppcshape/error.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <numbers>
#include <ostream>
#include <sstream>

namespace ppcshape {

namespace {

using nlohmann::json;

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

double parse_double(const std::string& field, std::size_t line) {
    char* end = nullptr;
    const double v = std::strtod(field.c_str(), &end);
    if (field.empty() || end != field.c_str() + field.size()) {
        throw Error(ErrorCode::io, "line " + std::to_string(line) + ": bad number '" + field + "'");
    }
    return v;
}

json vec3(const Eigen::Vector3d& v) { return json::array({v.x(), v.y(), v.z()}); }

Eigen::Vector3d read_vec3(const json& j, const char* key, std::size_t line) {
    const json& a = j.at(key);
    if (!a.is_array() || a.size() != 3) {
        throw Error(ErrorCode::io, "line " + std::to_string(line) + ": '" + key + "' must have 3 entries");
    }
    return {a[0].get<double>(), a[1].get<double>(), a[2].get<double>()};
}

json stats_json(const ErrorStats& s, const char* unit, double scale) {
    return json{{std::string("mean_") + unit, s.mean * scale},
                {std::string("sd_") + unit, s.sd * scale},
                {std::string("max_") + unit, s.max * scale},
                {"frames", s.count}};
}

}  // namespace

TraceFrame to_trace_frame(const EstimatedFrame& frame) { return {frame.t, frame.shape}; }

void write_trace(std::ostream& out, std::span<const TraceFrame> frames) {
    out << trace_header << '\n';
    for (const TraceFrame& f : frames) {
        const std::string t = fmt(f.t);
        for (const ShapeSample& s : f.samples) {
            const auto& p = s.pose.position;
            const auto& q = s.pose.orientation;
            out << t << ',' << s.segment << ',' << fmt(s.s) << ',' << fmt(p.x()) << ',' << fmt(p.y()) << ','
                << fmt(p.z()) << ',' << fmt(q.w) << ',' << fmt(q.x) << ',' << fmt(q.y) << ',' << fmt(q.z) << '\n';
        }
    }
    if (!out) {
        throw Error(ErrorCode::io, "failed to write trace");
    }
}

std::vector<TraceFrame> read_trace(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) {
        throw Error(ErrorCode::io, "trace is empty");
    }
    if (!line.empty() && line.back() == '\r') {
        line.pop_back();
    }
    if (line != trace_header) {
        throw Error(ErrorCode::io, "unexpected trace header '" + line + "'");
    }
    std::vector<TraceFrame> frames;
    std::size_t number = 1;
    std::vector<std::string> fields;
    while (std::getline(in, line)) {
        ++number;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.empty()) {
            continue;
        }
        fields.clear();
        std::stringstream ss(line);
        std::string field;
        while (std::getline(ss, field, ',')) {
            fields.push_back(field);
        }
        if (fields.size() != 10) {
            throw Error(ErrorCode::io, "line " + std::to_string(number) + ": expected 10 fields");
        }
        double v[10];
        for (int i = 0; i < 10; ++i) {
            v[i] = parse_double(fields[static_cast<std::size_t>(i)], number);
        }
        if (v[1] < 0.0 || v[1] != std::floor(v[1])) {
            throw Error(ErrorCode::io, "line " + std::to_string(number) + ": bad segment index");
        }
        ShapeSample s;
        s.segment = static_cast<std::size_t>(v[1]);
        s.s = v[2];
        s.pose.position = Eigen::Vector3d(v[3], v[4], v[5]);
        s.pose.orientation = Quaternion{v[6], v[7], v[8], v[9]};
        if (frames.empty() || frames.back().t != v[0]) {
            frames.push_back({v[0], {}});
        }
        frames.back().samples.push_back(s);
    }
    return frames;
}

void write_orientation_samples(std::ostream& out, std::span<const OrientationSample> samples) {
    for (const OrientationSample& s : samples) {
        out << json{{"t", s.t}, {"sensor_id", s.sensor_id}, {"q", {s.q.w, s.q.x, s.q.y, s.q.z}}}.dump() << '\n';
    }
    if (!out) {
        throw Error(ErrorCode::io, "failed to write sensor stream");
    }
}

void write_imu_records(std::ostream& out, std::span<const ImuRecord> records) {
    for (const ImuRecord& r : records) {
        json j{{"t", r.sample.t},
               {"sensor_id", r.sensor_id},
               {"gyro", vec3(r.sample.gyro)},
               {"accel", vec3(r.sample.accel)}};
        if (r.sample.mag) {
            j["mag"] = vec3(*r.sample.mag);
        }
        out << j.dump() << '\n';
    }
    if (!out) {
        throw Error(ErrorCode::io, "failed to write sensor stream");
    }
}

SensorStreams read_sensor_streams(std::istream& in) {
    SensorStreams out;
    std::string line;
    std::size_t number = 0;
    while (std::getline(in, line)) {
        ++number;
        if (line.find_first_not_of(" \t\r") == std::string::npos) {
            continue;
        }
        try {
            const json j = json::parse(line);
            const double t = j.at("t").get<double>();
            const std::string id = j.at("sensor_id").get<std::string>();
            if (j.contains("q")) {
                const json& q = j.at("q");
                if (!q.is_array() || q.size() != 4) {
                    throw Error(ErrorCode::io, "line " + std::to_string(number) + ": 'q' must have 4 entries");
                }
                out.orientation.push_back(
                    {t, id, Quaternion{q[0].get<double>(), q[1].get<double>(), q[2].get<double>(), q[3].get<double>()}});
            } else {
                ImuRecord r;
                r.sensor_id = id;
                r.sample.t = t;
                r.sample.gyro = read_vec3(j, "gyro", number);
                r.sample.accel = read_vec3(j, "accel", number);
                if (j.contains("mag")) {
                    r.sample.mag = read_vec3(j, "mag", number);
                }
                out.imu.push_back(std::move(r));
            }
        } catch (const json::exception& e) {
            throw Error(ErrorCode::io, "line " + std::to_string(number) + ": " + e.what());
        }
    }
    return out;
}

void write_diagnostics(std::ostream& out, std::span<const EstimatedFrame> frames) {
    for (const EstimatedFrame& f : frames) {
        json segments = json::array();
        for (const SegmentEstimate& s : f.segments) {
            segments.push_back({{"theta", std::vector<double>(s.theta.coeffs().begin(), s.theta.coeffs().end())},
                                {"phi", s.phi},
                                {"phi_defined", s.phi_defined},
                                {"phi_spread", s.phi_spread},
                                {"max_twist", s.max_twist}});
        }
        json warnings = json::array();
        for (const FrameWarning& w : f.warnings) {
            json item{{"kind", w.kind}, {"segment", w.segment}, {"value", w.value}};
            if (!w.sensor_id.empty()) {
                item["sensor_id"] = w.sensor_id;
            }
            warnings.push_back(std::move(item));
        }
        out << json{{"t", f.t}, {"segments", segments}, {"warnings", warnings}}.dump() << '\n';
    }
    if (!out) {
        throw Error(ErrorCode::io, "failed to write diagnostics");
    }
}

std::string report_json(const ErrorReport& report, const std::string& label) {
    const double deg = 180.0 / std::numbers::pi;
    json shape = stats_json(report.shape, "m", 1.0);
    shape["bre_percent"] = report.shape_bre_percent();
    json tip = stats_json(report.tip, "m", 1.0);
    tip["bre_percent"] = report.tip_bre_percent();
    json row{{"shape", shape}, {"tip", tip}, {"bending_direction", stats_json(report.bending_direction, "deg", deg)}};
    if (!label.empty()) {
        row["scenario"] = label;
    }
    json j{{"total_length_m", report.total_length}, {"frames", report.frames.size()}, {"rows", json::array({row})}};
    return j.dump(2);
}

void write_frame_errors(std::ostream& out, const ErrorReport& report) {
    const double deg = 180.0 / std::numbers::pi;
    out << "t,shape_rmse_m,tip_error_m,bending_direction_error_deg\n";
    for (const FrameError& f : report.frames) {
        out << fmt(f.t) << ',' << fmt(f.shape_rmse) << ',' << fmt(f.tip_error) << ',';
        if (f.bending_direction_error) {
            out << fmt(*f.bending_direction_error * deg);
        }
        out << '\n';
    }
    if (!out) {
        throw Error(ErrorCode::io, "failed to write frame errors");
    }
}

std::ifstream open_input(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw Error(ErrorCode::io, "cannot open '" + path.string() + "' for reading");
    }
    return in;
}

std::ofstream open_output(const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) {
        throw Error(ErrorCode::io, "cannot open '" + path.string() + "' for writing");
    }
    return out;
}

}  // namespace ppcshape
