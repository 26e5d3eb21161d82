// Command-line front end: simulate, estimate, evaluate, ellipse, conditioning.

#include "ppcshape/config.hpp"
#include "ppcshape/error.hpp"
#include "ppcshape/evaluate.hpp"
#include "ppcshape/io.hpp"
#include "ppcshape/pipeline.hpp"
#include "ppcshape/sim.hpp"
#include "ppcshape/uncertainty.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>

namespace fs = std::filesystem;
using namespace ppcshape;
using nlohmann::json;

namespace {

// PPCSHAPE_LOG: quiet, info (default) or debug.
int log_level() {
    static const int level = [] {
        const char* v = std::getenv("PPCSHAPE_LOG");
        if (!v) {
            return 1;
        }
        const std::string s(v);
        return s == "quiet" ? 0 : s == "debug" ? 2 : 1;
    }();
    return level;
}

void log_info(const std::string& msg) {
    if (log_level() >= 1) {
        std::cerr << "ppcshape: " << msg << '\n';
    }
}

void log_debug(const std::string& msg) {
    if (log_level() >= 2) {
        std::cerr << "ppcshape: " << msg << '\n';
    }
}

int fail(std::string_view code, const std::string& message) {
    std::cerr << json{{"error", code}, {"message", message}}.dump() << '\n';
    return 2;
}

std::vector<TraceFrame> read_trace_file(const fs::path& path) {
    auto in = open_input(path);
    return read_trace(in);
}

struct SimulateArgs {
    std::string config;
    std::string scenario;
    std::uint64_t seed = 1;
    std::string out;
    double duration = 0.0;
};

void run_simulate(const SimulateArgs& a) {
    AppConfig cfg = load_config(a.config);
    if (!a.scenario.empty()) {
        cfg.scenario.kind = parse_scenario(a.scenario);
    }
    if (a.duration > 0.0) {
        cfg.scenario.duration = a.duration;
    }
    const auto frames = gen_trajectory(cfg.scenario, cfg.robot.segments.size());
    fs::create_directories(a.out);

    std::vector<TraceFrame> truth;
    truth.reserve(frames.size());
    for (const auto& f : frames) {
        truth.push_back({f.t, sample_truth(cfg.robot, f, cfg.estimator.points_per_segment)});
    }
    auto trace_out = open_output(fs::path(a.out) / "truth.csv");
    write_trace(trace_out, truth);

    const auto samples = synth_sensor_stream(cfg.robot, frames, cfg.noise.orientation_deg, a.seed);
    auto sensors_out = open_output(fs::path(a.out) / "sensors.jsonl");
    write_orientation_samples(sensors_out, samples);

    const ImuNoise noise{cfg.noise.gyro_dps * std::numbers::pi / 180.0, cfg.noise.accel, cfg.noise.mag};
    const auto imu = synth_imu_raw(cfg.robot, frames, cfg.scenario.rate, noise, a.seed + 1, cfg.filter);
    auto imu_out = open_output(fs::path(a.out) / "imu.jsonl");
    write_imu_records(imu_out, imu);

    log_info("simulated " + std::string(scenario_name(cfg.scenario.kind)) + ": " + std::to_string(frames.size()) +
             " frames into " + a.out);
}

struct EstimateArgs {
    std::string config;
    std::string sensors;
    std::string out;
    bool raw_imu = false;
};

void run_estimate(const EstimateArgs& a) {
    const AppConfig cfg = load_config(a.config);
    fs::path source = a.sensors;
    if (fs::is_directory(source)) {
        source /= a.raw_imu ? "imu.jsonl" : "sensors.jsonl";
    }
    auto in = open_input(source);
    const SensorStreams streams = read_sensor_streams(in);
    std::vector<EstimatedFrame> frames;
    if (a.raw_imu) {
        if (streams.imu.empty()) {
            throw Error(ErrorCode::io, "no inertial records in '" + source.string() + "'");
        }
        frames = estimate_imu_stream(cfg.robot, cfg.estimator, cfg.filter, streams.imu);
    } else {
        if (streams.orientation.empty()) {
            throw Error(ErrorCode::io, "no orientation records in '" + source.string() + "'");
        }
        frames = estimate_stream(cfg.robot, cfg.estimator, streams.orientation);
    }

    std::vector<TraceFrame> trace;
    std::size_t warnings = 0;
    for (const auto& f : frames) {
        warnings += f.warnings.size();
        if (!f.shape.empty()) {
            trace.push_back(to_trace_frame(f));
        }
    }
    auto out = open_output(a.out);
    write_trace(out, trace);
    auto diag = open_output(a.out + ".diag.jsonl");
    write_diagnostics(diag, frames);
    log_info("estimated " + std::to_string(trace.size()) + " frames, " + std::to_string(warnings) + " warnings");
}

struct EvaluateArgs {
    std::string estimated;
    std::string truth;
    std::string out;
    std::string frames_csv;
    std::string config;
    double length = 0.0;
    std::string label;
};

void run_evaluate(const EvaluateArgs& a) {
    const auto estimated = read_trace_file(a.estimated);
    const auto truth = read_trace_file(a.truth);
    EvaluateOptions options;
    if (a.length > 0.0) {
        options.total_length = a.length;
    } else if (!a.config.empty()) {
        const AppConfig cfg = load_config(a.config);
        options.total_length = cfg.robot.total_length();
        options.alpha_min = cfg.estimator.alpha_min;
    }
    const ErrorReport report = evaluate(estimated, truth, options);
    auto out = open_output(a.out);
    out << report_json(report, a.label) << '\n';
    auto csv = open_output(a.frames_csv.empty() ? a.out + ".frames.csv" : a.frames_csv);
    write_frame_errors(csv, report);
    log_info("evaluated " + std::to_string(report.frames.size()) + " frames");
}

struct EllipseArgs {
    std::string config;
    std::string state;
    double s = 1.0;
    double confidence = 0.95;
    std::size_t segment = 0;
};

json read_state(const std::string& text) {
    if (fs::exists(text)) {
        auto in = open_input(text);
        std::stringstream ss;
        ss << in.rdbuf();
        return json::parse(ss.str());
    }
    return json::parse(text);
}

void run_ellipse(const EllipseArgs& a) {
    const AppConfig cfg = load_config(a.config);
    if (a.segment >= cfg.robot.segments.size()) {
        throw Error(ErrorCode::invalid_argument, "segment index out of range");
    }
    json state;
    try {
        state = read_state(a.state);
    } catch (const json::exception& e) {
        throw Error(ErrorCode::invalid_argument, std::string("state: ") + e.what());
    }
    if (!state.contains("theta")) {
        throw Error(ErrorCode::invalid_argument, "state needs a 'theta' array");
    }
    const SegmentSpec& spec = cfg.robot.segments[a.segment];
    const ModalConfig theta(state.at("theta").get<std::vector<double>>());
    if (theta.order() != spec.order) {
        throw Error(ErrorCode::invalid_argument, "theta order does not match the segment order");
    }
    const double sigma = cfg.noise.orientation_deg * std::numbers::pi / 180.0;
    std::vector<double> w;
    QuatNoise noise;
    for (double loc : spec.placement.locations()) {
        const double alpha = eval_orientation(theta, loc);
        w.push_back(std::cos(0.5 * alpha));
        noise.sigma_w.push_back(sigma_w_from_angle(alpha, sigma));
    }
    const ArcCoordinate s(a.s);
    const PlanarCovariance cov = position_covariance(spec.placement, w, theta, s, spec.length, noise);
    const UncertaintyEllipse e = uncertainty_ellipse(cov, a.confidence);
    const PlanarPoint p = position(theta, s, spec.length);
    const json out{{"segment", a.segment},
                   {"s", a.s},
                   {"x_m", p.x},
                   {"y_m", p.y},
                   {"covariance_m2", {{cov(0, 0), cov(0, 1)}, {cov(1, 0), cov(1, 1)}}},
                   {"confidence", a.confidence},
                   {"semi_major_m", e.major},
                   {"semi_minor_m", e.minor},
                   {"angle_rad", e.angle}};
    std::cout << out.dump(2) << '\n';
}

struct ConditioningArgs {
    std::string placements;
    double threshold = 1e8;
};

std::vector<std::vector<double>> parse_placements(const std::string& text) {
    std::vector<std::vector<double>> out;
    std::stringstream groups(text);
    std::string group;
    while (std::getline(groups, group, ';')) {
        std::vector<double> locs;
        std::stringstream items(group);
        std::string item;
        while (std::getline(items, item, ',')) {
            // Accept fractions such as 5/14.
            const auto slash = item.find('/');
            try {
                if (slash == std::string::npos) {
                    locs.push_back(std::stod(item));
                } else {
                    locs.push_back(std::stod(item.substr(0, slash)) / std::stod(item.substr(slash + 1)));
                }
            } catch (const std::exception&) {
                throw Error(ErrorCode::invalid_argument, "bad sensor location '" + item + "'");
            }
        }
        out.push_back(std::move(locs));
    }
    if (out.empty()) {
        throw Error(ErrorCode::invalid_argument, "no placements given");
    }
    return out;
}

void run_conditioning(const ConditioningArgs& a) {
    json rows = json::array();
    for (const auto& locs : parse_placements(a.placements)) {
        const SensorPlacement p(locs);
        const double cond = placement_conditioning(p);
        rows.push_back({{"locations", locs},
                        {"order", p.size() - 1},
                        {"determinant", system_determinant(p)},
                        {"condition_number", cond},
                        {"ill_conditioned", cond > a.threshold}});
    }
    std::cout << json{{"threshold", a.threshold}, {"placements", rows}}.dump(2) << '\n';
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Continuum robot shape sensing with piecewise polynomial curvature"};
    app.require_subcommand(1);

    SimulateArgs sim;
    auto* simulate = app.add_subcommand("simulate", "Write a truth trace and synthetic sensor streams");
    simulate->add_option("--config", sim.config, "Robot configuration (JSON)")->required();
    simulate->add_option("--scenario", sim.scenario,
                         "swing, free_oscillation, tip_interaction, body_interaction or circular_3d");
    simulate->add_option("--seed", sim.seed, "Noise seed");
    simulate->add_option("--out", sim.out, "Output directory")->required();
    simulate->add_option("--duration", sim.duration, "Override the scenario duration, seconds");

    EstimateArgs est;
    auto* estimate = app.add_subcommand("estimate", "Estimate the robot shape from sensor streams");
    estimate->add_option("--config", est.config, "Robot configuration (JSON)")->required();
    estimate->add_option("--sensors", est.sensors, "Sensor stream file or simulate output directory")->required();
    estimate->add_option("--out", est.out, "Output trace (CSV)")->required();
    estimate->add_flag("--raw-imu", est.raw_imu, "Run the attitude filter on raw inertial records");

    EvaluateArgs ev;
    auto* evaluate_cmd = app.add_subcommand("evaluate", "Compare an estimated trace with the truth");
    evaluate_cmd->add_option("--estimated", ev.estimated, "Estimated trace")->required();
    evaluate_cmd->add_option("--truth", ev.truth, "Truth trace")->required();
    evaluate_cmd->add_option("--out", ev.out, "Report (JSON)")->required();
    evaluate_cmd->add_option("--frames", ev.frames_csv, "Per-frame error CSV (default <out>.frames.csv)");
    evaluate_cmd->add_option("--config", ev.config, "Robot configuration, for the total length");
    evaluate_cmd->add_option("--length", ev.length, "Total robot length, meters");
    evaluate_cmd->add_option("--label", ev.label, "Scenario label for the report row");

    EllipseArgs el;
    auto* ellipse = app.add_subcommand("ellipse", "Position uncertainty ellipse of one segment");
    ellipse->add_option("--config", el.config, "Robot configuration (JSON)")->required();
    ellipse->add_option("--state", el.state, "JSON object or file with \"theta\"")->required();
    ellipse->add_option("--s", el.s, "Arc coordinate in [0, 1]");
    ellipse->add_option("--confidence", el.confidence, "Confidence level in (0, 1)");
    ellipse->add_option("--segment", el.segment, "Segment index");

    ConditioningArgs co;
    auto* conditioning = app.add_subcommand("conditioning", "Compare sensor placements");
    conditioning->add_option("--placements", co.placements, "e.g. \"5/14,10/14;0.5,1\"")->required();
    conditioning->add_option("--threshold", co.threshold, "Condition number threshold");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        return fail("invalid_argument", e.what());
    }

    try {
        if (simulate->parsed()) {
            run_simulate(sim);
        } else if (estimate->parsed()) {
            run_estimate(est);
        } else if (evaluate_cmd->parsed()) {
            run_evaluate(ev);
        } else if (ellipse->parsed()) {
            run_ellipse(el);
        } else if (conditioning->parsed()) {
            run_conditioning(co);
        }
        log_debug("done");
    } catch (const Error& e) {
        return fail(error_code_name(e.code()), e.what());
    } catch (const fs::filesystem_error& e) {
        return fail("io", e.what());
    } catch (const std::exception& e) {
        return fail("internal", e.what());
    }
    return 0;
}
