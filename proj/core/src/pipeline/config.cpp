#include "echomap/pipeline/config.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "echomap/errors.hpp"

namespace echomap::pipeline {

using nlohmann::json;

PipelineConfig PipelineConfig::defaults() {
    PipelineConfig cfg;
    // two pipes crossing the default slab at different depths
    synth::PipeSpec p1;
    p1.a = {0.45, 0.1};
    p1.b = {0.45, 1.4};
    p1.depth = 0.15;
    p1.radius = 0.02;
    synth::PipeSpec p2;
    p2.a = {1.35, 0.1};
    p2.b = {1.35, 1.4};
    p2.depth = 0.25;
    p2.radius = 0.03;
    cfg.scenario.pipes = {p1, p2};
    return cfg;
}

namespace {

[[noreturn]] void bad(const std::string& what) { throw InvalidParameterError("config: " + what); }

void check_known_keys(const json& obj, const std::string& section,
                      std::initializer_list<const char*> keys) {
    for (const auto& item : obj.items()) {
        bool known = false;
        for (const char* k : keys)
            if (item.key() == k) known = true;
        if (!known) bad("unknown key '" + item.key() + "' in " + section);
    }
}

double get_num(const json& obj, const char* key, double fallback) {
    if (!obj.contains(key)) return fallback;
    if (!obj[key].is_number()) bad(std::string("'") + key + "' must be a number");
    return obj[key].get<double>();
}

int get_int(const json& obj, const char* key, int fallback) {
    if (!obj.contains(key)) return fallback;
    if (!obj[key].is_number_integer()) bad(std::string("'") + key + "' must be an integer");
    return obj[key].get<int>();
}

bool get_bool(const json& obj, const char* key, bool fallback) {
    if (!obj.contains(key)) return fallback;
    if (!obj[key].is_boolean()) bad(std::string("'") + key + "' must be a boolean");
    return obj[key].get<bool>();
}

std::string get_str(const json& obj, const char* key, const std::string& fallback) {
    if (!obj.contains(key)) return fallback;
    if (!obj[key].is_string()) bad(std::string("'") + key + "' must be a string");
    return obj[key].get<std::string>();
}

Eigen::Vector2d get_vec2(const json& v, const char* key) {
    if (!v.is_array() || v.size() != 2) bad(std::string("'") + key + "' must be [x, y]");
    return {v[0].get<double>(), v[1].get<double>()};
}

void parse_scenario(const json& obj, synth::ScenarioConfig& sc) {
    check_known_keys(obj, "scenario",
                     {"slab_dims", "pipes", "path", "cadence_hz", "taps_per_location",
                      "total_impacts", "noise_std", "wave_speed", "sample_rate", "pose_rate_hz",
                      "lead_in_seconds", "click_seconds", "click_amplitude", "line_amplitude",
                      "line_tau", "line_freqs", "absorption", "echo_amplitude", "echo_tau",
                      "impact_extent_seconds", "impact_trace_seconds", "impact_trace_offset"});
    if (obj.contains("slab_dims")) {
        const auto& v = obj["slab_dims"];
        if (!v.is_array() || v.size() != 3) bad("'slab_dims' must be [x, y, z]");
        sc.slab_dims = {v[0].get<double>(), v[1].get<double>(), v[2].get<double>()};
    }
    if (obj.contains("pipes")) {
        if (!obj["pipes"].is_array()) bad("'pipes' must be an array");
        sc.pipes.clear();
        for (const auto& p : obj["pipes"]) {
            check_known_keys(p, "pipes[]", {"a", "b", "depth", "radius"});
            synth::PipeSpec spec;
            if (!p.contains("a") || !p.contains("b")) bad("pipe needs 'a' and 'b' endpoints");
            spec.a = get_vec2(p["a"], "a");
            spec.b = get_vec2(p["b"], "b");
            spec.depth = get_num(p, "depth", spec.depth);
            spec.radius = get_num(p, "radius", spec.radius);
            sc.pipes.push_back(spec);
        }
    }
    if (obj.contains("path")) {
        const auto& p = obj["path"];
        check_known_keys(p, "path",
                         {"rows", "cols", "tap_spacing", "row_spacing", "origin", "move_speed"});
        sc.path.rows = get_int(p, "rows", sc.path.rows);
        sc.path.cols = get_int(p, "cols", sc.path.cols);
        sc.path.tap_spacing = get_num(p, "tap_spacing", sc.path.tap_spacing);
        sc.path.row_spacing = get_num(p, "row_spacing", sc.path.row_spacing);
        if (p.contains("origin")) sc.path.origin = get_vec2(p["origin"], "origin");
        sc.path.move_speed = get_num(p, "move_speed", sc.path.move_speed);
    }
    sc.cadence_hz = get_num(obj, "cadence_hz", sc.cadence_hz);
    sc.taps_per_location = get_int(obj, "taps_per_location", sc.taps_per_location);
    sc.total_impacts = get_int(obj, "total_impacts", sc.total_impacts);
    sc.noise_std = get_num(obj, "noise_std", sc.noise_std);
    sc.wave_speed = get_num(obj, "wave_speed", sc.wave_speed);
    sc.sample_rate = get_num(obj, "sample_rate", sc.sample_rate);
    sc.pose_rate_hz = get_num(obj, "pose_rate_hz", sc.pose_rate_hz);
    sc.lead_in_seconds = get_num(obj, "lead_in_seconds", sc.lead_in_seconds);
    sc.click_seconds = get_num(obj, "click_seconds", sc.click_seconds);
    sc.click_amplitude = get_num(obj, "click_amplitude", sc.click_amplitude);
    sc.line_amplitude = get_num(obj, "line_amplitude", sc.line_amplitude);
    sc.line_tau = get_num(obj, "line_tau", sc.line_tau);
    if (obj.contains("line_freqs")) {
        if (!obj["line_freqs"].is_array()) bad("'line_freqs' must be an array");
        sc.line_freqs.clear();
        for (const auto& f : obj["line_freqs"]) sc.line_freqs.push_back(f.get<double>());
    }
    sc.absorption = get_num(obj, "absorption", sc.absorption);
    sc.echo_amplitude = get_num(obj, "echo_amplitude", sc.echo_amplitude);
    sc.echo_tau = get_num(obj, "echo_tau", sc.echo_tau);
    sc.impact_extent_seconds = get_num(obj, "impact_extent_seconds", sc.impact_extent_seconds);
    sc.impact_trace_seconds = get_num(obj, "impact_trace_seconds", sc.impact_trace_seconds);
    sc.impact_trace_offset = get_num(obj, "impact_trace_offset", sc.impact_trace_offset);
}

void parse_signal(const json& obj, SignalConfig& sg) {
    check_known_keys(obj, "signal",
                     {"cutoff_hz", "soi_threshold", "pre_window", "post_window",
                      "interval_seconds", "relevance_threshold", "outlier_sigma", "dump_spectra",
                      "mel"});
    sg.cutoff_hz = get_num(obj, "cutoff_hz", sg.cutoff_hz);
    sg.soi_threshold = get_num(obj, "soi_threshold", sg.soi_threshold);
    sg.pre_window = get_num(obj, "pre_window", sg.pre_window);
    sg.post_window = get_num(obj, "post_window", sg.post_window);
    sg.interval_seconds = get_num(obj, "interval_seconds", sg.interval_seconds);
    sg.relevance_threshold = get_num(obj, "relevance_threshold", sg.relevance_threshold);
    sg.outlier_sigma = get_num(obj, "outlier_sigma", sg.outlier_sigma);
    sg.dump_spectra = get_bool(obj, "dump_spectra", sg.dump_spectra);
    if (obj.contains("mel")) {
        const auto& m = obj["mel"];
        check_known_keys(m, "mel",
                         {"bands", "f_min", "f_max", "frame", "hop", "frames_per_segment",
                          "segment_hop_frames", "floor_db"});
        sg.mel.bands = get_int(m, "bands", sg.mel.bands);
        sg.mel.f_min = get_num(m, "f_min", sg.mel.f_min);
        sg.mel.f_max = get_num(m, "f_max", sg.mel.f_max);
        sg.mel.frame = get_int(m, "frame", sg.mel.frame);
        sg.mel.hop = get_int(m, "hop", sg.mel.hop);
        sg.mel.frames_per_segment = get_int(m, "frames_per_segment", sg.mel.frames_per_segment);
        sg.mel.segment_hop_frames = get_int(m, "segment_hop_frames", sg.mel.segment_hop_frames);
        sg.mel.floor_db = get_num(m, "floor_db", sg.mel.floor_db);
    }
}

void parse_inference(const json& obj, InferenceConfig& inf) {
    check_known_keys(obj, "inference",
                     {"w0", "w1", "learning_rate", "epochs", "batch_size", "threads",
                      "holdout_fraction", "depth_supervision", "aggregate"});
    inf.w0 = get_num(obj, "w0", inf.w0);
    inf.w1 = get_num(obj, "w1", inf.w1);
    inf.learning_rate = get_num(obj, "learning_rate", inf.learning_rate);
    inf.epochs = get_int(obj, "epochs", inf.epochs);
    inf.batch_size = get_int(obj, "batch_size", inf.batch_size);
    inf.threads = get_int(obj, "threads", inf.threads);
    inf.holdout_fraction = get_num(obj, "holdout_fraction", inf.holdout_fraction);
    inf.depth_supervision = get_str(obj, "depth_supervision", inf.depth_supervision);
    inf.aggregate = get_str(obj, "aggregate", inf.aggregate);
}

void parse_imaging(const json& obj, ImagingConfig& im) {
    check_known_keys(obj, "imaging",
                     {"wave_speed", "peak_band", "grid_resolution", "shell_tolerance",
                      "target_fraction", "surface_z", "grid_margin", "grid_depth",
                      "sync_edge_tolerance", "tap_group_distance", "fd_threshold",
                      "fd_gap_fraction", "radius_source", "shell_weighting", "sensor_offset"});
    im.wave_speed = get_num(obj, "wave_speed", im.wave_speed);
    if (obj.contains("peak_band")) {
        const auto& b = obj["peak_band"];
        if (!b.is_array() || b.size() != 2) bad("'peak_band' must be [low, high]");
        im.peak_band_low = b[0].get<double>();
        im.peak_band_high = b[1].get<double>();
    }
    im.grid_resolution = get_num(obj, "grid_resolution", im.grid_resolution);
    im.shell_tolerance = get_num(obj, "shell_tolerance", im.shell_tolerance);
    im.target_fraction = get_num(obj, "target_fraction", im.target_fraction);
    im.surface_z = get_num(obj, "surface_z", im.surface_z);
    im.grid_margin = get_num(obj, "grid_margin", im.grid_margin);
    im.grid_depth = get_num(obj, "grid_depth", im.grid_depth);
    im.sync_edge_tolerance = get_num(obj, "sync_edge_tolerance", im.sync_edge_tolerance);
    im.tap_group_distance = get_num(obj, "tap_group_distance", im.tap_group_distance);
    im.fd_threshold = get_num(obj, "fd_threshold", im.fd_threshold);
    im.fd_gap_fraction = get_num(obj, "fd_gap_fraction", im.fd_gap_fraction);
    im.radius_source = get_str(obj, "radius_source", im.radius_source);
    im.shell_weighting = get_str(obj, "shell_weighting", im.shell_weighting);
    if (obj.contains("sensor_offset")) {
        const auto& s = obj["sensor_offset"];
        check_known_keys(s, "sensor_offset", {"xyz", "quat"});
        Eigen::Vector3d t = im.sensor_offset.translation;
        Eigen::Quaterniond q(im.sensor_offset.rotation);
        if (s.contains("xyz")) {
            const auto& v = s["xyz"];
            if (!v.is_array() || v.size() != 3) bad("'sensor_offset.xyz' must be [x, y, z]");
            t = {v[0].get<double>(), v[1].get<double>(), v[2].get<double>()};
        }
        if (s.contains("quat")) {
            const auto& v = s["quat"];
            if (!v.is_array() || v.size() != 4)
                bad("'sensor_offset.quat' must be [w, x, y, z]");
            q = Eigen::Quaterniond(v[0].get<double>(), v[1].get<double>(), v[2].get<double>(),
                                   v[3].get<double>());
        }
        im.sensor_offset = posegraph::Se3::from_quaternion(q, t);
    }
}

} // namespace

void apply_json(PipelineConfig& cfg, const std::string& json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw InvalidParameterError(std::string("config: invalid JSON: ") + e.what());
    }
    if (!doc.is_object()) bad("top level must be an object");
    check_known_keys(doc, "top level",
                     {"seed", "wave_speed", "scenario", "signal", "inference", "imaging"});

    if (doc.contains("seed")) {
        if (!doc["seed"].is_number_unsigned() && !doc["seed"].is_number_integer())
            bad("'seed' must be an integer");
        cfg.seed = doc["seed"].get<std::uint64_t>();
    }
    if (doc.contains("wave_speed")) {
        const double v = doc["wave_speed"].get<double>();
        cfg.scenario.wave_speed = v;
        cfg.imaging.wave_speed = v;
    }
    if (doc.contains("scenario")) parse_scenario(doc["scenario"], cfg.scenario);
    if (doc.contains("signal")) parse_signal(doc["signal"], cfg.signal);
    if (doc.contains("inference")) parse_inference(doc["inference"], cfg.inference);
    if (doc.contains("imaging")) parse_imaging(doc["imaging"], cfg.imaging);
}

void apply_overrides(PipelineConfig& cfg, const ConfigOverrides& overrides) {
    if (overrides.seed) cfg.seed = *overrides.seed;
    if (overrides.cutoff_hz) cfg.signal.cutoff_hz = *overrides.cutoff_hz;
    if (overrides.fd_threshold) cfg.imaging.fd_threshold = *overrides.fd_threshold;
    if (overrides.wave_speed) {
        cfg.scenario.wave_speed = *overrides.wave_speed;
        cfg.imaging.wave_speed = *overrides.wave_speed;
    }
    if (overrides.grid_resolution) cfg.imaging.grid_resolution = *overrides.grid_resolution;
    if (overrides.shell_tolerance) cfg.imaging.shell_tolerance = *overrides.shell_tolerance;
    if (overrides.radius_source) cfg.imaging.radius_source = *overrides.radius_source;
}

void PipelineConfig::validate() const {
    if (signal.cutoff_hz <= 0.0) bad("signal.cutoff_hz must be positive");
    if (signal.cutoff_hz >= scenario.sample_rate / 2.0)
        bad("signal.cutoff_hz must be below the scenario Nyquist frequency");
    if (signal.soi_threshold <= 0.0 || signal.soi_threshold >= 1.0)
        bad("signal.soi_threshold must be in (0, 1)");
    if (signal.pre_window < 0.0 || signal.post_window <= 0.0)
        bad("signal SOI window must be positive");
    if (signal.interval_seconds <= 0.0) bad("signal.interval_seconds must be positive");
    if (signal.relevance_threshold < 0.0) bad("signal.relevance_threshold must be >= 0");
    if (signal.outlier_sigma <= 0.0) bad("signal.outlier_sigma must be positive");
    if (signal.mel.bands <= 0) bad("mel.bands must be positive");
    if (signal.mel.frame <= 0 || (signal.mel.frame & (signal.mel.frame - 1)) != 0)
        bad("mel.frame must be a power of two");
    if (signal.mel.hop <= 0) bad("mel.hop must be positive");
    if (signal.mel.frames_per_segment <= 0) bad("mel.frames_per_segment must be positive");
    if (signal.mel.segment_hop_frames <= 0) bad("mel.segment_hop_frames must be positive");
    if (signal.mel.f_max <= signal.mel.f_min || signal.mel.f_min < 0.0)
        bad("mel band range must satisfy 0 <= f_min < f_max");

    if (inference.w0 < 0.0 || inference.w1 < 0.0) bad("loss weights must be >= 0");
    if (inference.learning_rate < 0.0) bad("inference.learning_rate must be >= 0");
    if (inference.epochs < 0) bad("inference.epochs must be >= 0");
    if (inference.batch_size <= 0) bad("inference.batch_size must be positive");
    if (inference.holdout_fraction < 0.0 || inference.holdout_fraction >= 1.0)
        bad("inference.holdout_fraction must be in [0, 1)");
    if (inference.depth_supervision != "pipe_only" && inference.depth_supervision != "all")
        bad("inference.depth_supervision must be 'pipe_only' or 'all'");
    if (inference.aggregate != "mean" && inference.aggregate != "max_vote")
        bad("inference.aggregate must be 'mean' or 'max_vote'");

    if (imaging.wave_speed <= 0.0) bad("imaging.wave_speed must be positive");
    if (imaging.peak_band_low < 0.0 || imaging.peak_band_high <= imaging.peak_band_low)
        bad("imaging.peak_band must satisfy 0 <= low < high");
    if (imaging.grid_resolution <= 0.0) bad("imaging.grid_resolution must be positive");
    if (imaging.shell_tolerance < 0.0) bad("imaging.shell_tolerance must be >= 0");
    if (imaging.target_fraction < 0.0 || imaging.target_fraction > 1.0)
        bad("imaging.target_fraction must be in [0, 1]");
    if (imaging.grid_depth <= 0.0) bad("imaging.grid_depth must be positive");
    if (imaging.sync_edge_tolerance < 0.0) bad("imaging.sync_edge_tolerance must be >= 0");
    if (imaging.tap_group_distance <= 0.0) bad("imaging.tap_group_distance must be positive");
    if (imaging.fd_threshold < 0.0) bad("imaging.fd_threshold must be >= 0");
    if (imaging.fd_gap_fraction <= 0.0 || imaging.fd_gap_fraction >= 1.0)
        bad("imaging.fd_gap_fraction must be in (0, 1)");
    if (imaging.radius_source != "spectral" && imaging.radius_source != "model")
        bad("imaging.radius_source must be 'spectral' or 'model'");
    if (imaging.shell_weighting != "binary" && imaging.shell_weighting != "gaussian")
        bad("imaging.shell_weighting must be 'binary' or 'gaussian'");

    scenario.validate();
}

PipelineConfig load_config(const std::string& config_path, const ConfigOverrides& overrides) {
    PipelineConfig cfg = PipelineConfig::defaults();

    std::string path = config_path;
    if (path.empty()) {
        if (const char* env = std::getenv("ECHOMAP_CONFIG")) path = env;
    }
    if (!path.empty()) {
        std::ifstream in(path);
        if (!in) throw IoError("config: cannot read " + path);
        std::stringstream buffer;
        buffer << in.rdbuf();
        apply_json(cfg, buffer.str());
    }
    apply_overrides(cfg, overrides);
    cfg.scenario.seed = cfg.seed;
    cfg.validate();
    return cfg;
}

} // namespace echomap::pipeline
