#ifndef ECHOMAP_PIPELINE_CONFIG_HPP
#define ECHOMAP_PIPELINE_CONFIG_HPP

#include <cstdint>
#include <optional>
#include <string>

#include "echomap/signal/mel.hpp"
#include "echomap/synth/scenario.hpp"

namespace echomap::pipeline {

struct SignalConfig {
    double cutoff_hz = 2000.0;   // echo sounding band of interest
    double soi_threshold = 0.999;
    double pre_window = 0.01;    // seconds before the detection instant
    double post_window = 0.3;    // seconds after
    double interval_seconds = 0.75;
    double relevance_threshold = 0.1;
    double outlier_sigma = 3.0;
    bool dump_spectra = false;   // per-SOI spectrum CSVs from cmd_analyze
    signal::MelOptions mel;
};

struct InferenceConfig {
    double w0 = 1.0; // depth loss weight
    double w1 = 1.0; // pipe loss weight
    double learning_rate = 0.01;
    int epochs = 30;
    int batch_size = 8;
    int threads = 0;
    double holdout_fraction = 0.2;
    // "pipe_only": depth supervised on pipe samples; "all": every sample
    // with a finite nearest-pipe distance.
    std::string depth_supervision = "pipe_only";
    std::string aggregate = "mean"; // or "max_vote"
};

struct ImagingConfig {
    double wave_speed = 500.0; // m/s; desk-scale synthetic default
    double peak_band_low = 100.0;
    double peak_band_high = 2000.0;
    double grid_resolution = 0.01;
    double shell_tolerance = 0.0; // 0 = max(radius bin tolerance, resolution)
    double target_fraction = 0.8;
    double surface_z = 0.0;
    double grid_margin = 0.3; // horizontal margin around the tap bounding box
    double grid_depth = 0.5;  // meters below the surface
    double sync_edge_tolerance = 0.1;
    double tap_group_distance = 0.03;
    double fd_threshold = 0.0;     // 0 = automatic largest-gap split
    double fd_gap_fraction = 0.35; // minimum relative gap for the auto split
    std::string radius_source = "spectral"; // or "model"
    std::string shell_weighting = "binary"; // or "gaussian"
    posegraph::Se3 sensor_offset;           // pose -> impact point
};

struct PipelineConfig {
    std::uint64_t seed = 1;
    synth::ScenarioConfig scenario;
    SignalConfig signal;
    InferenceConfig inference;
    ImagingConfig imaging;

    static PipelineConfig defaults();
    void validate() const; // throws InvalidParameterError naming the field
};

// Command-line overrides; they beat both defaults and the config file.
struct ConfigOverrides {
    std::optional<std::uint64_t> seed;
    std::optional<double> cutoff_hz;
    std::optional<double> fd_threshold;
    std::optional<double> wave_speed; // sets scenario and imaging
    std::optional<double> grid_resolution;
    std::optional<double> shell_tolerance;
    std::optional<std::string> radius_source;
};

// Applies a JSON document onto cfg; absent keys keep their values, unknown
// keys raise InvalidParameterError.
void apply_json(PipelineConfig& cfg, const std::string& json_text);

void apply_overrides(PipelineConfig& cfg, const ConfigOverrides& overrides);

// defaults <- optional config file <- overrides, then validate. The file
// falls back to the ECHOMAP_CONFIG environment variable when path is empty.
PipelineConfig load_config(const std::string& config_path, const ConfigOverrides& overrides);

} // namespace echomap::pipeline

#endif
