#ifndef ECHOMAP_SYNTH_SCENARIO_HPP
#define ECHOMAP_SYNTH_SCENARIO_HPP

#include <Eigen/Core>
#include <cstdint>
#include <limits>
#include <vector>

#include "echomap/imaging/sync.hpp"
#include "echomap/signal/types.hpp"

namespace echomap::synth {

// A buried pipe: straight axis from a to b (surface-plane coordinates) at
// constant depth below the surface z = 0.
struct PipeSpec {
    Eigen::Vector2d a = Eigen::Vector2d::Zero();
    Eigen::Vector2d b = Eigen::Vector2d::Zero();
    double depth = 0.15;  // meters below surface
    double radius = 0.02; // meters
};

// Serpentine inspection path over the slab: `rows` passes of `cols` tap
// locations each, with a dwell at every location.
struct LawnmowerPath {
    int rows = 5;
    int cols = 8;
    double tap_spacing = 0.12;  // meters between locations along a row
    double row_spacing = 0.15;  // meters between rows
    Eigen::Vector2d origin = Eigen::Vector2d(0.25, 0.15);
    double move_speed = 0.24;   // meters/second between dwells
};

struct ScenarioConfig {
    Eigen::Vector3d slab_dims = Eigen::Vector3d(2.0, 1.5, 0.5);
    std::vector<PipeSpec> pipes;
    LawnmowerPath path;

    double cadence_hz = 0.5;     // solenoid trigger rate during a dwell
    int taps_per_location = 3;
    int total_impacts = 0;       // 0 = rows*cols*taps_per_location; otherwise
                                 // extra impacts go to the first locations
    double noise_std = 0.02;
    double wave_speed = 500.0;   // m/s, desk-scale default
    double sample_rate = 44100.0;
    std::uint64_t seed = 1;
    double pose_rate_hz = 20.0;
    double lead_in_seconds = 0.5;

    // Impact wave model. The contact click saturates the ADC; the slab
    // response is a comb of decaying low-band lines which a buried pipe
    // attenuates by `absorption`; a pipe also returns a narrow echo line at
    // wave_speed / (2 * depth).
    double click_seconds = 0.004;
    // Pre-clip click amplitude. Must exceed 1 + the worst-case sum of the
    // other components so the saturated plateau survives low-pass filtering
    // and the 0.999 detection rule always fires.
    double click_amplitude = 4.0;
    double line_amplitude = 0.3;
    double line_tau = 0.03; // seconds
    std::vector<double> line_freqs = {200.0, 300.0, 400.0, 480.0};
    double absorption = 0.3;
    double echo_amplitude = 0.1;
    double echo_tau = 0.12; // seconds
    double impact_extent_seconds = 0.5;
    double impact_trace_seconds = 0.8; // single-impact trace length
    double impact_trace_offset = 0.15; // impact time within that trace

    void validate() const; // throws InvalidParameterError
};

struct TapLocationTruth {
    Eigen::Vector3d position = Eigen::Vector3d::Zero(); // on the surface
    bool has_pipe_below = false;
    double nearest_pipe_distance = std::numeric_limits<double>::infinity();
    int num_impacts = 0;
};

struct GroundTruth {
    std::vector<TapLocationTruth> locations;
    std::vector<double> impact_times;   // one entry per emitted impact
    std::vector<int> impact_location;   // location index per impact
    int total_impacts() const { return static_cast<int>(impact_times.size()); }
};

struct Scenario {
    signal::AudioTrace audio;
    std::vector<imaging::TimedPose> trajectory;
    GroundTruth truth;
};

// 2D distance from point p to segment [a, b].
double point_to_segment_2d(const Eigen::Vector2d& p, const Eigen::Vector2d& a,
                           const Eigen::Vector2d& b);

// 3D distance from point p to segment [a, b].
double point_to_segment_3d(const Eigen::Vector3d& p, const Eigen::Vector3d& a,
                           const Eigen::Vector3d& b);

// Ground-truth labels for a surface point: a pipe is "below" when the
// point lies within the pipe radius of the axis' vertical projection;
// the distance is the exact 3D point-to-axis-segment distance.
TapLocationTruth label_tap_location(const Eigen::Vector3d& position,
                                    const std::vector<PipeSpec>& pipes);

// Single-impact trace. Deterministic in (config, seed); the peak saturates
// at exactly 1.0 so SOI detection fires. With has_pipe the low-band lines
// are attenuated and the depth echo line is added.
signal::AudioTrace generate_impact_wave(bool has_pipe, double depth,
                                        const ScenarioConfig& config);

// Full synthetic inspection run: audio stream, pose trajectory and ground
// truth, all deterministic in (config, seed).
Scenario generate_scenario(const ScenarioConfig& config);

} // namespace echomap::synth

#endif
