#include "echomap/synth/scenario.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "echomap/errors.hpp"
#include "echomap/rng.hpp"

namespace echomap::synth {

namespace {

constexpr std::uint64_t kPhaseStream = 0x9e3779b97f4a7c15ull;
constexpr std::uint64_t kNoiseStream = 0xbf58476d1ce4e5b9ull;

struct ImpactPhases {
    std::vector<double> line_phases;
    double echo_phase = 0.0;
};

ImpactPhases draw_phases(std::mt19937_64& rng, std::size_t n_lines) {
    ImpactPhases p;
    p.line_phases.resize(n_lines);
    for (auto& ph : p.line_phases) ph = 2.0 * std::numbers::pi * uniform01(rng);
    p.echo_phase = 2.0 * std::numbers::pi * uniform01(rng);
    return p;
}

// Adds one impact starting at time t0 into the sample buffer.
void add_impact(std::vector<double>& samples, double fs, double t0, bool has_pipe,
                double depth, const ScenarioConfig& cfg, const ImpactPhases& phases) {
    const std::size_t start = static_cast<std::size_t>(std::llround(t0 * fs));
    const std::size_t extent =
        static_cast<std::size_t>(std::llround(cfg.impact_extent_seconds * fs));
    const std::size_t end = std::min(samples.size(), start + extent);

    const double line_scale = has_pipe ? cfg.absorption : 1.0;
    double echo_freq = 0.0;
    if (has_pipe) {
        echo_freq = cfg.wave_speed / (2.0 * depth);
        if (echo_freq >= fs / 2.0)
            throw InvalidParameterError(
                "generate_impact_wave: echo frequency above Nyquist; increase depth or "
                "sample rate");
    }

    for (std::size_t i = start; i < end; ++i) {
        const double t = (static_cast<double>(i) - static_cast<double>(start)) / fs;
        double v = 0.0;
        if (t < cfg.click_seconds) {
            v += cfg.click_amplitude * std::sin(std::numbers::pi * t / cfg.click_seconds);
        }
        const double line_env = std::exp(-t / cfg.line_tau);
        for (std::size_t k = 0; k < cfg.line_freqs.size(); ++k) {
            v += line_scale * cfg.line_amplitude * line_env *
                 std::sin(2.0 * std::numbers::pi * cfg.line_freqs[k] * t +
                          phases.line_phases[k]);
        }
        if (has_pipe) {
            v += cfg.echo_amplitude * std::exp(-t / cfg.echo_tau) *
                 std::sin(2.0 * std::numbers::pi * echo_freq * t + phases.echo_phase);
        }
        samples[i] += v;
    }
}

void add_noise_and_clip(std::vector<double>& samples, double noise_std,
                        std::uint64_t seed) {
    Gaussian noise(mix_seed(seed, kNoiseStream));
    for (auto& s : samples) {
        if (noise_std > 0.0) s += noise(noise_std);
        s = std::clamp(s, -1.0, 1.0); // ADC saturation
    }
}

} // namespace

void ScenarioConfig::validate() const {
    if (slab_dims.minCoeff() <= 0.0)
        throw InvalidParameterError("scenario: slab dimensions must be positive");
    if (cadence_hz <= 0.0) throw InvalidParameterError("scenario: cadence must be positive");
    if (noise_std < 0.0) throw InvalidParameterError("scenario: noise_std must be >= 0");
    if (wave_speed <= 0.0) throw InvalidParameterError("scenario: wave_speed must be positive");
    if (sample_rate <= 0.0) throw InvalidParameterError("scenario: sample_rate must be positive");
    if (taps_per_location <= 0)
        throw InvalidParameterError("scenario: taps_per_location must be positive");
    if (path.rows <= 0 || path.cols <= 0)
        throw InvalidParameterError("scenario: path must have positive rows and cols");
    if (path.move_speed <= 0.0)
        throw InvalidParameterError("scenario: move_speed must be positive");
    for (const auto& p : pipes) {
        if (p.depth <= 0.0 || p.depth + p.radius > slab_dims.z())
            throw InvalidParameterError("scenario: pipe depth outside the slab");
        if (p.radius <= 0.0) throw InvalidParameterError("scenario: pipe radius must be positive");
        for (const auto& endpoint : {p.a, p.b}) {
            if (endpoint.x() < 0.0 || endpoint.x() > slab_dims.x() || endpoint.y() < 0.0 ||
                endpoint.y() > slab_dims.y())
                throw InvalidParameterError("scenario: pipe endpoint outside the slab");
        }
    }
    const int want = total_impacts;
    const int locations = path.rows * path.cols;
    if (want > 0 && want < locations)
        throw InvalidParameterError("scenario: total_impacts below one impact per location");
}

double point_to_segment_2d(const Eigen::Vector2d& p, const Eigen::Vector2d& a,
                           const Eigen::Vector2d& b) {
    const Eigen::Vector2d ab = b - a;
    const double len2 = ab.squaredNorm();
    if (len2 == 0.0) return (p - a).norm();
    const double t = std::clamp((p - a).dot(ab) / len2, 0.0, 1.0);
    return (p - (a + t * ab)).norm();
}

double point_to_segment_3d(const Eigen::Vector3d& p, const Eigen::Vector3d& a,
                           const Eigen::Vector3d& b) {
    const Eigen::Vector3d ab = b - a;
    const double len2 = ab.squaredNorm();
    if (len2 == 0.0) return (p - a).norm();
    const double t = std::clamp((p - a).dot(ab) / len2, 0.0, 1.0);
    return (p - (a + t * ab)).norm();
}

TapLocationTruth label_tap_location(const Eigen::Vector3d& position,
                                    const std::vector<PipeSpec>& pipes) {
    TapLocationTruth truth;
    truth.position = position;
    const Eigen::Vector2d p2(position.x(), position.y());
    for (const auto& pipe : pipes) {
        if (point_to_segment_2d(p2, pipe.a, pipe.b) <= pipe.radius)
            truth.has_pipe_below = true;
        const Eigen::Vector3d a3(pipe.a.x(), pipe.a.y(), -pipe.depth);
        const Eigen::Vector3d b3(pipe.b.x(), pipe.b.y(), -pipe.depth);
        truth.nearest_pipe_distance =
            std::min(truth.nearest_pipe_distance, point_to_segment_3d(position, a3, b3));
    }
    return truth;
}

signal::AudioTrace generate_impact_wave(bool has_pipe, double depth,
                                        const ScenarioConfig& config) {
    if (has_pipe && depth <= 0.0)
        throw InvalidParameterError("generate_impact_wave: depth must be positive");

    signal::AudioTrace trace;
    trace.sample_rate = config.sample_rate;
    trace.start_time = 0.0;
    trace.samples.assign(
        static_cast<std::size_t>(std::llround(config.impact_trace_seconds * config.sample_rate)),
        0.0);

    std::mt19937_64 phase_rng(mix_seed(config.seed, kPhaseStream));
    const ImpactPhases phases = draw_phases(phase_rng, config.line_freqs.size());
    add_impact(trace.samples, config.sample_rate, config.impact_trace_offset, has_pipe, depth,
               config, phases);
    add_noise_and_clip(trace.samples, config.noise_std, config.seed);
    return trace;
}

Scenario generate_scenario(const ScenarioConfig& config) {
    config.validate();

    Scenario scenario;
    const int n_locations = config.path.rows * config.path.cols;

    // serpentine location layout
    std::vector<Eigen::Vector3d> locations;
    locations.reserve(static_cast<std::size_t>(n_locations));
    for (int r = 0; r < config.path.rows; ++r) {
        for (int c = 0; c < config.path.cols; ++c) {
            const int col = (r % 2 == 0) ? c : config.path.cols - 1 - c;
            locations.emplace_back(config.path.origin.x() + col * config.path.tap_spacing,
                                   config.path.origin.y() + r * config.path.row_spacing, 0.0);
        }
    }

    // impacts per location; extras from total_impacts go to the first ones
    std::vector<int> impacts(static_cast<std::size_t>(n_locations), config.taps_per_location);
    if (config.total_impacts > 0) {
        const int base = config.total_impacts / n_locations;
        int extra = config.total_impacts - base * n_locations;
        for (int k = 0; k < n_locations; ++k)
            impacts[static_cast<std::size_t>(k)] = base + (k < extra ? 1 : 0);
    }

    // timeline: dwell at each location, then travel to the next
    struct Waypoint {
        double t;
        Eigen::Vector3d p;
    };
    std::vector<Waypoint> waypoints;
    double t = config.lead_in_seconds;
    for (int k = 0; k < n_locations; ++k) {
        const auto& p = locations[static_cast<std::size_t>(k)];
        const int n_imp = impacts[static_cast<std::size_t>(k)];
        const double dwell = static_cast<double>(n_imp) / config.cadence_hz;
        waypoints.push_back({t, p});
        for (int j = 0; j < n_imp; ++j) {
            scenario.truth.impact_times.push_back(t + (j + 0.5) / config.cadence_hz);
            scenario.truth.impact_location.push_back(k);
        }
        t += dwell;
        waypoints.push_back({t, p});
        if (k + 1 < n_locations) {
            const double travel =
                (locations[static_cast<std::size_t>(k + 1)] - p).norm() / config.move_speed;
            t += travel;
        }
    }
    const double duration = t + config.lead_in_seconds;

    // ground-truth labels
    scenario.truth.locations.reserve(static_cast<std::size_t>(n_locations));
    for (int k = 0; k < n_locations; ++k) {
        TapLocationTruth truth = label_tap_location(locations[static_cast<std::size_t>(k)],
                                                    config.pipes);
        truth.num_impacts = impacts[static_cast<std::size_t>(k)];
        scenario.truth.locations.push_back(truth);
    }

    // audio stream
    scenario.audio.sample_rate = config.sample_rate;
    scenario.audio.start_time = 0.0;
    scenario.audio.samples.assign(
        static_cast<std::size_t>(std::llround(duration * config.sample_rate)), 0.0);
    for (std::size_t i = 0; i < scenario.truth.impact_times.size(); ++i) {
        const int loc = scenario.truth.impact_location[i];
        const auto& truth = scenario.truth.locations[static_cast<std::size_t>(loc)];
        // per-impact derived seed keeps the stream independent of ordering
        std::mt19937_64 phase_rng(
            mix_seed(config.seed ^ (static_cast<std::uint64_t>(i) + 1), kPhaseStream));
        const ImpactPhases phases = draw_phases(phase_rng, config.line_freqs.size());
        add_impact(scenario.audio.samples, config.sample_rate, scenario.truth.impact_times[i],
                   truth.has_pipe_below, truth.nearest_pipe_distance, config, phases);
    }
    add_noise_and_clip(scenario.audio.samples, config.noise_std, config.seed);

    // pose trajectory at the configured rate, piecewise linear over waypoints
    const std::size_t n_poses =
        static_cast<std::size_t>(std::floor(duration * config.pose_rate_hz)) + 1;
    scenario.trajectory.reserve(n_poses);
    std::size_t wp = 0;
    for (std::size_t s = 0; s < n_poses; ++s) {
        const double ts = static_cast<double>(s) / config.pose_rate_hz;
        while (wp + 1 < waypoints.size() && waypoints[wp + 1].t <= ts) ++wp;
        Eigen::Vector3d pos;
        if (wp + 1 >= waypoints.size() || ts <= waypoints.front().t) {
            pos = ts <= waypoints.front().t ? waypoints.front().p : waypoints.back().p;
        } else {
            const auto& a = waypoints[wp];
            const auto& b = waypoints[wp + 1];
            const double span = b.t - a.t;
            const double alpha = span > 0.0 ? std::clamp((ts - a.t) / span, 0.0, 1.0) : 0.0;
            pos = (1.0 - alpha) * a.p + alpha * b.p;
        }
        imaging::TimedPose sample;
        sample.timestamp = ts;
        sample.pose.translation = pos;
        scenario.trajectory.push_back(sample);
    }
    return scenario;
}

} // namespace echomap::synth
