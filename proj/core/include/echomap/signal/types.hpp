#ifndef ECHOMAP_SIGNAL_TYPES_HPP
#define ECHOMAP_SIGNAL_TYPES_HPP

#include <Eigen/Core>
#include <cstddef>
#include <string>
#include <vector>

namespace echomap::signal {

// Raw time-domain microphone samples. Samples are normalized to [-1, 1]
// full scale (ADC maximum maps to 1.0); `start_time` is the wall-clock
// offset of sample 0 in seconds.
struct AudioTrace {
    std::vector<double> samples;
    double sample_rate = 0.0;
    double start_time = 0.0;

    double duration() const {
        return sample_rate > 0.0 ? static_cast<double>(samples.size()) / sample_rate : 0.0;
    }
    double time_at(std::size_t index) const {
        return start_time + static_cast<double>(index) / sample_rate;
    }
};

// The cropped window around one impact: paired (time, magnitude) arrays.
// `clipped` is set when the nominal window had to be cut at a trace edge.
struct SignalOfInterest {
    std::vector<double> times;      // absolute seconds, strictly increasing
    std::vector<double> magnitudes; // same length as times
    double t_start = 0.0;           // detection instant, absolute seconds
    bool clipped = false;

    std::size_t size() const { return times.size(); }
    double sample_rate() const {
        return times.size() > 1 ? 1.0 / (times[1] - times[0]) : 0.0;
    }
};

// One-sided magnitude spectrum on a uniform frequency grid.
struct Spectrum {
    std::vector<double> frequencies; // Hz, k * bin_width
    std::vector<double> magnitudes;  // |X_k| >= 0
    double bin_width = 0.0;          // Hz
};

// A fixed-size log-mel spectrogram patch cut from one SOI.
struct MelSegment {
    static constexpr int kRows = 60; // mel bands
    static constexpr int kCols = 41; // frames

    Eigen::MatrixXd values; // kRows x kCols
    int source_soi_index = -1;
};

// Result of the 0.75 s interval scan: which sample ranges hold taps and
// which were discarded as noise bursts.
struct IntervalRange {
    std::size_t begin = 0; // sample index, inclusive
    std::size_t end = 0;   // sample index, exclusive
};

struct RejectedInterval {
    IntervalRange range;
    double envelope_max = 0.0;
    std::string reason;
};

struct IntervalSegmentation {
    double interval_length = 0.0; // seconds
    std::vector<IntervalRange> relevant_intervals; // padded + merged
    std::vector<RejectedInterval> rejected_intervals;
    bool trace_too_short = false;

    bool contains(std::size_t sample_index) const {
        for (const auto& r : relevant_intervals)
            if (sample_index >= r.begin && sample_index < r.end) return true;
        return false;
    }
};

enum class RegionLabel {
    Normal,
    SubsurfaceObject,
};

inline const char* to_string(RegionLabel label) {
    return label == RegionLabel::Normal ? "NORMAL" : "SUBSURFACE_OBJECT";
}

} // namespace echomap::signal

#endif
