#include "echomap/signal/soi.hpp"

#include <algorithm>
#include <cmath>

#include "echomap/errors.hpp"

namespace echomap::signal {

std::vector<SignalOfInterest> detect_soi(const AudioTrace& trace, const SoiOptions& options) {
    std::vector<SignalOfInterest> out;
    if (trace.samples.empty() || trace.sample_rate <= 0.0) return out;

    const double fs = trace.sample_rate;
    const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(trace.samples.size());
    const std::ptrdiff_t pre = static_cast<std::ptrdiff_t>(std::llround(options.pre_seconds * fs));
    const std::ptrdiff_t post = static_cast<std::ptrdiff_t>(std::llround(options.post_seconds * fs));
    const std::ptrdiff_t refractory =
        static_cast<std::ptrdiff_t>(std::llround(options.refractory_seconds() * fs));

    std::ptrdiff_t i = 0;
    while (i < n) {
        if (std::abs(trace.samples[static_cast<std::size_t>(i)]) > options.threshold) {
            SignalOfInterest soi;
            soi.t_start = trace.time_at(static_cast<std::size_t>(i));

            std::ptrdiff_t lo = i - pre;
            std::ptrdiff_t hi = i + post; // inclusive
            soi.clipped = lo < 0 || hi > n - 1;
            lo = std::max<std::ptrdiff_t>(lo, 0);
            hi = std::min<std::ptrdiff_t>(hi, n - 1);

            soi.times.reserve(static_cast<std::size_t>(hi - lo + 1));
            soi.magnitudes.reserve(static_cast<std::size_t>(hi - lo + 1));
            for (std::ptrdiff_t k = lo; k <= hi; ++k) {
                soi.times.push_back(trace.time_at(static_cast<std::size_t>(k)));
                soi.magnitudes.push_back(trace.samples[static_cast<std::size_t>(k)]);
            }
            out.push_back(std::move(soi));

            i += refractory + 1;
        } else {
            ++i;
        }
    }
    return out;
}

IntervalSegmentation segment_intervals(const AudioTrace& trace, double interval_length,
                                       double relevance_threshold, double outlier_sigma) {
    if (interval_length <= 0.0)
        throw InvalidParameterError("segment_intervals: interval_length must be positive");

    IntervalSegmentation seg;
    seg.interval_length = interval_length;

    const double fs = trace.sample_rate;
    const std::size_t n = trace.samples.size();
    const std::size_t step = static_cast<std::size_t>(std::llround(interval_length * fs));
    if (step == 0 || n < step) {
        seg.trace_too_short = true;
        return seg;
    }

    // Per-interval envelope maxima; a trailing partial interval counts too.
    struct Interval {
        std::size_t begin, end;
        double env_max;
    };
    std::vector<Interval> intervals;
    for (std::size_t b = 0; b < n; b += step) {
        const std::size_t e = std::min(b + step, n);
        double m = 0.0;
        for (std::size_t k = b; k < e; ++k) m = std::max(m, std::abs(trace.samples[k]));
        intervals.push_back({b, e, m});
    }

    std::vector<std::size_t> relevant;
    for (std::size_t idx = 0; idx < intervals.size(); ++idx)
        if (intervals[idx].env_max > relevance_threshold) relevant.push_back(idx);
    if (relevant.empty()) return seg;

    // Mean and population stddev of the relevant envelope maxima. Intervals
    // whose maximum lands above mean + sigma * stddev carry saturated noise
    // rather than taps and get rejected.
    double mean = 0.0;
    for (std::size_t idx : relevant) mean += intervals[idx].env_max;
    mean /= static_cast<double>(relevant.size());
    double var = 0.0;
    for (std::size_t idx : relevant) {
        const double d = intervals[idx].env_max - mean;
        var += d * d;
    }
    var /= static_cast<double>(relevant.size());
    const double reject_above = mean + outlier_sigma * std::sqrt(var);

    std::vector<IntervalRange> padded;
    for (std::size_t idx : relevant) {
        const auto& iv = intervals[idx];
        if (iv.env_max > reject_above) {
            seg.rejected_intervals.push_back(
                {{iv.begin, iv.end},
                 iv.env_max,
                 "envelope max exceeds mean + " + std::to_string(outlier_sigma) +
                     " stddev of relevant interval maxima"});
            continue;
        }
        const std::size_t lo = iv.begin >= step ? iv.begin - step : 0;
        const std::size_t hi = std::min(iv.end + step, n);
        padded.push_back({lo, hi});
    }

    // merge overlapping / touching padded ranges
    std::sort(padded.begin(), padded.end(),
              [](const IntervalRange& a, const IntervalRange& b) { return a.begin < b.begin; });
    for (const auto& r : padded) {
        if (!seg.relevant_intervals.empty() && r.begin <= seg.relevant_intervals.back().end) {
            seg.relevant_intervals.back().end = std::max(seg.relevant_intervals.back().end, r.end);
        } else {
            seg.relevant_intervals.push_back(r);
        }
    }
    return seg;
}

} // namespace echomap::signal
