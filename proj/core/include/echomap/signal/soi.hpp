#ifndef ECHOMAP_SIGNAL_SOI_HPP
#define ECHOMAP_SIGNAL_SOI_HPP

#include <vector>

#include "echomap/signal/types.hpp"

namespace echomap::signal {

struct SoiOptions {
    double threshold = 0.999;   // on normalized magnitude
    double pre_seconds = 0.01;  // window opens this long before detection
    double post_seconds = 0.3;  // and closes this long after
    // After a detection, further triggers are suppressed for one full
    // window so one tap yields exactly one SOI.
    double refractory_seconds() const { return pre_seconds + post_seconds; }
};

// Scans a (low-pass filtered) trace for samples whose magnitude exceeds
// the detection threshold and cuts one window per impact. Returns an empty
// list when nothing crosses the threshold.
std::vector<SignalOfInterest> detect_soi(const AudioTrace& trace,
                                         const SoiOptions& options = {});

struct IntervalOptions {
    double relevance_threshold = 0.1; // envelope max must exceed this
    double outlier_sigma = 3.0;       // noise-burst rejection
};

// Splits the trace into fixed-length intervals, keeps the ones whose
// envelope maximum exceeds the relevance threshold, drops relevant
// intervals whose maximum sits more than `outlier_sigma` standard
// deviations above the mean of the relevant maxima, then pads each
// survivor with one interval on each side and merges overlaps.
IntervalSegmentation segment_intervals(const AudioTrace& trace,
                                       double interval_length,
                                       double relevance_threshold,
                                       double outlier_sigma = 3.0);

} // namespace echomap::signal

#endif
