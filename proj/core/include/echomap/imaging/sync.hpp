#ifndef ECHOMAP_IMAGING_SYNC_HPP
#define ECHOMAP_IMAGING_SYNC_HPP

#include <string>
#include <vector>

#include "echomap/imaging/types.hpp"

namespace echomap::imaging {

struct TimedPose {
    double timestamp = 0.0;
    posegraph::Se3 pose;
};

struct SyncOptions {
    double edge_tolerance = 0.1;     // seconds of allowed clamped extrapolation
    double group_distance = 0.03;    // meters; a larger move starts a new tap group
    posegraph::Se3 sensor_offset;    // maps the published pose to the impact point
};

struct UnmatchedSoi {
    int soi_index = -1;
    double t_start = 0.0;
    std::string reason;
};

struct SyncResult {
    std::vector<Measurement> measurements;
    std::vector<TapGroup> groups;
    std::vector<UnmatchedSoi> unmatched;
};

// Pose linearly interpolated (slerp for rotation) at time t. Times outside
// the sampled span are clamped; the bool reports whether t was in range
// within the tolerance.
posegraph::Se3 interpolate_pose(const std::vector<TimedPose>& trajectory, double t,
                                double edge_tolerance, bool* in_range = nullptr);

// Pairs each SOI with the trajectory pose at its t_start, computes the
// spectrum / FD / PSD per impact, and splits consecutive measurements into
// tap groups whenever the position jumps by more than group_distance.
SyncResult sync_measurements(const std::vector<signal::SignalOfInterest>& sois,
                             const std::vector<TimedPose>& trajectory,
                             const SyncOptions& options = {});

} // namespace echomap::imaging

#endif
