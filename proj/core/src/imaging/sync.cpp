#include "echomap/imaging/sync.hpp"

#include <algorithm>

#include "echomap/errors.hpp"
#include "echomap/signal/fourier.hpp"

namespace echomap::imaging {

posegraph::Se3 interpolate_pose(const std::vector<TimedPose>& trajectory, double t,
                                double edge_tolerance, bool* in_range) {
    if (trajectory.empty())
        throw InvalidInputError("interpolate_pose: empty trajectory");

    const double t_first = trajectory.front().timestamp;
    const double t_last = trajectory.back().timestamp;
    if (in_range) *in_range = t >= t_first - edge_tolerance && t <= t_last + edge_tolerance;

    if (t <= t_first) return trajectory.front().pose;
    if (t >= t_last) return trajectory.back().pose;

    const auto upper = std::upper_bound(
        trajectory.begin(), trajectory.end(), t,
        [](double value, const TimedPose& sample) { return value < sample.timestamp; });
    const auto lower = std::prev(upper);
    const double span = upper->timestamp - lower->timestamp;
    if (span <= 0.0) return lower->pose;
    const double alpha = (t - lower->timestamp) / span;
    return posegraph::interpolate(lower->pose, upper->pose, alpha);
}

SyncResult sync_measurements(const std::vector<signal::SignalOfInterest>& sois,
                             const std::vector<TimedPose>& trajectory,
                             const SyncOptions& options) {
    SyncResult result;
    if (sois.empty()) return result;
    if (trajectory.empty()) {
        for (std::size_t i = 0; i < sois.size(); ++i)
            result.unmatched.push_back(
                {static_cast<int>(i), sois[i].t_start, "empty trajectory"});
        return result;
    }

    for (std::size_t i = 0; i < sois.size(); ++i) {
        bool in_range = false;
        const posegraph::Se3 pose =
            interpolate_pose(trajectory, sois[i].t_start, options.edge_tolerance, &in_range);
        if (!in_range) {
            result.unmatched.push_back({static_cast<int>(i), sois[i].t_start,
                                        "t_start outside trajectory span beyond tolerance"});
            continue;
        }

        Measurement m;
        m.soi_index = static_cast<int>(i);
        m.soi = sois[i];
        m.pose = posegraph::compose(pose, options.sensor_offset);
        m.position = m.pose.translation;
        m.spectrum = signal::dft(sois[i]);
        m.fd_value = signal::fd(m.spectrum);
        m.psd_value = signal::psd(m.spectrum);
        result.measurements.push_back(std::move(m));
    }

    // Consecutive measurements share a tap group until the position moves
    // group_distance or more away from where the group started.
    Eigen::Vector3d group_anchor = Eigen::Vector3d::Zero();
    for (std::size_t k = 0; k < result.measurements.size(); ++k) {
        const Eigen::Vector3d& p = result.measurements[k].position;
        if (result.groups.empty() ||
            (p - group_anchor).norm() >= options.group_distance) {
            result.groups.push_back({});
            group_anchor = p;
        }
        result.groups.back().measurement_indices.push_back(static_cast<int>(k));
    }
    for (auto& g : result.groups) {
        Eigen::Vector3d sum = Eigen::Vector3d::Zero();
        for (int idx : g.measurement_indices)
            sum += result.measurements[static_cast<std::size_t>(idx)].position;
        g.centroid = sum / static_cast<double>(g.measurement_indices.size());
    }
    return result;
}

} // namespace echomap::imaging
