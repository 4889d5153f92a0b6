#ifndef ECHOMAP_IMAGING_TYPES_HPP
#define ECHOMAP_IMAGING_TYPES_HPP

#include <Eigen/Core>
#include <vector>

#include "echomap/posegraph/se3.hpp"
#include "echomap/signal/types.hpp"

namespace echomap::imaging {

// One impact synchronized with the robot pose at its detection instant.
struct Measurement {
    int soi_index = -1;
    signal::SignalOfInterest soi;
    posegraph::Se3 pose;      // world-from-sensor at t_start
    Eigen::Vector3d position; // impact point used for mapping
    double fd_value = 0.0;
    double psd_value = 0.0;
    signal::Spectrum spectrum;
};

// Consecutive measurements taken at one physical tap location.
struct TapGroup {
    std::vector<int> measurement_indices;
    Eigen::Vector3d centroid = Eigen::Vector3d::Zero();
};

struct FdMapPoint {
    Eigen::Vector3d position = Eigen::Vector3d::Zero();
    double fd_value = 0.0;
    double fd_normalized = 0.0; // min-max over the map, in [0, 1]
    signal::RegionLabel label = signal::RegionLabel::Normal;
};

// Axis-aligned scalar accumulator over the slab volume. Voxel (ix,iy,iz)
// spans origin + [i, i+1) * resolution per axis; x varies fastest in
// `scores`.
struct VoxelGrid {
    Eigen::Vector3d origin = Eigen::Vector3d::Zero(); // min corner
    double resolution = 0.01;                          // meters per voxel
    Eigen::Vector3i dims = Eigen::Vector3i::Zero();
    std::vector<double> scores;

    static VoxelGrid create(const Eigen::Vector3d& origin, double resolution,
                            const Eigen::Vector3i& dims);

    std::size_t voxel_count() const {
        return static_cast<std::size_t>(dims.x()) * static_cast<std::size_t>(dims.y()) *
               static_cast<std::size_t>(dims.z());
    }
    std::size_t index(int ix, int iy, int iz) const {
        return (static_cast<std::size_t>(iz) * static_cast<std::size_t>(dims.y()) +
                static_cast<std::size_t>(iy)) *
                   static_cast<std::size_t>(dims.x()) +
               static_cast<std::size_t>(ix);
    }
    Eigen::Vector3d center(int ix, int iy, int iz) const {
        return origin + resolution * Eigen::Vector3d(ix + 0.5, iy + 0.5, iz + 0.5);
    }
    double& at(int ix, int iy, int iz) { return scores[index(ix, iy, iz)]; }
    double at(int ix, int iy, int iz) const { return scores[index(ix, iy, iz)]; }
};

} // namespace echomap::imaging

#endif
