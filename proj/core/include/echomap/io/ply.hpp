#ifndef ECHOMAP_IO_PLY_HPP
#define ECHOMAP_IO_PLY_HPP

#include <Eigen/Core>
#include <string>
#include <vector>

#include "echomap/imaging/types.hpp"

namespace echomap::io {

struct PlyPoint {
    Eigen::Vector3d position = Eigen::Vector3d::Zero();
    double intensity = 0.0; // [0, 1] -> grayscale, dark = small, white = large
};

// ASCII PLY point cloud with grayscale colors.
void save_ply(const std::string& path, const std::vector<PlyPoint>& points);

// Voxels scoring at least threshold_fraction * max, as grayscale points
// shaded by score / max.
void save_voxel_ply(const std::string& path, const imaging::VoxelGrid& grid,
                    double threshold_fraction);

} // namespace echomap::io

#endif
