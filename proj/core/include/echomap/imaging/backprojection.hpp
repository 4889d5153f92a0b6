#ifndef ECHOMAP_IMAGING_BACKPROJECTION_HPP
#define ECHOMAP_IMAGING_BACKPROJECTION_HPP

#include <vector>

#include "echomap/imaging/types.hpp"

namespace echomap::imaging {

struct PeakBand {
    double low_hz = 100.0; // excludes the DC neighborhood
    double high_hz = 2000.0;
};

// Frequency of the strongest bin inside the search band (ties go to the
// lowest frequency). Throws NoPeakError when the band is empty, all-zero
// or flat.
double peak_frequency(const signal::Spectrum& spectrum, const PeakBand& band = {});

// Impact-echo thickness relation: the reflector sits at
// wave_speed / (2 * f_peak) where f_peak is the strongest bin inside the
// search band. Wave speed defaults to a typical concrete P-wave value.
double estimate_radius(const signal::Spectrum& spectrum, double wave_speed = 4000.0,
                       const PeakBand& band = {});

enum class ShellWeighting {
    Binary,   // +1 inside the shell
    Gaussian, // exp(-d^2 / (2 sigma^2)) with sigma = shell_tolerance
};

struct BackProjectOptions {
    ShellWeighting weighting = ShellWeighting::Binary;
    // Unit direction pointing into the ground; voxels on the other side of
    // a tap point never score.
    Eigen::Vector3d subsurface_direction = Eigen::Vector3d(0.0, 0.0, -1.0);
};

// Accumulates one half-sphere shell per tap group into the grid: every
// voxel whose center distance to the group centroid is within
// shell_tolerance of the group radius, and which lies on the subsurface
// side, receives the shell weight. radii[k] belongs to tap_groups[k].
VoxelGrid back_project(const std::vector<TapGroup>& tap_groups,
                       const std::vector<double>& radii, VoxelGrid grid,
                       double shell_tolerance, const BackProjectOptions& options = {});

// Centers of voxels scoring at least fraction * max, clustered by
// 26-connectivity; one centroid per cluster. Empty for an all-zero grid.
std::vector<Eigen::Vector3d> extract_targets(const VoxelGrid& grid,
                                             double score_threshold_fraction);

} // namespace echomap::imaging

#endif
