#ifndef ECHOMAP_SYNTH_ORACLES_HPP
#define ECHOMAP_SYNTH_ORACLES_HPP

#include <complex>
#include <vector>

#include "echomap/imaging/types.hpp"

namespace echomap::synth {

// Literal O(N^2) evaluation of the DFT sum, one output bin per input
// sample. Reference implementation; throws InvalidParameterError for
// N > 8192.
std::vector<std::complex<double>> naive_dft_oracle(const std::vector<double>& samples);

// Reference back-projection: scores every voxel of the grid by the exact
// shell-membership test (binary weighting). Matches
// imaging::back_project voxel for voxel.
imaging::VoxelGrid brute_force_backproject_oracle(
    const std::vector<imaging::TapGroup>& tap_groups, const std::vector<double>& radii,
    imaging::VoxelGrid grid, double shell_tolerance,
    const Eigen::Vector3d& subsurface_direction = Eigen::Vector3d(0.0, 0.0, -1.0));

} // namespace echomap::synth

#endif
