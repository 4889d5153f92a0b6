#include "echomap/synth/oracles.hpp"

#include <cmath>
#include <numbers>

#include "echomap/errors.hpp"

namespace echomap::synth {

std::vector<std::complex<double>> naive_dft_oracle(const std::vector<double>& samples) {
    const std::size_t n = samples.size();
    if (n > 8192)
        throw InvalidParameterError("naive_dft_oracle: O(N^2) reference limited to N <= 8192");

    std::vector<std::complex<double>> bins(n);
    for (std::size_t k = 0; k < n; ++k) {
        std::complex<double> acc(0.0, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            const double angle = -2.0 * std::numbers::pi * static_cast<double>(k) *
                                 static_cast<double>(i) / static_cast<double>(n);
            acc += samples[i] * std::complex<double>(std::cos(angle), std::sin(angle));
        }
        bins[k] = acc;
    }
    return bins;
}

imaging::VoxelGrid brute_force_backproject_oracle(
    const std::vector<imaging::TapGroup>& tap_groups, const std::vector<double>& radii,
    imaging::VoxelGrid grid, double shell_tolerance,
    const Eigen::Vector3d& subsurface_direction) {
    if (tap_groups.size() != radii.size())
        throw InvalidParameterError(
            "brute_force_backproject_oracle: one radius per tap group required");

    const Eigen::Vector3d down = subsurface_direction.normalized();
    for (std::size_t g = 0; g < tap_groups.size(); ++g) {
        const Eigen::Vector3d& c = tap_groups[g].centroid;
        const double r = radii[g];
        for (int iz = 0; iz < grid.dims.z(); ++iz) {
            for (int iy = 0; iy < grid.dims.y(); ++iy) {
                for (int ix = 0; ix < grid.dims.x(); ++ix) {
                    const Eigen::Vector3d center = grid.center(ix, iy, iz);
                    if ((center - c).dot(down) < 0.0) continue;
                    const double dx = center.x() - c.x();
                    const double dy = center.y() - c.y();
                    const double dz = center.z() - c.z();
                    const double dist = std::sqrt(dx * dx + dy * dy + dz * dz);
                    const double miss = std::abs(dist - r);
                    if (miss > shell_tolerance) continue;
                    grid.at(ix, iy, iz) += 1.0;
                }
            }
        }
    }
    return grid;
}

} // namespace echomap::synth
